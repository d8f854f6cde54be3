#include <doctest.h>

#include "test_util.hpp"
#include "tspgaplab/instance.hpp"
#include "tspgaplab/reduction.hpp"
#include "tspgaplab/rng.hpp"

using namespace tspgap;

TEST_SUITE_BEGIN("instances");

namespace {

const char* kGap3Text = "gap 3\ninf 1 2\n3 inf 6\n9 18 inf\n";

PointSet unit_square() {
    return PointSet{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
}

} // namespace

TEST_CASE("parse gap text matches the displayed 3x3 matrix") {
    const InstanceFile inst = parse_instance(kGap3Text);
    REQUIRE(inst.kind == InstanceKind::Gap);
    const CostMatrix& cm = inst.matrix();
    REQUIRE(cm.size() == 3);
    REQUIRE(cm.exact());
    // Row/rank formula oracle, frozen: rows (1,2), (3,6), (9,18).
    const long long expected[3][3] = {{-1, 1, 2}, {3, -1, 6}, {9, 18, -1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(cm.iat(i, j) == expected[i][j]);
}

TEST_CASE("parse e2d text echoes the points") {
    const InstanceFile inst = parse_instance("e2d 3\n0 0\n1 0\n0 1\n");
    REQUIRE(inst.kind == InstanceKind::E2d);
    const PointSet& ps = inst.point_set();
    REQUIRE(ps.size() == 3);
    CHECK(ps.points[1] == PointSet::Point{1, 0});
    CHECK(ps.points[2] == PointSet::Point{0, 1});
}

TEST_CASE("parse rejects malformed input with line numbers") {
    SUBCASE("finite diagonal") {
        try {
            parse_instance("gap 3\n1 2 3\n3 inf 6\n9 18 inf\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("diagonal must be inf") != std::string::npos);
        }
    }
    SUBCASE("malformed header") {
        CHECK_THROWS_AS(parse_instance("bogus 3\n"), ParseError);
        CHECK_THROWS_AS(parse_instance("gap three\n"), ParseError);
    }
    SUBCASE("n too small") {
        CHECK_THROWS_AS(parse_instance("gap 2\ninf 1\n1 inf\n"), ParseError);
    }
    SUBCASE("non-numeric entry") {
        try {
            parse_instance("gap 3\ninf 1 2\n3 inf x\n9 18 inf\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("off-diagonal inf") {
        CHECK_THROWS_AS(parse_instance("gap 3\ninf 1 inf\n3 inf 6\n9 18 inf\n"), ParseError);
    }
    SUBCASE("wrong entry count") {
        CHECK_THROWS_AS(parse_instance("gap 3\ninf 1\n3 inf 6\n9 18 inf\n"), ParseError);
    }
    SUBCASE("duplicate points carry the duplicate's line") {
        try {
            parse_instance("e2d 3\n0 0\n1 1\n1 1\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4);
            CHECK(std::string(e.what()).find("duplicate point") != std::string::npos);
        }
    }
    SUBCASE("missing rows") {
        CHECK_THROWS_AS(parse_instance("gap 3\ninf 1 2\n"), ParseError);
    }
    SUBCASE("empty text") {
        CHECK_THROWS_AS(parse_instance("# nothing here\n"), ParseError);
    }
}

TEST_CASE("serialize emits the canonical gap text") {
    const InstanceFile inst = InstanceFile::gap(gen_unique_gap(3));
    CHECK(serialize_instance(inst) == kGap3Text);
}

TEST_CASE("serialize emits one coordinate line per point") {
    const std::string text = serialize_instance(InstanceFile::e2d(unit_square()));
    CHECK(text == "e2d 4\n0 0\n1 0\n1 1\n0 1\n");
}

TEST_CASE("parse/serialize round-trips every generated kind") {
    auto roundtrip = [](const InstanceFile& inst) {
        const InstanceFile back = parse_instance(serialize_instance(inst));
        REQUIRE(back.kind == inst.kind);
        CHECK(back.provenance == inst.provenance);
        if (inst.kind == InstanceKind::Gap)
            CHECK(back.matrix() == inst.matrix());
        else
            CHECK(back.point_set() == inst.point_set());
    };
    roundtrip(InstanceFile::gap(gen_unique_gap(5), "gen_unique_gap n=5"));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        roundtrip(InstanceFile::gap(gen_random_gap(6, seed, -2.5, 7.25),
                                    "gen_random_gap seed=" + std::to_string(seed)));
        roundtrip(InstanceFile::e2d(gen_random_points(7, seed),
                                    "gen_random_points seed=" + std::to_string(seed)));
    }
    // Float matrices keep their mode even when every entry happens to be integral.
    CostMatrix whole = CostMatrix::zeros(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) whole.set(i, j, 4.0);
    const InstanceFile back = parse_instance(serialize_instance(InstanceFile::gap(whole)));
    CHECK_FALSE(back.matrix().exact());
}

TEST_CASE("points_to_costs computes Euclidean distances") {
    const CostMatrix cm = points_to_costs(unit_square());
    CHECK(cm.at(0, 1) == 1.0);
    CHECK(cm.at(1, 2) == 1.0);
    CHECK(cm.at(0, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(cm.at(1, 3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(cm.at(i, j) == cm.at(j, i));
}

TEST_CASE("points_to_costs handles collinear degeneracy as equality") {
    const PointSet ps{{{0, 0}, {1, 0}, {2, 0}}};
    const CostMatrix cm = points_to_costs(ps);
    CHECK(cm.at(0, 2) == 2.0);
    CHECK(cm.at(0, 2) == cm.at(0, 1) + cm.at(1, 2));
}

TEST_CASE("points_to_costs output is metric") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const CostMatrix cm = points_to_costs(gen_random_points(9, seed));
        CHECK(triangle_audit(cm, 1e-12).violations == 0);
    }
}

TEST_CASE("points_to_costs rejects duplicate points") {
    PointSet ps{{{0, 0}, {1, 1}, {0, 0}}};
    CHECK_THROWS_AS(points_to_costs(ps), Error);
}

TEST_CASE("gen_unique_gap reproduces the row/rank pattern") {
    // Independent formula evaluation: row i (1-based) holds n^(i-1) times the
    // rank of column j among the n-1 off-diagonal columns.
    for (int n : {3, 4, 5, 6, 15}) {
        const CostMatrix cm = gen_unique_gap(n);
        REQUIRE(cm.exact());
        for (int i = 1; i <= n; ++i) {
            long long power = 1;
            for (int e = 1; e < i; ++e) power *= n;
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                const long long rank = j < i ? j : j - 1;
                CHECK(cm.iat(i - 1, j - 1) == power * rank);
            }
        }
    }
    CHECK_THROWS_AS(gen_unique_gap(2), Error);
    CHECK_THROWS_AS(gen_unique_gap(16), Error);
}

TEST_CASE("gen_unique_gap has distinct cycle costs and a unique optimum") {
    // Exhaustive enumeration oracle over n = 3..6.
    for (int n = 3; n <= 6; ++n) {
        const auto brute = oracle::brute_force(gen_unique_gap(n));
        REQUIRE(brute.has_value());
        CHECK(brute->all_distinct);
        CHECK(brute->opt_seqs.size() == 1);
    }
    const auto gap3 = oracle::brute_force(gen_unique_gap(3));
    CHECK(gap3->opt_cost_int == 16);
    CHECK(gap3->opt_seqs.front() == std::vector<int>{0, 1, 2});
}

TEST_CASE("gen_random_gap is reproducible and ranged") {
    const CostMatrix a = gen_random_gap(5, 1, 0.0, 1.0);
    const CostMatrix b = gen_random_gap(5, 1, 0.0, 1.0);
    CHECK(a == b);
    const CostMatrix c = gen_random_gap(5, 2, 0.0, 1.0);
    bool differs = false;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != j && a.at(i, j) != c.at(i, j)) differs = true;
    CHECK(differs);
    const CostMatrix d = gen_random_gap(6, 3, 2.0, 5.0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i != j) {
                CHECK(d.at(i, j) >= 2.0);
                CHECK(d.at(i, j) < 5.0);
            }
    CHECK_THROWS_AS(gen_random_gap(5, 1, 1.0, 1.0), Error);
    CHECK_THROWS_AS(gen_random_gap(5, 1, 3.0, 2.0), Error);
}

TEST_CASE("gen_random_points is reproducible, boxed, and distinct") {
    const PointSet a = gen_random_points(4, 7);
    const PointSet b = gen_random_points(4, 7);
    CHECK(a == b);
    const Box box{-1.0, 2.0, 1.5, 3.0};
    const PointSet c = gen_random_points(12, 11, box);
    for (const auto& p : c.points) {
        CHECK(p.x >= box.x0);
        CHECK(p.x < box.x1);
        CHECK(p.y >= box.y0);
        CHECK(p.y < box.y1);
    }
    CHECK_NOTHROW(points_to_costs(c));
    CHECK_THROWS_AS(gen_random_points(4, 1, Box{0, 0, 0, 1}), Error);
}

TEST_CASE("tour label text round-trips") {
    const std::vector<int> seq{0, 2, 1, 3};
    const std::string text = tour_labels_to_string(seq);
    CHECK(text == "1 3 2 4");
    CHECK(parse_tour_labels(text + "\n", 4) == seq);
    CHECK_THROWS_AS(parse_tour_labels("1 2 5\n", 3), ParseError);
    CHECK_THROWS_AS(parse_tour_labels("1 2\n", 3), ParseError);
    CHECK_THROWS_AS(parse_tour_labels("", 3), ParseError);
}

TEST_CASE("diagonal never participates in arithmetic") {
    const CostMatrix cm = gen_unique_gap(3);
    CHECK_THROWS_AS(cm.at(1, 1), Error);
    CHECK_THROWS_AS(cm.iat(0, 0), Error);
}

TEST_SUITE_END();
