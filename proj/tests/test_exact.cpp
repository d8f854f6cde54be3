#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "test_util.hpp"
#include "tspgaplab/exact.hpp"
#include "tspgaplab/instance.hpp"
#include "tspgaplab/reduction.hpp"
#include "tspgaplab/rng.hpp"

using namespace tspgap;

TEST_SUITE_BEGIN("exact");

namespace {

CostMatrix zero_matrix(int n) {
    return CostMatrix::zeros(n);
}

Tour random_tour(int n, Rng& rng) {
    std::vector<int> seq(static_cast<std::size_t>(n));
    std::iota(seq.begin(), seq.end(), 0);
    rng.shuffle(seq.data(), seq.size());
    return Tour(std::move(seq));
}

} // namespace

TEST_CASE("path_cost sums edges in visit order") {
    const CostMatrix gap3 = gen_unique_gap(3);
    CHECK(tour_cost(gap3, Tour::from_labels({1, 2, 3})).ivalue == 16); // 1 + 6 + 9
    CHECK(path_cost(gap3, Path::from_labels({2, 1, 3})).ivalue == 5);  // 3 + 2
    CHECK(tour_cost(zero_matrix(4), Tour::from_labels({1, 3, 2, 4})).value == 0.0);
    CHECK_THROWS_AS(path_cost(gap3, std::vector<int>{0, 3}, false), Error);
}

TEST_CASE("tours normalize rotation and validate") {
    CHECK(Tour({2, 0, 1}).seq() == std::vector<int>{0, 1, 2});
    CHECK(Tour::from_labels({3, 1, 2}).labels() == std::vector<int>{1, 2, 3});
    CHECK_THROWS_AS(Tour({0, 1}), Error);
    CHECK_THROWS_AS(Tour({0, 1, 1}), Error);
    CHECK_THROWS_AS(Tour({0, 1, 3}), Error);
    CHECK_THROWS_AS(Path({5}), Error);
    CHECK_THROWS_AS(Path({1, 1}), Error);
}

TEST_CASE("enumerate_cycles yields (n-1)! distinct tours in lexicographic order") {
    CHECK(all_cycles(3).size() == 2);
    CHECK(all_cycles(3)[0] == Tour::from_labels({1, 2, 3}));
    CHECK(all_cycles(3)[1] == Tour::from_labels({1, 3, 2}));
    CHECK(all_cycles(4).size() == 6);

    const auto tours8 = all_cycles(8);
    CHECK(tours8.size() == 5040);
    std::set<std::vector<int>> seen;
    for (const auto& t : tours8) seen.insert(t.seq());
    CHECK(seen.size() == 5040);

    // Order oracle: plain next_permutation over the tail.
    std::vector<int> rest{1, 2, 3, 4};
    std::size_t at = 0;
    const auto tours5 = all_cycles(5);
    do {
        std::vector<int> expected{0};
        expected.insert(expected.end(), rest.begin(), rest.end());
        REQUIRE(at < tours5.size());
        CHECK(tours5[at].seq() == expected);
        ++at;
    } while (std::next_permutation(rest.begin(), rest.end()));
    CHECK(at == tours5.size());
}

TEST_CASE("prefix partitions concatenate to the full enumeration") {
    const int n = 6;
    std::vector<Tour> stitched;
    for (int second = 1; second < n; ++second) {
        CycleEnumerator part(n, second);
        while (auto t = part.next()) stitched.push_back(std::move(*t));
    }
    CHECK(stitched == all_cycles(n));
}

TEST_CASE("enumeration guard") {
    CHECK_THROWS_AS(all_cycles(13), GuardError);
    CHECK_THROWS_AS(CycleEnumerator(2), Error);
    CycleEnumerator forced(13, true);
    CHECK(forced.next().has_value()); // override admits larger n
}

TEST_CASE("solve_exact matches the brute-force oracle") {
    SUBCASE("unique gap instances") {
        for (int n = 3; n <= 6; ++n) {
            const CostMatrix cm = gen_unique_gap(n);
            const Solution sol = solve_exact(cm);
            const auto brute = oracle::brute_force(cm);
            REQUIRE(sol.feasible);
            CHECK(sol.opt_cost.ivalue == brute->opt_cost_int);
            CHECK(sol.opt_tours.size() == 1);
            CHECK(sol.opt_tours.front().seq() == brute->opt_seqs.front());
            CHECK(sol.distinct_costs == std::optional<bool>(true));
            CHECK(sol.cycles_evaluated == cycle_count(n));
        }
        CHECK(solve_exact(gen_unique_gap(3)).opt_cost.ivalue == 16);
    }
    SUBCASE("random float instances") {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            const CostMatrix cm = gen_random_gap(7, seed, 0.0, 10.0);
            const Solution sol = solve_exact(cm);
            const auto brute = oracle::brute_force(cm);
            CHECK(sol.opt_cost.value == brute->opt_cost);
            REQUIRE(sol.opt_tours.size() == brute->opt_seqs.size());
            for (std::size_t i = 0; i < brute->opt_seqs.size(); ++i)
                CHECK(sol.opt_tours[i].seq() == brute->opt_seqs[i]);
        }
    }
    SUBCASE("unit square has two optimal orientations") {
        const CostMatrix cm = points_to_costs(PointSet{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
        const Solution sol = solve_exact(cm);
        CHECK(sol.opt_cost.value == 4.0);
        REQUIRE(sol.opt_tours.size() == 2);
        CHECK(sol.opt_tours[0] == Tour::from_labels({1, 2, 3, 4}));
        CHECK(sol.opt_tours[1] == Tour::from_labels({1, 4, 3, 2}));
    }
}

TEST_CASE("solve_exact with a mask prunes to the masked subgraph") {
    const CostMatrix cm = gen_unique_gap(4);
    SUBCASE("mask holding one Hamiltonian cycle") {
        EdgeMask mask(4);
        for (int k = 0; k < 4; ++k) {
            mask.allow(k, (k + 1) % 4);
            mask.allow((k + 1) % 4, k);
        }
        SolveOptions opts;
        opts.mask = &mask;
        const Solution sol = solve_exact(cm, opts);
        REQUIRE(sol.feasible);
        const auto brute = oracle::brute_force(cm, [&](int i, int j) { return mask.allows(i, j); });
        CHECK(sol.opt_cost.ivalue == brute->opt_cost_int);
        CHECK(sol.cycles_evaluated == brute->cycles);
    }
    SUBCASE("mask without any Hamiltonian cycle is infeasible, not an error") {
        EdgeMask mask(4);
        mask.allow(0, 1);
        mask.allow(1, 2);
        mask.allow(2, 3); // no way back to 1
        SolveOptions opts;
        opts.mask = &mask;
        const Solution sol = solve_exact(cm, opts);
        CHECK_FALSE(sol.feasible);
        CHECK(sol.cycles_evaluated == 0);
        CHECK(sol.opt_tours.empty());
    }
    SUBCASE("masked solve equals the filtered oracle on Euclidean instances") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const PointSet ps = gen_random_points(7, seed);
            const CostMatrix dm = points_to_costs(ps);
            const EdgeMask mask = restrict_to_edges(dm, delaunay_triangulate(ps));
            SolveOptions opts;
            opts.mask = &mask;
            const Solution sol = solve_exact(dm, opts);
            const auto brute =
                oracle::brute_force(dm, [&](int i, int j) { return mask.allows(i, j); });
            REQUIRE(brute.has_value() == sol.feasible);
            if (sol.feasible) {
                CHECK(sol.opt_cost.value == brute->opt_cost);
                CHECK(sol.cycles_evaluated == brute->cycles);
            }
        }
    }
}

TEST_CASE("solve_exact is schedule independent") {
    const CostMatrix cm = gen_random_gap(8, 42, 0.0, 1.0);
    SolveOptions t1;
    t1.threads = 1;
    const Solution base = solve_exact(cm, t1);
    for (int threads : {2, 8}) {
        SolveOptions opts;
        opts.threads = threads;
        const Solution sol = solve_exact(cm, opts);
        CHECK(sol.opt_cost.value == base.opt_cost.value); // bitwise
        CHECK(sol.opt_tours == base.opt_tours);
        CHECK(sol.cycles_evaluated == base.cycles_evaluated);
        CHECK(sol.distinct_costs == base.distinct_costs);
    }
}

TEST_CASE("relabel_to_descent is the forced bijection") {
    const VertexRelabeling m3 = relabel_to_descent(Tour::from_labels({1, 2, 3}));
    CHECK(m3.map(0) == 2);
    CHECK(m3.map(1) == 1);
    CHECK(m3.map(2) == 0);

    const VertexRelabeling m4 = relabel_to_descent(Tour::from_labels({1, 3, 2, 4}));
    CHECK(m4.map(0) == 3); // 1 -> 4
    CHECK(m4.map(2) == 2); // 3 -> 3
    CHECK(m4.map(1) == 1); // 2 -> 2
    CHECK(m4.map(3) == 0); // 4 -> 1

    // Property: for random tours the map is a bijection sending the tour to
    // the descent cycle.
    Rng rng(2024);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 3 + static_cast<int>(rng.below(7)); // up to 9
        const Tour t = random_tour(n, rng);
        const VertexRelabeling m = relabel_to_descent(t);
        std::vector<char> hit(static_cast<std::size_t>(n), 0);
        for (int v = 0; v < n; ++v) {
            CHECK(m.inverse(m.map(v)) == v);
            hit[static_cast<std::size_t>(m.map(v))] = 1;
        }
        CHECK(std::count(hit.begin(), hit.end(), 1) == n);
        CHECK(relabel_tour(t, m) == descent_tour(n));
    }
}

TEST_CASE("apply_relabeling preserves cycle costs") {
    const CostMatrix cm = gen_unique_gap(4);
    SUBCASE("identity") {
        CHECK(apply_relabeling(cm, VertexRelabeling::identity(4)) == cm);
    }
    SUBCASE("any relabeling preserves the optimal cost") {
        Rng rng(7);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<int> perm{0, 1, 2, 3};
            rng.shuffle(perm.data(), perm.size());
            const VertexRelabeling m(std::move(perm));
            const CostMatrix relabeled = apply_relabeling(cm, m);
            CHECK(solve_exact(relabeled).opt_cost.ivalue == solve_exact(cm).opt_cost.ivalue);
            // Every cycle's cost is preserved under simultaneous relabeling.
            for (const auto& t : all_cycles(4))
                CHECK(tour_cost(relabeled, relabel_tour(t, m)).ivalue == tour_cost(cm, t).ivalue);
        }
    }
    SUBCASE("descent relabeling turns the optimum into the descent cycle") {
        for (int n = 4; n <= 6; ++n) {
            const CostMatrix inst = gen_unique_gap(n);
            const Tour opt = solve_exact(inst).opt_tours.front();
            const VertexRelabeling m = relabel_to_descent(opt);
            const Solution relabeled_sol = solve_exact(apply_relabeling(inst, m));
            REQUIRE(relabeled_sol.opt_tours.size() == 1);
            CHECK(relabeled_sol.opt_tours.front() == descent_tour(n));
        }
    }
}

TEST_CASE("coincident_edge_count") {
    const Tour a = Tour::from_labels({1, 2, 3, 4});
    CHECK(coincident_edge_count(a, a) == 4);

    // Exhaustive maxima over distinct pairs: n - 3.
    for (int n = 4; n <= 7; ++n) {
        const auto tours = all_cycles(n);
        int max_shared = 0;
        for (std::size_t i = 0; i < tours.size(); ++i)
            for (std::size_t j = i + 1; j < tours.size(); ++j)
                max_shared = std::max(max_shared, coincident_edge_count(tours[i], tours[j]));
        CHECK(max_shared == n - 3);
    }
}

TEST_CASE("monotonicity_check contrasts Euclidean and arbitrary costs") {
    SUBCASE("Euclidean instances never violate") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const CostMatrix cm = points_to_costs(gen_random_points(6, seed));
            const MonotonicityReport rep = monotonicity_check(cm, 0, 0);
            CHECK(rep.exhaustive);
            CHECK(rep.violations == 0);
            CHECK_FALSE(rep.counterexample.has_value());
        }
    }
    SUBCASE("the displayed 3x3 matrix violates with the known witness") {
        const MonotonicityReport rep = monotonicity_check(gen_unique_gap(3), 0, 0);
        CHECK(rep.exhaustive);
        CHECK(rep.violations > 0);
        REQUIRE(rep.counterexample.has_value());
        CHECK(rep.counterexample->first.labels() == std::vector<int>{2, 3});  // cost 6
        CHECK(rep.counterexample->second.labels() == std::vector<int>{2, 1, 3}); // cost 5
    }
    SUBCASE("random gap instances violate somewhere in a seed sweep") {
        int with_violation = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const CostMatrix cm = gen_random_gap(6, seed, 0.0, 1.0);
            with_violation += monotonicity_check(cm, 0, 0).violations > 0;
        }
        CHECK(with_violation >= 1);
    }
    SUBCASE("sampled mode is deterministic per seed") {
        const CostMatrix cm = gen_random_gap(9, 5, 0.0, 1.0);
        const MonotonicityReport a = monotonicity_check(cm, 5000, 11);
        const MonotonicityReport b = monotonicity_check(cm, 5000, 11);
        CHECK_FALSE(a.exhaustive);
        CHECK(a.pairs_checked == 5000);
        CHECK(a.violations == b.violations);
        CHECK(a.counterexample.has_value() == b.counterexample.has_value());
    }
}

TEST_CASE("solution report format") {
    const Solution sol = solve_exact(gen_unique_gap(3));
    CHECK(solution_to_text(sol) ==
          "opt_cost: 16\nnum_opt_tours: 1\ndistinct_costs: true\ncycles_evaluated: 2\n1 2 3\n");
}

TEST_SUITE_END();
