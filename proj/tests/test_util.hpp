#ifndef TSPGAPLAB_TESTS_TEST_UTIL_HPP
#define TSPGAPLAB_TESTS_TEST_UTIL_HPP

// Independent oracles for the test suites. Everything here recomputes results
// from first principles (plain permutation scans, textbook formulas) and must
// stay decoupled from the library's solver and enumeration internals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "tspgaplab/exact.hpp"
#include "tspgaplab/instance.hpp"

namespace oracle {

struct BruteResult {
    double opt_cost = 0.0;
    long long opt_cost_int = 0;
    std::vector<std::vector<int>> opt_seqs; // canonical, lexicographic
    long long cycles = 0;
    bool all_distinct = true;
};

/// Brute-force reference solve: scans every permutation of 1..n-1 with
/// std::next_permutation and plain summation. Optionally restricted to an
/// allowed-edge predicate.
template <typename Allowed>
inline std::optional<BruteResult> brute_force(const tspgap::CostMatrix& cm, Allowed&& allowed) {
    const int n = cm.size();
    std::vector<int> rest(static_cast<std::size_t>(n) - 1);
    std::iota(rest.begin(), rest.end(), 1);
    BruteResult out;
    bool found = false;
    std::multiset<long long> icosts;
    std::multiset<double> fcosts;
    do {
        bool ok = allowed(0, rest[0]);
        for (std::size_t k = 0; ok && k + 1 < rest.size(); ++k) ok = allowed(rest[k], rest[k + 1]);
        ok = ok && allowed(rest.back(), 0);
        if (!ok) continue;
        ++out.cycles;
        if (cm.exact()) {
            long long c = cm.iat(0, rest[0]) + cm.iat(rest.back(), 0);
            for (std::size_t k = 0; k + 1 < rest.size(); ++k) c += cm.iat(rest[k], rest[k + 1]);
            icosts.insert(c);
            if (!found || c < out.opt_cost_int) {
                found = true;
                out.opt_cost_int = c;
                out.opt_seqs.clear();
            }
            if (c == out.opt_cost_int) {
                std::vector<int> seq{0};
                seq.insert(seq.end(), rest.begin(), rest.end());
                out.opt_seqs.push_back(seq);
            }
        } else {
            double c = cm.at(0, rest[0]);
            for (std::size_t k = 0; k + 1 < rest.size(); ++k) c += cm.at(rest[k], rest[k + 1]);
            c += cm.at(rest.back(), 0);
            fcosts.insert(c);
            if (!found || c < out.opt_cost) {
                found = true;
                out.opt_cost = c;
                out.opt_seqs.clear();
            }
            if (c == out.opt_cost) {
                std::vector<int> seq{0};
                seq.insert(seq.end(), rest.begin(), rest.end());
                out.opt_seqs.push_back(seq);
            }
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    if (!found) return std::nullopt;
    if (cm.exact()) {
        out.opt_cost = static_cast<double>(out.opt_cost_int);
        for (auto it = icosts.begin(); std::next(it) != icosts.end(); ++it)
            if (*it == *std::next(it)) out.all_distinct = false;
    } else {
        for (auto it = fcosts.begin(); std::next(it) != fcosts.end(); ++it) {
            const double scale = std::max(std::abs(*it), std::abs(*std::next(it)));
            if (std::abs(*std::next(it) - *it) <= 1e-9 * scale) out.all_distinct = false;
        }
    }
    return out;
}

inline std::optional<BruteResult> brute_force(const tspgap::CostMatrix& cm) {
    return brute_force(cm, [](int, int) { return true; });
}

/// Plain-double incircle determinant: positive iff d is inside the circle
/// through CCW a, b, c.
inline double incircle_det(const tspgap::PointSet::Point& a, const tspgap::PointSet::Point& b,
                           const tspgap::PointSet::Point& c, const tspgap::PointSet::Point& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    return (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
           (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
           (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
}

inline double orient_det(const tspgap::PointSet::Point& a, const tspgap::PointSet::Point& b,
                         const tspgap::PointSet::Point& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Convex hull vertex count by brute force: a point is a hull vertex iff some
/// halfplane through it contains all other points strictly on one side.
inline int hull_vertex_count(const tspgap::PointSet& ps) {
    const int n = ps.size();
    int count = 0;
    for (int i = 0; i < n; ++i) {
        bool on_hull = false;
        for (int j = 0; j < n && !on_hull; ++j) {
            if (j == i) continue;
            bool all_left = true, all_right = true;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double d = orient_det(ps.points[i], ps.points[j], ps.points[k]);
                all_left = all_left && d > 0.0;
                all_right = all_right && d < 0.0;
            }
            on_hull = all_left || all_right;
        }
        count += on_hull;
    }
    return count;
}

/// Chi-square statistic against a uniform law over `cells` outcomes.
inline double chi_square_uniform(const std::vector<long long>& counts, long long total) {
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0.0;
    for (long long c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

} // namespace oracle

#endif
