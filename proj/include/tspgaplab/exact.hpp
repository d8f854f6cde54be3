#ifndef TSPGAPLAB_EXACT_HPP
#define TSPGAPLAB_EXACT_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tspgaplab/instance.hpp"

namespace tspgap {

/// Complete cycles with more than kEnumerationGuard vertices need an explicit
/// override; 11! is the largest count considered desk-scale.
inline constexpr int kEnumerationGuard = 12;

long long factorial(int n);
/// Number of rotation-normalized directed complete cycles, (n-1)!.
long long cycle_count(int n);

/// A directed complete cycle, rotation-normalized to start at vertex 0.
/// The closing edge back to seq()[0] is implicit.
class Tour {
public:
    /// Takes any rotation of a permutation of 0..n-1 and normalizes it.
    explicit Tour(std::vector<int> seq);
    /// 1-based labels as found in files and reports.
    static Tour from_labels(const std::vector<int>& labels);

    int size() const { return static_cast<int>(seq_.size()); }
    const std::vector<int>& seq() const { return seq_; }
    std::vector<int> labels() const;

    bool operator==(const Tour&) const = default;
    bool operator<(const Tour& other) const { return seq_ < other.seq_; }

private:
    std::vector<int> seq_;
};

/// An open sequence of at least two distinct vertices.
class Path {
public:
    explicit Path(std::vector<int> seq);
    static Path from_labels(const std::vector<int>& labels);

    int size() const { return static_cast<int>(seq_.size()); }
    const std::vector<int>& seq() const { return seq_; }
    std::vector<int> labels() const;

    bool operator==(const Path&) const = default;

private:
    std::vector<int> seq_;
};

/// Subset of directed off-diagonal edges, used to restrict the solver and the
/// sorted cost matrix to a reduced graph.
class EdgeMask {
public:
    explicit EdgeMask(int n) : n_(n), allowed_(static_cast<std::size_t>(n) * n, 0) {}
    static EdgeMask complete(int n);

    int vertex_count() const { return n_; }
    int size() const { return count_; } // directed edges allowed

    bool allows(int i, int j) const {
        return allowed_[static_cast<std::size_t>(i) * n_ + j] != 0;
    }
    void allow(int i, int j);

private:
    int n_ = 0;
    int count_ = 0;
    std::vector<std::uint8_t> allowed_;
};

/// Exhaustive-solve result: all co-optimal tours, lexicographically sorted.
struct Solution {
    bool feasible = false;
    Cost opt_cost;
    std::vector<Tour> opt_tours;
    /// Whether all feasible cycle costs are pairwise distinct; absent when the
    /// feasible cycle count exceeded the distinctness cap.
    std::optional<bool> distinct_costs;
    long long cycles_evaluated = 0;
};

struct SolveOptions {
    const EdgeMask* mask = nullptr;
    int threads = 1;
    bool force = false;
    /// Cycle-cost distinctness is only tracked up to this many feasible cycles.
    long long distinct_cap = 1'000'000;
};

/// Cost of the open path along seq, or of the closed cycle when closed=true.
/// Exact integer sum in exact mode; double sum in visit order otherwise.
Cost path_cost(const CostMatrix& cm, const std::vector<int>& seq, bool closed);
Cost path_cost(const CostMatrix& cm, const Path& p);
Cost tour_cost(const CostMatrix& cm, const Tour& t);

/// Streams the (n-1)! complete cycles in lexicographic order of seq[1..n-1].
/// A fixed second vertex selects one of the n-1 disjoint prefix partitions.
class CycleEnumerator {
public:
    explicit CycleEnumerator(int n, bool force = false);
    CycleEnumerator(int n, int second_vertex, bool force = false);

    std::optional<Tour> next();

private:
    int n_;
    bool fixed_second_ = false;
    bool done_ = false;
    std::vector<int> rest_; // permuted portion (seq without the leading 0)
};

std::vector<Tour> all_cycles(int n, bool force = false);

/// Minimum-cost complete cycle by exhaustive enumeration, optionally
/// restricted to a directed edge mask. Parallel runs are merged in fixed
/// partition order, so results are independent of the thread count.
Solution solve_exact(const CostMatrix& cm, const SolveOptions& opts = {});

/// Bijection on vertices 0..n-1 together with its inverse.
class VertexRelabeling {
public:
    explicit VertexRelabeling(std::vector<int> map);
    static VertexRelabeling identity(int n);

    int size() const { return static_cast<int>(map_.size()); }
    int map(int v) const { return map_[v]; }
    int inverse(int v) const { return inv_[v]; }

private:
    std::vector<int> map_;
    std::vector<int> inv_;
};

/// The unique relabeling m sending the given cycle, written from its stored
/// start, to the descent cycle (n, n-1, ..., 1).
VertexRelabeling relabel_to_descent(const Tour& t);

/// Matrix with cm'[m(i)][m(j)] = cm[i][j]; cycle costs are invariant under
/// simultaneous relabeling of the cycle.
CostMatrix apply_relabeling(const CostMatrix& cm, const VertexRelabeling& m);

Tour relabel_tour(const Tour& t, const VertexRelabeling& m);

/// Canonical form of the descent cycle (n, n-1, ..., 1).
Tour descent_tour(int n);

/// Number of directed edges shared by two closed tours of equal size.
int coincident_edge_count(const Tour& a, const Tour& b);

struct MonotonicityReport {
    long long pairs_checked = 0;
    long long violations = 0;
    bool exhaustive = false;
    /// First (shorter, longer) pair found with cost(shorter) > cost(longer).
    std::optional<std::pair<Path, Path>> counterexample;
};

/// Checks whether deleting interior vertices of a path can ever increase its
/// cost. Exhausts all subsequence pairs for n <= 7, samples `trials` pairs
/// otherwise. Float-mode comparisons allow kFloatCostTolerance relative slack.
MonotonicityReport monotonicity_check(const CostMatrix& cm, long long trials,
                                      std::uint64_t seed);

/// Plain-text solution report (key: value lines, then one tour per line).
std::string solution_to_text(const Solution& sol);

} // namespace tspgap

#endif
