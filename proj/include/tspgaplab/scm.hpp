#ifndef TSPGAPLAB_SCM_HPP
#define TSPGAPLAB_SCM_HPP

#include <string>
#include <vector>

#include "tspgaplab/exact.hpp"
#include "tspgaplab/instance.hpp"

namespace tspgap {

/// Per-vertex outgoing edges sorted by ascending cost, ties broken by
/// neighbor label. Row lengths equal the active out-degree under the mask.
struct SortedCostMatrix {
    struct Entry {
        int neighbor = 0;
        Cost cost;
    };

    int n = 0;
    bool exact = false;
    std::vector<std::vector<Entry>> rows;

    /// 1-based rank of directed edge (v, w) in v's row, or 0 when absent.
    int rank_of(int v, int w) const;
    int row_length(int v) const { return static_cast<int>(rows[v].size()); }
};

SortedCostMatrix build_scm(const CostMatrix& cm, const EdgeMask* mask = nullptr);

/// Rank positions of a tour's outgoing edges in the sorted cost matrix.
struct Frontier {
    std::vector<int> ranks;   // per vertex, 1-based
    double elongation = 0.0;  // max rank / (n - 1)
    double mean_rank = 0.0;
};

Frontier compute_frontier(const SortedCostMatrix& scm, const Tour& t);

/// All non-optimal tours with cost <= (1 + epsilon) * opt_cost, sorted by
/// cost then lexicographically. Requires exhaustive enumeration.
std::vector<Tour> near_optimal_set(const CostMatrix& cm, const Solution& sol,
                                   double epsilon, bool force = false);

inline constexpr double kNearOptimalEpsilon = 0.05;

/// Rendered sorted-cost-matrix figure: an ASCII P3 pixmap (one pixel per
/// (vertex, rank) cell, grey by normalized cost, green solution cells, red
/// near-optimal cells, white background padding) plus its CSV twin
/// (vertex, rank, neighbor, cost, tag).
struct ScmRender {
    std::string ppm;
    std::string csv;
};

ScmRender render_scm(const SortedCostMatrix& scm, const Frontier* frontier,
                     const std::vector<Tour>* near);

/// Number of pixmap columns containing at least one non-background pixel.
int ppm_nonbackground_columns(const std::string& ppm_text);

} // namespace tspgap

#endif
