#include "tspgaplab/compose.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "parallel.hpp"
#include "tspgaplab/reduction.hpp"
#include "tspgaplab/rng.hpp"

namespace tspgap {

CostMatrix Composition::extract_block(int offset, int size) const {
    if (offset < 0 || size < 3 || offset + size > cm.size())
        throw Error("block range out of bounds");
    CostMatrix out = CostMatrix::zeros(size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (i != j) out.set(i, j, cm.at(offset + i, offset + j));
    return out;
}

Composition compose_instances(const CostMatrix& a, const CostMatrix& b, std::uint64_t seed,
                              double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error("compose needs finite lo < hi");
    const int n = a.size();
    const int m = b.size();
    Composition comp{CostMatrix::zeros(n + m), n, m, seed, lo, hi};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) comp.cm.set(i, j, a.at(i, j));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) comp.cm.set(n + i, n + j, b.at(i, j));
    // Cross edges row-major over all ordered pairs that straddle the blocks.
    Rng rng(seed);
    const int total = n + m;
    for (int i = 0; i < total; ++i) {
        for (int j = 0; j < total; ++j) {
            if (i == j) continue;
            const bool i_in_a = i < n, j_in_a = j < n;
            if (i_in_a == j_in_a) continue;
            comp.cm.set(i, j, rng.real(lo, hi));
        }
    }
    return comp;
}

Composition compose_instances(const PointSet& a, const CostMatrix& b, std::uint64_t seed,
                              double lo, double hi) {
    return compose_instances(points_to_costs(a), b, seed, lo, hi);
}

bool sub_path_preserved(const Solution& block_a_opt, const Solution& composed_opt,
                        int block_a_size) {
    if (!block_a_opt.feasible || !composed_opt.feasible)
        throw Error("preservation check needs feasible solutions");
    if (block_a_opt.opt_tours.front().size() != block_a_size ||
        composed_opt.opt_tours.front().size() <= block_a_size)
        throw Error("preservation check got mismatched block sizes");
    for (const auto& big : composed_opt.opt_tours) {
        std::set<std::pair<int, int>> big_edges;
        const int total = big.size();
        for (int k = 0; k < total; ++k)
            big_edges.insert({big.seq()[k], big.seq()[(k + 1) % total]});
        for (const auto& small : block_a_opt.opt_tours) {
            bool all = true;
            // Non-closing edges only: the closing edge of the block cycle is
            // the one the composed tour must break to leave the block.
            for (int k = 0; k + 1 < small.size(); ++k) {
                if (!big_edges.count({small.seq()[k], small.seq()[k + 1]})) {
                    all = false;
                    break;
                }
            }
            if (all) return true;
        }
    }
    return false;
}

PreservationSummary preservation_search(const CostMatrix& a, const CostMatrix& b,
                                        const std::vector<std::uint64_t>& seeds, double lo,
                                        double hi, int threads) {
    const int total = a.size() + b.size();
    if (total > kEnumerationGuard)
        throw GuardError("composed size " + std::to_string(total) +
                         " exceeds the enumeration guard");
    const Solution a_opt = solve_exact(a);

    PreservationSummary summary;
    summary.rows = detail::ordered_parallel_map<PreservationRow>(
        seeds.size(), threads, [&](std::size_t idx) {
            const std::uint64_t seed = seeds[idx];
            const Composition comp = compose_instances(a, b, seed, lo, hi);
            const Solution sol = solve_exact(comp.cm);
            PreservationRow row;
            row.seed = seed;
            row.composed_opt_cost = sol.opt_cost.value;
            row.sub_preserved = sub_path_preserved(a_opt, sol, a.size());
            row.triangle_violations = triangle_audit(comp.cm).violations;
            return row;
        });

    long long preserved = 0;
    for (const auto& row : summary.rows) {
        preserved += row.sub_preserved;
        if (!row.sub_preserved && !summary.first_nonpreserved_seed)
            summary.first_nonpreserved_seed = row.seed;
        if (row.triangle_violations > 0 && !summary.first_violating_seed)
            summary.first_violating_seed = row.seed;
    }
    summary.preserved_fraction =
        seeds.empty() ? 0.0 : static_cast<double>(preserved) / static_cast<double>(seeds.size());
    return summary;
}

std::string preservation_csv(const PreservationSummary& ps) {
    std::string out = "seed,composed_opt_cost,sub_preserved,triangle_violations\n";
    for (const auto& row : ps.rows) {
        out += std::to_string(row.seed) + "," + double_to_string(row.composed_opt_cost) + "," +
               (row.sub_preserved ? "true" : "false") + "," +
               std::to_string(row.triangle_violations) + "\n";
    }
    return out;
}

} // namespace tspgap
