#ifndef TSPGAPLAB_COMPOSE_HPP
#define TSPGAPLAB_COMPOSE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "tspgaplab/exact.hpp"
#include "tspgaplab/instance.hpp"

namespace tspgap {

/// Block-diagonal embedding of two instances with i.i.d. uniform cross edges.
/// Block A occupies vertices 0..n-1, block B vertices n..n+m-1.
struct Composition {
    CostMatrix cm;
    int block_a_size = 0;
    int block_b_size = 0;
    std::uint64_t fill_seed = 0;
    double fill_lo = 0.0;
    double fill_hi = 0.0;

    /// Submatrix of a block, for embedding-exactness checks.
    CostMatrix extract_block(int offset, int size) const;
};

/// Cross edges are drawn row-major over ordered cross pairs (i, j). The
/// result is always a float-mode matrix; integer block costs embed exactly.
Composition compose_instances(const CostMatrix& a, const CostMatrix& b,
                              std::uint64_t seed, double lo, double hi);
Composition compose_instances(const PointSet& a, const CostMatrix& b,
                              std::uint64_t seed, double lo, double hi);

/// One seed of the property-destruction experiment.
struct PreservationRow {
    std::uint64_t seed = 0;
    double composed_opt_cost = 0.0;
    bool sub_preserved = false;
    long long triangle_violations = 0;
};

struct PreservationSummary {
    std::vector<PreservationRow> rows; // in seed order
    std::optional<std::uint64_t> first_nonpreserved_seed;
    std::optional<std::uint64_t> first_violating_seed; // triangle violations > 0
    double preserved_fraction = 0.0;
};

/// True iff some optimal cycle of block A, mapped into composed labels, has
/// all of its non-closing edges among the directed edges of some composed
/// optimal cycle.
bool sub_path_preserved(const Solution& block_a_opt, const Solution& composed_opt,
                        int block_a_size);

/// For each seed: compose, solve exhaustively, audit triangles, and test
/// sub-path preservation of block A's optimum. Deterministic per seed list.
PreservationSummary preservation_search(const CostMatrix& a, const CostMatrix& b,
                                        const std::vector<std::uint64_t>& seeds,
                                        double lo, double hi, int threads = 1);

std::string preservation_csv(const PreservationSummary& ps);

} // namespace tspgap

#endif
