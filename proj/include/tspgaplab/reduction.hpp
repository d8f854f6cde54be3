#ifndef TSPGAPLAB_REDUCTION_HPP
#define TSPGAPLAB_REDUCTION_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tspgaplab/exact.hpp"
#include "tspgaplab/instance.hpp"

namespace tspgap {

/// Degenerate predicate cases (cocircular or collinear point groups) are
/// resolved by re-running on deterministically jittered coordinates:
/// x' = x + span * magnitude * (2u - 1), where span is the larger bounding
/// box extent, u in [0, 1) comes from Rng(derive_seed(kJitterSeed, attempt))
/// drawn point by point (x first, then y) in point order, and the magnitude
/// escalates tenfold per attempt starting at kJitterMagnitude (attempt 1).
inline constexpr std::uint64_t kJitterSeed = 0x7452694a69747431ULL;
inline constexpr double kJitterMagnitude = 1e-12;
inline constexpr int kJitterMaxAttempts = 3;

/// Planar triangulation as an undirected edge set plus its triangle list.
struct Triangulation {
    int n = 0;
    std::vector<std::pair<int, int>> edges;     // i < j, lexicographically sorted
    std::vector<std::array<int, 3>> faces;      // sorted vertices, sorted list
    bool jitter_applied = false;
    int jitter_attempts = 0;

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool has_edge(int i, int j) const;
};

/// Delaunay triangulation under the empty-circumcircle criterion
/// (Bowyer-Watson, inserts in point order). Degeneracies fall back to the
/// documented jitter scheme; all-collinear input is an error.
Triangulation delaunay_triangulate(const PointSet& ps);

/// Triangulation constrained to contain every edge of the tour polygon:
/// the polygon interior is ear-clipped and the pockets between the polygon
/// and its convex hull are ear-clipped as well. The tour polygon must be
/// simple.
Triangulation triangulate_around_tour(const PointSet& ps, const Tour& t);

/// Directed mask containing both orientations of every triangulation edge.
EdgeMask restrict_to_edges(const CostMatrix& cm, const Triangulation& tr);

/// True iff every undirected edge of the closed tour is a triangulation edge.
bool containment_check(const Tour& t, const Triangulation& tr);

struct AuditReport {
    long long triples_scanned = 0;
    long long violations = 0;
    double worst_ratio = 0.0; // max cost(i,j) / (cost(i,k) + cost(k,j))
    double tolerance = 0.0;
    std::vector<std::array<int, 3>> witnesses; // (i, k, j), capped
};

inline constexpr double kAuditTolerance = 1e-9;
inline constexpr int kAuditWitnessCap = 100;

/// Scans all n(n-1)(n-2) ordered triples (i, k, j) for triangle-inequality
/// violations cost(i,j) > (cost(i,k) + cost(k,j)) * (1 + tolerance).
AuditReport triangle_audit(const CostMatrix& cm, double tolerance = kAuditTolerance);

/// Per-seed Delaunay containment experiment over random point instances.
struct ContainmentRow {
    std::uint64_t seed = 0;
    bool contained = false;
    double opt_cost = 0.0;
    int triangulation_edges = 0;
};

struct ContainmentBatch {
    int n = 0;
    std::vector<ContainmentRow> rows; // in seed order
    double contained_fraction = 0.0;
};

/// For seeds base..base+count-1: random E2D instance, exact optimum, Delaunay
/// triangulation, containment flag. Deterministic per seed set.
ContainmentBatch containment_batch(int n, std::uint64_t seed_base, int count,
                                   int threads = 1);

/// Triangulation text format: "tri <n> <edges>" then one "i j" line per edge
/// (1-based, i < j, sorted).
std::string triangulation_to_text(const Triangulation& tr);
Triangulation parse_triangulation(const std::string& text);

/// SVG of points, triangulation edges (grey) and an optional tour (overdrawn,
/// thick). Pure function of its inputs.
std::string svg_render(const PointSet& ps, const Triangulation* tr, const Tour* tour);

} // namespace tspgap

#endif
