#ifndef TSPGAPLAB_INSTANCE_HPP
#define TSPGAPLAB_INSTANCE_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tspgaplab/errors.hpp"

namespace tspgap {

/// An edge or path cost. Exact instances carry a 64-bit integer next to the
/// double view so tour sums and distinctness checks never round.
struct Cost {
    double value = 0.0;
    long long ivalue = 0;
    bool exact = false;

    static Cost integer(long long v) { return {static_cast<double>(v), v, true}; }
    static Cost real(double v) { return {v, 0, false}; }
};

bool cost_less(const Cost& a, const Cost& b);
/// Exact comparison: integer equality in exact mode, bitwise double otherwise.
bool cost_equal(const Cost& a, const Cost& b);
/// Relative-tolerance comparison (used for float-mode cost classification).
bool cost_close(const Cost& a, const Cost& b, double rel_tol);
/// Shortest round-trip decimal text.
std::string cost_to_string(const Cost& c);
std::string double_to_string(double v);

/// Relative tolerance at which float costs are classified as equal.
inline constexpr double kFloatCostTolerance = 1e-9;

/// Square cost matrix over vertices 0..n-1 with a forbidden diagonal.
/// The diagonal is absent: it holds no value and never enters arithmetic.
class CostMatrix {
public:
    /// Float-mode matrix with all off-diagonal entries zero.
    static CostMatrix zeros(int n);
    /// Exact-integer-mode matrix with all off-diagonal entries zero.
    static CostMatrix integer_zeros(int n);

    int size() const { return n_; }
    bool exact() const { return exact_; }

    double at(int i, int j) const {
        check_edge(i, j);
        return vals_[static_cast<std::size_t>(i) * n_ + j];
    }
    long long iat(int i, int j) const {
        check_edge(i, j);
        return ivals_[static_cast<std::size_t>(i) * n_ + j];
    }
    Cost cost(int i, int j) const {
        return exact_ ? Cost::integer(iat(i, j)) : Cost::real(at(i, j));
    }

    void set(int i, int j, double v);
    void set_int(int i, int j, long long v);

    /// Unchecked row pointer for enumeration inner loops.
    const double* row(int i) const { return vals_.data() + static_cast<std::size_t>(i) * n_; }
    const long long* irow(int i) const { return ivals_.data() + static_cast<std::size_t>(i) * n_; }

    bool operator==(const CostMatrix& other) const;

private:
    CostMatrix(int n, bool exact);
    void check_edge(int i, int j) const;

    int n_ = 0;
    bool exact_ = false;
    std::vector<double> vals_;
    std::vector<long long> ivals_; // mirror of vals_ in exact mode, else empty
};

/// Planar points backing a Euclidean instance. Pairwise distinct, finite.
struct PointSet {
    struct Point {
        double x = 0.0;
        double y = 0.0;
        bool operator==(const Point&) const = default;
    };

    std::vector<Point> points;

    int size() const { return static_cast<int>(points.size()); }
    bool operator==(const PointSet&) const = default;
};

/// Axis-aligned sampling box for random point generation.
struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

enum class InstanceKind { Gap, E2d };

/// A parsed or generated instance plus its provenance text.
struct InstanceFile {
    InstanceKind kind = InstanceKind::Gap;
    std::variant<CostMatrix, PointSet> payload;
    std::string provenance;

    static InstanceFile gap(CostMatrix cm, std::string provenance = {});
    static InstanceFile e2d(PointSet ps, std::string provenance = {});

    const CostMatrix& matrix() const { return std::get<CostMatrix>(payload); }
    const PointSet& point_set() const { return std::get<PointSet>(payload); }

    /// Cost matrix view of either kind (E2D goes through points_to_costs).
    CostMatrix costs() const;
};

/// Parses the line-oriented instance text format. Throws ParseError with the
/// offending 1-based line number.
InstanceFile parse_instance(const std::string& text);

/// Canonical text for an instance; parse_instance round-trips it field-for-field.
std::string serialize_instance(const InstanceFile& inst);

/// Euclidean distance matrix of a point set. Symmetric, strictly positive off
/// the diagonal; duplicate points are an error.
CostMatrix points_to_costs(const PointSet& ps);

/// Integer matrix with all (n-1)! cycle costs pairwise distinct and a unique
/// optimum: cost(i,j) = n^(i-1) * rank of j among row i's off-diagonal
/// columns (1-based rows). Valid for 3 <= n <= 15 (64-bit exact range).
CostMatrix gen_unique_gap(int n);

/// Off-diagonal entries i.i.d. uniform on [lo, hi), reproducible per seed.
CostMatrix gen_random_gap(int n, std::uint64_t seed, double lo, double hi);

/// n distinct points uniform in box, reproducible per seed.
PointSet gen_random_points(int n, std::uint64_t seed, const Box& box = {});

/// Tour text helpers: one line of n 1-based labels, closing edge implicit.
std::vector<int> parse_tour_labels(const std::string& text, int n);
std::string tour_labels_to_string(const std::vector<int>& zero_based_seq);

} // namespace tspgap

#endif
