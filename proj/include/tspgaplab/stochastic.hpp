#ifndef TSPGAPLAB_STOCHASTIC_HPP
#define TSPGAPLAB_STOCHASTIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tspgaplab/exact.hpp"

namespace tspgap {

/// Exact fraction with a 64-bit numerator and denominator, kept reduced.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational make(long long num, long long den);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;

    bool operator==(const Rational&) const = default;
};

Rational rational_sub(const Rational& a, const Rational& b);
bool rational_less(const Rational& a, const Rational& b);

/// Samples are drawn in fixed blocks of kSampleBlock tours; block b uses
/// derive_seed(seed, b), so any thread count reproduces the sequential stream.
inline constexpr long long kSampleBlock = 4096;

/// k i.i.d. uniform draws over the (n-1)! rotation-normalized cycles, via
/// Fisher-Yates shuffles of vertices 2..n.
std::vector<Tour> sample_cycles(int n, long long k, std::uint64_t seed);

struct HitEstimate {
    long long samples = 0;
    long long hits = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;  // 95% Wilson score interval
    double ci_high = 0.0;
    double theoretical = 0.0; // (#optimal tours) / (n-1)!
    Rational theoretical_exact;
    int num_optimal = 0;
};

/// 95% Wilson score interval for hits successes in samples trials.
std::pair<double, double> wilson_interval(long long hits, long long samples);

/// Probability that a uniform random cycle attains the optimal cost,
/// estimated from k samples and compared with the exhaustive count.
HitEstimate estimate_hit_rate(const CostMatrix& cm, long long k,
                              std::uint64_t seed, int threads = 1,
                              bool force = false);

/// Exact arithmetic for the uniform-search bound chain at n vertices:
/// p_j = n^3 / n!, a_star = n^2 / ((n-1)(n-2)) with p_j = a_star / (n-3)!.
struct BoundsReport {
    int n = 0;
    Rational p_j;
    double p_j_value = 0.0;
    Rational a_star;
    Rational lower_bound;       // 1 / (a_star * (n-3)!), never exceeds p_j
    Rational complement;        // 1 - p_j
    bool p_j_exceeds_one = false;     // flagged, not corrected (true at n = 4)
    bool a_star_in_range = false;     // 1 < a_star < 8
    /// The chain's final "<= 1/n!" step evaluated verbatim; false for n >= 2.
    bool chain_upper_bound_holds = false;
};

/// Valid for 4 <= n <= 20 (n! within 64-bit range).
BoundsReport bounds_report(int n);

std::string bounds_to_text(const BoundsReport& br);
std::string hit_estimate_to_text(const HitEstimate& he);

} // namespace tspgap

#endif
