#include "tspgaplab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "tspgaplab/rng.hpp"

namespace tspgap {

namespace {

long long checked_gcd(long long a, long long b) { return std::gcd(a, b); }

__int128 i128(long long v) { return static_cast<__int128>(v); }

long long narrow(__int128 v) {
    if (v > static_cast<__int128>(9223372036854775807LL) ||
        v < -static_cast<__int128>(9223372036854775807LL) - 1)
        throw Error("rational arithmetic overflowed 64 bits");
    return static_cast<long long>(v);
}

// One fixed-size block of uniform tour draws; block index b is reproduced by
// any thread count because its seed derives from (seed, b) alone.
template <typename Consumer>
void sample_block(int n, std::uint64_t seed, long long block, long long block_len,
                  Consumer&& consume) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(block)));
    std::vector<int> rest(static_cast<std::size_t>(n) - 1);
    for (long long s = 0; s < block_len; ++s) {
        std::iota(rest.begin(), rest.end(), 1);
        rng.shuffle(rest.data(), rest.size());
        consume(rest);
    }
}

} // namespace

Rational Rational::make(long long num, long long den) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = checked_gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

std::string Rational::to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational rational_sub(const Rational& a, const Rational& b) {
    const __int128 num = i128(a.num) * i128(b.den) - i128(b.num) * i128(a.den);
    const __int128 den = i128(a.den) * i128(b.den);
    const __int128 g = std::gcd(narrow(num < 0 ? -num : num), narrow(den));
    return Rational::make(narrow(num / (g ? g : 1)), narrow(den / (g ? g : 1)));
}

bool rational_less(const Rational& a, const Rational& b) {
    return i128(a.num) * i128(b.den) < i128(b.num) * i128(a.den);
}

std::vector<Tour> sample_cycles(int n, long long k, std::uint64_t seed) {
    if (n < 3) throw Error("cycle sampling needs n >= 3");
    if (k < 1) throw Error("sample count must be positive");
    std::vector<Tour> out;
    out.reserve(static_cast<std::size_t>(k));
    const long long blocks = (k + kSampleBlock - 1) / kSampleBlock;
    for (long long b = 0; b < blocks; ++b) {
        const long long len = std::min(kSampleBlock, k - b * kSampleBlock);
        sample_block(n, seed, b, len, [&](const std::vector<int>& rest) {
            std::vector<int> seq;
            seq.reserve(static_cast<std::size_t>(n));
            seq.push_back(0);
            seq.insert(seq.end(), rest.begin(), rest.end());
            out.emplace_back(Tour(std::move(seq)));
        });
    }
    return out;
}

std::pair<double, double> wilson_interval(long long hits, long long samples) {
    if (samples <= 0) throw Error("Wilson interval needs samples > 0");
    const double z = 1.959963984540054; // 95% two-sided normal quantile
    const double k = static_cast<double>(samples);
    const double p = static_cast<double>(hits) / k;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / k;
    const double center = (p + z2 / (2.0 * k)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / k + z2 / (4.0 * k * k)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

HitEstimate estimate_hit_rate(const CostMatrix& cm, long long k, std::uint64_t seed,
                              int threads, bool force) {
    if (k < 1) throw Error("sample count must be positive");
    const int n = cm.size();
    SolveOptions opts;
    opts.threads = threads;
    opts.force = force;
    const Solution sol = solve_exact(cm, opts);

    const long long blocks = (k + kSampleBlock - 1) / kSampleBlock;
    auto hits_per_block = detail::ordered_parallel_map<long long>(
        static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
            const long long len =
                std::min(kSampleBlock, k - static_cast<long long>(b) * kSampleBlock);
            long long hits = 0;
            std::vector<int> seq(static_cast<std::size_t>(n));
            seq[0] = 0;
            sample_block(n, seed, static_cast<long long>(b), len,
                         [&](const std::vector<int>& rest) {
                             std::copy(rest.begin(), rest.end(), seq.begin() + 1);
                             const Cost c = path_cost(cm, seq, true);
                             if (cm.exact() ? c.ivalue == sol.opt_cost.ivalue
                                            : cost_close(c, sol.opt_cost, kFloatCostTolerance))
                                 ++hits;
                         });
            return hits;
        });

    HitEstimate est;
    est.samples = k;
    for (long long h : hits_per_block) est.hits += h;
    est.p_hat = static_cast<double>(est.hits) / static_cast<double>(k);
    std::tie(est.ci_low, est.ci_high) = wilson_interval(est.hits, k);
    est.num_optimal = static_cast<int>(sol.opt_tours.size());
    est.theoretical_exact =
        Rational::make(static_cast<long long>(sol.opt_tours.size()), cycle_count(n));
    est.theoretical = est.theoretical_exact.value();
    return est;
}

BoundsReport bounds_report(int n) {
    if (n < 4) throw Error("bounds report needs n >= 4");
    if (n > 20) throw Error("bounds report needs n <= 20 (64-bit factorials)");
    BoundsReport br;
    br.n = n;
    const long long n3 = static_cast<long long>(n) * n * n;
    br.p_j = Rational::make(n3, factorial(n));
    br.p_j_value = br.p_j.value();
    br.a_star = Rational::make(static_cast<long long>(n) * n,
                               static_cast<long long>(n - 1) * (n - 2));
    br.lower_bound =
        Rational::make(br.a_star.den, narrow(i128(br.a_star.num) * i128(factorial(n - 3))));
    br.complement = rational_sub(Rational::make(1, 1), br.p_j);
    br.p_j_exceeds_one = rational_less(Rational::make(1, 1), br.p_j);
    br.a_star_in_range =
        rational_less(Rational::make(1, 1), br.a_star) && rational_less(br.a_star, Rational::make(8, 1));
    // Verbatim final step of the chain: n^3/n! <= 1/n!.
    br.chain_upper_bound_holds = !rational_less(Rational::make(1, factorial(n)), br.p_j);

    // p_j = a_star / (n-3)! exactly, and the bound at A = a_star never exceeds p_j.
    const Rational identity =
        Rational::make(br.a_star.num, narrow(i128(br.a_star.den) * i128(factorial(n - 3))));
    if (!(identity == br.p_j))
        throw Error("bounds invariant failed: a_star/(n-3)! must equal p_j");
    if (rational_less(br.p_j, br.lower_bound))
        throw Error("bounds invariant failed: lower bound exceeds p_j");
    return br;
}

std::string bounds_to_text(const BoundsReport& br) {
    std::string out;
    out += "n: " + std::to_string(br.n) + "\n";
    out += "p_j: " + br.p_j.to_string() + "\n";
    out += "p_j_value: " + double_to_string(br.p_j_value) + "\n";
    out += "a_star: " + br.a_star.to_string() + "\n";
    out += "lower_bound: " + br.lower_bound.to_string() + "\n";
    out += "complement: " + br.complement.to_string() + "\n";
    out += "complement_value: " + double_to_string(br.complement.value()) + "\n";
    out += std::string("p_j_exceeds_one: ") + (br.p_j_exceeds_one ? "true" : "false") + "\n";
    out += std::string("a_star_in_range: ") + (br.a_star_in_range ? "true" : "false") + "\n";
    out += std::string("chain_upper_bound_holds: ") +
           (br.chain_upper_bound_holds ? "true" : "false") + "\n";
    return out;
}

std::string hit_estimate_to_text(const HitEstimate& he) {
    std::string out;
    out += "samples: " + std::to_string(he.samples) + "\n";
    out += "hits: " + std::to_string(he.hits) + "\n";
    out += "p_hat: " + double_to_string(he.p_hat) + "\n";
    out += "ci_low: " + double_to_string(he.ci_low) + "\n";
    out += "ci_high: " + double_to_string(he.ci_high) + "\n";
    out += "num_optimal: " + std::to_string(he.num_optimal) + "\n";
    out += "theoretical: " + he.theoretical_exact.to_string() + " = " +
           double_to_string(he.theoretical) + "\n";
    out += std::string("theoretical_in_ci: ") +
           ((he.theoretical >= he.ci_low && he.theoretical <= he.ci_high) ? "true" : "false") +
           "\n";
    return out;
}

} // namespace tspgap
