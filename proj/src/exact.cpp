#include "tspgaplab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "tspgaplab/rng.hpp"

namespace tspgap {

namespace {

void check_vertices(const std::vector<int>& seq, const char* what) {
    if (seq.empty()) throw Error(std::string(what) + " is empty");
    std::vector<int> sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0) throw Error(std::string(what) + " has a negative vertex");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(std::string(what) + " repeats a vertex");
}

void check_guard(int n, bool force) {
    if (n < 3) throw Error("cycle enumeration needs n >= 3");
    if (n > kEnumerationGuard && !force)
        throw GuardError("n = " + std::to_string(n) + " exceeds the enumeration guard (" +
                         std::to_string(kEnumerationGuard) + "); pass force to override");
}

std::vector<int> labels_to_zero_based(const std::vector<int>& labels, const char* what) {
    std::vector<int> seq;
    seq.reserve(labels.size());
    for (int v : labels) {
        if (v < 1) throw Error(std::string(what) + " labels are 1-based");
        seq.push_back(v - 1);
    }
    return seq;
}

} // namespace

long long factorial(int n) {
    if (n < 0 || n > 20) throw Error("factorial argument out of 64-bit range");
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

long long cycle_count(int n) {
    if (n < 3) throw Error("cycle count needs n >= 3");
    return factorial(n - 1);
}

Tour::Tour(std::vector<int> seq) : seq_(std::move(seq)) {
    if (seq_.size() < 3) throw Error("tour needs at least 3 vertices");
    check_vertices(seq_, "tour");
    if (*std::max_element(seq_.begin(), seq_.end()) != static_cast<int>(seq_.size()) - 1)
        throw Error("tour is not a permutation of 0..n-1");
    const auto zero = std::find(seq_.begin(), seq_.end(), 0);
    std::rotate(seq_.begin(), zero, seq_.end());
}

Tour Tour::from_labels(const std::vector<int>& labels) {
    return Tour(labels_to_zero_based(labels, "tour"));
}

std::vector<int> Tour::labels() const {
    std::vector<int> out(seq_.size());
    std::transform(seq_.begin(), seq_.end(), out.begin(), [](int v) { return v + 1; });
    return out;
}

Path::Path(std::vector<int> seq) : seq_(std::move(seq)) {
    if (seq_.size() < 2) throw Error("path needs at least 2 vertices");
    check_vertices(seq_, "path");
}

Path Path::from_labels(const std::vector<int>& labels) {
    return Path(labels_to_zero_based(labels, "path"));
}

std::vector<int> Path::labels() const {
    std::vector<int> out(seq_.size());
    std::transform(seq_.begin(), seq_.end(), out.begin(), [](int v) { return v + 1; });
    return out;
}

EdgeMask EdgeMask::complete(int n) {
    EdgeMask m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) m.allow(i, j);
    return m;
}

void EdgeMask::allow(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j)
        throw Error("edge mask entry out of range");
    auto& cell = allowed_[static_cast<std::size_t>(i) * n_ + j];
    if (!cell) {
        cell = 1;
        ++count_;
    }
}

Cost path_cost(const CostMatrix& cm, const std::vector<int>& seq, bool closed) {
    if (seq.size() < 2) throw Error("path cost needs at least 2 vertices");
    const int n = cm.size();
    for (int v : seq)
        if (v < 0 || v >= n) throw Error("vertex out of range");
    if (cm.exact()) {
        long long total = 0;
        for (std::size_t k = 0; k + 1 < seq.size(); ++k) total += cm.iat(seq[k], seq[k + 1]);
        if (closed) total += cm.iat(seq.back(), seq.front());
        return Cost::integer(total);
    }
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) total += cm.at(seq[k], seq[k + 1]);
    if (closed) total += cm.at(seq.back(), seq.front());
    return Cost::real(total);
}

Cost path_cost(const CostMatrix& cm, const Path& p) { return path_cost(cm, p.seq(), false); }
Cost tour_cost(const CostMatrix& cm, const Tour& t) { return path_cost(cm, t.seq(), true); }

CycleEnumerator::CycleEnumerator(int n, bool force) : n_(n) {
    check_guard(n, force);
    rest_.resize(static_cast<std::size_t>(n) - 1);
    std::iota(rest_.begin(), rest_.end(), 1);
}

CycleEnumerator::CycleEnumerator(int n, int second_vertex, bool force)
    : n_(n), fixed_second_(true) {
    check_guard(n, force);
    if (second_vertex < 1 || second_vertex >= n)
        throw Error("second vertex must lie in 1..n-1");
    rest_.push_back(second_vertex);
    for (int v = 1; v < n; ++v)
        if (v != second_vertex) rest_.push_back(v);
}

std::optional<Tour> CycleEnumerator::next() {
    if (done_) return std::nullopt;
    std::vector<int> seq;
    seq.reserve(static_cast<std::size_t>(n_));
    seq.push_back(0);
    seq.insert(seq.end(), rest_.begin(), rest_.end());
    // Advance: permute everything, or only the tail when the second vertex is
    // pinned to one partition.
    const auto first = fixed_second_ ? rest_.begin() + 1 : rest_.begin();
    done_ = !std::next_permutation(first, rest_.end());
    return Tour(std::move(seq));
}

std::vector<Tour> all_cycles(int n, bool force) {
    CycleEnumerator en(n, force);
    std::vector<Tour> out;
    out.reserve(static_cast<std::size_t>(std::min<long long>(cycle_count(n), 1 << 20)));
    while (auto t = en.next()) out.push_back(std::move(*t));
    return out;
}

namespace {

// One second-vertex partition of the exhaustive solve. Costs for the distinct
// check are collected only while the partition stays under its share of the cap.
struct PartitionResult {
    bool feasible = false;
    Cost best;
    std::vector<std::vector<int>> best_seqs; // in discovery (= lexicographic) order
    long long evaluated = 0;
    std::vector<long long> icosts;
    std::vector<double> fcosts;
    bool cost_log_complete = true;
};

template <typename Value>
struct DfsState {
    const CostMatrix* cm;
    const EdgeMask* mask;
    int n;
    long long cost_cap;
    PartitionResult* out;
    std::vector<int> seq;
    std::vector<char> used;

    void record(Value total) {
        ++out->evaluated;
        Cost c;
        if constexpr (std::is_same_v<Value, long long>) {
            c = Cost::integer(total);
            if (out->cost_log_complete) {
                if (static_cast<long long>(out->icosts.size()) < cost_cap)
                    out->icosts.push_back(total);
                else
                    out->cost_log_complete = false;
            }
        } else {
            c = Cost::real(total);
            if (out->cost_log_complete) {
                if (static_cast<long long>(out->fcosts.size()) < cost_cap)
                    out->fcosts.push_back(total);
                else
                    out->cost_log_complete = false;
            }
        }
        if (!out->feasible || cost_less(c, out->best)) {
            out->feasible = true;
            out->best = c;
            out->best_seqs.clear();
            out->best_seqs.push_back(seq);
        } else if (cost_equal(c, out->best)) {
            out->best_seqs.push_back(seq);
        }
    }

    // Extends by ascending vertex label, so complete cycles appear in
    // lexicographic order of seq[1..n-1].
    void extend(Value acc) {
        const int from = seq.back();
        if (static_cast<int>(seq.size()) == n) {
            if (!mask || mask->allows(from, 0)) {
                Value closing;
                if constexpr (std::is_same_v<Value, long long>)
                    closing = cm->irow(from)[0];
                else
                    closing = cm->row(from)[0];
                record(acc + closing);
            }
            return;
        }
        for (int v = 1; v < n; ++v) {
            if (used[v]) continue;
            if (mask && !mask->allows(from, v)) continue;
            Value step;
            if constexpr (std::is_same_v<Value, long long>)
                step = cm->irow(from)[v];
            else
                step = cm->row(from)[v];
            used[v] = 1;
            seq.push_back(v);
            extend(acc + step);
            seq.pop_back();
            used[v] = 0;
        }
    }
};

template <typename Value>
PartitionResult solve_partition(const CostMatrix& cm, const EdgeMask* mask, int second,
                                long long cost_cap) {
    PartitionResult result;
    const int n = cm.size();
    if (mask && !mask->allows(0, second)) return result;
    DfsState<Value> dfs{&cm, mask, n, cost_cap, &result, {}, {}};
    dfs.seq.reserve(static_cast<std::size_t>(n));
    dfs.used.assign(static_cast<std::size_t>(n), 0);
    dfs.seq.push_back(0);
    dfs.used[0] = 1;
    dfs.seq.push_back(second);
    dfs.used[second] = 1;
    Value start;
    if constexpr (std::is_same_v<Value, long long>)
        start = cm.irow(0)[second];
    else
        start = cm.row(0)[second];
    dfs.extend(start);
    return result;
}

} // namespace

Solution solve_exact(const CostMatrix& cm, const SolveOptions& opts) {
    const int n = cm.size();
    check_guard(n, opts.force);
    if (opts.mask && opts.mask->vertex_count() != n)
        throw Error("edge mask size does not match the instance");

    const int partitions = n - 1;
    const long long per_partition_cap = opts.distinct_cap; // bounded per worker
    auto run = [&](std::size_t idx) {
        const int second = static_cast<int>(idx) + 1;
        return cm.exact()
                   ? solve_partition<long long>(cm, opts.mask, second, per_partition_cap)
                   : solve_partition<double>(cm, opts.mask, second, per_partition_cap);
    };
    auto parts = detail::ordered_parallel_map<PartitionResult>(
        static_cast<std::size_t>(partitions), opts.threads, run);

    Solution sol;
    for (const auto& p : parts) sol.cycles_evaluated += p.evaluated;

    // Merge in fixed partition order; ties concatenate in lexicographic order.
    for (auto& p : parts) {
        if (!p.feasible) continue;
        if (!sol.feasible || cost_less(p.best, sol.opt_cost)) {
            sol.feasible = true;
            sol.opt_cost = p.best;
            sol.opt_tours.clear();
        }
        if (cost_equal(p.best, sol.opt_cost)) {
            for (auto& s : p.best_seqs) sol.opt_tours.emplace_back(Tour(std::move(s)));
        }
    }

    if (sol.cycles_evaluated > opts.distinct_cap ||
        std::any_of(parts.begin(), parts.end(), [](const auto& p) { return !p.cost_log_complete; })) {
        sol.distinct_costs = std::nullopt;
    } else if (cm.exact()) {
        std::vector<long long> costs;
        costs.reserve(static_cast<std::size_t>(sol.cycles_evaluated));
        for (auto& p : parts) costs.insert(costs.end(), p.icosts.begin(), p.icosts.end());
        std::sort(costs.begin(), costs.end());
        sol.distinct_costs = std::adjacent_find(costs.begin(), costs.end()) == costs.end();
    } else {
        std::vector<double> costs;
        costs.reserve(static_cast<std::size_t>(sol.cycles_evaluated));
        for (auto& p : parts) costs.insert(costs.end(), p.fcosts.begin(), p.fcosts.end());
        std::sort(costs.begin(), costs.end());
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < costs.size(); ++i) {
            const double scale = std::max(std::abs(costs[i]), std::abs(costs[i + 1]));
            if (std::abs(costs[i + 1] - costs[i]) <= kFloatCostTolerance * scale) distinct = false;
        }
        sol.distinct_costs = distinct;
    }
    return sol;
}

VertexRelabeling::VertexRelabeling(std::vector<int> map) : map_(std::move(map)) {
    check_vertices(map_, "relabeling");
    if (*std::max_element(map_.begin(), map_.end()) != static_cast<int>(map_.size()) - 1)
        throw Error("relabeling is not a bijection on 0..n-1");
    inv_.assign(map_.size(), 0);
    for (std::size_t i = 0; i < map_.size(); ++i) inv_[static_cast<std::size_t>(map_[i])] = static_cast<int>(i);
}

VertexRelabeling VertexRelabeling::identity(int n) {
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    return VertexRelabeling(std::move(m));
}

VertexRelabeling relabel_to_descent(const Tour& t) {
    const int n = t.size();
    std::vector<int> map(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) map[static_cast<std::size_t>(t.seq()[k])] = n - 1 - k;
    return VertexRelabeling(std::move(map));
}

CostMatrix apply_relabeling(const CostMatrix& cm, const VertexRelabeling& m) {
    const int n = cm.size();
    if (m.size() != n) throw Error("relabeling size does not match the instance");
    CostMatrix out = cm.exact() ? CostMatrix::integer_zeros(n) : CostMatrix::zeros(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (cm.exact())
                out.set_int(m.map(i), m.map(j), cm.iat(i, j));
            else
                out.set(m.map(i), m.map(j), cm.at(i, j));
        }
    }
    return out;
}

Tour relabel_tour(const Tour& t, const VertexRelabeling& m) {
    if (m.size() != t.size()) throw Error("relabeling size does not match the tour");
    std::vector<int> seq;
    seq.reserve(t.seq().size());
    for (int v : t.seq()) seq.push_back(m.map(v));
    return Tour(std::move(seq));
}

Tour descent_tour(int n) {
    std::vector<int> seq;
    seq.reserve(static_cast<std::size_t>(n));
    for (int v = n - 1; v >= 0; --v) seq.push_back(v);
    return Tour(std::move(seq));
}

int coincident_edge_count(const Tour& a, const Tour& b) {
    if (a.size() != b.size()) throw Error("tours differ in size");
    const int n = a.size();
    std::vector<int> succ_a(static_cast<std::size_t>(n)), succ_b(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        succ_a[static_cast<std::size_t>(a.seq()[k])] = a.seq()[(k + 1) % n];
        succ_b[static_cast<std::size_t>(b.seq()[k])] = b.seq()[(k + 1) % n];
    }
    int shared = 0;
    for (int v = 0; v < n; ++v) shared += (succ_a[static_cast<std::size_t>(v)] == succ_b[static_cast<std::size_t>(v)]);
    return shared;
}

namespace {

bool cost_violates(const CostMatrix& cm, const Cost& shorter, const Cost& longer) {
    if (cm.exact()) return shorter.ivalue > longer.ivalue;
    const double scale = std::max(std::abs(shorter.value), std::abs(longer.value));
    return shorter.value > longer.value + kFloatCostTolerance * scale;
}

// Applies fn to every proper endpoint-sharing subsequence of seq obtained by
// deleting a nonempty subset of interior vertices. Stops early when fn
// returns false.
template <typename Fn>
bool for_each_interior_deletion(const std::vector<int>& seq, Fn&& fn) {
    const int interior = static_cast<int>(seq.size()) - 2;
    for (unsigned keep_mask = 0; keep_mask + 1 < (1u << interior); ++keep_mask) {
        std::vector<int> sub;
        sub.reserve(seq.size());
        sub.push_back(seq.front());
        for (int b = 0; b < interior; ++b)
            if (keep_mask & (1u << b)) sub.push_back(seq[static_cast<std::size_t>(b) + 1]);
        sub.push_back(seq.back());
        if (!fn(sub)) return false;
    }
    return true;
}

} // namespace

MonotonicityReport monotonicity_check(const CostMatrix& cm, long long trials,
                                      std::uint64_t seed) {
    const int n = cm.size();
    MonotonicityReport report;

    auto consider = [&](const std::vector<int>& longer, const std::vector<int>& shorter) {
        ++report.pairs_checked;
        const Cost c_long = path_cost(cm, longer, false);
        const Cost c_short = path_cost(cm, shorter, false);
        if (cost_violates(cm, c_short, c_long)) {
            ++report.violations;
            if (!report.counterexample)
                report.counterexample = {Path(shorter), Path(longer)};
        }
    };

    if (n <= 7) {
        report.exhaustive = true;
        // All ordered vertex sequences of length 3..n (shorter ones have no
        // interior to delete), in ascending length then lexicographic order.
        std::vector<int> seq;
        std::vector<char> used(static_cast<std::size_t>(n), 0);
        auto recurse = [&](auto&& self, int target_len) -> void {
            if (static_cast<int>(seq.size()) == target_len) {
                for_each_interior_deletion(seq, [&](const std::vector<int>& sub) {
                    consider(seq, sub);
                    return true;
                });
                return;
            }
            for (int v = 0; v < n; ++v) {
                if (used[static_cast<std::size_t>(v)]) continue;
                used[static_cast<std::size_t>(v)] = 1;
                seq.push_back(v);
                self(self, target_len);
                seq.pop_back();
                used[static_cast<std::size_t>(v)] = 0;
            }
        };
        for (int len = 3; len <= n; ++len) recurse(recurse, len);
        return report;
    }

    Rng rng(seed);
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (long long t = 0; t < trials; ++t) {
        const int len = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
        rng.shuffle(pool.data(), pool.size());
        std::vector<int> longer(pool.begin(), pool.begin() + len);
        // Delete a uniformly random nonempty interior subset.
        const int interior = len - 2;
        const std::uint64_t mask_count = (1ULL << interior) - 1; // proper subsets to keep
        const unsigned keep_mask = static_cast<unsigned>(rng.below(mask_count));
        std::vector<int> shorter;
        shorter.push_back(longer.front());
        for (int b = 0; b < interior; ++b)
            if (keep_mask & (1u << b)) shorter.push_back(longer[static_cast<std::size_t>(b) + 1]);
        shorter.push_back(longer.back());
        consider(longer, shorter);
    }
    return report;
}

std::string solution_to_text(const Solution& sol) {
    std::string out;
    if (!sol.feasible) {
        out += "infeasible: true\n";
        out += "cycles_evaluated: " + std::to_string(sol.cycles_evaluated) + "\n";
        return out;
    }
    out += "opt_cost: " + cost_to_string(sol.opt_cost) + "\n";
    out += "num_opt_tours: " + std::to_string(sol.opt_tours.size()) + "\n";
    out += "distinct_costs: ";
    out += sol.distinct_costs ? (*sol.distinct_costs ? "true" : "false") : "unknown";
    out += "\n";
    out += "cycles_evaluated: " + std::to_string(sol.cycles_evaluated) + "\n";
    for (const auto& t : sol.opt_tours) out += tour_labels_to_string(t.seq()) + "\n";
    return out;
}

} // namespace tspgap
