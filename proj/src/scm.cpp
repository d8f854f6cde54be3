#include "tspgaplab/scm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tspgap {

int SortedCostMatrix::rank_of(int v, int w) const {
    const auto& row = rows[static_cast<std::size_t>(v)];
    for (std::size_t r = 0; r < row.size(); ++r)
        if (row[r].neighbor == w) return static_cast<int>(r) + 1;
    return 0;
}

SortedCostMatrix build_scm(const CostMatrix& cm, const EdgeMask* mask) {
    const int n = cm.size();
    if (mask && mask->vertex_count() != n)
        throw Error("edge mask size does not match the instance");
    SortedCostMatrix scm;
    scm.n = n;
    scm.exact = cm.exact();
    scm.rows.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        auto& row = scm.rows[static_cast<std::size_t>(v)];
        for (int w = 0; w < n; ++w) {
            if (w == v) continue;
            if (mask && !mask->allows(v, w)) continue;
            row.push_back({w, cm.cost(v, w)});
        }
        if (row.empty()) throw Error("isolated vertex " + std::to_string(v + 1) + " under mask");
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
            if (cost_less(a.cost, b.cost)) return true;
            if (cost_less(b.cost, a.cost)) return false;
            return a.neighbor < b.neighbor;
        });
    }
    return scm;
}

Frontier compute_frontier(const SortedCostMatrix& scm, const Tour& t) {
    if (t.size() != scm.n) throw Error("tour size does not match the sorted cost matrix");
    Frontier fr;
    fr.ranks.resize(static_cast<std::size_t>(scm.n));
    long long total = 0;
    int max_rank = 0;
    for (int k = 0; k < scm.n; ++k) {
        const int v = t.seq()[k];
        const int w = t.seq()[(k + 1) % scm.n];
        const int rank = scm.rank_of(v, w);
        if (rank == 0)
            throw Error("tour edge " + std::to_string(v + 1) + "->" + std::to_string(w + 1) +
                        " is absent from the mask");
        fr.ranks[static_cast<std::size_t>(v)] = rank;
        total += rank;
        max_rank = std::max(max_rank, rank);
    }
    fr.elongation = static_cast<double>(max_rank) / (scm.n - 1);
    fr.mean_rank = static_cast<double>(total) / scm.n;
    return fr;
}

std::vector<Tour> near_optimal_set(const CostMatrix& cm, const Solution& sol, double epsilon,
                                   bool force) {
    if (!sol.feasible) throw Error("near-optimal set needs a feasible solution");
    if (epsilon < 0.0) throw Error("epsilon must be nonnegative");
    struct Entry {
        Cost cost;
        Tour tour;
    };
    std::vector<Entry> kept;
    CycleEnumerator en(cm.size(), force);
    while (auto t = en.next()) {
        const Cost c = tour_cost(cm, *t);
        if (cost_equal(c, sol.opt_cost)) continue; // optimal tours are excluded
        bool within;
        if (cm.exact()) {
            const long long budget = sol.opt_cost.ivalue +
                static_cast<long long>(std::floor(static_cast<long double>(epsilon) *
                                                  static_cast<long double>(sol.opt_cost.ivalue)));
            within = c.ivalue <= budget;
        } else {
            within = c.value <= (1.0 + epsilon) * sol.opt_cost.value;
        }
        if (within) kept.push_back({c, std::move(*t)});
    }
    std::stable_sort(kept.begin(), kept.end(), [](const Entry& a, const Entry& b) {
        if (cost_less(a.cost, b.cost)) return true;
        if (cost_less(b.cost, a.cost)) return false;
        return a.tour < b.tour;
    });
    std::vector<Tour> out;
    out.reserve(kept.size());
    for (auto& e : kept) out.push_back(std::move(e.tour));
    return out;
}

namespace {

enum class CellTag { Plain, Near, Solution };

const char* tag_name(CellTag t) {
    switch (t) {
        case CellTag::Solution: return "solution";
        case CellTag::Near: return "near";
        default: return "plain";
    }
}

} // namespace

ScmRender render_scm(const SortedCostMatrix& scm, const Frontier* frontier,
                     const std::vector<Tour>* near) {
    const int n = scm.n;
    const int width = n - 1;

    // Cell tags; solution wins over near where a near tour reuses an optimal edge.
    std::vector<std::vector<CellTag>> tags(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        tags[static_cast<std::size_t>(v)].assign(scm.rows[static_cast<std::size_t>(v)].size(),
                                                 CellTag::Plain);
    if (near) {
        for (const auto& t : *near) {
            for (int k = 0; k < n; ++k) {
                const int v = t.seq()[k];
                const int w = t.seq()[(k + 1) % n];
                const int rank = scm.rank_of(v, w);
                if (rank > 0) tags[static_cast<std::size_t>(v)][static_cast<std::size_t>(rank - 1)] = CellTag::Near;
            }
        }
    }
    if (frontier) {
        for (int v = 0; v < n; ++v)
            tags[static_cast<std::size_t>(v)][static_cast<std::size_t>(frontier->ranks[v] - 1)] =
                CellTag::Solution;
    }

    // Grey levels are linear in cost between the global min and max over all
    // present cells; background stays pure white.
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int v = 0; v < n; ++v) {
        for (const auto& e : scm.rows[static_cast<std::size_t>(v)]) {
            if (first) {
                lo = hi = e.cost.value;
                first = false;
            } else {
                lo = std::min(lo, e.cost.value);
                hi = std::max(hi, e.cost.value);
            }
        }
    }
    const double range = hi > lo ? hi - lo : 1.0;

    std::string ppm = "P3\n" + std::to_string(width) + " " + std::to_string(n) + "\n255\n";
    std::string csv = "vertex,rank,neighbor,cost,tag\n";
    for (int v = 0; v < n; ++v) {
        const auto& row = scm.rows[static_cast<std::size_t>(v)];
        for (int r = 0; r < width; ++r) {
            if (r) ppm += ' ';
            if (r >= static_cast<int>(row.size())) {
                ppm += "255 255 255";
                continue;
            }
            const CellTag tag = tags[static_cast<std::size_t>(v)][static_cast<std::size_t>(r)];
            if (tag == CellTag::Solution) {
                ppm += "0 255 0";
            } else if (tag == CellTag::Near) {
                ppm += "255 0 0";
            } else {
                const double t = (row[static_cast<std::size_t>(r)].cost.value - lo) / range;
                const int grey = static_cast<int>(std::lround(230.0 * t));
                const std::string g = std::to_string(grey);
                ppm += g + " " + g + " " + g;
            }
            csv += std::to_string(v + 1) + "," + std::to_string(r + 1) + "," +
                   std::to_string(row[static_cast<std::size_t>(r)].neighbor + 1) + "," +
                   cost_to_string(row[static_cast<std::size_t>(r)].cost) + "," +
                   tag_name(tags[static_cast<std::size_t>(v)][static_cast<std::size_t>(r)]) + "\n";
        }
        ppm += '\n';
    }
    return {std::move(ppm), std::move(csv)};
}

int ppm_nonbackground_columns(const std::string& ppm_text) {
    std::istringstream in(ppm_text);
    std::string magic;
    int width = 0, height = 0, maxval = 0;
    if (!(in >> magic >> width >> height >> maxval) || magic != "P3")
        throw Error("not an ASCII P3 pixmap");
    std::vector<char> nonbackground(static_cast<std::size_t>(width), 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            int r = 0, g = 0, b = 0;
            if (!(in >> r >> g >> b)) throw Error("truncated pixmap");
            if (r != 255 || g != 255 || b != 255) nonbackground[static_cast<std::size_t>(x)] = 1;
        }
    }
    int count = 0;
    for (char c : nonbackground) count += c;
    return count;
}

} // namespace tspgap
