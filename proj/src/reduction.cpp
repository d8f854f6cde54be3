#include "tspgaplab/reduction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "tspgaplab/rng.hpp"

namespace tspgap {

namespace {

struct Pt {
    double x = 0.0;
    double y = 0.0;
};

// Raised when a filtered predicate cannot certify its sign; the caller
// retries the whole construction on jittered coordinates.
struct Degeneracy {};

enum class Sign { Negative, Uncertain, Positive };

// Shewchuk-style static filters: the double-precision determinant is trusted
// only when it clears the roundoff bound for its magnitude.
constexpr double kMachEps = 1.1102230246251565e-16; // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kMachEps) * kMachEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kMachEps) * kMachEps;

Sign orient2d(const Pt& a, const Pt& b, const Pt& c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;
    const double bound = kOrientBound * (std::abs(detleft) + std::abs(detright));
    if (det > bound) return Sign::Positive;
    if (-det > bound) return Sign::Negative;
    return Sign::Uncertain;
}

Sign orient2d_strict(const Pt& a, const Pt& b, const Pt& c) {
    const Sign s = orient2d(a, b, c);
    if (s == Sign::Uncertain) throw Degeneracy{};
    return s;
}

/// Positive iff d lies strictly inside the circumcircle of CCW triangle abc.
Sign incircle(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    const double bound = kIncircleBound * permanent;
    if (det > bound) return Sign::Positive;
    if (-det > bound) return Sign::Negative;
    return Sign::Uncertain;
}

std::vector<Pt> to_pts(const PointSet& ps) {
    std::vector<Pt> out;
    out.reserve(ps.points.size());
    for (const auto& p : ps.points) out.push_back({p.x, p.y});
    return out;
}

double bbox_span(const std::vector<Pt>& pts) {
    double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
    for (const auto& p : pts) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    return std::max(x1 - x0, y1 - y0);
}

std::vector<Pt> jittered(const std::vector<Pt>& pts, int attempt) {
    const double span = bbox_span(pts);
    const double scale = span > 0.0 ? span : 1.0;
    double magnitude = kJitterMagnitude;
    for (int a = 1; a < attempt; ++a) magnitude *= 10.0;
    Rng rng(derive_seed(kJitterSeed, static_cast<std::uint64_t>(attempt)));
    std::vector<Pt> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        const double ux = 2.0 * rng.real() - 1.0;
        const double uy = 2.0 * rng.real() - 1.0;
        out.push_back({p.x + scale * magnitude * ux, p.y + scale * magnitude * uy});
    }
    return out;
}

void ensure_not_all_collinear(const std::vector<Pt>& pts) {
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (orient2d(pts[i], pts[j], pts[k]) != Sign::Uncertain) return;
    throw Error("all points are collinear");
}

Triangulation assemble(int n, std::vector<std::array<int, 3>> faces, int attempt) {
    Triangulation tr;
    tr.n = n;
    for (auto& f : faces) std::sort(f.begin(), f.end());
    std::sort(faces.begin(), faces.end());
    std::set<std::pair<int, int>> edge_set;
    for (const auto& f : faces) {
        edge_set.insert({f[0], f[1]});
        edge_set.insert({f[0], f[2]});
        edge_set.insert({f[1], f[2]});
    }
    tr.faces = std::move(faces);
    tr.edges.assign(edge_set.begin(), edge_set.end());
    tr.jitter_applied = attempt > 0;
    tr.jitter_attempts = attempt;
    return tr;
}

// ---- Bowyer-Watson ---------------------------------------------------------

struct BwTriangle {
    int a, b, c; // CCW
    bool alive = true;
};

Triangulation bowyer_watson(const std::vector<Pt>& input, int attempt) {
    const int n = static_cast<int>(input.size());
    std::vector<Pt> pts = input;

    // Enclosing super-triangle; its vertices use indices n, n+1, n+2.
    double cx = 0.0, cy = 0.0;
    for (const auto& p : pts) {
        cx += p.x;
        cy += p.y;
    }
    cx /= n;
    cy /= n;
    const double span = std::max(bbox_span(pts), 1e-9);
    pts.push_back({cx - 20.0 * span, cy - 10.0 * span});
    pts.push_back({cx + 20.0 * span, cy - 10.0 * span});
    pts.push_back({cx, cy + 20.0 * span});

    std::vector<BwTriangle> tris;
    tris.push_back({n, n + 1, n + 2});

    std::vector<int> bad;
    for (int p = 0; p < n; ++p) {
        bad.clear();
        for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
            if (!tris[t].alive) continue;
            const Sign s = incircle(pts[tris[t].a], pts[tris[t].b], pts[tris[t].c], pts[p]);
            if (s == Sign::Uncertain) throw Degeneracy{};
            if (s == Sign::Positive) bad.push_back(t);
        }
        if (bad.empty()) throw Degeneracy{}; // p must land in some circumcircle

        // Cavity boundary: directed edges of bad triangles whose reverse is
        // not itself a bad-triangle edge.
        std::set<std::pair<int, int>> directed;
        for (int t : bad) {
            directed.insert({tris[t].a, tris[t].b});
            directed.insert({tris[t].b, tris[t].c});
            directed.insert({tris[t].c, tris[t].a});
        }
        for (int t : bad) tris[t].alive = false;
        for (const auto& [u, v] : directed) {
            if (directed.count({v, u})) continue;
            if (orient2d_strict(pts[p], pts[u], pts[v]) != Sign::Positive) throw Degeneracy{};
            tris.push_back({p, u, v});
        }
    }

    std::vector<std::array<int, 3>> faces;
    for (const auto& t : tris) {
        if (!t.alive) continue;
        if (t.a >= n || t.b >= n || t.c >= n) continue;
        faces.push_back({t.a, t.b, t.c});
    }
    return assemble(n, std::move(faces), attempt);
}

// ---- Ear clipping ----------------------------------------------------------

bool point_in_closed_triangle(const Pt& p, const Pt& a, const Pt& b, const Pt& c) {
    // abc is CCW; boundary counts as inside (blocks the ear conservatively).
    return orient2d_strict(a, b, p) != Sign::Negative &&
           orient2d_strict(b, c, p) != Sign::Negative &&
           orient2d_strict(c, a, p) != Sign::Negative;
}

double twice_signed_area(const std::vector<int>& poly, const std::vector<Pt>& pts) {
    double area2 = 0.0;
    const int m = static_cast<int>(poly.size());
    for (int k = 0; k < m; ++k) {
        const Pt& p = pts[poly[k]];
        const Pt& q = pts[poly[(k + 1) % m]];
        area2 += p.x * q.y - q.x * p.y;
    }
    return area2;
}

void ear_clip(std::vector<int> poly, const std::vector<Pt>& pts,
              std::vector<std::array<int, 3>>& faces) {
    if (poly.size() < 3) return;
    if (twice_signed_area(poly, pts) < 0.0) std::reverse(poly.begin(), poly.end());

    while (poly.size() > 3) {
        const int m = static_cast<int>(poly.size());
        int clipped = -1;
        for (int k = 0; k < m && clipped < 0; ++k) {
            const int prev = poly[(k + m - 1) % m];
            const int cur = poly[k];
            const int next = poly[(k + 1) % m];
            if (orient2d_strict(pts[prev], pts[cur], pts[next]) != Sign::Positive) continue;
            bool blocked = false;
            for (int other : poly) {
                if (other == prev || other == cur || other == next) continue;
                if (point_in_closed_triangle(pts[other], pts[prev], pts[cur], pts[next])) {
                    blocked = true;
                    break;
                }
            }
            if (!blocked) {
                faces.push_back({prev, cur, next});
                clipped = k;
            }
        }
        if (clipped < 0) throw Degeneracy{}; // no ear: degenerate chain
        poly.erase(poly.begin() + clipped);
    }
    faces.push_back({poly[0], poly[1], poly[2]});
}

// CCW convex hull (Andrew monotone chain); collinear points are dropped.
std::vector<int> convex_hull(const std::vector<Pt>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return pts[i].x < pts[j].x || (pts[i].x == pts[j].x && pts[i].y < pts[j].y);
    });
    auto build = [&](auto begin, auto end) {
        std::vector<int> chain;
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   orient2d_strict(pts[chain[chain.size() - 2]], pts[chain.back()], pts[*it]) !=
                       Sign::Positive)
                chain.pop_back();
            chain.push_back(*it);
        }
        return chain;
    };
    auto lower = build(order.begin(), order.end());
    auto upper = build(order.rbegin(), order.rend());
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    return lower;
}

// ---- Tour polygon simplicity ----------------------------------------------

bool on_segment(const Pt& a, const Pt& b, const Pt& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_touch(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
    const Sign d1 = orient2d(a, b, c);
    const Sign d2 = orient2d(a, b, d);
    const Sign d3 = orient2d(c, d, a);
    const Sign d4 = orient2d(c, d, b);
    if (((d1 == Sign::Positive && d2 == Sign::Negative) ||
         (d1 == Sign::Negative && d2 == Sign::Positive)) &&
        ((d3 == Sign::Positive && d4 == Sign::Negative) ||
         (d3 == Sign::Negative && d4 == Sign::Positive)))
        return true;
    // Borderline orientations count as contact when the bounding boxes agree.
    if (d1 == Sign::Uncertain && on_segment(a, b, c)) return true;
    if (d2 == Sign::Uncertain && on_segment(a, b, d)) return true;
    if (d3 == Sign::Uncertain && on_segment(c, d, a)) return true;
    if (d4 == Sign::Uncertain && on_segment(c, d, b)) return true;
    return false;
}

bool polygon_is_simple(const std::vector<int>& poly, const std::vector<Pt>& pts) {
    const int m = static_cast<int>(poly.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            // Skip adjacent edges (they share an endpoint by construction).
            if (j == i + 1 || (i == 0 && j == m - 1)) continue;
            if (segments_touch(pts[poly[i]], pts[poly[(i + 1) % m]], pts[poly[j]],
                               pts[poly[(j + 1) % m]]))
                return false;
        }
    }
    return true;
}

Triangulation constrained_build(const std::vector<Pt>& pts, const Tour& t, int attempt) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> poly = t.seq();
    if (twice_signed_area(poly, pts) < 0.0) std::reverse(poly.begin(), poly.end());

    std::vector<std::array<int, 3>> faces;
    ear_clip(poly, pts, faces);

    const std::vector<int> hull = convex_hull(pts);
    std::vector<int> pos(static_cast<std::size_t>(n), -1);
    for (int k = 0; k < n; ++k) pos[poly[k]] = k;

    const int h = static_cast<int>(hull.size());
    for (int k = 0; k < h; ++k) {
        const int u = hull[k];
        const int w = hull[(k + 1) % h];
        // Pocket between hull edge (u, w) and the polygon chain u -> ... -> w.
        std::vector<int> chain;
        for (int at = pos[u];; at = (at + 1) % n) {
            chain.push_back(poly[at]);
            if (poly[at] == w) break;
            if (static_cast<int>(chain.size()) > n) throw Degeneracy{};
        }
        if (chain.size() > 2) ear_clip(chain, pts, faces);
    }
    return assemble(n, std::move(faces), attempt);
}

void validate_points(const PointSet& ps) {
    if (ps.size() < 3) throw Error("triangulation needs n >= 3");
    for (const auto& p : ps.points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw Error("point coordinates must be finite");
    for (std::size_t i = 0; i < ps.points.size(); ++i)
        for (std::size_t j = i + 1; j < ps.points.size(); ++j)
            if (ps.points[i] == ps.points[j]) throw Error("points must be pairwise distinct");
}

} // namespace

bool Triangulation::has_edge(int i, int j) const {
    const std::pair<int, int> e{std::min(i, j), std::max(i, j)};
    return std::binary_search(edges.begin(), edges.end(), e);
}

Triangulation delaunay_triangulate(const PointSet& ps) {
    validate_points(ps);
    const std::vector<Pt> original = to_pts(ps);
    ensure_not_all_collinear(original);
    for (int attempt = 0; attempt <= kJitterMaxAttempts; ++attempt) {
        const std::vector<Pt> pts = attempt == 0 ? original : jittered(original, attempt);
        try {
            return bowyer_watson(pts, attempt);
        } catch (const Degeneracy&) {
            // escalate jitter
        }
    }
    throw Error("triangulation degeneracy unresolved after jitter");
}

Triangulation triangulate_around_tour(const PointSet& ps, const Tour& t) {
    validate_points(ps);
    if (t.size() != ps.size()) throw Error("tour size does not match the point set");
    const std::vector<Pt> original = to_pts(ps);
    ensure_not_all_collinear(original);
    if (!polygon_is_simple(t.seq(), original)) throw Error("tour not simple");
    for (int attempt = 0; attempt <= kJitterMaxAttempts; ++attempt) {
        const std::vector<Pt> pts = attempt == 0 ? original : jittered(original, attempt);
        try {
            Triangulation tr = constrained_build(pts, t, attempt);
            for (int k = 0; k < t.size(); ++k) {
                if (!tr.has_edge(t.seq()[k], t.seq()[(k + 1) % t.size()]))
                    throw Error("constrained triangulation dropped a tour edge");
            }
            return tr;
        } catch (const Degeneracy&) {
            // escalate jitter
        }
    }
    throw Error("triangulation degeneracy unresolved after jitter");
}

EdgeMask restrict_to_edges(const CostMatrix& cm, const Triangulation& tr) {
    if (cm.size() != tr.n) throw Error("triangulation size does not match the instance");
    EdgeMask mask(cm.size());
    for (const auto& [i, j] : tr.edges) {
        mask.allow(i, j);
        mask.allow(j, i);
    }
    return mask;
}

bool containment_check(const Tour& t, const Triangulation& tr) {
    if (t.size() != tr.n) throw Error("tour size does not match the triangulation");
    for (int k = 0; k < t.size(); ++k)
        if (!tr.has_edge(t.seq()[k], t.seq()[(k + 1) % t.size()])) return false;
    return true;
}

AuditReport triangle_audit(const CostMatrix& cm, double tolerance) {
    const int n = cm.size();
    AuditReport report;
    report.tolerance = tolerance;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double direct = cm.at(i, j);
            const long long idirect = cm.exact() ? cm.iat(i, j) : 0;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                ++report.triples_scanned;
                const double via = cm.at(i, k) + cm.at(k, j);
                const double ratio =
                    via > 0.0 ? direct / via
                              : (direct > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
                report.worst_ratio = std::max(report.worst_ratio, ratio);
                const bool violated = cm.exact()
                                          ? idirect > cm.iat(i, k) + cm.iat(k, j)
                                          : direct > via * (1.0 + tolerance);
                if (violated) {
                    ++report.violations;
                    if (static_cast<int>(report.witnesses.size()) < kAuditWitnessCap)
                        report.witnesses.push_back({i, k, j});
                }
            }
        }
    }
    return report;
}

ContainmentBatch containment_batch(int n, std::uint64_t seed_base, int count, int threads) {
    ContainmentBatch batch;
    batch.n = n;
    batch.rows = detail::ordered_parallel_map<ContainmentRow>(
        static_cast<std::size_t>(count), threads, [&](std::size_t idx) {
            const std::uint64_t seed = seed_base + idx;
            const PointSet ps = gen_random_points(n, seed);
            const CostMatrix cm = points_to_costs(ps);
            const Solution sol = solve_exact(cm);
            const Triangulation tri = delaunay_triangulate(ps);
            ContainmentRow row;
            row.seed = seed;
            row.contained = containment_check(sol.opt_tours.front(), tri);
            row.opt_cost = sol.opt_cost.value;
            row.triangulation_edges = tri.edge_count();
            return row;
        });
    int contained = 0;
    for (const auto& r : batch.rows) contained += r.contained;
    batch.contained_fraction = count > 0 ? static_cast<double>(contained) / count : 0.0;
    return batch;
}

std::string triangulation_to_text(const Triangulation& tr) {
    std::string out = "tri " + std::to_string(tr.n) + " " + std::to_string(tr.edge_count()) + "\n";
    for (const auto& [i, j] : tr.edges)
        out += std::to_string(i + 1) + " " + std::to_string(j + 1) + "\n";
    return out;
}

Triangulation parse_triangulation(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    std::vector<std::pair<int, std::string>> lines;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        lines.push_back({number, line});
    }
    if (lines.empty()) throw ParseError(1, "empty triangulation file");
    std::istringstream header(lines[0].second);
    std::string tag;
    int n = 0, m = -1;
    if (!(header >> tag >> n >> m) || tag != "tri")
        throw ParseError(lines[0].first, "malformed header: expected 'tri <n> <edges>'");
    if (n < 3) throw ParseError(lines[0].first, "n must be at least 3");
    if (m < 0 || static_cast<int>(lines.size()) != m + 1)
        throw ParseError(lines[0].first, "edge count does not match the data lines");
    Triangulation tr;
    tr.n = n;
    for (int k = 0; k < m; ++k) {
        std::istringstream row(lines[k + 1].second);
        int i = 0, j = 0;
        if (!(row >> i >> j))
            throw ParseError(lines[k + 1].first, "expected an 'i j' edge line");
        if (i < 1 || j < 1 || i > n || j > n || i >= j)
            throw ParseError(lines[k + 1].first, "edge labels must satisfy 1 <= i < j <= n");
        tr.edges.push_back({i - 1, j - 1});
    }
    std::sort(tr.edges.begin(), tr.edges.end());
    if (std::adjacent_find(tr.edges.begin(), tr.edges.end()) != tr.edges.end())
        throw ParseError(lines[0].first, "duplicate edge");
    return tr;
}

std::string svg_render(const PointSet& ps, const Triangulation* tr, const Tour* tour) {
    const int n = ps.size();
    double x0 = ps.points[0].x, x1 = x0, y0 = ps.points[0].y, y1 = y0;
    for (const auto& p : ps.points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-9});
    const double margin = 0.05 * span;
    const double scale = 600.0 / (span + 2.0 * margin);
    auto sx = [&](double x) { return (x - x0 + margin) * scale + 20.0; };
    auto sy = [&](double y) { return 620.0 - ((y - y0 + margin) * scale); };

    std::string out =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 640\">\n"
        "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
    auto line = [&](int i, int j, const char* style) {
        out += "<line x1=\"" + double_to_string(sx(ps.points[i].x)) + "\" y1=\"" +
               double_to_string(sy(ps.points[i].y)) + "\" x2=\"" +
               double_to_string(sx(ps.points[j].x)) + "\" y2=\"" +
               double_to_string(sy(ps.points[j].y)) + "\" " + style + "/>\n";
    };
    if (tr) {
        for (const auto& [i, j] : tr->edges)
            line(i, j, "stroke=\"#999999\" stroke-width=\"1\"");
    }
    if (tour) {
        for (int k = 0; k < tour->size(); ++k)
            line(tour->seq()[k], tour->seq()[(k + 1) % tour->size()],
                 "stroke=\"#cc2222\" stroke-width=\"3\"");
    }
    for (int i = 0; i < n; ++i) {
        out += "<circle cx=\"" + double_to_string(sx(ps.points[i].x)) + "\" cy=\"" +
               double_to_string(sy(ps.points[i].y)) + "\" r=\"4\" fill=\"#222222\"/>\n";
        out += "<text x=\"" + double_to_string(sx(ps.points[i].x) + 6.0) + "\" y=\"" +
               double_to_string(sy(ps.points[i].y) - 6.0) + "\" font-size=\"12\">" +
               std::to_string(i + 1) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace tspgap
