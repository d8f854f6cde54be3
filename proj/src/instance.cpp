#include "tspgaplab/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "tspgaplab/rng.hpp"

namespace tspgap {

namespace {

constexpr long long kUniqueGapMaxN = 15;

bool is_integer_token(const std::string& tok) {
    std::size_t i = (tok[0] == '+' || tok[0] == '-') ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9') return false;
    }
    return true;
}

double parse_double_token(const std::string& tok, int line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line, "non-numeric entry '" + tok + "'");
    if (!std::isfinite(v)) throw ParseError(line, "entry '" + tok + "' is not finite");
    return v;
}

long long parse_int_token(const std::string& tok, int line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line, "integer entry '" + tok + "' out of range");
    return v;
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) toks.push_back(tok);
    return toks;
}

struct NumberedLine {
    int number;
    std::string text;
};

// Content lines with their 1-based positions; comments and blanks dropped,
// a leading "# provenance:" comment captured.
std::vector<NumberedLine> content_lines(const std::string& text, std::string* provenance) {
    std::vector<NumberedLine> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            static const std::string kTag = "# provenance:";
            if (provenance && provenance->empty() && line.compare(first, kTag.size(), kTag) == 0) {
                auto v = line.substr(first + kTag.size());
                const auto b = v.find_first_not_of(" \t");
                const auto e = v.find_last_not_of(" \t\r");
                *provenance = (b == std::string::npos) ? "" : v.substr(b, e - b + 1);
            }
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        out.push_back({number, line.substr(first, last - first + 1)});
    }
    return out;
}

} // namespace

bool cost_less(const Cost& a, const Cost& b) {
    if (a.exact && b.exact) return a.ivalue < b.ivalue;
    return a.value < b.value;
}

bool cost_equal(const Cost& a, const Cost& b) {
    if (a.exact && b.exact) return a.ivalue == b.ivalue;
    return a.value == b.value;
}

bool cost_close(const Cost& a, const Cost& b, double rel_tol) {
    if (a.exact && b.exact) return a.ivalue == b.ivalue;
    const double scale = std::max(std::abs(a.value), std::abs(b.value));
    return std::abs(a.value - b.value) <= rel_tol * scale;
}

std::string double_to_string(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string cost_to_string(const Cost& c) {
    return c.exact ? std::to_string(c.ivalue) : double_to_string(c.value);
}

CostMatrix::CostMatrix(int n, bool exact) : n_(n), exact_(exact) {
    if (n < 3) throw Error("cost matrix needs n >= 3");
    vals_.assign(static_cast<std::size_t>(n) * n, 0.0);
    if (exact) ivals_.assign(static_cast<std::size_t>(n) * n, 0);
}

CostMatrix CostMatrix::zeros(int n) { return CostMatrix(n, false); }
CostMatrix CostMatrix::integer_zeros(int n) { return CostMatrix(n, true); }

void CostMatrix::check_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw Error("vertex out of range");
    if (i == j) throw Error("diagonal entries are forbidden");
}

void CostMatrix::set(int i, int j, double v) {
    check_edge(i, j);
    if (exact_) throw Error("exact matrix entries must be set as integers");
    if (!std::isfinite(v)) throw Error("off-diagonal entries must be finite");
    vals_[static_cast<std::size_t>(i) * n_ + j] = v;
}

void CostMatrix::set_int(int i, int j, long long v) {
    check_edge(i, j);
    if (!exact_) throw Error("float matrix entries must be set as reals");
    const std::size_t idx = static_cast<std::size_t>(i) * n_ + j;
    ivals_[idx] = v;
    vals_[idx] = static_cast<double>(v);
}

bool CostMatrix::operator==(const CostMatrix& other) const {
    if (n_ != other.n_ || exact_ != other.exact_) return false;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            const std::size_t idx = static_cast<std::size_t>(i) * n_ + j;
            if (exact_) {
                if (ivals_[idx] != other.ivals_[idx]) return false;
            } else {
                if (vals_[idx] != other.vals_[idx]) return false;
            }
        }
    }
    return true;
}

InstanceFile InstanceFile::gap(CostMatrix cm, std::string provenance) {
    return {InstanceKind::Gap, std::move(cm), std::move(provenance)};
}

InstanceFile InstanceFile::e2d(PointSet ps, std::string provenance) {
    return {InstanceKind::E2d, std::move(ps), std::move(provenance)};
}

CostMatrix InstanceFile::costs() const {
    return kind == InstanceKind::Gap ? matrix() : points_to_costs(point_set());
}

InstanceFile parse_instance(const std::string& text) {
    std::string provenance;
    const auto lines = content_lines(text, &provenance);
    if (lines.empty()) throw ParseError(1, "empty instance: expected 'gap <n>' or 'e2d <n>' header");

    const auto header = split_tokens(lines[0].text);
    const int header_line = lines[0].number;
    if (header.size() != 2 || (header[0] != "gap" && header[0] != "e2d"))
        throw ParseError(header_line, "malformed header: expected 'gap <n>' or 'e2d <n>'");
    if (!is_integer_token(header[1]))
        throw ParseError(header_line, "malformed header: vertex count is not an integer");
    const long long n_ll = parse_int_token(header[1], header_line);
    if (n_ll < 3) throw ParseError(header_line, "n must be at least 3");
    if (n_ll > 10000) throw ParseError(header_line, "n is implausibly large");
    const int n = static_cast<int>(n_ll);

    if (static_cast<int>(lines.size()) != n + 1) {
        const int at = lines.size() > 1 ? lines.back().number : header_line;
        throw ParseError(at, "expected " + std::to_string(n) + " data lines, found " +
                                 std::to_string(lines.size() - 1));
    }

    if (header[0] == "gap") {
        // Classify first: the matrix is exact iff every off-diagonal token is
        // a plain integer.
        std::vector<std::vector<std::string>> rows(n);
        bool exact = true;
        for (int i = 0; i < n; ++i) {
            rows[i] = split_tokens(lines[i + 1].text);
            if (static_cast<int>(rows[i].size()) != n)
                throw ParseError(lines[i + 1].number,
                                 "expected " + std::to_string(n) + " entries, found " +
                                     std::to_string(rows[i].size()));
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (rows[i][j] == "inf")
                    throw ParseError(lines[i + 1].number, "off-diagonal entry must be finite");
                if (!is_integer_token(rows[i][j])) exact = false;
            }
        }
        CostMatrix cm = exact ? CostMatrix::integer_zeros(n) : CostMatrix::zeros(n);
        for (int i = 0; i < n; ++i) {
            const int line = lines[i + 1].number;
            for (int j = 0; j < n; ++j) {
                if (i == j) {
                    if (rows[i][j] != "inf")
                        throw ParseError(line, "diagonal must be inf");
                    continue;
                }
                if (exact)
                    cm.set_int(i, j, parse_int_token(rows[i][j], line));
                else
                    cm.set(i, j, parse_double_token(rows[i][j], line));
            }
        }
        return InstanceFile::gap(std::move(cm), std::move(provenance));
    }

    PointSet ps;
    ps.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int line = lines[i + 1].number;
        const auto toks = split_tokens(lines[i + 1].text);
        if (toks.size() != 2)
            throw ParseError(line, "expected '<x> <y>', found " + std::to_string(toks.size()) +
                                       " entries");
        const PointSet::Point p{parse_double_token(toks[0], line), parse_double_token(toks[1], line)};
        for (int k = 0; k < i; ++k) {
            if (ps.points[k] == p)
                throw ParseError(line, "duplicate point (same as point " + std::to_string(k + 1) + ")");
        }
        ps.points.push_back(p);
    }
    return InstanceFile::e2d(std::move(ps), std::move(provenance));
}

namespace {

// Float entries always carry a decimal marker so a reparse never reclassifies
// them as exact integers.
std::string float_entry(double v) {
    std::string s = double_to_string(v);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

} // namespace

std::string serialize_instance(const InstanceFile& inst) {
    std::string out;
    if (!inst.provenance.empty()) out += "# provenance: " + inst.provenance + "\n";
    if (inst.kind == InstanceKind::Gap) {
        const CostMatrix& cm = inst.matrix();
        const int n = cm.size();
        out += "gap " + std::to_string(n) + "\n";
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j) out += ' ';
                if (i == j)
                    out += "inf";
                else if (cm.exact())
                    out += std::to_string(cm.iat(i, j));
                else
                    out += float_entry(cm.at(i, j));
            }
            out += '\n';
        }
        return out;
    }
    const PointSet& ps = inst.point_set();
    out += "e2d " + std::to_string(ps.size()) + "\n";
    for (const auto& p : ps.points)
        out += double_to_string(p.x) + " " + double_to_string(p.y) + "\n";
    return out;
}

CostMatrix points_to_costs(const PointSet& ps) {
    const int n = ps.size();
    if (n < 3) throw Error("point set needs n >= 3");
    CostMatrix cm = CostMatrix::zeros(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = ps.points[i].x - ps.points[j].x;
            const double dy = ps.points[i].y - ps.points[j].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d <= 0.0)
                throw Error("duplicate points " + std::to_string(i + 1) + " and " +
                            std::to_string(j + 1) + " give zero distance");
            cm.set(i, j, d);
            cm.set(j, i, d);
        }
    }
    return cm;
}

CostMatrix gen_unique_gap(int n) {
    if (n < 3 || n > kUniqueGapMaxN)
        throw Error("gen_unique_gap needs 3 <= n <= " + std::to_string(kUniqueGapMaxN));
    CostMatrix cm = CostMatrix::integer_zeros(n);
    long long power = 1; // n^(i-1) for the 1-based row i
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const long long rank = (j < i) ? j + 1 : j; // column rank among off-diagonal entries
            cm.set_int(i, j, power * rank);
        }
        if (i + 1 < n) power *= n;
    }
    return cm;
}

CostMatrix gen_random_gap(int n, std::uint64_t seed, double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error("gen_random_gap needs finite lo < hi");
    CostMatrix cm = CostMatrix::zeros(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) cm.set(i, j, rng.real(lo, hi));
    return cm;
}

PointSet gen_random_points(int n, std::uint64_t seed, const Box& box) {
    if (n < 3) throw Error("gen_random_points needs n >= 3");
    if (!(box.x0 < box.x1) || !(box.y0 < box.y1) || !std::isfinite(box.x0) ||
        !std::isfinite(box.y0) || !std::isfinite(box.x1) || !std::isfinite(box.y1))
        throw Error("degenerate bounding box");
    PointSet ps;
    ps.points.reserve(static_cast<std::size_t>(n));
    Rng rng(seed);
    while (ps.size() < n) {
        const PointSet::Point p{rng.real(box.x0, box.x1), rng.real(box.y0, box.y1)};
        bool duplicate = false;
        for (const auto& q : ps.points) duplicate = duplicate || (q == p);
        if (!duplicate) ps.points.push_back(p);
    }
    return ps;
}

std::vector<int> parse_tour_labels(const std::string& text, int n) {
    const auto lines = content_lines(text, nullptr);
    if (lines.empty()) throw ParseError(1, "empty tour file");
    if (lines.size() > 1) throw ParseError(lines[1].number, "tour file must hold a single line");
    const auto toks = split_tokens(lines[0].text);
    if (static_cast<int>(toks.size()) != n)
        throw ParseError(lines[0].number, "expected " + std::to_string(n) + " labels, found " +
                                              std::to_string(toks.size()));
    std::vector<int> seq;
    seq.reserve(toks.size());
    for (const auto& tok : toks) {
        if (!is_integer_token(tok))
            throw ParseError(lines[0].number, "non-numeric label '" + tok + "'");
        const long long v = parse_int_token(tok, lines[0].number);
        if (v < 1 || v > n)
            throw ParseError(lines[0].number, "label " + tok + " out of range 1.." + std::to_string(n));
        seq.push_back(static_cast<int>(v - 1));
    }
    return seq;
}

std::string tour_labels_to_string(const std::vector<int>& zero_based_seq) {
    std::string out;
    for (std::size_t i = 0; i < zero_based_seq.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(zero_based_seq[i] + 1);
    }
    return out;
}

} // namespace tspgap
