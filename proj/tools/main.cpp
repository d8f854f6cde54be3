// tspgaplab command-line laboratory.
//
// Subcommands: gen, solve, reduce, scm, sample, compose, audit, sweep.
// Every stochastic run records its seed in the report; timing lines are the
// only report content allowed to differ between identical runs.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tspgaplab/compose.hpp"
#include "tspgaplab/exact.hpp"
#include "tspgaplab/instance.hpp"
#include "tspgaplab/reduction.hpp"
#include "tspgaplab/rng.hpp"
#include "tspgaplab/scm.hpp"
#include "tspgaplab/stochastic.hpp"

namespace {

using namespace tspgap;

// Exit codes: 0 ok, 2 usage, 3 missing file, 4 parse error, 5 guard, 6 I/O.
constexpr int kExitUsage = 2;
constexpr int kExitMissingFile = 3;
constexpr int kExitParse = 4;
constexpr int kExitGuard = 5;
constexpr int kExitIo = 6;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

/// Ordered key/value report with a trailing free-form block.
struct RunReport {
    std::string text;

    void kv(const std::string& key, const std::string& value) {
        text += key + ": " + value + "\n";
    }
    void raw(const std::string& block) { text += block; }
};

void emit(const RunReport& report, const std::string& out_path) {
    if (out_path.empty())
        std::cout << report.text;
    else
        write_file(out_path, report.text);
}

InstanceFile load_instance(const std::string& path) {
    return parse_instance(read_file(path));
}

EdgeMask load_mask(const std::string& path, const CostMatrix& cm) {
    return restrict_to_edges(cm, parse_triangulation(read_file(path)));
}

Tour load_tour(const std::string& path, int n) {
    return Tour(parse_tour_labels(read_file(path), n));
}

long long elapsed_ms(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

struct CommonFlags {
    int threads = 1;
    bool force = false;
    std::string out, csv;
};

// ---- gen -------------------------------------------------------------------

int cmd_gen(const std::string& kind, int n, std::uint64_t seed, double lo, double hi,
            const std::string& out_path) {
    auto build = [&]() -> InstanceFile {
        if (kind == "unique")
            return InstanceFile::gap(gen_unique_gap(n), "gen_unique_gap n=" + std::to_string(n));
        if (kind == "random-gap")
            return InstanceFile::gap(gen_random_gap(n, seed, lo, hi),
                                     "gen_random_gap n=" + std::to_string(n) +
                                         " seed=" + std::to_string(seed) + " lo=" +
                                         double_to_string(lo) + " hi=" + double_to_string(hi));
        if (kind == "random-e2d")
            return InstanceFile::e2d(gen_random_points(n, seed, Box{lo, lo, hi, hi}),
                                     "gen_random_points n=" + std::to_string(n) +
                                         " seed=" + std::to_string(seed) + " box=[" +
                                         double_to_string(lo) + "," + double_to_string(hi) +
                                         "]^2");
        throw Error("unknown --kind '" + kind + "'");
    };
    const std::string text = serialize_instance(build());
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return 0;
}

// ---- solve -----------------------------------------------------------------

int cmd_solve(const std::string& instance_path, const std::string& mask_path,
              const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const InstanceFile inst = load_instance(instance_path);
    const CostMatrix cm = inst.costs();

    SolveOptions opts;
    opts.threads = flags.threads;
    opts.force = flags.force;
    std::optional<EdgeMask> mask;
    if (!mask_path.empty()) {
        mask = load_mask(mask_path, cm);
        opts.mask = &*mask;
    }
    const Solution sol = solve_exact(cm, opts);

    RunReport report;
    report.kv("command", "solve");
    report.kv("instance", instance_path);
    if (!inst.provenance.empty()) report.kv("provenance", inst.provenance);
    if (!mask_path.empty()) report.kv("mask", mask_path);
    report.kv("n", std::to_string(cm.size()));
    report.raw(solution_to_text(sol));
    report.kv("time_ms", std::to_string(elapsed_ms(start)));
    emit(report, flags.out);

    if (!flags.csv.empty()) {
        std::string csv = "tour,cost\n";
        for (const auto& t : sol.opt_tours)
            csv += tour_labels_to_string(t.seq()) + "," + cost_to_string(sol.opt_cost) + "\n";
        write_file(flags.csv, csv);
    }
    return 0;
}

// ---- reduce ----------------------------------------------------------------

int cmd_reduce(const std::string& instance_path, const std::string& method,
               const std::string& tour_path, const std::string& svg_path,
               const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const InstanceFile inst = load_instance(instance_path);
    if (inst.kind != InstanceKind::E2d)
        throw Error("reduce needs an e2d instance (triangulations live in the plane)");
    const PointSet& ps = inst.point_set();
    const CostMatrix cm = points_to_costs(ps);

    std::optional<Tour> tour;
    if (!tour_path.empty()) {
        tour = load_tour(tour_path, ps.size());
    } else if (method == "constrained") {
        SolveOptions opts;
        opts.threads = flags.threads;
        opts.force = flags.force;
        tour = solve_exact(cm, opts).opt_tours.front();
    }

    Triangulation tr;
    if (method == "delaunay")
        tr = delaunay_triangulate(ps);
    else if (method == "constrained")
        tr = triangulate_around_tour(ps, *tour);
    else
        throw Error("unknown --method '" + method + "'");

    RunReport report;
    report.kv("command", "reduce");
    report.kv("instance", instance_path);
    report.kv("method", method);
    report.kv("n", std::to_string(tr.n));
    report.kv("edges", std::to_string(tr.edge_count()));
    report.kv("jitter_applied", tr.jitter_applied ? "true" : "false");
    if (tr.jitter_applied) report.kv("jitter_attempts", std::to_string(tr.jitter_attempts));
    if (tour) report.kv("tour_contained", containment_check(*tour, tr) ? "true" : "false");
    report.kv("time_ms", std::to_string(elapsed_ms(start)));

    if (!flags.out.empty()) write_file(flags.out, triangulation_to_text(tr));
    if (!svg_path.empty()) write_file(svg_path, svg_render(ps, &tr, tour ? &*tour : nullptr));
    std::cout << report.text;
    return 0;
}

// ---- scm -------------------------------------------------------------------

int cmd_scm(const std::string& instance_path, const std::string& mask_path,
            const std::string& tour_path, double eps, const std::string& ppm_path,
            const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const InstanceFile inst = load_instance(instance_path);
    const CostMatrix cm = inst.costs();

    std::optional<EdgeMask> mask;
    if (!mask_path.empty()) mask = load_mask(mask_path, cm);
    const SortedCostMatrix scm = build_scm(cm, mask ? &*mask : nullptr);

    SolveOptions opts;
    opts.threads = flags.threads;
    opts.force = flags.force;
    const Solution sol = solve_exact(cm, opts);
    const Tour tour = tour_path.empty() ? sol.opt_tours.front() : load_tour(tour_path, cm.size());
    const Frontier frontier = compute_frontier(scm, tour);
    const std::vector<Tour> near = near_optimal_set(cm, sol, eps, flags.force);

    const ScmRender render = render_scm(scm, &frontier, &near);
    if (!ppm_path.empty()) write_file(ppm_path, render.ppm);
    if (!flags.csv.empty()) write_file(flags.csv, render.csv);

    RunReport report;
    report.kv("command", "scm");
    report.kv("instance", instance_path);
    if (!mask_path.empty()) report.kv("mask", mask_path);
    report.kv("n", std::to_string(cm.size()));
    report.kv("eps", double_to_string(eps));
    report.kv("tour", tour_labels_to_string(tour.seq()));
    std::string ranks;
    for (std::size_t v = 0; v < frontier.ranks.size(); ++v) {
        if (v) ranks += ' ';
        ranks += std::to_string(frontier.ranks[v]);
    }
    report.kv("frontier_ranks", ranks);
    report.kv("elongation", double_to_string(frontier.elongation));
    report.kv("mean_rank", double_to_string(frontier.mean_rank));
    report.kv("near_tours", std::to_string(near.size()));
    report.kv("nonbackground_columns", std::to_string(ppm_nonbackground_columns(render.ppm)));
    report.kv("time_ms", std::to_string(elapsed_ms(start)));
    emit(report, flags.out);
    return 0;
}

// ---- sample ----------------------------------------------------------------

int cmd_sample(const std::string& instance_path, int n_flag, long long k, std::uint64_t seed,
               const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.kv("command", "sample");
    report.kv("seed", std::to_string(seed));
    report.kv("k", std::to_string(k));

    int n = n_flag;
    if (!instance_path.empty()) {
        const InstanceFile inst = load_instance(instance_path);
        const CostMatrix cm = inst.costs();
        n = cm.size();
        report.kv("instance", instance_path);
        report.kv("n", std::to_string(n));
        const HitEstimate est = estimate_hit_rate(cm, k, seed, flags.threads, flags.force);
        report.raw(hit_estimate_to_text(est));
        if (!flags.csv.empty()) {
            // Per-tour sample counts, feasible only at enumerable sizes.
            const auto tours = sample_cycles(n, k, seed);
            std::map<std::vector<int>, long long> counts;
            for (const auto& t : tours) ++counts[t.seq()];
            std::string csv = "tour,count\n";
            for (const auto& [seq, count] : counts)
                csv += tour_labels_to_string(seq) + "," + std::to_string(count) + "\n";
            write_file(flags.csv, csv);
        }
    } else {
        if (n < 3) throw Error("sample without an instance needs --n");
        report.kv("n", std::to_string(n));
        const auto tours = sample_cycles(n, k, seed);
        std::set<std::vector<int>> distinct;
        for (const auto& t : tours) distinct.insert(t.seq());
        report.kv("distinct_tours_seen", std::to_string(distinct.size()));
        report.kv("cycle_count", std::to_string(cycle_count(n)));
    }
    if (n >= 4 && n <= 20) report.raw(bounds_to_text(bounds_report(n)));
    report.kv("time_ms", std::to_string(elapsed_ms(start)));
    emit(report, flags.out);
    return 0;
}

// ---- compose ---------------------------------------------------------------

int cmd_compose(const std::string& a_path, const std::string& b_path, std::uint64_t seed,
                double lo, double hi, const CommonFlags& flags) {
    const InstanceFile a = load_instance(a_path);
    const InstanceFile b = load_instance(b_path);
    if (b.kind != InstanceKind::Gap)
        throw Error("compose expects the second block to be a gap instance");
    const Composition comp = compose_instances(a.costs(), b.matrix(), seed, lo, hi);
    InstanceFile out = InstanceFile::gap(
        comp.cm, "compose a=" + a_path + " n=" + std::to_string(comp.block_a_size) +
                     " b=" + b_path + " m=" + std::to_string(comp.block_b_size) +
                     " seed=" + std::to_string(seed) + " lo=" + double_to_string(lo) +
                     " hi=" + double_to_string(hi));
    const std::string text = serialize_instance(out);
    if (flags.out.empty())
        std::cout << text;
    else
        write_file(flags.out, text);
    return 0;
}

// ---- audit -----------------------------------------------------------------

int cmd_audit(const std::string& instance_path, const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const InstanceFile inst = load_instance(instance_path);
    const CostMatrix cm = inst.costs();
    const AuditReport audit = triangle_audit(cm);

    RunReport report;
    report.kv("command", "audit");
    report.kv("instance", instance_path);
    report.kv("n", std::to_string(cm.size()));
    report.kv("triples_scanned", std::to_string(audit.triples_scanned));
    report.kv("violations", std::to_string(audit.violations));
    report.kv("worst_ratio", double_to_string(audit.worst_ratio));
    report.kv("tolerance", double_to_string(audit.tolerance));
    report.kv("time_ms", std::to_string(elapsed_ms(start)));
    emit(report, flags.out);

    if (!flags.csv.empty()) {
        std::string csv = "i,k,j,c_ij,c_ik,c_kj\n";
        for (const auto& w : audit.witnesses) {
            csv += std::to_string(w[0] + 1) + "," + std::to_string(w[1] + 1) + "," +
                   std::to_string(w[2] + 1) + "," + cost_to_string(cm.cost(w[0], w[2])) + "," +
                   cost_to_string(cm.cost(w[0], w[1])) + "," + cost_to_string(cm.cost(w[1], w[2])) +
                   "\n";
        }
        write_file(flags.csv, csv);
    }
    return 0;
}

// ---- sweep -----------------------------------------------------------------

int cmd_sweep_containment(int n, int k, std::uint64_t seed, const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const ContainmentBatch batch = containment_batch(n, seed, k, flags.threads);
    RunReport report;
    report.kv("command", "sweep containment");
    report.kv("n", std::to_string(n));
    report.kv("seeds", std::to_string(k));
    report.kv("seed_base", std::to_string(seed));
    report.kv("contained_fraction", double_to_string(batch.contained_fraction));
    report.kv("time_ms", std::to_string(elapsed_ms(start)));
    emit(report, flags.out);
    if (!flags.csv.empty()) {
        std::string csv = "seed,contained,opt_cost,triangulation_edges\n";
        for (const auto& row : batch.rows)
            csv += std::to_string(row.seed) + "," + (row.contained ? "true" : "false") + "," +
                   double_to_string(row.opt_cost) + "," + std::to_string(row.triangulation_edges) +
                   "\n";
        write_file(flags.csv, csv);
    }
    return 0;
}

int cmd_sweep_preservation(int n, int m, int k, std::uint64_t seed, double lo,
                           std::optional<double> hi, const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    // Blocks derive from the base seed; the per-composition fill seeds are
    // seed, seed+1, ..., seed+k-1.
    const PointSet block_a = gen_random_points(n, derive_seed(seed, 0));
    const CostMatrix a = points_to_costs(block_a);
    const CostMatrix b = gen_random_gap(m, derive_seed(seed, 1), 0.0, 1.0);

    double max_block_cost = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) max_block_cost = std::max(max_block_cost, a.at(i, j));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) max_block_cost = std::max(max_block_cost, b.at(i, j));
    const double fill_hi = hi.value_or(max_block_cost);

    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) seeds[static_cast<std::size_t>(i)] = seed + static_cast<std::uint64_t>(i);
    const PreservationSummary summary = preservation_search(a, b, seeds, lo, fill_hi, flags.threads);

    RunReport report;
    report.kv("command", "sweep preservation");
    report.kv("n", std::to_string(n));
    report.kv("m", std::to_string(m));
    report.kv("seeds", std::to_string(k));
    report.kv("seed_base", std::to_string(seed));
    report.kv("fill_lo", double_to_string(lo));
    report.kv("fill_hi", double_to_string(fill_hi));
    report.kv("preserved_fraction", double_to_string(summary.preserved_fraction));
    report.kv("first_nonpreserved_seed",
              summary.first_nonpreserved_seed ? std::to_string(*summary.first_nonpreserved_seed)
                                              : "none");
    report.kv("first_violating_seed",
              summary.first_violating_seed ? std::to_string(*summary.first_violating_seed)
                                           : "none");
    report.kv("time_ms", std::to_string(elapsed_ms(start)));
    emit(report, flags.out);
    if (!flags.csv.empty()) write_file(flags.csv, preservation_csv(summary));
    return 0;
}

int cmd_sweep_monotonicity(int n, int k, std::uint64_t seed, long long trials,
                           const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    int with_violation = 0;
    std::optional<std::uint64_t> first_seed;
    std::string first_witness;
    std::string csv = "seed,pairs_checked,violations\n";
    for (int i = 0; i < k; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        const CostMatrix cm = gen_random_gap(n, s, 0.0, 1.0);
        const MonotonicityReport rep = monotonicity_check(cm, trials, derive_seed(s, 2));
        if (rep.violations > 0) {
            ++with_violation;
            if (!first_seed) {
                first_seed = s;
                first_witness =
                    "(" + tour_labels_to_string(rep.counterexample->first.seq()) + ") vs (" +
                    tour_labels_to_string(rep.counterexample->second.seq()) + ")";
            }
        }
        csv += std::to_string(s) + "," + std::to_string(rep.pairs_checked) + "," +
               std::to_string(rep.violations) + "\n";
    }
    RunReport report;
    report.kv("command", "sweep monotonicity");
    report.kv("n", std::to_string(n));
    report.kv("instances", std::to_string(k));
    report.kv("seed_base", std::to_string(seed));
    report.kv("instances_with_violation", std::to_string(with_violation));
    report.kv("first_violating_seed", first_seed ? std::to_string(*first_seed) : "none");
    if (!first_witness.empty()) report.kv("first_witness", first_witness);
    report.kv("time_ms", std::to_string(elapsed_ms(start)));
    emit(report, flags.out);
    if (!flags.csv.empty()) write_file(flags.csv, csv);
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"tspgaplab: exact enumeration laboratory for GAP and Euclidean TSP instances"};
    app.require_subcommand(1);
    argv = app.ensure_utf8(argv);

    CommonFlags flags;
    std::string instance_path, mask_path, tour_path, svg_path, ppm_path, kind = "unique";
    std::string method = "delaunay", mode;
    int n = 0, m = 4, k = 0;
    std::uint64_t seed = 1;
    double lo = 0.0, hi = 1.0, eps = kNearOptimalEpsilon;
    long long samples = 100000, trials = 10000;
    std::optional<double> hi_opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_flag("--force", flags.force, "override the enumeration guard");
        cmd->add_option("--out", flags.out, "report/output file (default stdout)");
        cmd->add_option("--csv", flags.csv, "CSV twin output file");
    };

    auto* gen = app.add_subcommand("gen", "generate an instance");
    gen->add_option("--kind", kind, "unique | random-gap | random-e2d");
    gen->add_option("--n", n, "vertex count")->required();
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--lo", lo, "cost range / box low end");
    gen->add_option("--hi", hi, "cost range / box high end");
    gen->add_option("--out", flags.out, "output file (default stdout)");

    auto* solve = app.add_subcommand("solve", "exhaustive exact solve");
    solve->add_option("instance", instance_path, "instance file")->required();
    solve->add_option("--mask", mask_path, "triangulation file restricting the edges");
    add_common(solve);

    auto* reduce = app.add_subcommand("reduce", "triangulate and reduce an e2d instance");
    reduce->add_option("instance", instance_path, "instance file")->required();
    reduce->add_option("--method", method, "delaunay | constrained");
    reduce->add_option("--tour", tour_path, "tour file (constrained method; default: optimum)");
    reduce->add_option("--svg", svg_path, "SVG figure output");
    add_common(reduce);

    auto* scm = app.add_subcommand("scm", "sorted cost matrix, frontier, and figure");
    scm->add_option("instance", instance_path, "instance file")->required();
    scm->add_option("--mask", mask_path, "triangulation file restricting the edges");
    scm->add_option("--tour", tour_path, "tour file (default: optimum)");
    scm->add_option("--eps", eps, "near-optimal relative threshold");
    scm->add_option("--ppm", ppm_path, "pixmap output file");
    add_common(scm);

    auto* sample = app.add_subcommand("sample", "uniform random-search experiment");
    sample->add_option("instance", instance_path, "instance file (optional)");
    sample->add_option("--n", n, "vertex count when no instance is given");
    sample->add_option("--k", samples, "number of samples");
    sample->add_option("--seed", seed, "sampling seed");
    add_common(sample);

    auto* compose = app.add_subcommand("compose", "embed two instances with random cross edges");
    compose->add_option("block_a", instance_path, "first block (gap or e2d)")->required();
    compose->add_option("block_b", mask_path, "second block (gap)")->required();
    compose->add_option("--seed", seed, "cross-edge seed");
    compose->add_option("--lo", lo, "cross-edge range low end");
    compose->add_option("--hi", hi, "cross-edge range high end");
    compose->add_option("--out", flags.out, "output file (default stdout)");

    auto* audit = app.add_subcommand("audit", "triangle inequality audit");
    audit->add_option("instance", instance_path, "instance file")->required();
    add_common(audit);

    auto* sweep = app.add_subcommand("sweep", "batch experiments over seeds");
    sweep->add_option("mode", mode, "containment | preservation | monotonicity")->required();
    sweep->add_option("--n", n, "vertex count (block A size for preservation)");
    sweep->add_option("--m", m, "block B size (preservation)");
    sweep->add_option("--k", k, "number of seeds / instances")->required();
    sweep->add_option("--seed", seed, "base seed");
    sweep->add_option("--lo", lo, "cross-edge range low end (preservation)");
    sweep->add_option("--hi", hi_opt, "cross-edge range high end (default: max block cost)");
    sweep->add_option("--trials", trials, "sampled pairs per instance (monotonicity, n > 7)");
    add_common(sweep);

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) return cmd_gen(kind, n, seed, lo, hi, flags.out);
    if (solve->parsed()) return cmd_solve(instance_path, mask_path, flags);
    if (reduce->parsed()) return cmd_reduce(instance_path, method, tour_path, svg_path, flags);
    if (scm->parsed()) return cmd_scm(instance_path, mask_path, tour_path, eps, ppm_path, flags);
    if (sample->parsed()) return cmd_sample(instance_path, n, samples, seed, flags);
    if (compose->parsed()) return cmd_compose(instance_path, mask_path, seed, lo, hi, flags);
    if (audit->parsed()) return cmd_audit(instance_path, flags);
    if (sweep->parsed()) {
        if (mode == "containment") {
            if (n < 3) throw Error("sweep containment needs --n");
            return cmd_sweep_containment(n, k, seed, flags);
        }
        if (mode == "preservation") {
            if (n < 3) throw Error("sweep preservation needs --n");
            return cmd_sweep_preservation(n, m, k, seed, lo, hi_opt, flags);
        }
        if (mode == "monotonicity") {
            if (n < 3) throw Error("sweep monotonicity needs --n");
            return cmd_sweep_monotonicity(n, k, seed, trials, flags);
        }
        throw Error("unknown sweep mode '" + mode + "'");
    }
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const tspgap::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const tspgap::GuardError& e) {
        std::cerr << "guard exceeded: " << e.what() << "\n";
        return kExitGuard;
    } catch (const tspgap::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return std::string_view(e.what()).starts_with("file not found") ? kExitMissingFile
                                                                        : kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
