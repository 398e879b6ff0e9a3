#include "l1rates/experiments.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "l1rates/csv.hpp"
#include "l1rates/numerics.hpp"

namespace l1rates {

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / file).string();
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

template <typename T>
T parse_field(const std::string& s, const std::string& path) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("malformed field '" + s + "' in '" + path + "'");
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const ExperimentConfig& config, const SolveOptions& options, std::ostream& out, std::ostream& err) {
    const ProblemFamily family = build_family(config.problem);
    const double delta = options.delta.value_or(config.problem.delta);
    if (!(delta >= 0.0)) {
        err << "solve: delta must be >= 0\n";
        return kExitConfigError;
    }
    const RegProblem problem =
        synthesize(family.op, family.x_true, delta, options.seed.value_or(config.problem.seed));

    SolveResult sol;
    double alpha = 0.0;
    if (options.alpha) {
        if (!(*options.alpha > 0.0)) {
            err << "solve: alpha must be positive\n";
            return kExitConfigError;
        }
        alpha = *options.alpha;
        sol = solve_diagonal(problem, alpha);
    } else {
        if (!(delta > 0.0)) {
            err << "solve: without --alpha the discrepancy principle needs delta > 0\n";
            return kExitConfigError;
        }
        try {
            ParameterChoice choice = alpha_strong_discrepancy(problem, config.param_choice);
            alpha = choice.alpha;
            sol = std::move(choice.solution);
        } catch (const DiscrepancyError& e) {
            err << "solve: discrepancy principle infeasible: " << e.what() << '\n';
            return kExitConfigError;
        }
        out << "bracket_lower=" << format_double(config.param_choice.tau1 * delta) << '\n'
            << "bracket_upper=" << format_double(config.param_choice.tau2 * delta) << '\n';
    }

    const double l1_error = l1_norm(sol.x - family.x_true.values()) + family.x_true.analytic_tail().value;
    out << "delta=" << format_double(delta) << '\n'
        << "alpha=" << format_double(alpha) << '\n'
        << "residual=" << format_double(sol.residual_norm) << '\n'
        << "l1_error=" << format_double(l1_error) << '\n'
        << "support_size=" << sol.support_size << '\n'
        << "certificate=" << format_double(sol.certificate) << '\n'
        << "objective=" << format_double(sol.objective) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// rate-sweep

void write_rate_csv(const RateReport& report, const std::string& path) {
    CsvWriter csv(path, kRateColumns);
    for (const RateRow& r : report.rows) {
        csv.cell(r.delta)
            .cell(static_cast<unsigned long long>(r.seed))
            .cell(r.alpha)
            .cell(r.residual)
            .cell(r.l1_error)
            .cell(r.phi_delta)
            .cell(r.ratio)
            .cell(r.status);
        csv.end_row();
    }
}

void write_rate_summary(const RateReport& report, const std::string& path) {
    CsvWriter csv(path, kRateSummaryColumns);
    csv.cell(report.slope)
        .cell(report.predicted)
        .cell(bool_text(report.pass))
        .cell(report.max_ratio)
        .cell(report.ratio_slope)
        .cell(bool_text(report.ratio_bounded));
    csv.end_row();
}

RateReport read_rate_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    RateReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
        if (f.size() != kRateColumns.size()) throw std::runtime_error("malformed row in '" + path + "'");
        RateRow r;
        r.delta = parse_field<double>(f[0], path);
        r.seed = parse_field<std::uint64_t>(f[1], path);
        r.alpha = parse_field<double>(f[2], path);
        r.residual = parse_field<double>(f[3], path);
        r.l1_error = parse_field<double>(f[4], path);
        r.phi_delta = parse_field<double>(f[5], path);
        r.ratio = parse_field<double>(f[6], path);
        r.status = f[7];
        report.rows.push_back(std::move(r));
    }
    return report;
}

int cmd_phi_grid(const ExperimentConfig& config, const std::string& out_dir, std::ostream& out, std::ostream&) {
    const ProblemFamily family = build_family(config.problem);
    const RateFunction rf(family.x_true, family.op);
    const auto ts = log_space(config.phi_grid.t_min, config.phi_grid.t_max, config.phi_grid.num_points);
    const std::string path = join_path(out_dir, "phi_grid.csv");
    CsvWriter csv(path, kPhiColumns);
    for (double t : ts) {
        const PhiValue p = rf.evaluate(t);
        csv.cell(t).cell(p.value).cell(static_cast<long long>(p.n));
        csv.end_row();
    }
    std::vector<double> phis;
    for (double t : ts) phis.push_back(rf(t));
    out << "phi(0)=" << format_double(rf(0.0)) << " slope=" << format_double(fit_loglog(ts, phis).slope)
        << " csv=" << path << '\n';
    return kExitOk;
}

int cmd_rate_sweep(const ExperimentConfig& config, const std::string& out_dir, std::ostream& out,
                   std::ostream& err) {
    const ProblemFamily family = build_family(config.problem);
    const auto deltas = log_space(config.sweep.delta_max, config.sweep.delta_min, config.sweep.num_points);
    const RateReport report = rate_bound_check(family, deltas, config.sweep.seeds, config.param_choice);

    write_rate_csv(report, join_path(out_dir, "rate_sweep.csv"));
    write_rate_summary(report, join_path(out_dir, "rate_summary.csv"));
    if (config.outputs.emit_phi_grid) {
        std::ostringstream sink;
        cmd_phi_grid(config, out_dir, sink, err);
    }

    std::size_t failed = 0;
    for (const auto& r : report.rows) failed += r.status != "ok";
    if (failed > 0) err << "rate-sweep: " << failed << " of " << report.rows.size() << " cells failed\n";

    out << "slope=" << format_double(report.slope) << " predicted=" << format_double(report.predicted)
        << " pass=" << bool_text(report.pass) << '\n'
        << "max_ratio=" << format_double(report.max_ratio) << " ratio_slope=" << format_double(report.ratio_slope)
        << " ratio_bounded=" << bool_text(report.ratio_bounded) << '\n';
    return report.pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// dist-fn

int cmd_dist_fn(const ExperimentConfig& config, std::vector<double> R_grid, const std::string& out_dir,
                std::ostream& out, std::ostream& err) {
    if (R_grid.empty()) R_grid = config.outputs.R_grid;
    if (R_grid.empty()) R_grid = log_space(0.1, 1000.0, 9);
    for (std::size_t i = 0; i < R_grid.size(); ++i) {
        if (!(R_grid[i] > 0.0) || (i > 0 && !(R_grid[i] > R_grid[i - 1]))) {
            err << "dist-fn: R grid must be positive and ascending\n";
            return kExitConfigError;
        }
    }
    std::vector<Index> Ns = config.outputs.dist_N;
    if (Ns.empty()) Ns.push_back(config.problem.N);

    const std::string path = join_path(out_dir, "dist_fn.csv");
    CsvWriter csv(path, kDistColumns);
    for (Index N : Ns) {
        ProblemFamily family = [&] {
            try {
                return build_family(config.problem, N);
            } catch (const std::invalid_argument& e) {
                throw ConfigError("dist-fn: N = " + std::to_string(N) + ": " + e.what());
            }
        }();
        const Subgradient xi = minimal_subgradient(family.x_true);
        double first = 0.0, last = 0.0;
        for (std::size_t i = 0; i < R_grid.size(); ++i) {
            const DistanceValue d = distance_function(family.op, xi, R_grid[i]);
            csv.cell(R_grid[i]).cell(d.value).cell(static_cast<long long>(N));
            csv.end_row();
            if (i == 0) first = d.value;
            last = d.value;
        }
        out << "N=" << N << " sigma_N=" << format_double(family.op.sigma()(N - 1))
            << " d(R_min)=" << format_double(first) << " d(R_max)=" << format_double(last) << '\n';
    }
    out << "csv=" << path << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// vi-check

void save_vi_sample(const std::string& path, const ViSample& sample) {
    nlohmann::json j;
    j["x"] = std::vector<double>(sample.x.data(), sample.x.data() + sample.x.size());
    j["lhs"] = sample.lhs;
    j["rhs"] = sample.rhs;
    j["margin"] = sample.margin;
    j["n_used"] = sample.n_used;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump() << '\n';
}

ViSample load_vi_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open replay file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        ViSample s;
        const auto x = j.at("x").get<std::vector<double>>();
        s.x = Eigen::Map<const Vector>(x.data(), static_cast<Index>(x.size()));
        s.lhs = j.at("lhs").get<double>();
        s.rhs = j.at("rhs").get<double>();
        s.margin = j.at("margin").get<double>();
        s.n_used = j.at("n_used").get<Index>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed replay file '" + path + "': " + e.what());
    }
}

int cmd_vi_check(const ExperimentConfig& config, const ViCheckOptions& options, const std::string& out_dir,
                 std::ostream& out, std::ostream& err) {
    const ProblemFamily family = build_family(config.problem);
    const RateFunction rf(family.x_true, family.op);

    if (options.replay) {
        const ViSample recorded = load_vi_sample(*options.replay);
        if (recorded.x.size() != family.x_true.size()) {
            err << "vi-check: replay sample has " << recorded.x.size() << " entries, problem has N = "
                << family.x_true.size() << '\n';
            return kExitConfigError;
        }
        const ViSample again = check_vi(family.op, family.x_true, rf, recorded.x);
        out << "margin=" << format_double(again.margin) << " recorded=" << format_double(recorded.margin) << '\n';
        return again.margin >= -kInequalitySlack ? kExitOk : kExitCheckFailed;
    }

    if (options.num_samples < 1) {
        err << "vi-check: need at least one sample\n";
        return kExitConfigError;
    }

    CandidateGenerator gen(family.x_true, options.seed);
    std::mt19937_64 n_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<Index> pick_n(0, family.x_true.size());

    ViSample worst;
    worst.margin = std::numeric_limits<double>::infinity();
    double worst_lemma = std::numeric_limits<double>::infinity();
    for (int i = 0; i < options.num_samples; ++i) {
        const Vector x = i == 0 ? family.x_true.values() : gen.next();
        ViSample s = check_vi(family.op, family.x_true, rf, x);
        worst_lemma = std::min(worst_lemma, check_lemma_sums(x, family.x_true, pick_n(n_rng)).margin());
        if (s.margin < worst.margin) worst = std::move(s);
    }

    const bool ok = worst.margin >= -kInequalitySlack && worst_lemma >= -kInequalitySlack;
    out << "samples=" << options.num_samples << " min_margin=" << format_double(worst.margin)
        << " min_lemma_margin=" << format_double(worst_lemma) << " pass=" << bool_text(ok) << '\n';

    std::optional<std::string> dump = options.save_worst;
    if (!ok && !dump) dump = join_path(out_dir, "vi_violation.json");
    if (dump) {
        save_vi_sample(*dump, worst);
        out << "worst_sample=" << *dump << '\n';
    }
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace l1rates
