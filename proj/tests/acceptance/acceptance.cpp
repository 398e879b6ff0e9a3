// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "l1rates/numerics.hpp"
#include "l1rates/param_choice.hpp"
#include "l1rates/rates.hpp"
#include "l1rates/solver.hpp"
#include "l1rates/vi_verify.hpp"

using namespace l1rates;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// 1. iterative solver vs closed form on random diagonal instances
Outcome solver_equivalence() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    double worst_obj = 0.0, worst_coef = 0.0;
    bool all_converged = true;
    const auto start = Clock::now();
    for (int i = 0; i < 100; ++i) {
        const Index N = 1 + static_cast<Index>(u(rng) * 50);
        std::vector<double> s(N);
        for (auto& v : s) v = 0.05 + 0.95 * u(rng);
        std::sort(s.begin(), s.end(), std::greater<>());
        const DiagonalOperator diag(Eigen::Map<const Vector>(s.data(), N));
        Vector y(N);
        for (Index k = 0; k < N; ++k) y(k) = g(rng);
        const double alpha = null_solution_threshold(diag, y) * std::pow(10.0, -3.0 * u(rng));
        const SolveResult exact = solve_diagonal(diag, y, alpha);
        const SolveResult iter = solve_general(GeneralOperator(diag.to_dense()), y, alpha, {1e-13, 200000});
        all_converged = all_converged && iter.converged;
        worst_obj = std::max(worst_obj, std::abs(iter.objective - exact.objective));
        worst_coef = std::max(worst_coef, (iter.x - exact.x).cwiseAbs().maxCoeff());
    }
    const double elapsed = seconds_since(start);
    Outcome o;
    o.pass = all_converged && worst_obj <= 1e-8 && worst_coef <= 1e-6 && elapsed < 10.0;
    o.detail = fmt("max |dF|=%.3g", worst_obj) + fmt(" max |dx|=%.3g", worst_coef) + fmt(" time=%.2fs", elapsed);
    return o;
}

// 2. KKT certificate of the closed form
Outcome kkt_certificate() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    double worst = 0.0;
    int count = 0;
    for (int i = 0; i < 500; ++i) {
        const Index N = 1 + static_cast<Index>(u(rng) * 2000);
        const auto op = DiagonalOperator::power_law(N, {0.5 + 2.0 * u(rng), 0.1 + 2.0 * u(rng)});
        const auto x = DecaySequence::power_law(N, {1.1 + 3.0 * u(rng), 0.1 + 2.0 * u(rng)}, {1, -1, 1});
        const RegProblem p = synthesize(op, x, std::pow(10.0, -8.0 + 7.0 * u(rng)), static_cast<std::uint64_t>(i));
        for (int j = 0; j < 4; ++j) {
            const double alpha = null_solution_threshold(op, p.y_noisy) * std::pow(10.0, -10.0 * u(rng) + 0.5);
            const SolveResult r = solve_diagonal(op, p.y_noisy, alpha);
            worst = std::max({worst, r.certificate, optimality_residual(op, p.y_noisy, alpha, r.x)});
            ++count;
        }
    }
    return {worst <= 1e-12, std::to_string(count) + " solutions" + fmt(" max certificate=%.3g", worst)};
}

// 3. strong discrepancy bracket, re-solved
Outcome discrepancy_bracket() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int ok = 0, attempted = 0, infeasible = 0;
    while (attempted < 100) {
        const Index N = 10 + static_cast<Index>(u(rng) * 5000);
        const auto op = DiagonalOperator::power_law(N, {0.5 + 1.5 * u(rng), 0.5 + u(rng)});
        const bool sparse = u(rng) < 0.3;
        const DecaySequence x = sparse ? DecaySequence::sparse(N, {{1, 1.0}, {2, -0.5}, {std::min<Index>(N, 7), 0.3}})
                                       : DecaySequence::power_law(N, {1.2 + 2.0 * u(rng), 0.5 + u(rng)});
        const double delta = std::pow(10.0, -6.0 + 5.0 * u(rng));
        const RegProblem p = synthesize(op, x, delta, rng());
        DiscrepancyConfig c;
        c.tau1 = 1.0 + 0.5 * u(rng);
        c.tau2 = c.tau1 + 0.05 + u(rng);
        // Feasible window: the residual range [0, ||y_delta||] must reach tau1 delta.
        if (p.y_noisy.norm() < c.tau1 * delta) {
            ++infeasible;
            continue;
        }
        ++attempted;
        try {
            const ParameterChoice choice = alpha_strong_discrepancy(p, c);
            const double res = solve_diagonal(p, choice.alpha).residual_norm;
            if (res >= c.tau1 * delta && res <= c.tau2 * delta) ++ok;
        } catch (const DiscrepancyError&) {
        }
    }
    return {ok == 100, std::to_string(ok) + "/100 in [tau1 delta, tau2 delta] (" + std::to_string(infeasible) +
                           " infeasible draws skipped)"};
}

// 4. VI and lemma samples
Outcome vi_suite() {
    struct Family {
        DiagonalOperator op;
        DecaySequence x;
    };
    const std::vector<Family> families{
        {DiagonalOperator::power_law(1000, {1.0, 1.0}), DecaySequence::power_law(1000, {2.0, 1.0})},
        {DiagonalOperator::power_law(1000, {2.0, 1.0}), DecaySequence::power_law(1000, {3.0, 1.0}, {1, -1})},
        {DiagonalOperator::power_law(500, {1.5, 0.5}), DecaySequence::power_law(500, {1.3, 2.0}, {1, 1, -1})},
        {DiagonalOperator::power_law(1000, {1.0, 1.0}), DecaySequence::sparse(1000, {{1, 1.0}, {2, -0.5}, {3, 0.25}})},
    };
    double vi_min = INFINITY, lemma_min = INFINITY;
    int vi_count = 0, lemma_count = 0;
    std::mt19937_64 rng(404);
    for (std::size_t f = 0; f < families.size(); ++f) {
        const Family& fam = families[f];
        const RateFunction rf(fam.x, fam.op);
        CandidateGenerator gen(fam.x, 4040 + f);
        std::uniform_int_distribution<Index> pick(0, fam.x.size());
        for (int i = 0; i < 2500; ++i) {
            vi_min = std::min(vi_min, check_vi(fam.op, fam.x, rf, gen.next()).margin);
            ++vi_count;
        }
        for (int i = 0; i < 25000; ++i) {
            lemma_min = std::min(lemma_min, check_lemma_sums(gen.next(), fam.x, pick(rng)).margin());
            ++lemma_count;
        }
    }
    return {vi_min >= -kInequalitySlack && lemma_min >= -kInequalitySlack,
            std::to_string(vi_count) + " VI samples" + fmt(" min margin=%.3g, ", vi_min) +
                std::to_string(lemma_count) + " lemma samples" + fmt(" min margin=%.3g", lemma_min)};
}

// 5. phi as an index function
Outcome phi_suite() {
    const Index N = 10000;
    const auto op = DiagonalOperator::power_law(N, {1.0, 1.0});
    const auto op2 = DiagonalOperator::power_law(N, {2.0, 1.0});
    struct Family {
        std::string name;
        RateFunction rf;
        std::optional<double> exponent;
        double mu_hat = 0.0;
    };
    const std::vector<Family> families{
        {"sparse", RateFunction(DecaySequence::sparse(N, {{1, 1.0}, {2, -0.5}, {3, 0.25}}), op), std::nullopt},
        {"mu2nu1", RateFunction(DecaySequence::power_law(N, {2.0, 1.0}), op), holder_exponent(2.0, 1.0), 2.0},
        {"mu3nu2", RateFunction(DecaySequence::power_law(N, {3.0, 2.0}), op2), holder_exponent(3.0, 2.0), 3.0},
    };
    const auto ts = log_space(1e-8, 1.0, 200);
    bool pass = true;
    std::string detail;
    for (const Family& fam : families) {
        std::vector<PhiValue> ph = phi_grid(fam.rf, ts);
        bool concave = true, increasing = true;
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            if (!(ph[i].value < ph[i + 1].value)) increasing = false;
            if (i + 2 < ts.size()) {
                const double interp =
                    ph[i].value + (ph[i + 2].value - ph[i].value) * (ts[i + 1] - ts[i]) / (ts[i + 2] - ts[i]);
                if (ph[i + 1].value < interp - 1e-12) concave = false;
            }
        }
        // phi(t) - phi(0) <= 2 t G(N) -> 0, and phi(0) is twice the coefficient mass beyond N:
        // zero when sparse, shrinking with N otherwise.
        const double floor = fam.rf(0.0);
        const double G = fam.rf.growths()(N);
        bool vanishes = floor == 2.0 * fam.rf.tails()(N);
        double last = INFINITY;
        for (double t : {1e-8, 1e-10, 1e-12, 1e-14, 1e-16}) {
            const double excess = fam.rf(t) - floor;
            vanishes = vanishes && excess >= 0.0 && excess <= last && excess <= 2.0 * t * G * (1 + 1e-12);
            last = excess;
        }
        if (fam.exponent) {
            double prev = INFINITY;
            for (Index n : {100, 1000, 10000, 100000}) {
                const double f = 2.0 * tail_sum(DecaySequence::power_law(n, {fam.mu_hat, 1.0}), n);
                vanishes = vanishes && f < prev;
                prev = f;
            }
            vanishes = vanishes && prev < 1e-3;
        } else {
            vanishes = vanishes && floor == 0.0;
        }

        double slope_err = 0.0;
        if (fam.exponent) {
            std::vector<double> t_fit, p_fit;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (ts[i] > 1e-4) break;
                t_fit.push_back(ts[i]);
                p_fit.push_back(ph[i].value);
            }
            slope_err = std::abs(fit_loglog(t_fit, p_fit).slope - *fam.exponent);
        }
        const bool ok = concave && increasing && vanishes && slope_err <= 0.05;
        pass = pass && ok;
        detail += fam.name + (ok ? "[ok" : "[FAIL") + fmt(" floor=%.3g", floor) +
                  (fam.exponent ? fmt(" |slope err|=%.2g", slope_err) : "") + "] ";
    }
    return {pass, detail};
}

// 6, 7. rate sweeps
Outcome rate_sweep(const ProblemFamily& family, double min_slope, double time_limit) {
    const auto start = Clock::now();
    const RateReport r = rate_bound_check(family, log_space(1e-1, 1e-6, 20), {1, 2, 3, 4, 5});
    const double elapsed = seconds_since(start);
    std::size_t ok_rows = 0;
    for (const auto& row : r.rows) ok_rows += row.status == "ok";
    Outcome o;
    o.pass = ok_rows == r.rows.size() && r.slope >= min_slope && std::isfinite(r.max_ratio) && r.ratio_bounded &&
             elapsed < time_limit;
    o.detail = fmt("slope=%.4f", r.slope) + fmt(" (need >= %.4f)", min_slope) + fmt(" max ratio=%.3g", r.max_ratio) +
               fmt(" ratio slope=%.3f", r.ratio_slope) + " rows ok=" + std::to_string(ok_rows) + "/" +
               std::to_string(r.rows.size()) + fmt(" time=%.2fs", elapsed);
    return o;
}

Outcome holder_sweep() {
    const ProblemFamily family{DiagonalOperator::power_law(10000, {1.0, 1.0}),
                               DecaySequence::power_law(10000, {2.0, 1.0})};
    return rate_sweep(family, holder_exponent(2.0, 1.0) - 0.1, 60.0);
}

Outcome sparse_sweep() {
    const ProblemFamily family{DiagonalOperator::power_law(10000, {1.0, 1.0}),
                               DecaySequence::sparse(10000, {{1, 1.0}, {2, -0.5}, {3, 0.25}})};
    return rate_sweep(family, 0.9, 60.0);
}

// 8. distance function
Outcome distance_suite() {
    const double R = 10.0;
    bool pass = true;
    std::string detail;
    double d_large = 0.0;
    for (Index N : {100, 1000, 10000}) {
        const auto op = DiagonalOperator::power_law(N, {1.0, 1.0});
        double s = 0.0;
        for (Index k = 1; k <= N; ++k) s += static_cast<double>(k) * static_cast<double>(k);
        const double closed = 1.0 - R / std::sqrt(s);
        const double d = distance_function(op, Subgradient(Vector::Ones(N)), R).value;
        const double err = std::abs(d - closed);
        pass = pass && err <= 1e-8;
        detail += "N=" + std::to_string(N) + fmt(" |d-closed|=%.2g; ", err);
        if (N == 10000) d_large = d;
    }
    pass = pass && d_large > 0.9;
    detail += fmt("d(N=1e4)=%.6f; ", d_large);

    const Index N = 10000;
    const auto op = DiagonalOperator::power_law(N, {1.0, 1.0});
    Vector inv(N);
    for (Index k = 0; k < N; ++k) inv(k) = 1.0 / (k + 1.0);
    const Subgradient c0(inv);
    const double R_star = radius_for_level(op, c0, 0.01);
    bool below = std::isfinite(R_star);
    for (double f : {1.0 + 1e-9, 2.0, 10.0, 1e3})
        below = below && distance_function(op, c0, f * R_star).value < 0.01 + 1e-10;
    pass = pass && below;
    detail += fmt("c0 case R*=%.6g", R_star) + (below ? " (d < 0.01 beyond R*)" : " (d not below 0.01)");
    return {pass, detail};
}

// 9. weighted sup norm against the residual norm
Outcome weighted_norm() {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    double worst = INFINITY;
    for (int i = 0; i < 10000; ++i) {
        const Index N = 1 + static_cast<Index>(u(rng) * 300);
        const auto op = DiagonalOperator::power_law(N, {3.0 * u(rng), 0.1 + 2.0 * u(rng)});
        Vector x(N);
        const double scale = std::pow(10.0, -6.0 + 12.0 * u(rng));
        for (Index k = 0; k < N; ++k) x(k) = u(rng) < 0.7 ? scale * g(rng) : 0.0;
        const double slack = l1rates::apply(op, x).norm() - weighted_sup_norm(op, x);
        worst = std::min(worst, slack / std::max(1.0, l1rates::apply(op, x).norm()));
    }
    return {worst >= -1e-12, "10000 samples" + fmt(" min relative slack=%.3g", worst)};
}

// 10. determinism through the command-line tool
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    int code = -1;
    std::string stdout_text;
    std::vector<std::pair<std::string, std::string>> files;
};

Run run_cli(const std::string& cli, const std::string& args, const fs::path& out_dir) {
    fs::remove_all(out_dir);
    fs::create_directories(out_dir);
    const fs::path log = out_dir.parent_path() / (out_dir.filename().string() + ".stdout");
    const std::string cmd = "\"" + cli + "\" " + args + " --out \"" + out_dir.string() + "\" > \"" + log.string() + "\" 2>&1";
    Run r;
    const int status = std::system(cmd.c_str());
    r.code = status == -1 ? -1 : WEXITSTATUS(status);
    r.stdout_text = slurp(log);
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(out_dir)) paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) r.files.emplace_back(p.filename().string(), slurp(p));
    return r;
}

Outcome determinism(const std::string& cli, const fs::path& work) {
    if (cli.empty()) return {false, "no --cli path given"};
    fs::create_directories(work);
    const fs::path power = work / "power.ini", sparse = work / "sparse.ini";
    std::ofstream(power) << "[problem]\nN = 3000\ndelta = 1e-3\nseed = 42\n"
                            "[problem.sigma_model]\nnu_hat = 1\nK = 1\n"
                            "[problem.tail_model]\nmu_hat = 2\nK1 = 1\n"
                            "[sweep]\ndelta_min = 1e-6\ndelta_max = 1e-1\nnum_points = 8\nseeds = 1, 2, 3\n"
                            "[outputs]\nemit_phi_grid = true\nR_grid = 0.1, 1, 10, 100, 1000\ndist_N = 100, 1000, 3000\n";
    std::ofstream(sparse) << "[problem]\nN = 3000\ndelta = 1e-3\nseed = 7\nsparse_support = 1:1; 2:-0.5; 3:0.25\n"
                             "[problem.sigma_model]\nnu_hat = 1\nK = 1\n"
                             "[sweep]\ndelta_min = 1e-6\ndelta_max = 1e-1\nnum_points = 8\nseeds = 1, 2\n";
    const std::vector<std::string> commands{
        "solve --config \"" + power.string() + "\"",
        "solve --config \"" + sparse.string() + "\" --delta 1e-4 --seed 9",
        "rate-sweep --config \"" + power.string() + "\"",
        "rate-sweep --config \"" + sparse.string() + "\"",
        "dist-fn --config \"" + power.string() + "\"",
        "vi-check --config \"" + power.string() + "\" --samples 2000 --seed 5",
        "phi-grid --config \"" + power.string() + "\"",
        "phi-grid --config \"" + sparse.string() + "\" --points 50",
    };
    int identical = 0, csv_files = 0;
    std::string failures;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const fs::path out = work / ("run" + std::to_string(i));
        const Run a = run_cli(cli, commands[i], out);
        const Run b = run_cli(cli, commands[i], out);
        for (const auto& f : a.files) csv_files += f.first.size() > 4 && f.first.ends_with(".csv");
        const bool same = a.code == 0 && b.code == 0 && a.files == b.files && a.stdout_text == b.stdout_text;
        if (same) {
            ++identical;
        } else {
            failures += " [" + commands[i] + ": exit " + std::to_string(a.code) + "/" + std::to_string(b.code) + "]";
        }
    }
    return {identical == static_cast<int>(commands.size()) && csv_files > 0,
            std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical, " +
                std::to_string(csv_files) + " CSV files compared" + failures};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::string cli;
    std::string work = (fs::temp_directory_path() / "l1rates_acceptance").string();
    app.add_option("--cli", cli, "path to the l1rates executable");
    app.add_option("--work", work, "scratch directory");
    CLI11_PARSE(app, argc, argv);

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "solver oracle equivalence", solver_equivalence},
        {2, "KKT certificate", kkt_certificate},
        {3, "discrepancy bracket", discrepancy_bracket},
        {4, "VI property suite", vi_suite},
        {5, "phi index-function suite", phi_suite},
        {6, "Holder rate sweep", holder_sweep},
        {7, "sparse rate", sparse_sweep},
        {8, "distance-function failure", distance_suite},
        {9, "weighted-norm inequality", weighted_norm},
        {10, "determinism", [&] { return determinism(cli, work); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
