#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "l1rates/csv.hpp"
#include "l1rates/experiments.hpp"

using namespace l1rates;
namespace fs = std::filesystem;

namespace {

const char* kPowerConfig = R"(
# mu_hat = 2, nu_hat = 1
[problem]
N = 2000
delta = 1e-3
seed = 42

[problem.sigma_model]
nu_hat = 1
K = 1

[problem.tail_model]
mu_hat = 2
K1 = 1

[sweep]
delta_min = 1e-5
delta_max = 1e-1
num_points = 6
seeds = 1, 2

[outputs]
R_grid = 0.1, 1, 10, 100
dist_N = 100, 200
)";

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.ini");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("l1rates_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse(kPowerConfig);
    CHECK(c.problem.N == 2000);
    CHECK(c.problem.delta == 1e-3);
    CHECK(c.problem.sigma_model->nu_hat == 1.0);
    CHECK(c.problem.tail_model->mu_hat == 2.0);
    CHECK(c.sweep.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(c.outputs.R_grid.size() == 4);
    CHECK(c.param_choice.tau2 == 1.5);

    const ExperimentConfig s = parse(R"(
[problem]
N = 50
sparse_support = 1:1.0; 2:-0.5; 3:0.25
[problem.sigma_model]
nu_hat = 1
K = 1
[param_choice]
tau1 = 1.1
tau2 = 2
)");
    CHECK(s.problem.sparse_support.size() == 3);
    CHECK(s.problem.sparse_support[1].second == -0.5);
    CHECK(s.param_choice.tau1 == 1.1);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse("[problem]\nNN = 3\n[problem.sigma_model]\nnu_hat=1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[problme]\nN = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("[problem]\nN = abc\n"), ConfigError);
    // neither tail model nor support
    CHECK_THROWS_AS(parse("[problem]\nN = 3\n[problem.sigma_model]\nnu_hat=1\n"), ConfigError);
    // support beyond N
    CHECK_THROWS_AS(parse("[problem]\nN = 3\nsparse_support = 4:1\n[problem.sigma_model]\nnu_hat=1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse(std::string(kPowerConfig) + "[param_choice]\ntau1 = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
    try {
        load_config("/nonexistent/config.ini");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/config.ini") != std::string::npos);
    }
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(-2.5) == "-2.5");
    const double v = 1.0 / 3.0;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("solve command") {
    ExperimentConfig c = parse(kPowerConfig);
    std::ostringstream out, err;
    CHECK(cmd_solve(c, {}, out, err) == kExitOk);
    const std::string text = out.str();
    CHECK(text.find("alpha=") != std::string::npos);
    CHECK(text.find("certificate=") != std::string::npos);

    SolveOptions zero;
    zero.delta = 0.0;
    zero.alpha = 1e-4;
    std::ostringstream o2, e2;
    CHECK(cmd_solve(c, zero, o2, e2) == kExitOk);

    SolveOptions no_alpha;
    no_alpha.delta = 0.0;
    std::ostringstream o3, e3;
    CHECK(cmd_solve(c, no_alpha, o3, e3) == kExitConfigError);

    // ||y_delta|| is about delta, below tau1 delta.
    c.param_choice.tau1 = 2.0;
    c.param_choice.tau2 = 3.0;
    SolveOptions huge;
    huge.delta = 10.0;
    std::ostringstream o4, e4;
    CHECK(cmd_solve(c, huge, o4, e4) == kExitConfigError);
    CHECK(e4.str().find("tau1") != std::string::npos);
}

TEST_CASE("rate-sweep writes deterministic CSVs whose verdict is recomputable") {
    const ExperimentConfig c = parse(kPowerConfig);
    const fs::path a = fresh_dir("sweep_a"), b = fresh_dir("sweep_b");
    std::ostringstream out, err, out2, err2;
    const int code = cmd_rate_sweep(c, a.string(), out, err);
    CHECK(code == kExitOk);
    CHECK(out.str().rfind("slope=", 0) == 0);
    CHECK(out.str().find("predicted=0.3333333333333333") != std::string::npos);
    cmd_rate_sweep(c, b.string(), out2, err2);
    CHECK(slurp(a / "rate_sweep.csv") == slurp(b / "rate_sweep.csv"));
    CHECK(slurp(a / "rate_summary.csv") == slurp(b / "rate_summary.csv"));

    const std::string header = slurp(a / "rate_sweep.csv").substr(0, 60);
    CHECK(header.rfind("delta,seed,alpha,residual,l1_error,phi_delta,ratio,status\n", 0) == 0);

    RateReport again = read_rate_csv((a / "rate_sweep.csv").string());
    again.predicted = 1.0 / 3.0;
    summarize_rates(again);
    CHECK(again.rows.size() == 12);
    std::ostringstream expect;
    expect << "slope=" << format_double(again.slope);
    CHECK(out.str().rfind(expect.str(), 0) == 0);
    CHECK(again.pass);
}

TEST_CASE("dist-fn command") {
    const ExperimentConfig c = parse(kPowerConfig);
    const fs::path dir = fresh_dir("dist");
    std::ostringstream out, err;
    CHECK(cmd_dist_fn(c, {}, dir.string(), out, err) == kExitOk);
    std::ifstream in(dir / "dist_fn.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "R,d_value,N");
    std::vector<double> d100, d200;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string R, d, N;
        std::getline(ss, R, ',');
        std::getline(ss, d, ',');
        std::getline(ss, N, ',');
        (N == "100" ? d100 : d200).push_back(std::stod(d));
    }
    REQUIRE(d100.size() == 4);
    REQUIRE(d200.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(d200[i] >= d100[i]);
        if (i > 0) CHECK(d100[i] <= d100[i - 1]);
    }
    std::ostringstream o2, e2;
    CHECK(cmd_dist_fn(c, {10.0, 1.0}, dir.string(), o2, e2) == kExitConfigError);
}

TEST_CASE("vi-check command and replay") {
    ExperimentConfig c = parse(kPowerConfig);
    const fs::path dir = fresh_dir("vi");
    const std::string saved = (dir / "worst.json").string();

    ViCheckOptions one;
    one.num_samples = 1;
    std::ostringstream o1, e1;
    CHECK(cmd_vi_check(c, one, dir.string(), o1, e1) == kExitOk);

    ViCheckOptions opts;
    opts.num_samples = 2000;
    opts.seed = 7;
    opts.save_worst = saved;
    std::ostringstream out, err;
    CHECK(cmd_vi_check(c, opts, dir.string(), out, err) == kExitOk);
    CHECK(out.str().find("pass=true") != std::string::npos);

    const ViSample recorded = load_vi_sample(saved);
    const ProblemFamily family = build_family(c.problem);
    const ViSample again = check_vi(family.op, family.x_true, RateFunction(family.x_true, family.op), recorded.x);
    CHECK(std::abs(again.margin - recorded.margin) <= 1e-15);

    ViCheckOptions replay;
    replay.replay = saved;
    std::ostringstream o2, e2;
    CHECK(cmd_vi_check(c, replay, dir.string(), o2, e2) == kExitOk);

    // A fabricated sample with the wrong size is a configuration error.
    ViSample bad = recorded;
    bad.x = Vector::Zero(3);
    save_vi_sample((dir / "bad.json").string(), bad);
    replay.replay = (dir / "bad.json").string();
    std::ostringstream o3, e3;
    CHECK(cmd_vi_check(c, replay, dir.string(), o3, e3) == kExitConfigError);
}

TEST_CASE("phi-grid command") {
    ExperimentConfig c = parse(kPowerConfig);
    c.phi_grid.num_points = 5;
    const fs::path dir = fresh_dir("phi");
    std::ostringstream out, err;
    CHECK(cmd_phi_grid(c, dir.string(), out, err) == kExitOk);
    const std::string csv = slurp(dir / "phi_grid.csv");
    CHECK(csv.rfind("t,phi,n\n1e-08,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
