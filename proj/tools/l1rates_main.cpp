// l1rates: experiments for l1-regularized diagonal inverse problems.
//
//   l1rates solve      --config c.ini [--delta d] [--alpha a] [--seed s]
//   l1rates rate-sweep --config c.ini [--out dir]
//   l1rates dist-fn    --config c.ini [--R 0.1,1,10] [--out dir]
//   l1rates vi-check   --config c.ini [--samples n] [--seed s] [--save-worst f] [--replay f]
//   l1rates phi-grid   --config c.ini [--t-min a] [--t-max b] [--points n] [--out dir]
//
// Exit status: 0 success or pass, 1 check failed, 2 configuration or
// feasibility error.

#include <iostream>

#include "CLI11.hpp"

#include "l1rates/experiments.hpp"

int main(int argc, char** argv) {
    using namespace l1rates;

    CLI::App app{"l1-regularized Tikhonov rates laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Experiment config file")->required();
        cmd->add_option("--out", out_dir, "Output directory (overrides outputs.dir)");
    };

    SolveOptions solve_opts;
    auto* solve = app.add_subcommand("solve", "Solve one problem instance");
    add_common(solve);
    solve->add_option("--delta", solve_opts.delta, "Noise level (overrides problem.delta)");
    solve->add_option("--alpha", solve_opts.alpha, "Regularization parameter; default: strong discrepancy");
    solve->add_option("--seed", solve_opts.seed, "Noise seed (overrides problem.seed)");

    auto* sweep = app.add_subcommand("rate-sweep", "Empirical convergence rate over a delta grid");
    add_common(sweep);

    std::vector<double> R_grid;
    auto* dist = app.add_subcommand("dist-fn", "Distance function of the minimal subgradient");
    add_common(dist);
    dist->add_option("--R", R_grid, "Ascending radii (overrides outputs.R_grid)")->delimiter(',');

    ViCheckOptions vi_opts;
    std::optional<std::uint64_t> vi_seed;
    auto* vi = app.add_subcommand("vi-check", "Randomized variational inequality check");
    add_common(vi);
    vi->add_option("--samples", vi_opts.num_samples, "Number of candidates")->check(CLI::PositiveNumber);
    vi->add_option("--seed", vi_seed, "Candidate generator seed");
    vi->add_option("--save-worst", vi_opts.save_worst, "Write the worst sample to this file");
    vi->add_option("--replay", vi_opts.replay, "Re-check a saved sample");

    std::optional<double> t_min, t_max;
    std::optional<int> points;
    auto* phi = app.add_subcommand("phi-grid", "Rate function on a log grid");
    add_common(phi);
    phi->add_option("--t-min", t_min);
    phi->add_option("--t-max", t_max);
    phi->add_option("--points", points);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        ExperimentConfig config = load_config(config_path);
        const std::string dir = out_dir.value_or(config.outputs.dir);

        if (*solve) return cmd_solve(config, solve_opts, std::cout, std::cerr);
        if (*sweep) return cmd_rate_sweep(config, dir, std::cout, std::cerr);
        if (*dist) return cmd_dist_fn(config, R_grid, dir, std::cout, std::cerr);
        if (*vi) {
            vi_opts.seed = vi_seed.value_or(config.problem.seed);
            return cmd_vi_check(config, vi_opts, dir, std::cout, std::cerr);
        }
        if (*phi) {
            if (t_min) config.phi_grid.t_min = *t_min;
            if (t_max) config.phi_grid.t_max = *t_max;
            if (points) config.phi_grid.num_points = *points;
            config.validate();
            return cmd_phi_grid(config, dir, std::cout, std::cerr);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitConfigError;
}
