#pragma once

// Subcommands of the l1rates tool. Each returns a process exit code and
// writes human-readable lines to `out`, diagnostics to `err`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "l1rates/config.hpp"

namespace l1rates {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfigError = 2 };

inline const std::vector<std::string> kRateColumns = {"delta",    "seed",      "alpha", "residual",
                                                      "l1_error", "phi_delta", "ratio", "status"};
inline const std::vector<std::string> kRateSummaryColumns = {"slope",     "predicted",   "pass",
                                                             "max_ratio", "ratio_slope", "ratio_bounded"};
inline const std::vector<std::string> kDistColumns = {"R", "d_value", "N"};
inline const std::vector<std::string> kPhiColumns = {"t", "phi", "n"};

struct SolveOptions {
    std::optional<double> delta;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
};

struct ViCheckOptions {
    int num_samples = 10000;
    std::uint64_t seed = 42;
    std::optional<std::string> save_worst;
    std::optional<std::string> replay;
};

int cmd_solve(const ExperimentConfig& config, const SolveOptions& options, std::ostream& out, std::ostream& err);

/// Writes rate_sweep.csv and rate_summary.csv (and phi_grid.csv when
/// outputs.emit_phi_grid is set); prints "slope=<s> predicted=<r> pass=<bool>".
int cmd_rate_sweep(const ExperimentConfig& config, const std::string& out_dir, std::ostream& out,
                   std::ostream& err);

/// Writes dist_fn.csv for the minimal subgradient of the configured solution,
/// one block of rows per N in outputs.dist_N (default: problem.N).
int cmd_dist_fn(const ExperimentConfig& config, std::vector<double> R_grid, const std::string& out_dir,
                std::ostream& out, std::ostream& err);

int cmd_vi_check(const ExperimentConfig& config, const ViCheckOptions& options, const std::string& out_dir,
                 std::ostream& out, std::ostream& err);

int cmd_phi_grid(const ExperimentConfig& config, const std::string& out_dir, std::ostream& out, std::ostream& err);

void write_rate_csv(const RateReport& report, const std::string& path);
void write_rate_summary(const RateReport& report, const std::string& path);

/// Rows of a rate_sweep.csv; summarize_rates on the result reproduces the
/// slope and verdicts once `predicted` is set.
RateReport read_rate_csv(const std::string& path);

/// Replay file for a VI sample (JSON; doubles round-trip exactly).
void save_vi_sample(const std::string& path, const ViSample& sample);
ViSample load_vi_sample(const std::string& path);

}  // namespace l1rates
