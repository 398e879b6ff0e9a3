#pragma once

// Experiment configuration: INI-style text with dotted section names.
//
//   [problem]               N, delta, seed, sparse_support = "1:1.0; 2:0.5"
//   [problem.sigma_model]   nu_hat, K
//   [problem.tail_model]    mu_hat, K1, signs = "1, -1"
//   [sweep]                 delta_min, delta_max, num_points, seeds = "1, 2, 3"
//   [param_choice]          tau1, tau2, tau, zeta, alpha0, max_bisections
//   [outputs]               dir, emit_phi_grid, R_grid = "0.1, 1, 10", dist_N = "100, 1000"
//   [phi_grid]              t_min, t_max, num_points
//
// Unknown sections or keys are errors.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "l1rates/param_choice.hpp"
#include "l1rates/vi_verify.hpp"

namespace l1rates {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemConfig {
    Index N = 10000;
    std::optional<PowerSigma> sigma_model;
    std::optional<PowerTail> tail_model;
    std::vector<int> signs;
    std::vector<std::pair<Index, double>> sparse_support;
    double delta = 0.0;
    std::uint64_t seed = 42;
};

struct SweepConfig {
    double delta_min = 1e-6;
    double delta_max = 1e-1;
    int num_points = 20;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

struct OutputConfig {
    std::string dir = ".";
    bool emit_phi_grid = false;
    std::vector<double> R_grid;
    std::vector<Index> dist_N;
};

struct PhiGridConfig {
    double t_min = 1e-8;
    double t_max = 1.0;
    int num_points = 200;
};

struct ExperimentConfig {
    ProblemConfig problem;
    SweepConfig sweep;
    DiscrepancyConfig param_choice;
    OutputConfig outputs;
    PhiGridConfig phi_grid;

    /// Throws ConfigError on violated invariants.
    void validate() const;
};

ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Operator and solution of the configured problem, optionally at another N.
ProblemFamily build_family(const ProblemConfig& problem);
ProblemFamily build_family(const ProblemConfig& problem, Index N);

}  // namespace l1rates
