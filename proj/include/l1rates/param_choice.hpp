#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "l1rates/solver.hpp"

namespace l1rates {

struct DiscrepancyConfig {
    double tau1 = 1.0;
    double tau2 = 1.5;
    double tau = 1.2;
    double zeta = 0.8;
    /// Start of the grid alpha_j = zeta^j alpha0; defaults to ||A^* y_delta||_inf.
    std::optional<double> alpha0;
    int max_bisections = 200;

    /// Throws std::invalid_argument unless 1 <= tau1 <= tau2, tau > 1,
    /// 0 < zeta < 1, alpha0 > 0 and max_bisections >= 1.
    void validate() const;
};

enum class DiscrepancyFailure {
    ResidualBelowLowerBound,  // ||y_delta|| < tau1 delta: even alpha -> inf is too close
    ResidualAboveUpperBound,  // alpha -> 0 residual still exceeds tau2 delta
    NoGridPoint,              // no alpha_j within max_bisections steps meets tau delta
    BisectionExhausted,
    NonPositiveDelta,
};

const char* to_string(DiscrepancyFailure failure);

class DiscrepancyError : public std::runtime_error {
public:
    DiscrepancyError(DiscrepancyFailure failure, const std::string& detail)
        : std::runtime_error(std::string(to_string(failure)) + ": " + detail), failure_(failure) {}
    DiscrepancyFailure failure() const { return failure_; }

private:
    DiscrepancyFailure failure_;
};

struct ParameterChoice {
    double alpha = 0.0;
    SolveResult solution;
    int evaluations = 0;
    int grid_index = -1;  // j for the sequential principle
};

/// delta^2 / phi(delta). Throws if phi(delta) is not positive.
double alpha_a_priori(double delta, const std::function<double(double)>& phi);

/// alpha with tau1 delta <= ||A x_alpha - y_delta|| <= tau2 delta, by bisection
/// in log(alpha) starting from delta ||A||. Throws DiscrepancyError.
ParameterChoice alpha_strong_discrepancy(const RegProblem& problem, const DiscrepancyConfig& config = {},
                                         const ProxGradientOptions& solver = {});

/// Largest alpha_j = zeta^j alpha0 (j = 0, 1, ...) with residual <= tau delta.
ParameterChoice alpha_sequential_discrepancy(const RegProblem& problem, const DiscrepancyConfig& config = {},
                                             const ProxGradientOptions& solver = {});

/// ||A x_alpha - y_delta|| for diagonal problems without forming x_alpha:
/// the k-th residual entry is min(|sigma_k y_k|, alpha) / sigma_k.
double diagonal_residual(const DiagonalOperator& op, const Vector& y_noisy, double alpha);

}  // namespace l1rates
