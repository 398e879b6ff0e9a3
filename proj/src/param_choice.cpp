#include "l1rates/param_choice.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace l1rates {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void require_delta(const RegProblem& problem) {
    if (!(problem.delta > 0.0))
        throw DiscrepancyError(DiscrepancyFailure::NonPositiveDelta,
                               "discrepancy principles need delta > 0, got " + fmt(problem.delta));
}

}  // namespace

const char* to_string(DiscrepancyFailure failure) {
    switch (failure) {
        case DiscrepancyFailure::ResidualBelowLowerBound: return "lower bound tau1*delta unreachable";
        case DiscrepancyFailure::ResidualAboveUpperBound: return "upper bound tau2*delta unreachable";
        case DiscrepancyFailure::NoGridPoint: return "no grid parameter meets tau*delta";
        case DiscrepancyFailure::BisectionExhausted: return "bisection exhausted";
        case DiscrepancyFailure::NonPositiveDelta: return "nonpositive noise level";
    }
    return "unknown";
}

void DiscrepancyConfig::validate() const {
    if (!(tau1 >= 1.0)) throw std::invalid_argument("param_choice: tau1 must be >= 1");
    if (!(tau2 >= tau1) || !std::isfinite(tau2)) throw std::invalid_argument("param_choice: tau2 must be >= tau1");
    if (!(tau > 1.0) || !std::isfinite(tau)) throw std::invalid_argument("param_choice: tau must be > 1");
    if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("param_choice: zeta must lie in (0, 1)");
    if (alpha0 && !(*alpha0 > 0.0)) throw std::invalid_argument("param_choice: alpha0 must be positive");
    if (max_bisections < 1) throw std::invalid_argument("param_choice: max_bisections must be >= 1");
}

double alpha_a_priori(double delta, const std::function<double(double)>& phi) {
    if (!(delta > 0.0)) throw std::invalid_argument("alpha_a_priori: delta must be positive");
    const double value = phi(delta);
    if (!(value > 0.0))
        throw std::invalid_argument("alpha_a_priori: phi(delta) = " + fmt(value) + " is not an index function value");
    return delta * delta / value;
}

double diagonal_residual(const DiagonalOperator& op, const Vector& y_noisy, double alpha) {
    const Vector& s = op.sigma();
    double sum = 0.0;
    for (Index k = 0; k < s.size(); ++k) {
        const double r = std::min(std::abs(s(k) * y_noisy(k)), alpha) / s(k);
        sum += r * r;
    }
    return std::sqrt(sum);
}

ParameterChoice alpha_strong_discrepancy(const RegProblem& problem, const DiscrepancyConfig& config,
                                         const ProxGradientOptions& solver) {
    config.validate();
    require_delta(problem);
    const double lower = config.tau1 * problem.delta;
    const double upper = config.tau2 * problem.delta;
    const double y_norm = problem.y_noisy.norm();
    if (y_norm < lower)
        throw DiscrepancyError(DiscrepancyFailure::ResidualBelowLowerBound,
                               "||y_delta|| = " + fmt(y_norm) + " < tau1*delta = " + fmt(lower));

    const double alpha_null = null_solution_threshold(problem.op, problem.y_noisy);
    const double alpha_floor = alpha_null * 1e-15;

    ParameterChoice choice;
    double lo = 0.0;  // residual below the bracket
    double hi = std::numeric_limits<double>::infinity();  // residual above the bracket
    double alpha = std::min(problem.delta * operator_norm(problem.op), alpha_null);

    for (int i = 0; i < config.max_bisections; ++i) {
        SolveResult sol = solve(problem, alpha, solver);
        ++choice.evaluations;
        const double r = sol.residual_norm;
        if (r >= lower && r <= upper) {
            choice.alpha = alpha;
            choice.solution = std::move(sol);
            return choice;
        }
        if (r < lower)
            lo = alpha;
        else
            hi = alpha;

        if (lo > 0.0 && std::isfinite(hi)) {
            alpha = std::sqrt(lo * hi);
        } else if (lo > 0.0) {
            alpha = std::min(10.0 * lo, alpha_null);
        } else {
            alpha = hi / 10.0;
            if (alpha < alpha_floor)
                throw DiscrepancyError(DiscrepancyFailure::ResidualAboveUpperBound,
                                       "residual " + fmt(r) + " > tau2*delta = " + fmt(upper) +
                                           " even as alpha -> 0");
        }
    }
    throw DiscrepancyError(DiscrepancyFailure::BisectionExhausted,
                           "no alpha in [" + fmt(lo) + ", " + fmt(hi) + "] hit [" + fmt(lower) + ", " +
                               fmt(upper) + "] within " + std::to_string(config.max_bisections) + " steps");
}

ParameterChoice alpha_sequential_discrepancy(const RegProblem& problem, const DiscrepancyConfig& config,
                                             const ProxGradientOptions& solver) {
    config.validate();
    require_delta(problem);
    const double bound = config.tau * problem.delta;
    double alpha0 = config.alpha0.value_or(null_solution_threshold(problem.op, problem.y_noisy));
    if (!(alpha0 > 0.0)) alpha0 = 1.0;  // y_delta = 0

    ParameterChoice choice;
    for (int j = 0; j < config.max_bisections; ++j) {
        const double alpha = alpha0 * std::pow(config.zeta, j);
        SolveResult sol = solve(problem, alpha, solver);
        ++choice.evaluations;
        if (sol.residual_norm <= bound) {
            choice.alpha = alpha;
            choice.grid_index = j;
            choice.solution = std::move(sol);
            return choice;
        }
    }
    throw DiscrepancyError(DiscrepancyFailure::NoGridPoint,
                           "residual exceeds tau*delta = " + fmt(bound) + " on the first " +
                               std::to_string(config.max_bisections) + " grid points");
}

}  // namespace l1rates
