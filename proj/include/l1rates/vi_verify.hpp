#pragma once

// Numerical checks of the projection inequality, the variational inequality
// with beta = 1, and empirical convergence rates under the discrepancy
// principle.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "l1rates/param_choice.hpp"
#include "l1rates/rates.hpp"

namespace l1rates {

inline constexpr double kInequalitySlack = 1e-9;

struct LemmaSides {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin() const { return rhs - lhs; }
};

/// lhs = ||x - x_true||_1 - ||x||_1 + ||x_true||_1,
/// rhs = 2 (Sum_{k>n} |x_true_k| + Sum_{k<=n} |x_k - x_true_k|),
/// with x extended by zeros beyond the listed coefficients.
LemmaSides check_lemma_sums(const Vector& x, const DecaySequence& x_true, Index n);

struct ViSample {
    Vector x;
    double lhs = 0.0;
    double rhs = 0.0;
    Index n_used = 0;
    double margin = 0.0;
};

/// ||x - x_true||_1 <= ||x||_1 - ||x_true||_1 + phi(||A (x - x_true)||) on the
/// listed coefficients; phi carries the analytic tail and so dominates the
/// rate function of the truncation.
ViSample check_vi(const DiagonalOperator& op, const DecaySequence& x_true, const RateFunction& rf,
                  const Vector& x);
ViSample check_vi(const RegProblem& problem, const Vector& x);

/// Random candidates concentrated where violations would appear: near x_true,
/// near sign boundaries, and far away.
class CandidateGenerator {
public:
    enum class Kind { DenseGaussian, SparseSpikes, Perturbation, SignFlip, DisjointSupport, Scaled };

    CandidateGenerator(const DecaySequence& x_true, std::uint64_t seed);
    Vector next();
    Vector next(Kind kind);

private:
    Vector x_true_;
    std::mt19937_64 rng_;
    std::uint64_t counter_ = 0;
};

struct ProblemFamily {
    DiagonalOperator op;
    DecaySequence x_true;
};

struct RateRow {
    double delta = 0.0;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    double residual = 0.0;
    double l1_error = 0.0;
    double phi_delta = 0.0;
    double ratio = 0.0;
    std::string status = "ok";
};

struct RateReport {
    std::vector<RateRow> rows;
    std::vector<double> deltas;       // deltas with at least one successful seed
    std::vector<double> mean_errors;  // geometric mean over seeds
    std::vector<double> mean_ratios;
    double slope = 0.0;
    double predicted = 0.0;
    double max_ratio = 0.0;    // fitted constant C in e <= C phi(delta)
    double ratio_slope = 0.0;  // log-log slope of e/phi against delta
    bool pass = false;         // slope >= predicted - kSlopeTolerance
    bool ratio_bounded = false;
};

inline constexpr double kSlopeTolerance = 0.1;

/// Exponent the theory predicts for the family: 1 for sparse solutions,
/// (mu_hat - 1)/(mu_hat + nu_hat) for power models, otherwise nullopt.
std::optional<double> predicted_exponent(const ProblemFamily& family);

/// Recompute slope, constant, and verdicts from rows (status "ok" only).
void summarize_rates(RateReport& report);

/// For each (delta, seed): synthesize data, choose alpha by the strong
/// discrepancy principle, solve, and record ||x_alpha - x_true||_1 including
/// the analytic tail. Discrepancy failures become rows with a status.
RateReport rate_bound_check(const ProblemFamily& family, const std::vector<double>& delta_grid,
                            const std::vector<std::uint64_t>& seeds, const DiscrepancyConfig& config = {});

}  // namespace l1rates
