#pragma once

// Sequence-space model: truncated solutions with analytic tails, diagonal
// and dense operators, and noisy data synthesis.

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "l1rates/types.hpp"

namespace l1rates {

/// |x_k| = K1 * k^(-mu_hat) for every k >= 1.
struct PowerTail {
    double mu_hat = 2.0;
    double K1 = 1.0;
};

/// sigma_k = K * k^(-nu_hat) for every k >= 1.
struct PowerSigma {
    double nu_hat = 1.0;
    double K = 1.0;
};

/// Enclosure of a remainder series: value with a rigorous error bound.
struct TailEstimate {
    double value = 0.0;
    double half_width = 0.0;
    double lower = 0.0;  // integral bracket
    double upper = 0.0;
};

/// Sum_{k > m} k^(-mu) for mu > 1, m >= 0.
///
/// Terms up to a cutoff are summed explicitly; the remainder is the
/// Euler-Maclaurin corrected integral, which always lies inside the integral
/// bracket [int_{M}^inf, int_{M-1}^inf]. half_width bounds the truncation of
/// the Euler-Maclaurin series.
TailEstimate power_remainder(double mu, std::int64_t m);

/// A solution x in l1 represented by its first N coefficients plus, for
/// non-sparse sequences, a power-law model of the coefficients beyond N.
class DecaySequence {
public:
    /// Exactly the listed coefficients; everything beyond is zero.
    static DecaySequence sparse(Vector values);

    /// Sparse sequence of length N from 1-based (index, value) pairs.
    static DecaySequence sparse(Index N, const std::vector<std::pair<Index, double>>& support);

    /// First N samples of K1 * k^(-mu_hat). The sign pattern is applied
    /// cyclically (default all +1).
    static DecaySequence power_law(Index N, PowerTail tail, std::vector<int> signs = {});

    const Vector& values() const { return values_; }
    Index size() const { return values_.size(); }
    const std::optional<PowerTail>& tail_model() const { return tail_; }
    bool is_sparse() const { return !tail_.has_value(); }

    /// Sum_{k > N} |x_k| (zero for sparse sequences).
    TailEstimate analytic_tail() const;

    /// Full l1 norm including the analytic tail.
    double l1_norm() const;

    /// Index of the last nonzero listed coefficient (1-based), 0 if none.
    Index support_bound() const;

private:
    DecaySequence(Vector values, std::optional<PowerTail> tail);

    Vector values_;
    std::optional<PowerTail> tail_;
    TailEstimate analytic_tail_;
};

/// A = diag(sigma_1, ..., sigma_N) acting on coefficients; ||A e_k|| = sigma_k
/// and the functionals f_k with e_k = A^* f_k have norm 1/sigma_k.
class DiagonalOperator {
public:
    explicit DiagonalOperator(Vector sigma);
    static DiagonalOperator power_law(Index N, PowerSigma model);

    const Vector& sigma() const { return sigma_; }
    const std::optional<PowerSigma>& sigma_model() const { return model_; }
    Index size() const { return sigma_.size(); }
    double norm() const { return sigma_(0); }

    /// ||f_k|| = 1 / sigma_k, with k 1-based.
    double dual_norm(Index k) const { return 1.0 / sigma_(k - 1); }

    /// Dense M x M matrix with sigma on the diagonal.
    Matrix to_dense() const;

private:
    Vector sigma_;
    std::optional<PowerSigma> model_;
};

/// Finite M x N matrix; columns must be nonzero.
class GeneralOperator {
public:
    explicit GeneralOperator(Matrix A);

    const Matrix& matrix() const { return A_; }
    Index rows() const { return A_.rows(); }
    Index cols() const { return A_.cols(); }

    /// Spectral norm estimate by power iteration on A^T A.
    double norm_estimate(int iterations = 100) const;

private:
    Matrix A_;
};

using Operator = std::variant<DiagonalOperator, GeneralOperator>;

Index domain_size(const Operator& op);
Index range_size(const Operator& op);
double operator_norm(const Operator& op);

Vector apply(const DiagonalOperator& op, const Vector& x);
Vector apply(const GeneralOperator& op, const Vector& x);
Vector apply(const Operator& op, const Vector& x);

Vector apply_adjoint(const DiagonalOperator& op, const Vector& y);
Vector apply_adjoint(const GeneralOperator& op, const Vector& y);
Vector apply_adjoint(const Operator& op, const Vector& y);

/// Sum_{k > n} |x_k|, including the analytic tail for power-law sequences.
double tail_sum(const DecaySequence& x, Index n);

/// Same as tail_sum with the error bound of the analytic part.
TailEstimate tail_sum_estimate(const DecaySequence& x, Index n);

/// Sum_{k <= n} ||f_k|| = Sum_{k <= n} 1 / sigma_k, for 1 <= n <= N.
double growth_sum(const DiagonalOperator& op, Index n);

/// sup_k sigma_k |x_k|, the weighted sup-norm with weights 1/||f_k||.
double weighted_sup_norm(const DiagonalOperator& op, const Vector& x);

/// Exact data, noisy data and the noise level they were built with.
struct RegProblem {
    Operator op;
    DecaySequence x_true;
    Vector y_exact;
    Vector y_noisy;
    double delta = 0.0;
    static constexpr int p = 2;

    const DiagonalOperator* diagonal() const { return std::get_if<DiagonalOperator>(&op); }
};

/// y_exact = A x_true (listed part), y_noisy = y_exact + delta * u with u
/// a seeded uniformly distributed unit vector.
RegProblem synthesize(const Operator& op, const DecaySequence& x_true, double delta,
                      std::uint64_t seed);

}  // namespace l1rates
