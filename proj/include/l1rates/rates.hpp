#pragma once

// Rate function phi, Hoelder exponents, distance function of the
// approximate source condition, and Bregman distances.

#include <vector>

#include "l1rates/sequence_model.hpp"

namespace l1rates {

struct PhiValue {
    double value = 0.0;
    Index n = 0;  // minimizing head length (largest among ties)
};

/// phi(t) = 2 min_{0 <= n <= N} (Sum_{k>n} |x_k| + t Sum_{k<=n} 1/sigma_k).
///
/// Tails include the analytic remainder beyond N, so phi evaluated here is
/// never smaller than the rate function of the listed truncation.
class RateFunction {
public:
    RateFunction(const DecaySequence& x_true, const DiagonalOperator& op);

    PhiValue evaluate(double t) const;
    double operator()(double t) const { return evaluate(t).value; }

    /// tails()[n] = Sum_{k>n} |x_k|, n = 0..N.
    const Vector& tails() const { return tails_; }
    /// growths()[n] = Sum_{k<=n} 1/sigma_k, n = 0..N, growths()[0] = 0.
    const Vector& growths() const { return growths_; }
    Index size() const { return tails_.size() - 1; }

private:
    Vector tails_;
    Vector growths_;
};

PhiValue phi(const RateFunction& rf, double t);
std::vector<PhiValue> phi_grid(const RateFunction& rf, const std::vector<double>& ts);

/// (mu_hat - 1) / (mu_hat + nu_hat) for |x_k| ~ k^-mu_hat, sigma_k ~ k^-nu_hat.
double holder_exponent(double mu_hat, double nu_hat);

/// mu / (mu + nu) for tails ~ n^-mu and growth sums ~ n^nu.
double holder_exponent_tail_growth(double mu, double nu);

/// Element of the subdifferential of the l1 norm, |xi_k| <= 1.
class Subgradient {
public:
    explicit Subgradient(Vector xi);
    const Vector& xi() const { return xi_; }
    Index size() const { return xi_.size(); }

private:
    Vector xi_;
};

/// sign(x_k) on the support, 0 elsewhere.
Subgradient minimal_subgradient(const DecaySequence& x_true);
Subgradient minimal_subgradient(const Vector& x);

struct DistanceValue {
    double value = 0.0;
    double sigma_last = 0.0;  // sigma_N; large values mean N is too small
    int bisections = 0;
};

/// min_{||w||_2 <= R} max_{k<=N} |xi_k - sigma_k w_k|.
///
/// Level s is feasible iff Sum_k ((|xi_k| - s)_+ / sigma_k)^2 <= R^2; the
/// returned value is the feasible end of a bisection bracket of width 1e-10.
DistanceValue distance_function(const DiagonalOperator& op, const Subgradient& xi, double R);

/// Smallest R with distance_function(op, xi, R) <= level.
double radius_for_level(const DiagonalOperator& op, const Subgradient& xi, double level);

/// ||x||_1 - ||x_true||_1 - <xi, x - x_true>.
double bregman_distance(const Vector& x, const Vector& x_true, const Subgradient& xi);

}  // namespace l1rates
