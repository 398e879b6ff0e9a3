#include "l1rates/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace l1rates {

RateFunction::RateFunction(const DecaySequence& x_true, const DiagonalOperator& op) {
    const Index N = x_true.size();
    if (op.size() != N) throw std::invalid_argument("RateFunction: solution and operator sizes differ");
    tails_.resize(N + 1);
    growths_.resize(N + 1);
    tails_(N) = x_true.analytic_tail().value;
    for (Index n = N - 1; n >= 0; --n) tails_(n) = tails_(n + 1) + std::abs(x_true.values()(n));
    growths_(0) = 0.0;
    for (Index n = 1; n <= N; ++n) growths_(n) = growths_(n - 1) + op.dual_norm(n);
}

PhiValue RateFunction::evaluate(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("phi: t must be nonnegative");
    double best = tails_(0);
    Index arg = 0;
    for (Index n = 1; n < tails_.size(); ++n) {
        const double head = t * growths_(n);
        // Tails are nonnegative and growths increase: no later n can win.
        if (head > best) break;
        const double h = tails_(n) + head;
        if (h <= best) {
            best = h;
            arg = n;
        }
    }
    return {2.0 * best, arg};
}

PhiValue phi(const RateFunction& rf, double t) { return rf.evaluate(t); }

std::vector<PhiValue> phi_grid(const RateFunction& rf, const std::vector<double>& ts) {
    std::vector<PhiValue> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back(rf.evaluate(t));
    return out;
}

double holder_exponent(double mu_hat, double nu_hat) {
    if (!(mu_hat > 1.0)) throw std::invalid_argument("holder_exponent: mu_hat must exceed 1");
    if (!(nu_hat > 0.0)) throw std::invalid_argument("holder_exponent: nu_hat must be positive");
    return holder_exponent_tail_growth(mu_hat - 1.0, nu_hat + 1.0);
}

double holder_exponent_tail_growth(double mu, double nu) {
    if (!(mu > 0.0) || !(nu > 0.0)) throw std::invalid_argument("holder_exponent: mu and nu must be positive");
    return mu / (mu + nu);
}

Subgradient::Subgradient(Vector xi) : xi_(std::move(xi)) {
    if (!xi_.allFinite() || sup_norm(xi_) > 1.0)
        throw std::invalid_argument("Subgradient: entries must lie in [-1, 1]");
}

Subgradient minimal_subgradient(const Vector& x) {
    Vector xi(x.size());
    for (Index k = 0; k < x.size(); ++k) xi(k) = x(k) > 0.0 ? 1.0 : (x(k) < 0.0 ? -1.0 : 0.0);
    return Subgradient(std::move(xi));
}

Subgradient minimal_subgradient(const DecaySequence& x_true) { return minimal_subgradient(x_true.values()); }

namespace {

double min_weight_norm_sq(const Vector& sigma, const Vector& xi, double s) {
    double sum = 0.0;
    for (Index k = 0; k < xi.size(); ++k) {
        const double excess = std::abs(xi(k)) - s;
        if (excess > 0.0) {
            const double w = excess / sigma(k);
            sum += w * w;
        }
    }
    return sum;
}

}  // namespace

DistanceValue distance_function(const DiagonalOperator& op, const Subgradient& xi, double R) {
    if (!(R >= 0.0)) throw std::invalid_argument("distance_function: R must be nonnegative");
    if (xi.size() != op.size()) throw std::invalid_argument("distance_function: dimension mismatch");
    const Vector& sigma = op.sigma();
    DistanceValue out;
    out.sigma_last = sigma(sigma.size() - 1);

    const double R2 = R * R;
    if (min_weight_norm_sq(sigma, xi.xi(), 0.0) <= R2) return out;

    double lo = 0.0;                  // infeasible
    double hi = sup_norm(xi.xi());    // feasible
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (min_weight_norm_sq(sigma, xi.xi(), mid) <= R2)
            hi = mid;
        else
            lo = mid;
        ++out.bisections;
    }
    out.value = hi;
    return out;
}

double radius_for_level(const DiagonalOperator& op, const Subgradient& xi, double level) {
    if (!(level >= 0.0)) throw std::invalid_argument("radius_for_level: level must be nonnegative");
    if (xi.size() != op.size()) throw std::invalid_argument("radius_for_level: dimension mismatch");
    return std::sqrt(min_weight_norm_sq(op.sigma(), xi.xi(), level));
}

double bregman_distance(const Vector& x, const Vector& x_true, const Subgradient& xi) {
    if (x.size() != x_true.size() || x.size() != xi.size())
        throw std::invalid_argument("bregman_distance: dimension mismatch");
    return l1_norm(x) - l1_norm(x_true) - xi.xi().dot(x - x_true);
}

}  // namespace l1rates
