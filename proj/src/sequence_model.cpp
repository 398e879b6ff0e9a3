#include "l1rates/sequence_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace l1rates {

namespace {

constexpr std::int64_t kExplicitCutoff = 64;

double int_power_tail(double mu, double from) {
    return std::pow(from, 1.0 - mu) / (mu - 1.0);
}

}  // namespace

TailEstimate power_remainder(double mu, std::int64_t m) {
    if (!(mu > 1.0)) throw std::invalid_argument("power_remainder: exponent must exceed 1");
    if (m < 0) throw std::invalid_argument("power_remainder: negative start index");

    const std::int64_t M = std::max(m + 1, kExplicitCutoff);
    // Add small terms first.
    double head = 0.0;
    for (std::int64_t k = M - 1; k > m; --k) head += std::pow(static_cast<double>(k), -mu);

    const double Md = static_cast<double>(M);
    const double fM = std::pow(Md, -mu);
    // Sum_{k>=M} k^-mu = int_M^inf + f(M)/2 - f'(M)/12 + f'''(M)/720 - ...
    const double d1 = mu * fM / Md;
    const double d3 = mu * (mu + 1.0) * (mu + 2.0) * fM / (Md * Md * Md);
    const double d5 = mu * (mu + 1.0) * (mu + 2.0) * (mu + 3.0) * (mu + 4.0) * fM / std::pow(Md, 5);
    const double rest = int_power_tail(mu, Md) + 0.5 * fM + d1 / 12.0 - d3 / 720.0;

    TailEstimate est;
    est.value = head + rest;
    est.half_width = 2.0 * d5 / 30240.0 + 4.0 * std::numeric_limits<double>::epsilon() * est.value;
    est.lower = head + int_power_tail(mu, Md);
    est.upper = head + int_power_tail(mu, Md - 1.0);
    return est;
}

// ---------------------------------------------------------------------------
// DecaySequence

DecaySequence::DecaySequence(Vector values, std::optional<PowerTail> tail)
    : values_(std::move(values)), tail_(tail) {
    if (values_.size() < 1) throw std::invalid_argument("DecaySequence: needs at least one coefficient");
    if (!values_.allFinite()) throw std::invalid_argument("DecaySequence: coefficients must be finite");
    if (tail_) {
        if (!(tail_->mu_hat > 1.0))
            throw std::invalid_argument("DecaySequence: power tail needs mu_hat > 1 for l1 membership");
        if (!(tail_->K1 > 0.0)) throw std::invalid_argument("DecaySequence: power tail needs K1 > 0");
        const TailEstimate unit = power_remainder(tail_->mu_hat, values_.size());
        analytic_tail_ = {tail_->K1 * unit.value, tail_->K1 * unit.half_width, tail_->K1 * unit.lower,
                          tail_->K1 * unit.upper};
    }
}

DecaySequence DecaySequence::sparse(Vector values) {
    return DecaySequence(std::move(values), std::nullopt);
}

DecaySequence DecaySequence::sparse(Index N, const std::vector<std::pair<Index, double>>& support) {
    if (N < 1) throw std::invalid_argument("DecaySequence: N must be positive");
    Vector v = Vector::Zero(N);
    for (const auto& [index, value] : support) {
        if (index < 1 || index > N)
            throw std::invalid_argument("DecaySequence: support index " + std::to_string(index) +
                                        " outside 1.." + std::to_string(N));
        v(index - 1) = value;
    }
    return DecaySequence(std::move(v), std::nullopt);
}

DecaySequence DecaySequence::power_law(Index N, PowerTail tail, std::vector<int> signs) {
    if (N < 1) throw std::invalid_argument("DecaySequence: N must be positive");
    if (signs.empty()) signs = {1};
    for (int s : signs)
        if (s != 1 && s != -1) throw std::invalid_argument("DecaySequence: signs must be +1 or -1");
    Vector v(N);
    for (Index k = 1; k <= N; ++k) {
        const int s = signs[static_cast<std::size_t>(k - 1) % signs.size()];
        v(k - 1) = s * tail.K1 * std::pow(static_cast<double>(k), -tail.mu_hat);
    }
    return DecaySequence(std::move(v), tail);
}

TailEstimate DecaySequence::analytic_tail() const { return analytic_tail_; }

double DecaySequence::l1_norm() const { return tail_sum(*this, 0); }

Index DecaySequence::support_bound() const {
    for (Index k = values_.size(); k >= 1; --k)
        if (values_(k - 1) != 0.0) return k;
    return 0;
}

// ---------------------------------------------------------------------------
// Operators

DiagonalOperator::DiagonalOperator(Vector sigma) : sigma_(std::move(sigma)) {
    if (sigma_.size() < 1) throw std::invalid_argument("DiagonalOperator: needs at least one singular value");
    for (Index k = 0; k < sigma_.size(); ++k) {
        if (!(sigma_(k) > 0.0) || !std::isfinite(sigma_(k)))
            throw std::invalid_argument("DiagonalOperator: singular values must be positive and finite");
        if (k > 0 && sigma_(k) > sigma_(k - 1))
            throw std::invalid_argument("DiagonalOperator: singular values must be nonincreasing");
    }
}

DiagonalOperator DiagonalOperator::power_law(Index N, PowerSigma model) {
    if (N < 1) throw std::invalid_argument("DiagonalOperator: N must be positive");
    if (!(model.nu_hat > 0.0) || !(model.K > 0.0))
        throw std::invalid_argument("DiagonalOperator: power model needs nu_hat > 0 and K > 0");
    Vector sigma(N);
    for (Index k = 1; k <= N; ++k) sigma(k - 1) = model.K * std::pow(static_cast<double>(k), -model.nu_hat);
    DiagonalOperator op(std::move(sigma));
    op.model_ = model;
    return op;
}

Matrix DiagonalOperator::to_dense() const { return sigma_.asDiagonal(); }

GeneralOperator::GeneralOperator(Matrix A) : A_(std::move(A)) {
    if (A_.rows() < 1 || A_.cols() < 1) throw std::invalid_argument("GeneralOperator: empty matrix");
    if (!A_.allFinite()) throw std::invalid_argument("GeneralOperator: entries must be finite");
    for (Index j = 0; j < A_.cols(); ++j)
        if (A_.col(j).squaredNorm() == 0.0)
            throw std::invalid_argument("GeneralOperator: column " + std::to_string(j + 1) + " is zero");
}

double GeneralOperator::norm_estimate(int iterations) const {
    Vector v = Vector::Ones(A_.cols()).normalized();
    double lambda = 0.0;
    for (int i = 0; i < iterations; ++i) {
        Vector w = A_.transpose() * (A_ * v);
        lambda = w.norm();
        if (lambda == 0.0) return 0.0;
        v = w / lambda;
    }
    return std::sqrt(lambda);
}

Index domain_size(const Operator& op) {
    return std::visit(
        [](const auto& o) -> Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(o)>, DiagonalOperator>)
                return o.size();
            else
                return o.cols();
        },
        op);
}

Index range_size(const Operator& op) {
    return std::visit(
        [](const auto& o) -> Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(o)>, DiagonalOperator>)
                return o.size();
            else
                return o.rows();
        },
        op);
}

double operator_norm(const Operator& op) {
    return std::visit(
        [](const auto& o) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(o)>, DiagonalOperator>)
                return o.norm();
            else
                return o.norm_estimate();
        },
        op);
}

namespace {
void check_size(Index expected, Index got, const char* what) {
    if (expected != got)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                    std::to_string(expected) + ", got " + std::to_string(got) + ")");
}
}  // namespace

Vector apply(const DiagonalOperator& op, const Vector& x) {
    check_size(op.size(), x.size(), "apply");
    return op.sigma().cwiseProduct(x);
}

Vector apply(const GeneralOperator& op, const Vector& x) {
    check_size(op.cols(), x.size(), "apply");
    return op.matrix() * x;
}

Vector apply(const Operator& op, const Vector& x) {
    return std::visit([&](const auto& o) { return l1rates::apply(o, x); }, op);
}

Vector apply_adjoint(const DiagonalOperator& op, const Vector& y) {
    check_size(op.size(), y.size(), "apply_adjoint");
    return op.sigma().cwiseProduct(y);
}

Vector apply_adjoint(const GeneralOperator& op, const Vector& y) {
    check_size(op.rows(), y.size(), "apply_adjoint");
    return op.matrix().transpose() * y;
}

Vector apply_adjoint(const Operator& op, const Vector& y) {
    return std::visit([&](const auto& o) { return apply_adjoint(o, y); }, op);
}

// ---------------------------------------------------------------------------
// Sums

TailEstimate tail_sum_estimate(const DecaySequence& x, Index n) {
    if (n < 0) throw std::invalid_argument("tail_sum: n must be nonnegative");
    const Index N = x.size();
    TailEstimate est;
    if (n < N) {
        double listed = 0.0;
        for (Index k = N; k > n; --k) listed += std::abs(x.values()(k - 1));
        est = {listed, 0.0, listed, listed};
    }
    if (const auto& tail = x.tail_model()) {
        TailEstimate rem = n <= N ? x.analytic_tail() : [&] {
            TailEstimate u = power_remainder(tail->mu_hat, n);
            return TailEstimate{tail->K1 * u.value, tail->K1 * u.half_width, tail->K1 * u.lower,
                                tail->K1 * u.upper};
        }();
        est.value += rem.value;
        est.half_width += rem.half_width;
        est.lower += rem.lower;
        est.upper += rem.upper;
    }
    return est;
}

double tail_sum(const DecaySequence& x, Index n) { return tail_sum_estimate(x, n).value; }

double growth_sum(const DiagonalOperator& op, Index n) {
    if (n < 1 || n > op.size())
        throw std::out_of_range("growth_sum: n = " + std::to_string(n) + " outside 1.." +
                                std::to_string(op.size()));
    return op.sigma().head(n).cwiseInverse().sum();
}

double weighted_sup_norm(const DiagonalOperator& op, const Vector& x) {
    check_size(op.size(), x.size(), "weighted_sup_norm");
    return sup_norm(op.sigma().cwiseProduct(x));
}

// ---------------------------------------------------------------------------
// Synthesis

RegProblem synthesize(const Operator& op, const DecaySequence& x_true, double delta, std::uint64_t seed) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("synthesize: delta must be >= 0");
    check_size(domain_size(op), x_true.size(), "synthesize");

    RegProblem problem{op, x_true, l1rates::apply(op, x_true.values()), Vector(), delta};
    problem.y_noisy = problem.y_exact;
    if (delta > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vector u(range_size(op));
        double norm = 0.0;
        while (norm == 0.0) {
            for (Index i = 0; i < u.size(); ++i) u(i) = gauss(rng);
            norm = u.norm();
        }
        problem.y_noisy += (delta / norm) * u;
    }
    return problem;
}

}  // namespace l1rates
