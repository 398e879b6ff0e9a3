#include "l1rates/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace l1rates {

namespace {

void require_positive_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be positive and finite");
}

double subgradient_violation(const Vector& g, const Vector& x, double alpha) {
    double worst = 0.0;
    for (Index k = 0; k < x.size(); ++k) {
        const double v = x(k) != 0.0 ? std::abs(g(k) + std::copysign(alpha, x(k)))
                                     : std::max(0.0, std::abs(g(k)) - alpha);
        worst = std::max(worst, v);
    }
    return worst;
}

SolveResult summarize(const Operator& op, const Vector& y, double alpha, Vector x) {
    SolveResult r;
    const Vector residual = l1rates::apply(op, x) - y;
    r.residual_norm = residual.norm();
    r.penalty = l1_norm(x);
    r.objective = 0.5 * residual.squaredNorm() + alpha * r.penalty;
    r.certificate = subgradient_violation(apply_adjoint(op, residual), x, alpha);
    r.support_size = (x.array() != 0.0).count();
    r.x = std::move(x);
    return r;
}

}  // namespace

double soft_threshold(double v, double t) {
    const double mag = std::abs(v) - t;
    return mag > 0.0 ? std::copysign(mag, v) : 0.0;
}

double null_solution_threshold(const Operator& op, const Vector& y_noisy) {
    return sup_norm(apply_adjoint(op, y_noisy));
}

double tikhonov_objective(const Operator& op, const Vector& y_noisy, double alpha, const Vector& x) {
    return 0.5 * (l1rates::apply(op, x) - y_noisy).squaredNorm() + alpha * l1_norm(x);
}

double optimality_residual(const Operator& op, const Vector& y_noisy, double alpha, const Vector& x) {
    const Vector g = apply_adjoint(op, l1rates::apply(op, x) - y_noisy);
    return subgradient_violation(g, x, alpha);
}

SolveResult solve_diagonal(const DiagonalOperator& op, const Vector& y_noisy, double alpha) {
    require_positive_alpha(alpha);
    if (y_noisy.size() != op.size()) throw std::invalid_argument("solve_diagonal: dimension mismatch");
    const Vector& sigma = op.sigma();
    Vector x(op.size());
    for (Index k = 0; k < x.size(); ++k)
        x(k) = soft_threshold(sigma(k) * y_noisy(k), alpha) / (sigma(k) * sigma(k));
    return summarize(op, y_noisy, alpha, std::move(x));
}

SolveResult solve_diagonal(const RegProblem& problem, double alpha) {
    const auto* diag = problem.diagonal();
    if (!diag) throw std::invalid_argument("solve_diagonal: problem operator is not diagonal");
    return solve_diagonal(*diag, problem.y_noisy, alpha);
}

SolveResult solve_general(const GeneralOperator& op, const Vector& y_noisy, double alpha,
                          const ProxGradientOptions& options) {
    require_positive_alpha(alpha);
    if (!(options.tol > 0.0)) throw std::invalid_argument("solve_general: tol must be positive");
    if (y_noisy.size() != op.rows()) throw std::invalid_argument("solve_general: dimension mismatch");

    const Matrix& A = op.matrix();
    const Index n = A.cols();
    const double norm = op.norm_estimate(options.power_iterations);
    double L = std::max(norm * norm, std::numeric_limits<double>::min());

    auto smooth = [&](const Vector& v, Vector& residual) {
        residual.noalias() = A * v - y_noisy;
        return 0.5 * residual.squaredNorm();
    };

    Vector x = Vector::Zero(n);
    Vector z = x;
    Vector x_next(n), grad(n), res_z(A.rows()), res_next(A.rows());
    double F = smooth(x, res_next) + alpha * l1_norm(x);
    grad.noalias() = A.transpose() * res_next;
    double cert = subgradient_violation(grad, x, alpha);
    double t = 1.0;
    int iter = 0;

    for (; iter < options.max_iter && cert > options.tol; ++iter) {
        smooth(z, res_z);
        grad.noalias() = A.transpose() * res_z;

        double f_next = 0.0;
        for (;;) {
            for (Index k = 0; k < n; ++k) x_next(k) = soft_threshold(z(k) - grad(k) / L, alpha / L);
            f_next = smooth(x_next, res_next);
            // The smooth part is quadratic, so the descent test is exact in this form.
            const Vector step = x_next - z;
            if ((A * step).squaredNorm() <= L * step.squaredNorm() * (1.0 + 1e-12)) break;
            L *= 2.0;
        }

        const double F_next = f_next + alpha * l1_norm(x_next);
        // A plain proximal step always descends; an increase then is rounding.
        if (F_next > F && t > 1.0) {
            // Momentum overshot: restart from the current best iterate.
            z = x;
            t = 1.0;
            continue;
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const bool oscillating = (z - x_next).dot(x_next - x) > 0.0;
        z = x_next + ((t - 1.0) / t_next) * (x_next - x);
        t = t_next;
        if (oscillating) {
            z = x_next;
            t = 1.0;
        }
        x.swap(x_next);
        F = F_next;

        grad.noalias() = A.transpose() * res_next;
        cert = subgradient_violation(grad, x, alpha);
    }

    SolveResult r = summarize(op, y_noisy, alpha, std::move(x));
    r.iterations = iter;
    r.converged = r.certificate <= options.tol;
    return r;
}

SolveResult solve(const RegProblem& problem, double alpha, const ProxGradientOptions& options) {
    if (const auto* diag = problem.diagonal()) return solve_diagonal(*diag, problem.y_noisy, alpha);
    return solve_general(std::get<GeneralOperator>(problem.op), problem.y_noisy, alpha, options);
}

}  // namespace l1rates
