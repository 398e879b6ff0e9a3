#pragma once

// Minimizers of T_alpha(x) = 1/2 ||Ax - y||^2 + alpha ||x||_1.

#include "l1rates/sequence_model.hpp"

namespace l1rates {

struct SolveResult {
    Vector x;
    double residual_norm = 0.0;
    double penalty = 0.0;
    double objective = 0.0;
    double certificate = 0.0;
    Index support_size = 0;
    bool converged = true;
    int iterations = 0;
};

struct ProxGradientOptions {
    double tol = 1e-10;
    int max_iter = 100000;
    int power_iterations = 100;
};

/// Closed-form soft-thresholding solution for diagonal operators.
/// Entries with |sigma_k y_k| == alpha are set to zero.
SolveResult solve_diagonal(const DiagonalOperator& op, const Vector& y_noisy, double alpha);
SolveResult solve_diagonal(const RegProblem& problem, double alpha);

/// Accelerated proximal gradient with monotone restart and backtracking.
/// Stops once optimality_residual <= tol; otherwise returns the best iterate
/// with converged == false.
SolveResult solve_general(const GeneralOperator& op, const Vector& y_noisy, double alpha,
                          const ProxGradientOptions& options = {});

/// Dispatches to the closed form or the iterative solver.
SolveResult solve(const RegProblem& problem, double alpha, const ProxGradientOptions& options = {});

/// Max violation of -A^*(Ax - y) in alpha * d||x||_1, componentwise.
double optimality_residual(const Operator& op, const Vector& y_noisy, double alpha, const Vector& x);

/// T_alpha(x).
double tikhonov_objective(const Operator& op, const Vector& y_noisy, double alpha, const Vector& x);

/// alpha at and above which x = 0 is the minimizer: ||A^* y||_inf.
double null_solution_threshold(const Operator& op, const Vector& y_noisy);

/// Sign-preserving shrinkage max(|v| - t, 0) sign(v).
double soft_threshold(double v, double t);

}  // namespace l1rates
