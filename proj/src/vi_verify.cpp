#include "l1rates/vi_verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "l1rates/numerics.hpp"

namespace l1rates {

LemmaSides check_lemma_sums(const Vector& x, const DecaySequence& x_true, Index n) {
    const Index N = x_true.size();
    if (x.size() != N) throw std::invalid_argument("check_lemma_sums: dimension mismatch");
    if (n < 0 || n > N) throw std::invalid_argument("check_lemma_sums: n outside 0..N");
    const Vector& xt = x_true.values();
    const double tail = x_true.analytic_tail().value;

    // Beyond N, x is zero: ||x - x_true|| and ||x_true|| both pick up the tail.
    LemmaSides sides;
    sides.lhs = l1_norm(x - xt) + tail - l1_norm(x) + l1_norm(xt) + tail;
    sides.rhs = 2.0 * (tail_sum(x_true, n) + l1_norm((x - xt).head(n)));
    return sides;
}

ViSample check_vi(const DiagonalOperator& op, const DecaySequence& x_true, const RateFunction& rf,
                  const Vector& x) {
    if (x.size() != x_true.size() || op.size() != x.size())
        throw std::invalid_argument("check_vi: dimension mismatch");
    const Vector diff = x - x_true.values();
    const PhiValue p = rf.evaluate(op.sigma().cwiseProduct(diff).norm());

    ViSample s;
    s.lhs = l1_norm(diff);
    s.rhs = l1_norm(x) - l1_norm(x_true.values()) + p.value;
    s.n_used = p.n;
    s.margin = s.rhs - s.lhs;
    s.x = x;
    return s;
}

ViSample check_vi(const RegProblem& problem, const Vector& x) {
    const auto* diag = problem.diagonal();
    if (!diag) throw std::invalid_argument("check_vi: requires a diagonal operator");
    return check_vi(*diag, problem.x_true, RateFunction(problem.x_true, *diag), x);
}

// ---------------------------------------------------------------------------

CandidateGenerator::CandidateGenerator(const DecaySequence& x_true, std::uint64_t seed)
    : x_true_(x_true.values()), rng_(seed) {}

Vector CandidateGenerator::next() {
    constexpr Kind kinds[] = {Kind::DenseGaussian, Kind::SparseSpikes, Kind::Perturbation,
                              Kind::SignFlip,      Kind::DisjointSupport, Kind::Scaled};
    return next(kinds[counter_++ % std::size(kinds)]);
}

Vector CandidateGenerator::next(Kind kind) {
    const Index N = x_true_.size();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<Index> index(0, N - 1);
    auto log_uniform = [&](double a, double b) { return a * std::pow(b / a, unit(rng_)); };
    auto spikes = [&](Vector& v, const std::vector<Index>& allowed) {
        const int count = 1 + static_cast<int>(unit(rng_) * 5);
        for (int i = 0; i < count && !allowed.empty(); ++i) {
            const Index k = allowed[static_cast<std::size_t>(unit(rng_) * allowed.size()) % allowed.size()];
            v(k) = (unit(rng_) < 0.5 ? -1.0 : 1.0) * 3.0 * unit(rng_);
        }
    };

    Vector x = Vector::Zero(N);
    switch (kind) {
        case Kind::DenseGaussian: {
            const double scale = log_uniform(1e-3, 10.0);
            for (Index k = 0; k < N; ++k) x(k) = scale * gauss(rng_);
            break;
        }
        case Kind::SparseSpikes: {
            std::vector<Index> all(static_cast<std::size_t>(N));
            for (Index k = 0; k < N; ++k) all[static_cast<std::size_t>(k)] = k;
            spikes(x, all);
            break;
        }
        case Kind::Perturbation: {
            x = x_true_;
            const double eps = log_uniform(1e-8, 1.0);
            const double density = unit(rng_);
            for (Index k = 0; k < N; ++k)
                if (unit(rng_) < density) x(k) += eps * gauss(rng_);
            break;
        }
        case Kind::SignFlip: {
            x = x_true_;
            const double p = unit(rng_);
            for (Index k = 0; k < N; ++k)
                if (unit(rng_) < p) x(k) = -x(k);
            break;
        }
        case Kind::DisjointSupport: {
            std::vector<Index> off;
            for (Index k = 0; k < N; ++k)
                if (x_true_(k) == 0.0) off.push_back(k);
            if (off.empty()) {
                // Dense x_true: zero out a random head and spike beyond it.
                const Index cut = index(rng_);
                for (Index k = cut; k < N; ++k) off.push_back(k);
            }
            spikes(x, off);
            break;
        }
        case Kind::Scaled:
            x = (10.0 * unit(rng_)) * x_true_;
            break;
    }
    return x;
}

// ---------------------------------------------------------------------------

namespace {

std::string status_token(DiscrepancyFailure f) {
    switch (f) {
        case DiscrepancyFailure::ResidualBelowLowerBound: return "infeasible_lower";
        case DiscrepancyFailure::ResidualAboveUpperBound: return "infeasible_upper";
        case DiscrepancyFailure::NoGridPoint: return "no_grid_point";
        case DiscrepancyFailure::BisectionExhausted: return "bisection_exhausted";
        case DiscrepancyFailure::NonPositiveDelta: return "nonpositive_delta";
    }
    return "error";
}

}  // namespace

std::optional<double> predicted_exponent(const ProblemFamily& family) {
    if (family.x_true.is_sparse()) return 1.0;
    const auto& tail = family.x_true.tail_model();
    const auto& sigma = family.op.sigma_model();
    if (tail && sigma) return holder_exponent(tail->mu_hat, sigma->nu_hat);
    return std::nullopt;
}

void summarize_rates(RateReport& report) {
    std::vector<double> order;
    std::map<double, std::pair<std::vector<double>, std::vector<double>>> cells;
    report.max_ratio = 0.0;
    for (const RateRow& row : report.rows) {
        if (row.status != "ok") continue;
        if (!cells.count(row.delta)) order.push_back(row.delta);
        cells[row.delta].first.push_back(row.l1_error);
        cells[row.delta].second.push_back(row.ratio);
        report.max_ratio = std::max(report.max_ratio, row.ratio);
    }
    report.deltas = order;
    report.mean_errors.clear();
    report.mean_ratios.clear();
    for (double d : order) {
        report.mean_errors.push_back(geometric_mean(cells[d].first));
        report.mean_ratios.push_back(geometric_mean(cells[d].second));
    }
    if (order.size() >= 2) {
        report.slope = fit_loglog(report.deltas, report.mean_errors).slope;
        report.ratio_slope = fit_loglog(report.deltas, report.mean_ratios).slope;
        report.pass = report.slope >= report.predicted - kSlopeTolerance;
        report.ratio_bounded = std::isfinite(report.max_ratio) && report.ratio_slope >= -kSlopeTolerance;
    } else {
        report.slope = report.ratio_slope = std::nan("");
        report.pass = report.ratio_bounded = false;
    }
}

RateReport rate_bound_check(const ProblemFamily& family, const std::vector<double>& delta_grid,
                            const std::vector<std::uint64_t>& seeds, const DiscrepancyConfig& config) {
    if (delta_grid.empty() || seeds.empty()) throw std::invalid_argument("rate_bound_check: empty grid or seeds");
    for (std::size_t i = 0; i < delta_grid.size(); ++i) {
        if (!(delta_grid[i] > 0.0)) throw std::invalid_argument("rate_bound_check: deltas must be positive");
        if (i > 0 && !(delta_grid[i] < delta_grid[i - 1]))
            throw std::invalid_argument("rate_bound_check: delta grid must be strictly decreasing");
    }

    const RateFunction rf(family.x_true, family.op);
    const double tail = family.x_true.analytic_tail().value;
    RateReport report;

    for (double delta : delta_grid) {
        const double phi_delta = rf(delta);
        for (std::uint64_t seed : seeds) {
            RateRow row;
            row.delta = delta;
            row.seed = seed;
            row.phi_delta = phi_delta;
            const RegProblem problem = synthesize(family.op, family.x_true, delta, seed);
            try {
                const ParameterChoice choice = alpha_strong_discrepancy(problem, config);
                row.alpha = choice.alpha;
                row.residual = choice.solution.residual_norm;
                row.l1_error = l1_norm(choice.solution.x - family.x_true.values()) + tail;
                row.ratio = row.l1_error / phi_delta;
            } catch (const DiscrepancyError& e) {
                row.status = status_token(e.failure());
            }
            report.rows.push_back(std::move(row));
        }
    }

    if (auto p = predicted_exponent(family)) {
        report.predicted = *p;
    } else {
        std::vector<double> phis;
        for (double d : delta_grid) phis.push_back(rf(d));
        report.predicted = fit_loglog(delta_grid, phis).slope;
    }
    summarize_rates(report);
    return report;
}

}  // namespace l1rates
