#pragma once

#include <vector>

namespace l1rates {

/// n points from a to b, equally spaced in log, endpoints exact. n >= 2.
std::vector<double> log_space(double a, double b, int n);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (log x_i, log y_i).
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

double geometric_mean(const std::vector<double>& v);

}  // namespace l1rates
