#include "l1rates/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace l1rates {

std::vector<double> log_space(double a, double b, int n) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("log_space: endpoints must be positive");
    if (n < 2) throw std::invalid_argument("log_space: need at least two points");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_loglog: values must be positive");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog: abscissae are all equal");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

double geometric_mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("geometric_mean: empty input");
    double s = 0.0;
    for (double x : v) s += std::log(x);
    return std::exp(s / static_cast<double>(v.size()));
}

}  // namespace l1rates
