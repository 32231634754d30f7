#include "fracdt/stats.hpp"

#include "fracdt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracdt {

double ls_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("slope fit needs at least two paired samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw Error("slope fit over a degenerate abscissa");
    return sxy / sxx;
}

double loglog_slope(std::span<const double> x, std::span<const double> y, double keep) {
    const std::size_t n = x.size();
    auto trim = static_cast<std::size_t>(std::floor(0.5 * (1.0 - keep) * static_cast<double>(n)));
    if (n - 2 * trim < 2) trim = 0;
    std::vector<double> lx, ly;
    for (std::size_t i = trim; i < n - trim; ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    return ls_slope(lx, ly);
}

double spread(std::span<const double> values) {
    if (values.empty()) return 1.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi == 0.0) return 1.0;
    if (*lo <= 0.0) return std::numeric_limits<double>::infinity();
    return *hi / *lo;
}

std::vector<double> geometric_sweep(double first, double last, int count) {
    if (count < 2) return {first};
    std::vector<double> out(static_cast<std::size_t>(count));
    const double step = std::log(last / first) / (count - 1);
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first * std::exp(step * i);
    out.back() = last;
    return out;
}

}  // namespace fracdt
