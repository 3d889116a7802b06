#include "xfdiag/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace xfdiag {

double kde_estimate(std::span<const double> samples, double h, double x) {
    if (samples.empty()) throw std::invalid_argument("kde_estimate: no samples");
    if (h <= 0.0) throw std::invalid_argument("kde_estimate: bandwidth must be > 0");
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double acc = 0.0;
    for (double xi : samples) {
        const double z = (x - xi) / h;
        acc += std::exp(-0.5 * z * z);
    }
    return norm * acc / (static_cast<double>(samples.size()) * h);
}

KdeCurve kde_curve(std::span<const double> samples, double h, std::size_t grid_size) {
    if (samples.empty()) throw std::invalid_argument("kde_curve: no samples");
    if (h <= 0.0) throw std::invalid_argument("kde_curve: bandwidth must be > 0");
    if (grid_size < 2) throw std::invalid_argument("kde_curve: grid_size must be >= 2");

    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it - 4.0 * h;
    const double hi = *hi_it + 4.0 * h;

    KdeCurve curve;
    curve.bandwidth = h;
    curve.n_points = grid_size;
    curve.grid.resize(grid_size);
    curve.density.resize(grid_size);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
        curve.grid[i] = lo + step * static_cast<double>(i);
        curve.density[i] = kde_estimate(samples, h, curve.grid[i]);
    }
    return curve;
}

KdeCurve kde_curve_auto(std::span<const double> samples, double h, std::size_t min_points) {
    if (samples.empty()) throw std::invalid_argument("kde_curve: no samples");
    if (h <= 0.0) throw std::invalid_argument("kde_curve: bandwidth must be > 0");
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double span = (*hi_it - *lo_it) + 8.0 * h;
    const auto needed =
        static_cast<std::size_t>(std::ceil(span / (0.5 * h))) + 1;
    return kde_curve(samples, h, std::max(min_points, needed));
}

double trapezoid_integral(const KdeCurve& curve) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < curve.grid.size(); ++i)
        acc += 0.5 * (curve.density[i] + curve.density[i + 1]) *
               (curve.grid[i + 1] - curve.grid[i]);
    return acc;
}

}  // namespace xfdiag
