#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace xfdiag {

struct KdeCurve {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;
    std::size_t n_points = 0;
};

// Parzen-Rosenblatt estimate with a Gaussian kernel:
// (1 / (n h)) * sum phi((x - x_i) / h).
double kde_estimate(std::span<const double> samples, double h, double x);

// Uniform grid over [min - 4h, max + 4h].
KdeCurve kde_curve(std::span<const double> samples, double h, std::size_t grid_size = 512);

// Like kde_curve but widens the grid so the step never exceeds h/2, keeping
// the trapezoidal integral within 1e-3 of 1 for any bandwidth.
KdeCurve kde_curve_auto(std::span<const double> samples, double h, std::size_t min_points = 512);

double trapezoid_integral(const KdeCurve& curve);

}  // namespace xfdiag
