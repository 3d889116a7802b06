#pragma once

#include <span>
#include <vector>

namespace xfdiag {

// One 60 Hz cycle at the 100 us sampling rate, rounded up to whole samples.
inline constexpr int kOneCycleSamples = 167;

using Window = std::span<const double>;

enum class ChangeQuantileMode { corridor_mean, eq1_literal };

// Quantile by linear interpolation between order statistics, q in [0, 1].
double quantile(Window w, double q);

// Mean absolute consecutive change restricted to a value corridor. The
// corridor is [quantile(ql), quantile(qh)]; a consecutive pair qualifies when
// both endpoints lie inside it.
//   corridor_mean: mean over qualifying pairs (0 if none qualify)
//   eq1_literal:   sum over qualifying pairs divided by n
double change_quantile(Window w, double ql, double qh,
                       ChangeQuantileMode mode = ChangeQuantileMode::corridor_mean);

// Same with an absolute corridor [lo, hi] instead of quantile levels.
double change_quantile_bounds(Window w, double lo, double hi,
                              ChangeQuantileMode mode = ChangeQuantileMode::corridor_mean);

// Sum of squared samples.
double abs_energy(Window w);

// Sample entropy -ln(A/B) over templates of length m and m+1, Chebyshev
// distance, self-matches excluded. If either count is zero the value is
// capped at ln((n-m)(n-m-1)), the largest resolvable value for the pair
// count. r_mult scales the window standard deviation.
double sample_entropy(Window w, int m = 2, double r_mult = 0.2);
double sample_entropy_abs(Window w, int m, double r);

// Approximate entropy Phi(m) - Phi(m+1), self-matches included.
double approximate_entropy(Window w, int m = 2, double r_mult = 0.2);
double approximate_entropy_abs(Window w, int m, double r);

// Shannon entropy of the sample histogram over `bins` equal-width bins
// spanning [min, max]; a constant window lands in one bin and scores 0.
double binned_entropy(Window w, int bins = 10);

struct BasicStats {
    double min = 0, max = 0, mean = 0, median = 0, stddev = 0;
    double skewness = 0, kurtosis = 0;  // 0 when stddev is 0
    double q10 = 0, q25 = 0, q75 = 0, q90 = 0;
    long mean_crossings = 0;  // sign changes of S - mean
    long num_peaks = 0;       // strict local maxima
};
BasicStats basic_stats(Window w);

// Magnitudes of DFT bins 0..k-1 of the window, with the second-harmonic to
// fundamental ratio of the leading one-cycle sub-window appended (k+1 values).
std::vector<double> fft_coefficients(Window w, int k = 10);
std::vector<double> fft_magnitudes(Window w, int k);
// |bin 2| / |bin 1| over the first min(n, kOneCycleSamples) samples.
double harmonic_ratio(Window w);

struct ArFit {
    std::vector<double> coeffs;  // lag 1..order
    bool degenerate = false;     // singular design; coeffs are zero
};
// Least-squares fit of S(t) on S(t-1..t-order), no intercept.
ArFit ar_coefficients(Window w, int order = 4);

struct DwtResult {
    std::vector<double> detail_energy;  // per level, level 1 first
    std::vector<double> approx;         // first 8 approximation coefficients
};
// Orthonormal Haar transform; the window is zero-padded to the next power of
// two. Requires n >= 2^levels.
DwtResult dwt_coefficients(Window w, int levels = 3);

// population standard deviation
double stddev(Window w);

}  // namespace xfdiag
