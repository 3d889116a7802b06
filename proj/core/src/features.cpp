#include "xfdiag/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xfdiag {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676656;

std::vector<double> sorted_copy(Window w) {
    std::vector<double> s(w.begin(), w.end());
    std::sort(s.begin(), s.end());
    return s;
}

double quantile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= s.size()) return s.back();
    return s[lo] * (1.0 - frac) + s[lo + 1] * frac;
}

double mean_of(Window w) {
    double sum = 0.0;
    for (double v : w) sum += v;
    return sum / static_cast<double>(w.size());
}

}  // namespace

double quantile(Window w, double q) {
    if (w.empty()) throw std::invalid_argument("quantile: empty window");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: level outside [0,1]");
    return quantile_sorted(sorted_copy(w), q);
}

double change_quantile(Window w, double ql, double qh, ChangeQuantileMode mode) {
    if (w.size() < 2) throw std::invalid_argument("change_quantile: window too short");
    if (ql > qh) throw std::invalid_argument("change_quantile: ql > qh");
    const auto s = sorted_copy(w);
    return change_quantile_bounds(w, quantile_sorted(s, ql), quantile_sorted(s, qh), mode);
}

double change_quantile_bounds(Window w, double lo, double hi, ChangeQuantileMode mode) {
    if (w.size() < 2) throw std::invalid_argument("change_quantile: window too short");
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const bool in0 = w[i] >= lo && w[i] <= hi;
        const bool in1 = w[i + 1] >= lo && w[i + 1] <= hi;
        if (in0 && in1) {
            sum += std::abs(w[i + 1] - w[i]);
            ++pairs;
        }
    }
    if (mode == ChangeQuantileMode::eq1_literal)
        return sum / static_cast<double>(w.size());
    return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

double abs_energy(Window w) {
    double sum = 0.0;
    for (double v : w) sum += v * v;
    return sum;
}

double stddev(Window w) {
    const double mu = mean_of(w);
    double sum = 0.0;
    for (double v : w) sum += (v - mu) * (v - mu);
    return std::sqrt(sum / static_cast<double>(w.size()));
}

double sample_entropy_abs(Window w, int m, double r) {
    const auto n = static_cast<long>(w.size());
    if (m < 1) throw std::invalid_argument("sample_entropy: m must be >= 1");
    if (n <= m + 1) throw std::invalid_argument("sample_entropy: window too short");
    // Both template lengths use the same n-m start positions so the ratio of
    // the counts is a conditional probability.
    const long n_templates = n - m;
    long match_m = 0, match_m1 = 0;
    for (long i = 0; i < n_templates; ++i) {
        for (long j = i + 1; j < n_templates; ++j) {
            bool close = true;
            for (int k = 0; k < m; ++k) {
                if (std::abs(w[i + k] - w[j + k]) > r) {
                    close = false;
                    break;
                }
            }
            if (!close) continue;
            ++match_m;
            if (std::abs(w[i + m] - w[j + m]) <= r) ++match_m1;
        }
    }
    if (match_m == 0 || match_m1 == 0)
        return std::log(static_cast<double>(n_templates) * static_cast<double>(n_templates - 1));
    return -std::log(static_cast<double>(match_m1) / static_cast<double>(match_m));
}

double sample_entropy(Window w, int m, double r_mult) {
    return sample_entropy_abs(w, m, r_mult * stddev(w));
}

namespace {

double apen_phi(Window w, int m, double r) {
    const long n = static_cast<long>(w.size());
    const long n_templates = n - m + 1;
    double sum_log = 0.0;
    for (long i = 0; i < n_templates; ++i) {
        long count = 0;
        for (long j = 0; j < n_templates; ++j) {
            bool close = true;
            for (int k = 0; k < m; ++k) {
                if (std::abs(w[i + k] - w[j + k]) > r) {
                    close = false;
                    break;
                }
            }
            if (close) ++count;  // self-match included
        }
        sum_log += std::log(static_cast<double>(count) / static_cast<double>(n_templates));
    }
    return sum_log / static_cast<double>(n_templates);
}

}  // namespace

double approximate_entropy_abs(Window w, int m, double r) {
    const auto n = static_cast<long>(w.size());
    if (m < 1) throw std::invalid_argument("approximate_entropy: m must be >= 1");
    if (n <= m + 1) throw std::invalid_argument("approximate_entropy: window too short");
    return apen_phi(w, m, r) - apen_phi(w, m + 1, r);
}

double approximate_entropy(Window w, int m, double r_mult) {
    return approximate_entropy_abs(w, m, r_mult * stddev(w));
}

double binned_entropy(Window w, int bins) {
    if (w.empty()) throw std::invalid_argument("binned_entropy: empty window");
    if (bins < 1) throw std::invalid_argument("binned_entropy: bins must be >= 1");
    const auto [mn_it, mx_it] = std::minmax_element(w.begin(), w.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mn == mx) return 0.0;
    std::vector<long> hist(static_cast<std::size_t>(bins), 0);
    const double width = mx - mn;
    for (double v : w) {
        auto idx = static_cast<long>((v - mn) / width * bins);
        idx = std::min<long>(idx, bins - 1);
        ++hist[static_cast<std::size_t>(idx)];
    }
    double h = 0.0;
    for (long c : hist) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(w.size());
        h -= p * std::log(p);
    }
    return h;
}

BasicStats basic_stats(Window w) {
    if (w.empty()) throw std::invalid_argument("basic_stats: empty window");
    const auto n = static_cast<double>(w.size());
    BasicStats st;
    const auto s = sorted_copy(w);
    st.min = s.front();
    st.max = s.back();
    st.mean = mean_of(w);
    st.median = quantile_sorted(s, 0.5);
    st.q10 = quantile_sorted(s, 0.10);
    st.q25 = quantile_sorted(s, 0.25);
    st.q75 = quantile_sorted(s, 0.75);
    st.q90 = quantile_sorted(s, 0.90);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : w) {
        const double d = v - st.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    st.stddev = std::sqrt(m2);
    if (m2 > 0.0 && w.size() >= 3) st.skewness = m3 / std::pow(m2, 1.5);
    if (m2 > 0.0 && w.size() >= 4) st.kurtosis = m4 / (m2 * m2) - 3.0;

    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if ((w[i] > st.mean) != (w[i + 1] > st.mean)) ++st.mean_crossings;
    for (std::size_t i = 1; i + 1 < w.size(); ++i)
        if (w[i] > w[i - 1] && w[i] > w[i + 1]) ++st.num_peaks;
    return st;
}

std::vector<double> fft_magnitudes(Window w, int k) {
    const auto n = static_cast<long>(w.size());
    if (n < 2) throw std::invalid_argument("fft_magnitudes: window too short");
    if (k < 1 || k > n / 2) throw std::invalid_argument("fft_magnitudes: k out of range");
    std::vector<double> mags(static_cast<std::size_t>(k));
    for (int b = 0; b < k; ++b) {
        double re = 0.0, im = 0.0;
        const double step = kTwoPi * static_cast<double>(b) / static_cast<double>(n);
        for (long t = 0; t < n; ++t) {
            const double ang = step * static_cast<double>(t);
            re += w[t] * std::cos(ang);
            im -= w[t] * std::sin(ang);
        }
        mags[static_cast<std::size_t>(b)] = std::hypot(re, im);
    }
    return mags;
}

double harmonic_ratio(Window w) {
    const std::size_t len = std::min<std::size_t>(w.size(), kOneCycleSamples);
    if (len < 6) throw std::invalid_argument("harmonic_ratio: window too short");
    const auto mags = fft_magnitudes(w.first(len), 3);
    if (mags[1] <= 0.0) return 0.0;
    return mags[2] / mags[1];
}

std::vector<double> fft_coefficients(Window w, int k) {
    auto out = fft_magnitudes(w, k);
    out.push_back(harmonic_ratio(w));
    return out;
}

ArFit ar_coefficients(Window w, int order) {
    const auto n = static_cast<long>(w.size());
    if (order < 1) throw std::invalid_argument("ar_coefficients: order must be >= 1");
    if (n <= 2 * order) throw std::invalid_argument("ar_coefficients: window too short");

    const auto k = static_cast<std::size_t>(order);
    std::vector<double> g(k * k, 0.0), b(k, 0.0);
    for (long t = order; t < n; ++t) {
        for (std::size_t j = 0; j < k; ++j) {
            b[j] += w[t - 1 - static_cast<long>(j)] * w[t];
            for (std::size_t l = j; l < k; ++l)
                g[j * k + l] += w[t - 1 - static_cast<long>(j)] * w[t - 1 - static_cast<long>(l)];
        }
    }
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < j; ++l) g[j * k + l] = g[l * k + j];

    double scale = 0.0;
    for (std::size_t j = 0; j < k; ++j) scale = std::max(scale, std::abs(g[j * k + j]));

    ArFit fit;
    fit.coeffs.assign(k, 0.0);
    if (scale == 0.0) {
        fit.degenerate = true;
        return fit;
    }

    // Gaussian elimination with partial pivoting on the normal equations
    std::vector<double> a = g, rhs = b;
    std::vector<std::size_t> perm(k);
    for (std::size_t j = 0; j < k; ++j) perm[j] = j;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r2 = col + 1; r2 < k; ++r2)
            if (std::abs(a[r2 * k + col]) > std::abs(a[piv * k + col])) piv = r2;
        if (std::abs(a[piv * k + col]) < 1e-12 * scale) {
            fit.degenerate = true;
            fit.coeffs.assign(k, 0.0);
            return fit;
        }
        if (piv != col) {
            for (std::size_t c2 = 0; c2 < k; ++c2) std::swap(a[piv * k + c2], a[col * k + c2]);
            std::swap(rhs[piv], rhs[col]);
        }
        for (std::size_t r2 = col + 1; r2 < k; ++r2) {
            const double f = a[r2 * k + col] / a[col * k + col];
            for (std::size_t c2 = col; c2 < k; ++c2) a[r2 * k + c2] -= f * a[col * k + c2];
            rhs[r2] -= f * rhs[col];
        }
    }
    for (std::size_t col = k; col-- > 0;) {
        double v = rhs[col];
        for (std::size_t c2 = col + 1; c2 < k; ++c2) v -= a[col * k + c2] * fit.coeffs[c2];
        fit.coeffs[col] = v / a[col * k + col];
    }
    return fit;
}

DwtResult dwt_coefficients(Window w, int levels) {
    if (levels < 1) throw std::invalid_argument("dwt_coefficients: levels must be >= 1");
    const std::size_t n = w.size();
    std::size_t padded = 1;
    while (padded < n) padded <<= 1;
    if (n < (std::size_t{1} << levels))
        throw std::invalid_argument("dwt_coefficients: levels too deep for window");

    std::vector<double> cur(w.begin(), w.end());
    cur.resize(padded, 0.0);

    DwtResult out;
    constexpr double kInvSqrt2 = 0.70710678118654752440084436210;
    for (int lvl = 0; lvl < levels; ++lvl) {
        const std::size_t half = cur.size() / 2;
        std::vector<double> approx(half), detail(half);
        for (std::size_t i = 0; i < half; ++i) {
            approx[i] = (cur[2 * i] + cur[2 * i + 1]) * kInvSqrt2;
            detail[i] = (cur[2 * i] - cur[2 * i + 1]) * kInvSqrt2;
        }
        double e = 0.0;
        for (double d : detail) e += d * d;
        out.detail_energy.push_back(e);
        cur = std::move(approx);
    }
    out.approx.assign(8, 0.0);
    for (std::size_t i = 0; i < std::min<std::size_t>(8, cur.size()); ++i) out.approx[i] = cur[i];
    return out;
}

}  // namespace xfdiag
