#include "xfdiag/balance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xfdiag/rng.hpp"

namespace xfdiag {

namespace {

double sq_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// indices of the k nearest rows to `row`, excluding self_idx; distance ties
// resolve to the lower row index
std::vector<std::size_t> k_nearest(const Matrix& rows, std::span<const double> row,
                                   std::size_t self_idx, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(rows.rows);
    for (std::size_t i = 0; i < rows.rows; ++i) {
        if (i == self_idx) continue;
        dist.emplace_back(sq_distance(rows.row(i), row), i);
    }
    std::sort(dist.begin(), dist.end());
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k && i < dist.size(); ++i) out.push_back(dist[i].second);
    return out;
}

}  // namespace

SmoteResult smote(const Matrix& minority, int k, std::size_t n_synthetic, std::uint64_t seed) {
    if (minority.rows < 2) throw std::invalid_argument("smote: need at least 2 minority rows");
    if (k < 1) throw std::invalid_argument("smote: k must be >= 1");

    SmoteResult result;
    auto kk = static_cast<std::size_t>(k);
    if (kk > minority.rows - 1) {
        kk = minority.rows - 1;
        result.k_reduced = true;
    }

    std::vector<std::vector<std::size_t>> neighbors(minority.rows);
    for (std::size_t i = 0; i < minority.rows; ++i)
        neighbors[i] = k_nearest(minority, minority.row(i), i, kk);

    result.synthetic = Matrix(0, minority.cols);
    result.synthetic.values.reserve(n_synthetic * minority.cols);
    CounterRng rng(seed);
    std::vector<double> row(minority.cols);
    for (std::size_t s = 0; s < n_synthetic; ++s) {
        const std::size_t base = s % minority.rows;
        const auto& nb = neighbors[base];
        const std::size_t pick = nb[static_cast<std::size_t>(rng.next_below(nb.size()))];
        const double u = rng.next_uniform();
        const auto x = minority.row(base);
        const auto other = minority.row(pick);
        for (std::size_t c = 0; c < minority.cols; ++c) row[c] = x[c] + u * (other[c] - x[c]);
        result.synthetic.push_row(row);
    }
    return result;
}

std::vector<std::size_t> nearmiss(const Matrix& majority, const Matrix& minority,
                                  std::size_t n_keep, int n_neighbors) {
    if (n_keep > majority.rows) throw std::invalid_argument("nearmiss: n_keep exceeds majority count");
    if (minority.rows == 0) throw std::invalid_argument("nearmiss: empty minority set");
    if (n_neighbors < 1) throw std::invalid_argument("nearmiss: n_neighbors must be >= 1");

    const auto use = std::min<std::size_t>(static_cast<std::size_t>(n_neighbors), minority.rows);
    std::vector<std::pair<double, std::size_t>> scored(majority.rows);
    std::vector<double> dist(minority.rows);
    for (std::size_t i = 0; i < majority.rows; ++i) {
        const auto row = majority.row(i);
        for (std::size_t j = 0; j < minority.rows; ++j)
            dist[j] = std::sqrt(sq_distance(row, minority.row(j)));
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(use - 1),
                         dist.end());
        double mean = 0.0;
        for (std::size_t j = 0; j < use; ++j) mean += dist[j];
        scored[i] = {mean / static_cast<double>(use), i};
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::size_t> keep;
    keep.reserve(n_keep);
    for (std::size_t i = 0; i < n_keep; ++i) keep.push_back(scored[i].second);
    std::sort(keep.begin(), keep.end());
    return keep;
}

BalancedSet rebalance_binary(const Matrix& X, const std::vector<int>& labels, std::uint64_t seed,
                             std::size_t target_count, int smote_k) {
    if (X.rows != labels.size()) throw std::invalid_argument("rebalance_binary: size mismatch");
    if (X.rows == 0) throw std::invalid_argument("rebalance_binary: empty dataset");

    int lo = labels[0];
    int hi = labels[0];
    for (int label : labels) {
        lo = std::min(lo, label);
        hi = std::max(hi, label);
    }
    if (lo == hi) throw std::invalid_argument("rebalance_binary: single-class input");
    std::size_t count_lo = 0;
    for (int label : labels) {
        if (label != lo && label != hi)
            throw std::invalid_argument("rebalance_binary: more than two classes");
        if (label == lo) ++count_lo;
    }
    const std::size_t count_hi = labels.size() - count_lo;

    const int minority_label = count_lo <= count_hi ? lo : hi;
    const int majority_label = count_lo <= count_hi ? hi : lo;
    const std::size_t n_min = std::min(count_lo, count_hi);
    const std::size_t n_maj = std::max(count_lo, count_hi);

    std::vector<std::size_t> min_idx;
    std::vector<std::size_t> maj_idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == minority_label ? min_idx : maj_idx).push_back(i);

    std::size_t target = target_count > 0 ? target_count : (n_min + n_maj + 1) / 2;
    target = std::clamp(target, n_min, n_maj);

    const Matrix minority = X.take(min_idx);
    const Matrix majority = X.take(maj_idx);

    SmoteResult synth;
    synth.synthetic = Matrix(0, X.cols);
    if (target > n_min) synth = smote(minority, smote_k, target - n_min, derive_seed(seed, 0));
    const auto keep = nearmiss(majority, minority, target, 3);

    std::vector<bool> keep_mask(maj_idx.size(), false);
    for (auto i : keep) keep_mask[i] = true;

    BalancedSet out;
    out.X = Matrix(0, X.cols);
    out.target_count = target;
    out.smote_k_reduced = synth.k_reduced;
    std::size_t maj_pos = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == minority_label) {
            out.X.push_row(X.row(i));
            out.labels.push_back(minority_label);
            out.provenance.push_back(RowProvenance::original);
        } else {
            if (keep_mask[maj_pos]) {
                out.X.push_row(X.row(i));
                out.labels.push_back(majority_label);
                out.provenance.push_back(RowProvenance::retained);
            }
            ++maj_pos;
        }
    }
    for (std::size_t s = 0; s < synth.synthetic.rows; ++s) {
        out.X.push_row(synth.synthetic.row(s));
        out.labels.push_back(minority_label);
        out.provenance.push_back(RowProvenance::synthetic);
    }
    return out;
}

}  // namespace xfdiag
