#include "xfdiag/gboost.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace xfdiag {

namespace {

struct RegSplit {
    int feature = -1;
    double threshold = 0.0;
    double improvement = 0.0;
};

RegSplit reg_best_split(const Matrix& X, const std::vector<double>& target,
                        const std::vector<std::size_t>& idx, int min_samples_leaf) {
    RegSplit best;
    const std::size_t n = idx.size();
    if (n < 2) return best;

    double sum_total = 0.0;
    for (auto i : idx) sum_total += target[i];
    const double total = static_cast<double>(n);
    const double min_leaf = static_cast<double>(min_samples_leaf);

    std::vector<std::pair<double, double>> vals(n);  // (feature value, target)
    for (std::size_t f = 0; f < X.cols; ++f) {
        for (std::size_t k = 0; k < n; ++k) vals[k] = {X.at(idx[k], f), target[idx[k]]};
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (vals.front().first == vals.back().first) continue;

        double sum_left = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            sum_left += vals[k].second;
            if (vals[k].first == vals[k + 1].first) continue;
            const double nl = static_cast<double>(k + 1);
            const double nr = total - nl;
            if (nl < min_leaf || nr < min_leaf) continue;

            const double diff = sum_left / nl - (sum_total - sum_left) / nr;
            const double improvement = (nl * nr / total) * diff * diff;
            if (improvement > best.improvement) {
                double thr = vals[k].first + 0.5 * (vals[k + 1].first - vals[k].first);
                if (thr >= vals[k + 1].first) thr = vals[k].first;
                best = {static_cast<int>(f), thr, improvement};
            }
        }
    }
    return best;
}

struct RegBuilder {
    const Matrix& X;
    const std::vector<double>& target;
    const BoostParams& params;
    double leaf_scale;  // (K-1)/K
    std::vector<RegNode>& nodes;

    double leaf_value(const std::vector<std::size_t>& idx) const {
        double num = 0.0;
        double den = 0.0;
        for (auto i : idx) {
            const double r = target[i];
            num += r;
            den += std::abs(r) * (1.0 - std::abs(r));
        }
        if (den < 1e-150) return 0.0;
        return leaf_scale * num / den;
    }

    int build(std::vector<std::size_t>& idx, int depth) {
        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();

        const bool depth_ok = params.max_depth < 0 || depth < params.max_depth;
        RegSplit split;
        if (depth_ok && idx.size() >= static_cast<std::size_t>(params.min_samples_split))
            split = reg_best_split(X, target, idx, params.min_samples_leaf);

        if (split.feature < 0 || split.improvement <= 0.0) {
            nodes[static_cast<std::size_t>(node_id)].value = leaf_value(idx);
            return node_id;
        }

        std::vector<std::size_t> left_idx;
        std::vector<std::size_t> right_idx;
        for (auto i : idx) {
            if (X.at(i, static_cast<std::size_t>(split.feature)) <= split.threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();

        nodes[static_cast<std::size_t>(node_id)].feature = split.feature;
        nodes[static_cast<std::size_t>(node_id)].threshold = split.threshold;
        const int l = build(left_idx, depth + 1);
        const int r = build(right_idx, depth + 1);
        nodes[static_cast<std::size_t>(node_id)].left = l;
        nodes[static_cast<std::size_t>(node_id)].right = r;
        return node_id;
    }
};

RegTree reg_fit(const Matrix& X, const std::vector<double>& target, const BoostParams& params,
                double leaf_scale) {
    RegTree tree;
    std::vector<std::size_t> idx(X.rows);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    RegBuilder builder{X, target, params, leaf_scale, tree.nodes};
    builder.build(idx, 0);
    return tree;
}

void softmax_row(std::span<const double> raw, std::span<double> out) {
    double hi = raw[0];
    for (double v : raw) hi = std::max(hi, v);
    double total = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        out[k] = std::exp(raw[k] - hi);
        total += out[k];
    }
    for (auto& v : out) v /= total;
}

}  // namespace

double RegTree::predict(std::span<const double> row) const {
    int cur = 0;
    while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(cur)];
        cur = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(cur)].value;
}

std::vector<double> GradientBoost::raw_scores(std::span<const double> row) const {
    std::vector<double> raw = init_raw;
    for (const auto& stage : stages)
        for (std::size_t k = 0; k < stage.size(); ++k)
            raw[k] += params.learning_rate * stage[k].predict(row);
    return raw;
}

std::vector<double> GradientBoost::predict_proba(std::span<const double> row) const {
    const auto raw = raw_scores(row);
    std::vector<double> proba(raw.size());
    softmax_row(raw, proba);
    return proba;
}

int GradientBoost::predict(std::span<const double> row) const {
    const auto raw = raw_scores(row);
    std::size_t best = 0;
    for (std::size_t k = 1; k < raw.size(); ++k)
        if (raw[k] > raw[best]) best = k;
    return static_cast<int>(best);
}

GradientBoost gb_fit(const Matrix& X, const std::vector<int>& y, const BoostParams& params) {
    if (params.n_estimators < 0) throw std::invalid_argument("gb_fit: negative n_estimators");
    if (params.learning_rate <= 0.0) throw std::invalid_argument("gb_fit: learning_rate must be > 0");
    if (X.rows != y.size()) throw std::invalid_argument("gb_fit: X/y size mismatch");
    if (X.rows == 0 || X.cols == 0) throw std::invalid_argument("gb_fit: empty dataset");

    GradientBoost model;
    model.params = params;
    model.n_features = static_cast<int>(X.cols);
    int n_classes = 0;
    for (int label : y) {
        if (label < 0) throw std::invalid_argument("gb_fit: negative label");
        n_classes = std::max(n_classes, label + 1);
    }
    model.n_classes = n_classes;

    const std::size_t n = X.rows;
    const auto nk = static_cast<std::size_t>(n_classes);

    std::vector<double> prior(nk, 0.0);
    for (int label : y) prior[static_cast<std::size_t>(label)] += 1.0;
    model.init_raw.resize(nk);
    for (std::size_t k = 0; k < nk; ++k)
        model.init_raw[k] = std::log(std::max(prior[k] / static_cast<double>(n), 1e-12));

    if (n_classes < 2) {
        model.train_loss = {0.0};
        return model;
    }

    // raw[i*K + k], prob likewise
    std::vector<double> raw(n * nk);
    for (std::size_t i = 0; i < n; ++i)
        std::copy(model.init_raw.begin(), model.init_raw.end(), raw.begin() + i * nk);
    std::vector<double> prob(n * nk);

    auto refresh_probs = [&] {
        for (std::size_t i = 0; i < n; ++i)
            softmax_row(std::span(raw).subspan(i * nk, nk), std::span(prob).subspan(i * nk, nk));
    };
    auto mean_loss = [&] {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            total -= std::log(std::max(prob[i * nk + static_cast<std::size_t>(y[i])], 1e-300));
        return total / static_cast<double>(n);
    };

    refresh_probs();
    model.train_loss.push_back(mean_loss());

    const double leaf_scale = static_cast<double>(n_classes - 1) / static_cast<double>(n_classes);
    for (int m = 0; m < params.n_estimators; ++m) {
        std::vector<std::future<RegTree>> futs;
        futs.reserve(nk);
        for (std::size_t k = 0; k < nk; ++k) {
            futs.push_back(std::async(std::launch::async, [&, k] {
                std::vector<double> residual(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double target = static_cast<std::size_t>(y[i]) == k ? 1.0 : 0.0;
                    residual[i] = target - prob[i * nk + k];
                }
                return reg_fit(X, residual, params, leaf_scale);
            }));
        }
        std::vector<RegTree> stage;
        stage.reserve(nk);
        for (auto& f : futs) stage.push_back(f.get());
        for (std::size_t k = 0; k < nk; ++k)
            for (std::size_t i = 0; i < n; ++i)
                raw[i * nk + k] += params.learning_rate * stage[k].predict(X.row(i));
        model.stages.push_back(std::move(stage));
        refresh_probs();
        model.train_loss.push_back(mean_loss());
    }
    return model;
}

}  // namespace xfdiag
