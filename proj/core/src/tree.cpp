#include "xfdiag/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "xfdiag/rng.hpp"

namespace xfdiag {

double gini_impurity(std::span<const double> class_counts) {
    double total = 0.0;
    double sumsq = 0.0;
    for (double c : class_counts) {
        if (c < 0.0) throw std::invalid_argument("gini_impurity: negative count");
        total += c;
        sumsq += c * c;
    }
    if (total <= 0.0) throw std::invalid_argument("gini_impurity: zero total");
    return 1.0 - sumsq / (total * total);
}

SplitResult best_split(const Matrix& X, const std::vector<int>& y,
                       const std::vector<std::size_t>& idx, int n_classes,
                       const std::vector<int>& features, int min_samples_leaf) {
    SplitResult best;
    const std::size_t n = idx.size();
    if (n < 2) return best;

    std::vector<double> parent_counts(static_cast<std::size_t>(n_classes), 0.0);
    for (auto i : idx) parent_counts[static_cast<std::size_t>(y[i])] += 1.0;
    const double parent_gini = gini_impurity(parent_counts);
    if (parent_gini <= 0.0) return best;

    double parent_sumsq = 0.0;
    for (double c : parent_counts) parent_sumsq += c * c;

    const double total = static_cast<double>(n);
    const double min_leaf = static_cast<double>(min_samples_leaf);
    std::vector<std::pair<double, int>> vals(n);
    std::vector<double> left_counts(parent_counts.size());

    for (int f : features) {
        for (std::size_t k = 0; k < n; ++k)
            vals[k] = {X.at(idx[k], static_cast<std::size_t>(f)), y[idx[k]]};
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (vals.front().first == vals.back().first) continue;

        std::fill(left_counts.begin(), left_counts.end(), 0.0);
        double left_sumsq = 0.0;
        double right_sumsq = parent_sumsq;

        for (std::size_t k = 0; k + 1 < n; ++k) {
            const auto cls = static_cast<std::size_t>(vals[k].second);
            const double lc = left_counts[cls];
            const double rc = parent_counts[cls] - lc;
            left_sumsq += 2.0 * lc + 1.0;
            right_sumsq -= 2.0 * rc - 1.0;
            left_counts[cls] = lc + 1.0;

            if (vals[k].first == vals[k + 1].first) continue;  // not a class boundary yet
            const double nl = static_cast<double>(k + 1);
            const double nr = total - nl;
            if (nl < min_leaf || nr < min_leaf) continue;

            const double gini_l = 1.0 - left_sumsq / (nl * nl);
            const double gini_r = 1.0 - right_sumsq / (nr * nr);
            const double gain = parent_gini - (nl / total) * gini_l - (nr / total) * gini_r;
            if (gain > best.gain) {
                double thr = vals[k].first + 0.5 * (vals[k + 1].first - vals[k].first);
                // midpoint of adjacent doubles can round up to the right value
                if (thr >= vals[k + 1].first) thr = vals[k].first;
                best = {f, thr, gain};
            }
        }
    }
    return best;
}

namespace {

struct TreeBuilder {
    const Matrix& X;
    const std::vector<int>& y;
    const TreeParams& params;
    int n_classes;
    double n_total;
    std::vector<TreeNode>& nodes;
    std::vector<double>& raw_importance;
    std::vector<int> all_features;
    CounterRng rng;
    bool subsample;

    std::vector<int> node_features() {
        if (!subsample) return all_features;
        std::vector<int> pool = all_features;
        const auto want = std::min<std::size_t>(static_cast<std::size_t>(params.max_features),
                                                pool.size());
        std::vector<int> chosen(want);
        for (std::size_t i = 0; i < want; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_below(pool.size() - i));
            std::swap(pool[i], pool[j]);
            chosen[i] = pool[i];
        }
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

    int build(std::vector<std::size_t>& idx, int depth) {
        const int node_id = static_cast<int>(nodes.size());
        {
            TreeNode node;
            node.counts.assign(static_cast<std::size_t>(n_classes), 0.0);
            for (auto i : idx) node.counts[static_cast<std::size_t>(y[i])] += 1.0;
            node.impurity = gini_impurity(node.counts);
            nodes.push_back(std::move(node));
        }
        const double impurity = nodes[static_cast<std::size_t>(node_id)].impurity;

        const bool depth_ok = params.max_depth < 0 || depth < params.max_depth;
        if (!depth_ok || impurity <= 0.0 ||
            idx.size() < static_cast<std::size_t>(params.min_samples_split))
            return node_id;

        const auto feats = node_features();
        const SplitResult split = best_split(X, y, idx, n_classes, feats, params.min_samples_leaf);
        if (split.feature < 0 || split.gain <= 0.0) return node_id;

        raw_importance[static_cast<std::size_t>(split.feature)] +=
            (static_cast<double>(idx.size()) / n_total) * split.gain;

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

        auto& node = nodes[static_cast<std::size_t>(node_id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        const int l = build(left_idx, depth + 1);
        const int r = build(right_idx, depth + 1);
        nodes[static_cast<std::size_t>(node_id)].left = l;
        nodes[static_cast<std::size_t>(node_id)].right = r;
        return node_id;
    }
};

int walk(const std::vector<TreeNode>& nodes, std::span<const double> row) {
    int cur = 0;
    while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(cur)];
        cur = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return cur;
}

}  // namespace

int DecisionTree::predict(std::span<const double> row) const {
    const auto& counts = nodes[static_cast<std::size_t>(walk(nodes, row))].counts;
    std::size_t best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k)
        if (counts[k] > counts[best]) best = k;
    return static_cast<int>(best);
}

std::vector<double> DecisionTree::predict_proba(std::span<const double> row) const {
    const auto& counts = nodes[static_cast<std::size_t>(walk(nodes, row))].counts;
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    std::vector<double> proba(counts.size(), 0.0);
    if (total > 0)
        for (std::size_t k = 0; k < counts.size(); ++k) proba[k] = counts[k] / total;
    return proba;
}

int DecisionTree::leaf_index(std::span<const double> row) const { return walk(nodes, row); }

std::size_t DecisionTree::n_leaves() const {
    std::size_t count = 0;
    for (const auto& nd : nodes)
        if (nd.feature < 0) ++count;
    return count;
}

int DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    int best = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        const auto& nd = nodes[static_cast<std::size_t>(id)];
        if (nd.feature < 0) {
            best = std::max(best, d);
        } else {
            stack.emplace_back(nd.left, d + 1);
            stack.emplace_back(nd.right, d + 1);
        }
    }
    return best;
}

DecisionTree dt_fit(const Matrix& X, const std::vector<int>& y, const TreeParams& params,
                    const std::vector<std::size_t>* sample_idx) {
    if (X.rows != y.size()) throw std::invalid_argument("dt_fit: X/y size mismatch");
    if (X.rows == 0 || X.cols == 0) throw std::invalid_argument("dt_fit: empty dataset");

    DecisionTree tree;
    tree.params = params;
    tree.n_features = static_cast<int>(X.cols);
    int n_classes = 0;
    for (int label : y) {
        if (label < 0) throw std::invalid_argument("dt_fit: negative label");
        n_classes = std::max(n_classes, label + 1);
    }
    tree.n_classes = n_classes;

    std::vector<std::size_t> idx;
    if (sample_idx) {
        idx = *sample_idx;
        for (auto i : idx)
            if (i >= X.rows) throw std::invalid_argument("dt_fit: sample index out of range");
    } else {
        idx.resize(X.rows);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
    }
    if (idx.empty()) throw std::invalid_argument("dt_fit: empty sample set");

    tree.importances.assign(X.cols, 0.0);
    std::vector<int> all_features(X.cols);
    std::iota(all_features.begin(), all_features.end(), 0);

    TreeBuilder builder{X,
                        y,
                        params,
                        n_classes,
                        static_cast<double>(idx.size()),
                        tree.nodes,
                        tree.importances,
                        std::move(all_features),
                        CounterRng(params.seed),
                        params.max_features > 0};
    builder.build(idx, 0);

    const double total = std::accumulate(tree.importances.begin(), tree.importances.end(), 0.0);
    if (total > 0)
        for (double& v : tree.importances) v /= total;
    return tree;
}

}  // namespace xfdiag
