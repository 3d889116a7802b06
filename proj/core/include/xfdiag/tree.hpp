#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xfdiag/matrix.hpp"

namespace xfdiag {

struct TreeParams {
    int max_depth = -1;  // -1 means unbounded
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    int max_features = 0;  // 0 means all features, else a per-node random subset
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double impurity = 0.0;
    std::vector<double> counts;  // per-class sample counts reaching this node
};

struct SplitResult {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

double gini_impurity(std::span<const double> class_counts);

// Exhaustive search over midpoints of consecutive distinct values.  Ties keep
// the lowest feature index, then the lowest threshold.
SplitResult best_split(const Matrix& X, const std::vector<int>& y,
                       const std::vector<std::size_t>& idx, int n_classes,
                       const std::vector<int>& features, int min_samples_leaf = 1);

class DecisionTree {
public:
    std::vector<TreeNode> nodes;  // preorder; nodes[0] is the root
    int n_classes = 0;
    int n_features = 0;
    TreeParams params;
    std::vector<double> importances;  // normalized to sum 1 when any split exists

    int predict(std::span<const double> row) const;
    std::vector<double> predict_proba(std::span<const double> row) const;
    int leaf_index(std::span<const double> row) const;
    std::size_t n_leaves() const;
    int depth() const;
};

DecisionTree dt_fit(const Matrix& X, const std::vector<int>& y, const TreeParams& params = {},
                    const std::vector<std::size_t>* sample_idx = nullptr);

}  // namespace xfdiag
