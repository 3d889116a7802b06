#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xfdiag/tree.hpp"

namespace xfdiag {

struct ForestParams {
    int n_estimators = 100;
    bool bootstrap = true;
    int max_depth = -1;
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    int max_features = -1;  // -1 means floor(sqrt(n_features)), 0 means all
    std::uint64_t seed = 0;
    int n_threads = 0;  // 0 means hardware concurrency
};

class RandomForest {
public:
    std::vector<DecisionTree> trees;
    int n_classes = 0;
    int n_features = 0;
    ForestParams params;

    // Majority vote over trees; ties keep the lowest class index.
    int predict(std::span<const double> row) const;
    std::vector<double> predict_proba(std::span<const double> row) const;  // vote fractions
    std::vector<double> feature_importance() const;
};

RandomForest rf_fit(const Matrix& X, const std::vector<int>& y, const ForestParams& params = {});

struct RankedFeature {
    std::string name;
    int index = -1;
    double importance = 0.0;
};

// Importance ranking via a forest fit on the full table.  Descending
// importance; ties order by name ascending.
std::vector<RankedFeature> rank_features(const Matrix& X, const std::vector<int>& y,
                                         const std::vector<std::string>& names,
                                         int n_estimators = 200, std::uint64_t seed = 0);

}  // namespace xfdiag
