#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xfdiag/matrix.hpp"

namespace xfdiag {

struct BoostParams {
    double learning_rate = 0.1;
    int n_estimators = 100;
    int max_depth = 10;
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    std::uint64_t seed = 0;  // accepted for config uniformity; the fit is deterministic
};

struct RegNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf value (unscaled Newton step)
};

struct RegTree {
    std::vector<RegNode> nodes;
    double predict(std::span<const double> row) const;
};

// Multinomial log-loss boosting: raw scores start at class log-priors and one
// regression tree per class is added each iteration on (one-hot - softmax)
// residuals.  Splits use the Friedman MSE improvement, leaves take the
// (K-1)/K * sum(r) / sum(|r| (1-|r|)) step.
class GradientBoost {
public:
    BoostParams params;
    int n_classes = 0;
    int n_features = 0;
    std::vector<double> init_raw;              // per-class log prior
    std::vector<std::vector<RegTree>> stages;  // [iteration][class]
    std::vector<double> train_loss;            // [0] is the prior-only baseline

    std::vector<double> raw_scores(std::span<const double> row) const;
    std::vector<double> predict_proba(std::span<const double> row) const;
    int predict(std::span<const double> row) const;
};

GradientBoost gb_fit(const Matrix& X, const std::vector<int>& y, const BoostParams& params = {});

}  // namespace xfdiag
