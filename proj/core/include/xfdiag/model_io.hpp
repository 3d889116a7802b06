#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "xfdiag/forest.hpp"
#include "xfdiag/gboost.hpp"
#include "xfdiag/tree.hpp"

namespace xfdiag {

using ParamMap = std::map<std::string, double>;

// Uniform handle over the three classifier kinds ("dt", "rf", "gb").
struct AnyModel {
    std::variant<DecisionTree, RandomForest, GradientBoost> model;

    std::string kind() const;
    int n_classes() const;
    int predict(std::span<const double> row) const;
    std::vector<double> predict_proba(std::span<const double> row) const;
};

// Fits the named classifier with numeric hyperparameters; unknown keys are
// rejected.  Missing keys take the per-kind defaults.
AnyModel fit_classifier(const std::string& kind, const Matrix& X, const std::vector<int>& y,
                        const ParamMap& params = {});

nlohmann::json model_to_json(const AnyModel& model);
AnyModel model_from_json(const nlohmann::json& j);

void save_model(const AnyModel& model, const std::string& path);
AnyModel load_model(const std::string& path);

}  // namespace xfdiag
