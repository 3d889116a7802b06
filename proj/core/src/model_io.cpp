#include "xfdiag/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace xfdiag {

namespace {

double get_param(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void check_keys(const ParamMap& params, std::initializer_list<const char*> allowed,
                const std::string& kind) {
    for (const auto& [key, value] : params) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw std::invalid_argument("fit_classifier: unknown " + kind + " param: " + key);
    }
}

nlohmann::json tree_nodes_json(const DecisionTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : tree.nodes)
        nodes.push_back({{"f", nd.feature},
                         {"t", nd.threshold},
                         {"l", nd.left},
                         {"r", nd.right},
                         {"imp", nd.impurity},
                         {"c", nd.counts}});
    return nodes;
}

nlohmann::json tree_to_json(const DecisionTree& tree) {
    return {{"n_classes", tree.n_classes},
            {"n_features", tree.n_features},
            {"params",
             {{"max_depth", tree.params.max_depth},
              {"min_samples_leaf", tree.params.min_samples_leaf},
              {"min_samples_split", tree.params.min_samples_split},
              {"max_features", tree.params.max_features},
              {"seed", tree.params.seed}}},
            {"importances", tree.importances},
            {"nodes", tree_nodes_json(tree)}};
}

DecisionTree tree_from_json(const nlohmann::json& j) {
    DecisionTree tree;
    tree.n_classes = j.at("n_classes").get<int>();
    tree.n_features = j.at("n_features").get<int>();
    const auto& p = j.at("params");
    tree.params.max_depth = p.at("max_depth").get<int>();
    tree.params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
    tree.params.min_samples_split = p.at("min_samples_split").get<int>();
    tree.params.max_features = p.at("max_features").get<int>();
    tree.params.seed = p.at("seed").get<std::uint64_t>();
    tree.importances = j.at("importances").get<std::vector<double>>();
    for (const auto& n : j.at("nodes")) {
        TreeNode nd;
        nd.feature = n.at("f").get<int>();
        nd.threshold = n.at("t").get<double>();
        nd.left = n.at("l").get<int>();
        nd.right = n.at("r").get<int>();
        nd.impurity = n.at("imp").get<double>();
        nd.counts = n.at("c").get<std::vector<double>>();
        tree.nodes.push_back(std::move(nd));
    }
    return tree;
}

nlohmann::json forest_to_json(const RandomForest& forest) {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : forest.trees) trees.push_back(tree_to_json(tree));
    return {{"n_classes", forest.n_classes},
            {"n_features", forest.n_features},
            {"params",
             {{"n_estimators", forest.params.n_estimators},
              {"bootstrap", forest.params.bootstrap},
              {"max_depth", forest.params.max_depth},
              {"min_samples_leaf", forest.params.min_samples_leaf},
              {"min_samples_split", forest.params.min_samples_split},
              {"max_features", forest.params.max_features},
              {"seed", forest.params.seed}}},
            {"trees", trees}};
}

RandomForest forest_from_json(const nlohmann::json& j) {
    RandomForest forest;
    forest.n_classes = j.at("n_classes").get<int>();
    forest.n_features = j.at("n_features").get<int>();
    const auto& p = j.at("params");
    forest.params.n_estimators = p.at("n_estimators").get<int>();
    forest.params.bootstrap = p.at("bootstrap").get<bool>();
    forest.params.max_depth = p.at("max_depth").get<int>();
    forest.params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
    forest.params.min_samples_split = p.at("min_samples_split").get<int>();
    forest.params.max_features = p.at("max_features").get<int>();
    forest.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& t : j.at("trees")) forest.trees.push_back(tree_from_json(t));
    return forest;
}

nlohmann::json reg_tree_json(const RegTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : tree.nodes)
        nodes.push_back({{"f", nd.feature},
                         {"t", nd.threshold},
                         {"l", nd.left},
                         {"r", nd.right},
                         {"v", nd.value}});
    return {{"nodes", nodes}};
}

RegTree reg_tree_from_json(const nlohmann::json& j) {
    RegTree tree;
    for (const auto& n : j.at("nodes")) {
        RegNode nd;
        nd.feature = n.at("f").get<int>();
        nd.threshold = n.at("t").get<double>();
        nd.left = n.at("l").get<int>();
        nd.right = n.at("r").get<int>();
        nd.value = n.at("v").get<double>();
        tree.nodes.push_back(nd);
    }
    return tree;
}

nlohmann::json boost_to_json(const GradientBoost& model) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& stage : model.stages) {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& tree : stage) trees.push_back(reg_tree_json(tree));
        stages.push_back(std::move(trees));
    }
    return {{"n_classes", model.n_classes},
            {"n_features", model.n_features},
            {"params",
             {{"learning_rate", model.params.learning_rate},
              {"n_estimators", model.params.n_estimators},
              {"max_depth", model.params.max_depth},
              {"min_samples_leaf", model.params.min_samples_leaf},
              {"min_samples_split", model.params.min_samples_split},
              {"seed", model.params.seed}}},
            {"init_raw", model.init_raw},
            {"train_loss", model.train_loss},
            {"stages", stages}};
}

GradientBoost boost_from_json(const nlohmann::json& j) {
    GradientBoost model;
    model.n_classes = j.at("n_classes").get<int>();
    model.n_features = j.at("n_features").get<int>();
    const auto& p = j.at("params");
    model.params.learning_rate = p.at("learning_rate").get<double>();
    model.params.n_estimators = p.at("n_estimators").get<int>();
    model.params.max_depth = p.at("max_depth").get<int>();
    model.params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
    model.params.min_samples_split = p.at("min_samples_split").get<int>();
    model.params.seed = p.at("seed").get<std::uint64_t>();
    model.init_raw = j.at("init_raw").get<std::vector<double>>();
    model.train_loss = j.at("train_loss").get<std::vector<double>>();
    for (const auto& s : j.at("stages")) {
        std::vector<RegTree> stage;
        for (const auto& t : s) stage.push_back(reg_tree_from_json(t));
        model.stages.push_back(std::move(stage));
    }
    return model;
}

}  // namespace

std::string AnyModel::kind() const {
    switch (model.index()) {
        case 0: return "dt";
        case 1: return "rf";
        default: return "gb";
    }
}

int AnyModel::n_classes() const {
    return std::visit([](const auto& m) { return m.n_classes; }, model);
}

int AnyModel::predict(std::span<const double> row) const {
    return std::visit([row](const auto& m) { return m.predict(row); }, model);
}

std::vector<double> AnyModel::predict_proba(std::span<const double> row) const {
    return std::visit([row](const auto& m) { return m.predict_proba(row); }, model);
}

AnyModel fit_classifier(const std::string& kind, const Matrix& X, const std::vector<int>& y,
                        const ParamMap& params) {
    if (kind == "dt") {
        check_keys(params, {"max_depth", "min_samples_leaf", "min_samples_split", "max_features",
                            "seed"}, kind);
        TreeParams p;
        p.max_depth = static_cast<int>(get_param(params, "max_depth", p.max_depth));
        p.min_samples_leaf =
            static_cast<int>(get_param(params, "min_samples_leaf", p.min_samples_leaf));
        p.min_samples_split =
            static_cast<int>(get_param(params, "min_samples_split", p.min_samples_split));
        p.max_features = static_cast<int>(get_param(params, "max_features", p.max_features));
        p.seed = static_cast<std::uint64_t>(get_param(params, "seed", 0.0));
        return {dt_fit(X, y, p)};
    }
    if (kind == "rf") {
        check_keys(params, {"n_estimators", "bootstrap", "max_depth", "min_samples_leaf",
                            "min_samples_split", "max_features", "seed"}, kind);
        ForestParams p;
        p.n_estimators = static_cast<int>(get_param(params, "n_estimators", p.n_estimators));
        p.bootstrap = get_param(params, "bootstrap", 1.0) != 0.0;
        p.max_depth = static_cast<int>(get_param(params, "max_depth", p.max_depth));
        p.min_samples_leaf =
            static_cast<int>(get_param(params, "min_samples_leaf", p.min_samples_leaf));
        p.min_samples_split =
            static_cast<int>(get_param(params, "min_samples_split", p.min_samples_split));
        p.max_features = static_cast<int>(get_param(params, "max_features", p.max_features));
        p.seed = static_cast<std::uint64_t>(get_param(params, "seed", 0.0));
        return {rf_fit(X, y, p)};
    }
    if (kind == "gb") {
        check_keys(params, {"learning_rate", "n_estimators", "max_depth", "min_samples_leaf",
                            "min_samples_split", "seed"}, kind);
        BoostParams p;
        p.learning_rate = get_param(params, "learning_rate", p.learning_rate);
        p.n_estimators = static_cast<int>(get_param(params, "n_estimators", p.n_estimators));
        p.max_depth = static_cast<int>(get_param(params, "max_depth", p.max_depth));
        p.min_samples_leaf =
            static_cast<int>(get_param(params, "min_samples_leaf", p.min_samples_leaf));
        p.min_samples_split =
            static_cast<int>(get_param(params, "min_samples_split", p.min_samples_split));
        p.seed = static_cast<std::uint64_t>(get_param(params, "seed", 0.0));
        return {gb_fit(X, y, p)};
    }
    throw std::invalid_argument("fit_classifier: unknown kind: " + kind);
}

nlohmann::json model_to_json(const AnyModel& model) {
    nlohmann::json j = std::visit(
        [](const auto& m) -> nlohmann::json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DecisionTree>) return tree_to_json(m);
            else if constexpr (std::is_same_v<T, RandomForest>) return forest_to_json(m);
            else return boost_to_json(m);
        },
        model.model);
    j["kind"] = model.kind();
    return j;
}

AnyModel model_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "dt") return {tree_from_json(j)};
    if (kind == "rf") return {forest_from_json(j)};
    if (kind == "gb") return {boost_from_json(j)};
    throw std::invalid_argument("model_from_json: unknown kind: " + kind);
}

void save_model(const AnyModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open " + path);
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw std::runtime_error("save_model: write failed: " + path);
}

AnyModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

}  // namespace xfdiag
