#include "xfdiag/forest.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "xfdiag/rng.hpp"

namespace xfdiag {

namespace {

int resolve_max_features(int requested, std::size_t n_features) {
    if (requested == 0) return 0;
    if (requested > 0) return std::min<int>(requested, static_cast<int>(n_features));
    const auto root = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features))));
    return std::max(1, root);
}

}  // namespace

RandomForest rf_fit(const Matrix& X, const std::vector<int>& y, const ForestParams& params) {
    if (params.n_estimators <= 0) throw std::invalid_argument("rf_fit: n_estimators must be > 0");
    if (X.rows != y.size()) throw std::invalid_argument("rf_fit: X/y size mismatch");
    if (X.rows == 0 || X.cols == 0) throw std::invalid_argument("rf_fit: empty dataset");

    RandomForest forest;
    forest.params = params;
    forest.n_features = static_cast<int>(X.cols);
    forest.trees.resize(static_cast<std::size_t>(params.n_estimators));

    TreeParams base;
    base.max_depth = params.max_depth;
    base.min_samples_leaf = params.min_samples_leaf;
    base.min_samples_split = params.min_samples_split;
    base.max_features = resolve_max_features(params.max_features, X.cols);

    auto fit_one = [&](int t) {
        std::vector<std::size_t> idx(X.rows);
        if (params.bootstrap) {
            CounterRng boot(derive_seed(params.seed, static_cast<std::uint64_t>(2 * t)));
            for (auto& i : idx) i = static_cast<std::size_t>(boot.next_below(X.rows));
        } else {
            std::iota(idx.begin(), idx.end(), std::size_t{0});
        }
        TreeParams tp = base;
        tp.seed = derive_seed(params.seed, static_cast<std::uint64_t>(2 * t + 1));
        forest.trees[static_cast<std::size_t>(t)] = dt_fit(X, y, tp, &idx);
    };

    unsigned workers = params.n_threads > 0 ? static_cast<unsigned>(params.n_threads)
                                            : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(params.n_estimators)));
    if (workers == 1) {
        for (int t = 0; t < params.n_estimators; ++t) fit_one(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::future<void>> futs;
        futs.reserve(workers);
        for (unsigned wi = 0; wi < workers; ++wi) {
            futs.push_back(std::async(std::launch::async, [&] {
                for (int t = next.fetch_add(1); t < params.n_estimators; t = next.fetch_add(1))
                    fit_one(t);
            }));
        }
        for (auto& f : futs) f.get();
    }

    int n_classes = 0;
    for (const auto& tree : forest.trees) n_classes = std::max(n_classes, tree.n_classes);
    forest.n_classes = n_classes;
    return forest;
}

int RandomForest::predict(std::span<const double> row) const {
    std::vector<int> votes(static_cast<std::size_t>(n_classes), 0);
    for (const auto& tree : trees) ++votes[static_cast<std::size_t>(tree.predict(row))];
    std::size_t best = 0;
    for (std::size_t k = 1; k < votes.size(); ++k)
        if (votes[k] > votes[best]) best = k;
    return static_cast<int>(best);
}

std::vector<double> RandomForest::predict_proba(std::span<const double> row) const {
    std::vector<double> proba(static_cast<std::size_t>(n_classes), 0.0);
    for (const auto& tree : trees) proba[static_cast<std::size_t>(tree.predict(row))] += 1.0;
    for (double& v : proba) v /= static_cast<double>(trees.size());
    return proba;
}

std::vector<double> RandomForest::feature_importance() const {
    std::vector<double> acc(static_cast<std::size_t>(n_features), 0.0);
    for (const auto& tree : trees)
        for (std::size_t f = 0; f < acc.size(); ++f) acc[f] += tree.importances[f];
    const double total = std::accumulate(acc.begin(), acc.end(), 0.0);
    if (total > 0)
        for (double& v : acc) v /= total;
    return acc;
}

std::vector<RankedFeature> rank_features(const Matrix& X, const std::vector<int>& y,
                                         const std::vector<std::string>& names,
                                         int n_estimators, std::uint64_t seed) {
    if (names.size() != X.cols) throw std::invalid_argument("rank_features: name count mismatch");
    ForestParams params;
    params.n_estimators = n_estimators;
    params.seed = seed;
    const auto importance = rf_fit(X, y, params).feature_importance();

    std::vector<RankedFeature> ranked(X.cols);
    for (std::size_t f = 0; f < X.cols; ++f)
        ranked[f] = {names[f], static_cast<int>(f), importance[f]};
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.importance != b.importance) return a.importance > b.importance;
        return a.name < b.name;
    });
    return ranked;
}

}  // namespace xfdiag
