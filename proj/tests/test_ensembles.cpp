#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "testdata.hpp"
#include "xfdiag/forest.hpp"
#include "xfdiag/gboost.hpp"
#include "xfdiag/matrix.hpp"
#include "xfdiag/tree.hpp"

using namespace xfdiag;

TEST_SUITE("ensembles") {

TEST_CASE("a single unbagged tree equals the plain tree") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(11, 75, 4, 3, 1.2, X, y);
    ForestParams fp;
    fp.n_estimators = 1;
    fp.bootstrap = false;
    fp.max_features = 0;
    const auto rf = rf_fit(X, y, fp);
    const auto dt = dt_fit(X, y);
    REQUIRE(rf.trees.size() == 1);
    const auto probes = testdata::uniform_matrix(99, 40, 4, -8.0, 8.0);
    for (std::size_t i = 0; i < X.rows; ++i) CHECK(rf.predict(X.row(i)) == dt.predict(X.row(i)));
    for (std::size_t i = 0; i < probes.rows; ++i)
        CHECK(rf.predict(probes.row(i)) == dt.predict(probes.row(i)));
}

TEST_CASE("forest training is deterministic in the seed") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(12, 60, 3, 3, 1.5, X, y);
    ForestParams fp;
    fp.n_estimators = 15;
    fp.seed = 77;
    const auto a = rf_fit(X, y, fp);
    const auto b = rf_fit(X, y, fp);
    const auto probes = testdata::uniform_matrix(98, 50, 3, -8.0, 8.0);
    for (std::size_t i = 0; i < probes.rows; ++i) {
        CHECK(a.predict(probes.row(i)) == b.predict(probes.row(i)));
        CHECK(a.predict_proba(probes.row(i)) == b.predict_proba(probes.row(i)));
    }
}

TEST_CASE("vote fractions are multiples of one over n_estimators") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(13, 50, 3, 2, 2.0, X, y);
    ForestParams fp;
    fp.n_estimators = 5;
    const auto rf = rf_fit(X, y, fp);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const auto p = rf.predict_proba(X.row(i));
        double sum = 0.0;
        for (double v : p) {
            sum += v;
            CHECK(std::round(v * 5.0) == doctest::Approx(v * 5.0));
        }
        CHECK(sum == doctest::Approx(1.0));
    }
}

TEST_CASE("forest importance is a distribution") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(14, 80, 5, 3, 1.0, X, y);
    ForestParams fp;
    fp.n_estimators = 20;
    const auto imp = rf_fit(X, y, fp).feature_importance();
    REQUIRE(imp.size() == 5);
    double sum = 0.0;
    for (double v : imp) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("ranking puts the informative feature first") {
    CounterRng rng(0xabc);
    Matrix X;
    std::vector<int> y;
    for (int i = 0; i < 120; ++i) {
        const int cls = i % 2;
        // column 1 carries the signal, 0 and 2 are noise, 3 and 4 are constant
        const double row[5] = {rng.next_uniform(),
                               cls == 0 ? rng.next_uniform() : 4.0 + rng.next_uniform(),
                               rng.next_uniform(), 0.0, 0.0};
        X.push_row(row);
        y.push_back(cls);
    }
    const auto ranked = rank_features(X, y, {"n0", "signal", "n1", "zzz", "aaa"}, 50, 3);
    REQUIRE(ranked.size() == 5);
    CHECK(ranked[0].name == "signal");
    CHECK(ranked[0].index == 1);
    CHECK(ranked[0].importance > 0.5);
    // the two constant columns never split, so their zero scores tie by name
    CHECK(ranked[3].name == "aaa");
    CHECK(ranked[4].name == "zzz");
    CHECK(ranked[3].importance == 0.0);
    CHECK(ranked[4].importance == 0.0);
}

TEST_CASE("ranking input validation") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(15, 20, 2, 2, 1.0, X, y);
    CHECK_THROWS_AS(rank_features(X, y, {"only-one"}, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(rf_fit(X, y, ForestParams{.n_estimators = 0}), std::invalid_argument);
    CHECK_THROWS_AS(rf_fit(Matrix{}, {}, ForestParams{}), std::invalid_argument);
    y.pop_back();
    CHECK_THROWS_AS(rf_fit(X, y, ForestParams{}), std::invalid_argument);
}

TEST_CASE("boosting loss never increases") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(16, 90, 4, 3, 2.0, X, y);
    BoostParams bp;
    bp.n_estimators = 40;
    bp.max_depth = 3;
    const auto gb = gb_fit(X, y, bp);
    REQUIRE(gb.train_loss.size() == 41);
    for (std::size_t i = 1; i < gb.train_loss.size(); ++i)
        CHECK(gb.train_loss[i] <= gb.train_loss[i - 1] + 1e-9);
    CHECK(gb.train_loss.back() < gb.train_loss.front());
}

TEST_CASE("boosting fits a separable problem") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(17, 60, 3, 3, 0.8, X, y);
    BoostParams bp;
    bp.n_estimators = 50;
    const auto gb = gb_fit(X, y, bp);
    for (std::size_t i = 0; i < X.rows; ++i) CHECK(gb.predict(X.row(i)) == y[i]);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const auto p = gb.predict_proba(X.row(i));
        CHECK(p.size() == 3);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
    }
}

TEST_CASE("a vanishing learning rate leaves the prior in charge") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(18, 61, 3, 3, 1.0, X, y);
    y[0] = y[1] = y[2] = 2;  // make class 2 the clear majority
    BoostParams bp;
    bp.n_estimators = 10;
    bp.learning_rate = 1e-12;
    const auto gb = gb_fit(X, y, bp);
    std::vector<int> counts(3, 0);
    for (int label : y) ++counts[static_cast<std::size_t>(label)];
    const int majority = static_cast<int>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    for (std::size_t i = 0; i < X.rows; ++i) CHECK(gb.predict(X.row(i)) == majority);
}

TEST_CASE("single-class training degenerates to the baseline") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(19, 30, 2, 1, 1.0, X, y);
    const auto gb = gb_fit(X, y, BoostParams{.n_estimators = 25});
    CHECK(gb.stages.empty());
    CHECK(gb.train_loss == std::vector<double>{0.0});
    for (std::size_t i = 0; i < X.rows; ++i) CHECK(gb.predict(X.row(i)) == 0);
}

TEST_CASE("boosting is deterministic") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(20, 70, 3, 3, 1.5, X, y);
    BoostParams bp;
    bp.n_estimators = 20;
    bp.max_depth = 4;
    const auto a = gb_fit(X, y, bp);
    const auto b = gb_fit(X, y, bp);
    CHECK(a.train_loss == b.train_loss);
    const auto probes = testdata::uniform_matrix(97, 40, 3, -8.0, 8.0);
    for (std::size_t i = 0; i < probes.rows; ++i) {
        CHECK(a.predict(probes.row(i)) == b.predict(probes.row(i)));
        CHECK(a.raw_scores(probes.row(i)) == b.raw_scores(probes.row(i)));
    }
}

TEST_CASE("boosting input validation") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(21, 20, 2, 2, 1.0, X, y);
    CHECK_THROWS_AS(gb_fit(X, y, BoostParams{.n_estimators = -1}), std::invalid_argument);
    CHECK_THROWS_AS(gb_fit(X, y, BoostParams{.learning_rate = 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(gb_fit(Matrix{}, {}, BoostParams{}), std::invalid_argument);
    auto bad = y;
    bad[0] = -3;
    CHECK_THROWS_AS(gb_fit(X, bad, BoostParams{}), std::invalid_argument);
    y.pop_back();
    CHECK_THROWS_AS(gb_fit(X, y, BoostParams{}), std::invalid_argument);
}

}  // TEST_SUITE
