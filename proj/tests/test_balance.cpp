#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "testdata.hpp"
#include "xfdiag/balance.hpp"
#include "xfdiag/matrix.hpp"
#include "xfdiag/rng.hpp"

using namespace xfdiag;

namespace {

Matrix rows2(std::initializer_list<std::pair<double, double>> pts) {
    Matrix m;
    for (auto [a, b] : pts) {
        const double row[2] = {a, b};
        m.push_row(row);
    }
    return m;
}

}  // namespace

TEST_SUITE("balance") {

TEST_CASE("interpolating identical points reproduces them") {
    Matrix m;
    for (int i = 0; i < 5; ++i) {
        const double row[3] = {1.5, -2.0, 7.0};
        m.push_row(row);
    }
    const auto r = smote(m, 3, 9, 42);
    REQUIRE(r.synthetic.rows == 9);
    for (std::size_t i = 0; i < r.synthetic.rows; ++i) {
        CHECK(r.synthetic.at(i, 0) == 1.5);
        CHECK(r.synthetic.at(i, 1) == -2.0);
        CHECK(r.synthetic.at(i, 2) == 7.0);
    }
    CHECK(!r.k_reduced);
}

TEST_CASE("two points only ever produce the connecting segment") {
    const auto m = rows2({{0.0, 0.0}, {1.0, 2.0}});
    const auto r = smote(m, 1, 25, 7);
    for (std::size_t i = 0; i < r.synthetic.rows; ++i) {
        const double x = r.synthetic.at(i, 0);
        const double y = r.synthetic.at(i, 1);
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        CHECK(y == doctest::Approx(2.0 * x).epsilon(1e-12));
    }
}

TEST_CASE("oversized k shrinks and reports it") {
    const auto m = rows2({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    CHECK(smote(m, 5, 4, 0).k_reduced);
    CHECK(!smote(m, 2, 4, 0).k_reduced);
    CHECK_THROWS_AS(smote(rows2({{1.0, 1.0}}), 1, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(smote(m, 0, 2, 0), std::invalid_argument);
}

TEST_CASE("synthetic rows stay inside the minority bounding box") {
    const auto m = testdata::uniform_matrix(61, 12, 4, -3.0, 5.0);
    const auto r = smote(m, 4, 50, 9);
    REQUIRE(r.synthetic.rows == 50);
    for (std::size_t c = 0; c < m.cols; ++c) {
        double lo = m.at(0, c), hi = m.at(0, c);
        for (std::size_t i = 0; i < m.rows; ++i) {
            lo = std::min(lo, m.at(i, c));
            hi = std::max(hi, m.at(i, c));
        }
        for (std::size_t i = 0; i < r.synthetic.rows; ++i) {
            CHECK(r.synthetic.at(i, c) >= lo - 1e-12);
            CHECK(r.synthetic.at(i, c) <= hi + 1e-12);
        }
    }
    // deterministic in the seed
    const auto again = smote(m, 4, 50, 9);
    CHECK(r.synthetic.values == again.synthetic.values);
}

TEST_CASE("undersampling keeps the rows closest to the minority") {
    const auto minority = rows2({{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}});
    const auto majority = rows2({{10.0, 10.0}, {0.2, 0.1}, {11.0, 9.0}, {0.1, 0.3}, {12.0, 12.0},
                                 {0.3, 0.2}});
    const auto keep = nearmiss(majority, minority, 3);
    CHECK(keep == std::vector<std::size_t>{1, 3, 5});
}

TEST_CASE("a zero-distance majority row always survives") {
    const auto minority = rows2({{1.0, 1.0}, {2.0, 2.0}});
    const auto majority = rows2({{9.0, 9.0}, {1.0, 1.0}, {8.0, 8.0}});
    const auto keep = nearmiss(majority, minority, 1);
    CHECK(keep == std::vector<std::size_t>{1});
}

TEST_CASE("undersampling agrees with a brute-force rescore") {
    const auto minority = testdata::uniform_matrix(71, 8, 3, -2.0, 2.0);
    const auto majority = testdata::uniform_matrix(72, 10, 3, -2.0, 2.0);
    const int n_neighbors = 3;
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < majority.rows; ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < minority.rows; ++j) {
            double acc = 0.0;
            for (std::size_t c = 0; c < 3; ++c) {
                const double diff = majority.at(i, c) - minority.at(j, c);
                acc += diff * diff;
            }
            d.push_back(std::sqrt(acc));
        }
        std::sort(d.begin(), d.end());
        scored.push_back({(d[0] + d[1] + d[2]) / 3.0, i});
    }
    std::sort(scored.begin(), scored.end());
    for (std::size_t n_keep : {std::size_t{1}, std::size_t{4}, std::size_t{10}}) {
        std::vector<std::size_t> want;
        for (std::size_t i = 0; i < n_keep; ++i) want.push_back(scored[i].second);
        std::sort(want.begin(), want.end());
        CHECK(nearmiss(majority, minority, n_keep, n_neighbors) == want);
    }
}

TEST_CASE("undersampling input validation") {
    const auto minority = rows2({{0.0, 0.0}});
    const auto majority = rows2({{1.0, 1.0}, {2.0, 2.0}});
    CHECK_THROWS_AS(nearmiss(majority, minority, 3), std::invalid_argument);
    CHECK_THROWS_AS(nearmiss(majority, Matrix{}, 1), std::invalid_argument);
    CHECK_THROWS_AS(nearmiss(majority, minority, 1, 0), std::invalid_argument);
}

TEST_CASE("rebalance lands both classes on the target") {
    CounterRng rng(88);
    Matrix X;
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) {
        const bool minority = i % 10 < 3;  // 6 minority, 14 majority
        const double row[2] = {minority ? rng.next_uniform() : 5.0 + rng.next_uniform(),
                               rng.next_uniform()};
        X.push_row(row);
        labels.push_back(minority ? 1 : 0);
    }
    const auto r = rebalance_binary(X, labels, 5);
    CHECK(r.target_count == 10);  // mean of 6 and 14
    CHECK(r.labels.size() == 20);
    CHECK(std::count(r.labels.begin(), r.labels.end(), 1) == 10);
    CHECK(std::count(r.labels.begin(), r.labels.end(), 0) == 10);
    CHECK(std::count(r.provenance.begin(), r.provenance.end(), RowProvenance::original) == 6);
    CHECK(std::count(r.provenance.begin(), r.provenance.end(), RowProvenance::retained) == 10);
    CHECK(std::count(r.provenance.begin(), r.provenance.end(), RowProvenance::synthetic) == 4);
    // synthetic rows sit at the end; originals and retained rows keep input order
    for (std::size_t i = 16; i < 20; ++i) CHECK(r.provenance[i] == RowProvenance::synthetic);
    CHECK(r.X.rows == 20);
    // original minority rows appear verbatim in output order
    std::vector<std::size_t> min_rows;
    for (std::size_t i = 0; i < 20; ++i)
        if (labels[i] == 1) min_rows.push_back(i);
    std::size_t seen = 0;
    for (std::size_t i = 0; i < r.labels.size() && seen < min_rows.size(); ++i) {
        if (r.provenance[i] != RowProvenance::original) continue;
        CHECK(r.X.at(i, 0) == X.at(min_rows[seen], 0));
        CHECK(r.X.at(i, 1) == X.at(min_rows[seen], 1));
        ++seen;
    }
    CHECK(seen == 6);
}

TEST_CASE("explicit targets and label values are respected") {
    Matrix X;
    std::vector<int> labels;
    CounterRng rng(89);
    for (int i = 0; i < 12; ++i) {
        const double row[1] = {rng.next_uniform()};
        X.push_row(row);
        labels.push_back(i < 4 ? 7 : 3);  // arbitrary two-class label values
    }
    const auto r = rebalance_binary(X, labels, 1, 6);
    CHECK(r.target_count == 6);
    CHECK(std::count(r.labels.begin(), r.labels.end(), 7) == 6);
    CHECK(std::count(r.labels.begin(), r.labels.end(), 3) == 6);
    // target clamps into [minority, majority]
    CHECK(rebalance_binary(X, labels, 1, 100).target_count == 8);
    CHECK(rebalance_binary(X, labels, 1, 1).target_count == 4);
}

TEST_CASE("rebalance input validation") {
    Matrix X = rows2({{0.0, 0.0}, {1.0, 1.0}});
    CHECK_THROWS_AS(rebalance_binary(X, {0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(rebalance_binary(Matrix{}, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(rebalance_binary(X, {1, 1}, 0), std::invalid_argument);
    const auto X3 = rows2({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}});
    CHECK_THROWS_AS(rebalance_binary(X3, {0, 1, 2}, 0), std::invalid_argument);
}

}  // TEST_SUITE
