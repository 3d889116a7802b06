#include "xfdiag/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "xfdiag/rng.hpp"

namespace xfdiag {

double accuracy_score(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("accuracy_score: size mismatch");
    if (y_true.empty()) throw std::invalid_argument("accuracy_score: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i)
        if (y_true[i] == y_pred[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

namespace {

EvalReport finish_report(EvalReport report) {
    const auto k = report.class_names.size();
    long correct = 0;
    long total = 0;
    report.rows.resize(k);
    for (std::size_t a = 0; a < k; ++a) {
        auto& row = report.rows[a];
        row.actual = report.class_names[a];
        row.total = std::accumulate(report.confusion[a].begin(), report.confusion[a].end(), 0);
        row.misclassified = row.total - report.confusion[a][a];
        correct += report.confusion[a][a];
        total += row.total;
        if (row.misclassified > 0) {
            std::size_t worst = a;
            int worst_count = -1;
            for (std::size_t p = 0; p < k; ++p) {
                if (p == a) continue;
                if (report.confusion[a][p] > worst_count) {
                    worst_count = report.confusion[a][p];
                    worst = p;
                }
            }
            row.predominant_wrong = report.class_names[worst];
        } else {
            row.predominant_wrong = "-";
        }
    }
    if (total == 0) throw std::invalid_argument("make_report: no samples");
    report.accuracy = static_cast<double>(correct) / static_cast<double>(total);
    return report;
}

}  // namespace

EvalReport make_report(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                       const std::vector<std::string>& class_names) {
    if (y_true.size() != y_pred.size()) throw std::invalid_argument("make_report: size mismatch");
    if (y_true.empty()) throw std::invalid_argument("make_report: empty test set");
    const auto k = class_names.size();
    EvalReport report;
    report.class_names = class_names;
    report.confusion.assign(k, std::vector<int>(k, 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int a = y_true[i];
        const int p = y_pred[i];
        if (a < 0 || static_cast<std::size_t>(a) >= k || p < 0 ||
            static_cast<std::size_t>(p) >= k)
            throw std::invalid_argument("make_report: label out of range");
        ++report.confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)];
    }
    return finish_report(std::move(report));
}

EvalReport report_from_counts(const std::vector<std::string>& class_names,
                              const std::vector<int>& totals, const std::vector<int>& missed,
                              const std::vector<std::string>& predominant_wrong) {
    const auto k = class_names.size();
    if (totals.size() != k || missed.size() != k)
        throw std::invalid_argument("report_from_counts: size mismatch");
    EvalReport report;
    report.class_names = class_names;
    report.confusion.assign(k, std::vector<int>(k, 0));
    for (std::size_t a = 0; a < k; ++a) {
        if (missed[a] > totals[a])
            throw std::invalid_argument("report_from_counts: missed exceeds total");
        report.confusion[a][a] = totals[a] - missed[a];
        if (missed[a] == 0) continue;
        std::size_t wrong = (a + 1) % k;
        if (!predominant_wrong.empty()) {
            const auto it =
                std::find(class_names.begin(), class_names.end(), predominant_wrong[a]);
            if (it == class_names.end())
                throw std::invalid_argument("report_from_counts: unknown class " +
                                            predominant_wrong[a]);
            wrong = static_cast<std::size_t>(it - class_names.begin());
        }
        report.confusion[a][wrong] = missed[a];
    }
    return finish_report(std::move(report));
}

std::string render_table(const EvalReport& report, const std::string& title) {
    std::size_t name_w = 10;
    for (const auto& row : report.rows) {
        name_w = std::max(name_w, row.actual.size());
        name_w = std::max(name_w, row.predominant_wrong.size());
    }
    name_w += 2;

    std::ostringstream out;
    if (!title.empty()) out << title << '\n';
    out << std::left << std::setw(static_cast<int>(name_w)) << "actual"
        << std::setw(static_cast<int>(name_w)) << "predominant-wrong" << std::right
        << std::setw(14) << "misclassified" << std::setw(12) << "total" << '\n';
    long missed = 0;
    long total = 0;
    for (const auto& row : report.rows) {
        out << std::left << std::setw(static_cast<int>(name_w)) << row.actual
            << std::setw(static_cast<int>(name_w)) << row.predominant_wrong << std::right
            << std::setw(14) << row.misclassified << std::setw(12) << row.total << '\n';
        missed += row.misclassified;
        total += row.total;
    }
    out << std::left << std::setw(static_cast<int>(2 * name_w)) << "overall" << std::right
        << std::setw(14) << missed << std::setw(12) << total << '\n';
    out << "accuracy " << std::fixed << std::setprecision(4) << report.accuracy * 100.0 << "%\n";
    return out.str();
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"actual", row.actual},
                        {"predominant_wrong", row.predominant_wrong},
                        {"misclassified", row.misclassified},
                        {"total", row.total}});
    return {{"accuracy", report.accuracy},
            {"class_names", report.class_names},
            {"rows", rows},
            {"confusion", report.confusion}};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& labels, double train_fraction, std::uint64_t seed) {
    if (labels.empty()) throw std::invalid_argument("stratified_split: empty labels");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("stratified_split: fraction must be in (0,1)");

    int n_classes = 0;
    for (int label : labels) {
        if (label < 0) throw std::invalid_argument("stratified_split: negative label");
        n_classes = std::max(n_classes, label + 1);
    }
    std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < labels.size(); ++i)
        groups[static_cast<std::size_t>(labels[i])].push_back(i);

    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t cls = 0; cls < groups.size(); ++cls) {
        auto& group = groups[cls];
        if (group.empty()) continue;
        CounterRng rng(derive_seed(seed, cls));
        for (std::size_t i = group.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.next_below(i));
            std::swap(group[i - 1], group[j]);
        }
        auto n_train = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(group.size())));
        if (group.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, group.size() - 1);
        for (std::size_t i = 0; i < group.size(); ++i)
            (i < n_train ? train : test).push_back(group[i]);
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

GridSearchResult grid_search(const Matrix& X, const std::vector<int>& y, const std::string& kind,
                             const std::vector<std::pair<std::string, std::vector<double>>>& grid,
                             double train_fraction, std::uint64_t seed) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
    for (const auto& [axis, values] : grid)
        if (values.empty()) throw std::invalid_argument("grid_search: empty axis: " + axis);

    const auto [train_idx, test_idx] = stratified_split(y, train_fraction, seed);
    const Matrix train_X = X.take(train_idx);
    const Matrix test_X = X.take(test_idx);
    std::vector<int> train_y;
    train_y.reserve(train_idx.size());
    for (auto i : train_idx) train_y.push_back(y[i]);
    std::vector<int> test_y;
    test_y.reserve(test_idx.size());
    for (auto i : test_idx) test_y.push_back(y[i]);

    GridSearchResult result;
    std::vector<std::size_t> cursor(grid.size(), 0);
    bool done = false;
    bool have_best = false;
    while (!done) {
        ParamMap params;
        for (std::size_t a = 0; a < grid.size(); ++a)
            params[grid[a].first] = grid[a].second[cursor[a]];

        const AnyModel model = fit_classifier(kind, train_X, train_y, params);
        std::vector<int> pred;
        pred.reserve(test_y.size());
        for (std::size_t i = 0; i < test_X.rows; ++i) pred.push_back(model.predict(test_X.row(i)));
        const double acc = accuracy_score(test_y, pred);
        result.table.push_back({params, acc});
        if (!have_best || acc > result.best.accuracy) {
            result.best = result.table.back();
            have_best = true;
        }

        // odometer over the axes, last axis fastest
        std::size_t a = grid.size();
        while (a > 0) {
            --a;
            if (++cursor[a] < grid[a].second.size()) break;
            cursor[a] = 0;
            if (a == 0) done = true;
        }
    }
    return result;
}

}  // namespace xfdiag
