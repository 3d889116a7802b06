#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xfdiag/model_io.hpp"

namespace xfdiag {

struct ClassRow {
    std::string actual;
    std::string predominant_wrong = "-";
    int misclassified = 0;
    int total = 0;
};

struct EvalReport {
    double accuracy = 0.0;
    std::vector<ClassRow> rows;
    std::vector<std::vector<int>> confusion;  // confusion[actual][predicted]
    std::vector<std::string> class_names;
};

double accuracy_score(const std::vector<int>& y_true, const std::vector<int>& y_pred);

EvalReport make_report(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                       const std::vector<std::string>& class_names);

// Rebuilds a report from published per-class counts (diagonal = total - missed,
// all misses attributed to the named wrong class).
EvalReport report_from_counts(const std::vector<std::string>& class_names,
                              const std::vector<int>& totals, const std::vector<int>& missed,
                              const std::vector<std::string>& predominant_wrong = {});

std::string render_table(const EvalReport& report, const std::string& title = "");

nlohmann::json report_to_json(const EvalReport& report);

// Per-class shuffled holdout; both index lists come back sorted ascending.
// Each class keeps round(fraction * n) rows for training, clamped so that a
// class with at least 2 rows lands on both sides.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& labels, double train_fraction, std::uint64_t seed);

struct GridPoint {
    ParamMap params;
    double accuracy = 0.0;
};

struct GridSearchResult {
    GridPoint best;
    std::vector<GridPoint> table;  // in grid enumeration order
};

// Exhaustive search over the cartesian product of the axes (last axis fastest)
// scored on a seeded stratified holdout; ties keep the earliest grid point.
GridSearchResult grid_search(const Matrix& X, const std::vector<int>& y, const std::string& kind,
                             const std::vector<std::pair<std::string, std::vector<double>>>& grid,
                             double train_fraction = 0.8, std::uint64_t seed = 0);

}  // namespace xfdiag
