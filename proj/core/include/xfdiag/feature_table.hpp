#pragma once

#include <string>
#include <vector>

#include "xfdiag/matrix.hpp"

namespace xfdiag {

// Tabular feature data as persisted by the extract step: one row per record,
// one column per feature, then label / merged-label (and optionally a
// provenance column after balancing).
struct FeatureTable {
    std::vector<std::string> feature_names;
    Matrix X;
    std::vector<std::string> labels;
    std::vector<std::string> merged;  // "-" for rows without a merged class
    std::vector<std::string> provenance;  // empty when unused
    std::string catalog_id;

    std::size_t rows() const { return X.rows; }
    int column_index(const std::string& feature_name) const;  // -1 when absent
    void push(std::span<const double> values, const std::string& label,
              const std::string& merged_label, const std::string& prov = "");
};

void write_feature_csv(const FeatureTable& table, const std::string& path);
FeatureTable read_feature_csv(const std::string& path);

}  // namespace xfdiag
