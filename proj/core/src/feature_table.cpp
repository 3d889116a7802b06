#include "xfdiag/feature_table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace xfdiag {

int FeatureTable::column_index(const std::string& feature_name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i)
        if (feature_names[i] == feature_name) return static_cast<int>(i);
    return -1;
}

void FeatureTable::push(std::span<const double> values, const std::string& label,
                        const std::string& merged_label, const std::string& prov) {
    if (X.cols == 0 && X.rows == 0) X = Matrix(0, feature_names.size());
    X.push_row(values);
    labels.push_back(label);
    merged.push_back(merged_label.empty() ? "-" : merged_label);
    if (!prov.empty() || !provenance.empty()) {
        provenance.resize(X.rows - 1, "original");
        provenance.push_back(prov.empty() ? "original" : prov);
    }
}

void write_feature_csv(const FeatureTable& table, const std::string& path) {
    if (table.labels.size() != table.X.rows || table.merged.size() != table.X.rows)
        throw std::invalid_argument("write_feature_csv: column length mismatch");
    const bool with_prov = !table.provenance.empty();
    if (with_prov && table.provenance.size() != table.X.rows)
        throw std::invalid_argument("write_feature_csv: provenance length mismatch");

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_feature_csv: cannot open " + path);

    if (!table.catalog_id.empty()) out << "# catalog=" << table.catalog_id << '\n';
    for (const auto& name : table.feature_names) out << name << ',';
    out << "label,merged_label";
    if (with_prov) out << ",provenance";
    out << '\n';

    char buf[40];
    for (std::size_t r = 0; r < table.X.rows; ++r) {
        const auto row = table.X.row(r);
        for (double v : row) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        out << table.labels[r] << ',' << table.merged[r];
        if (with_prov) out << ',' << table.provenance[r];
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_feature_csv: write failed: " + path);
}

FeatureTable read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_feature_csv: cannot open " + path);

    FeatureTable table;
    std::string line;
    while (std::getline(in, line) && !line.empty() && line[0] == '#') {
        const auto eq = line.find("catalog=");
        if (eq != std::string::npos) table.catalog_id = line.substr(eq + 8);
    }
    if (line.empty()) throw std::runtime_error("read_feature_csv: missing header in " + path);

    std::vector<std::string> header;
    {
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) header.push_back(cell);
    }
    bool with_prov = false;
    std::size_t n_features = 0;
    if (header.size() >= 3 && header[header.size() - 3] == "label" &&
        header[header.size() - 2] == "merged_label" && header.back() == "provenance") {
        with_prov = true;
        n_features = header.size() - 3;
    } else if (header.size() >= 2 && header[header.size() - 2] == "label" &&
               header.back() == "merged_label") {
        n_features = header.size() - 2;
    } else {
        throw std::runtime_error("read_feature_csv: unexpected header in " + path);
    }
    table.feature_names.assign(header.begin(), header.begin() + static_cast<long>(n_features));
    table.X = Matrix(0, n_features);

    std::vector<double> row(n_features);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        for (std::size_t c = 0; c < n_features; ++c) {
            if (!std::getline(cells, cell, ','))
                throw std::runtime_error("read_feature_csv: short row in " + path);
            char* end = nullptr;
            row[c] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::runtime_error("read_feature_csv: bad number '" + cell + "' in " + path);
        }
        std::string label;
        std::string merged;
        if (!std::getline(cells, label, ',') || !std::getline(cells, merged, ','))
            throw std::runtime_error("read_feature_csv: short row in " + path);
        std::string prov;
        if (with_prov && !std::getline(cells, prov, ','))
            throw std::runtime_error("read_feature_csv: short row in " + path);

        table.X.push_row(row);
        table.labels.push_back(label);
        table.merged.push_back(merged);
        if (with_prov) table.provenance.push_back(prov);
    }
    return table;
}

}  // namespace xfdiag
