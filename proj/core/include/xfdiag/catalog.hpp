#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xfdiag/features.hpp"
#include "xfdiag/simgen.hpp"

namespace xfdiag {

// One catalog entry: a named scalar feature of one phase of a record.
struct BoundFeature {
    int phase = 0;                // 0=a, 1=b, 2=c
    std::string name;             // full name, e.g. "a.change_quantile"
    enum class WindowKind { full, post_event_cycle } window = WindowKind::full;
    std::size_t min_samples = 2;  // required window length
    std::function<double(Window)> eval;
    nlohmann::json params;        // descriptor payload: op and parameters
};

// An ordered, named feature set. The name order is part of the contract:
// the same catalog id always produces the same names in the same order.
class FeatureCatalog {
public:
    // ids: "default" (full per-phase set), "top3" (the three classification
    // features), "detect" (per-phase one-cycle sample entropy)
    static FeatureCatalog get(const std::string& catalog_id,
                              int one_cycle_samples = kOneCycleSamples);

    const std::string& id() const { return id_; }
    int one_cycle_samples() const { return cycle_; }
    const std::vector<BoundFeature>& entries() const { return entries_; }
    std::vector<std::string> names() const;
    nlohmann::json descriptor() const;

private:
    std::string id_;
    int cycle_ = kOneCycleSamples;
    std::vector<BoundFeature> entries_;
};

struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;
    std::string catalog_id;
};

// Evaluates every catalog entry against the record. Throws if the record is
// too short for any entry; the message lists the offending feature names.
FeatureVector extract_vector(const WaveformRecord& rec, const FeatureCatalog& catalog);

// The three features used for fault classification, in importance order.
std::vector<std::string> top3_feature_names();

}  // namespace xfdiag
