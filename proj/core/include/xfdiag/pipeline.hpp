#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "xfdiag/model_io.hpp"
#include "xfdiag/scenario.hpp"

namespace xfdiag {

struct RunConfig {
    std::uint64_t master_seed = 0;
    std::string out_dir = "out";

    // generate
    std::string grid = "full";  // "full" (complete grids) or "reduced"
    bool include_inrush = true;
    std::size_t nofault_count = 0;
    GridTiming timing;
    bool emit_text_records = false;

    // extract
    std::string catalog_id = "default";
    std::string dataset_path;   // defaults to <out>/waveforms.xfwv
    std::string manifest_path;  // defaults to <out>/manifest.json
    std::string features_path;  // defaults to <out>/features.csv

    // rank
    int rank_trees = 200;

    // detect
    int detection_window = 167;     // one-cycle sample count
    std::size_t balance_target = 0;  // 0 = mean of the two class counts
    int smote_k = 5;

    // classify
    std::string classifier = "dt";  // dt | rf | gb
    ParamMap hyperparams;
    std::vector<std::string> classify_features;  // empty = top-3 default, {"*"} = all
    double split_fraction = 0.8;

    // kde
    std::vector<std::string> kde_features;  // empty = top-3 default
    std::size_t kde_grid_size = 512;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);

// Each command writes its artifacts under config.out_dir plus a
// run_<command>.json metadata file, and returns a summary document.
nlohmann::json cmd_generate(const RunConfig& config);
nlohmann::json cmd_extract(const RunConfig& config);
nlohmann::json cmd_rank(const RunConfig& config);
nlohmann::json cmd_detect(const RunConfig& config);
nlohmann::json cmd_classify(const RunConfig& config);
nlohmann::json cmd_kde(const RunConfig& config);

nlohmann::json run_command(const std::string& name, const RunConfig& config);

}  // namespace xfdiag
