#include "xfdiag/pipeline.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <stdexcept>
#include <thread>

#include "xfdiag/balance.hpp"
#include "xfdiag/catalog.hpp"
#include "xfdiag/eval.hpp"
#include "xfdiag/feature_table.hpp"
#include "xfdiag/kde.hpp"
#include "xfdiag/rng.hpp"
#include "xfdiag/simgen.hpp"
#include "xfdiag/waveform_io.hpp"

namespace xfdiag {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

// per-command seed streams off the master seed
constexpr std::uint64_t kRankSeedTag = 0x72616e6b;      // "rank"
constexpr std::uint64_t kDetectSeedTag = 0x64657463;    // "detc"
constexpr std::uint64_t kBalanceSeedTag = 0x62616c63;   // "balc"
constexpr std::uint64_t kClassifySeedTag = 0x636c7366;  // "clsf"
constexpr std::uint64_t kModelSeedTag = 0x6d6f646c;     // "modl"

std::string dataset_path(const RunConfig& c) {
    return c.dataset_path.empty() ? c.out_dir + "/waveforms.xfwv" : c.dataset_path;
}
std::string manifest_path(const RunConfig& c) {
    return c.manifest_path.empty() ? c.out_dir + "/manifest.json" : c.manifest_path;
}
std::string features_path(const RunConfig& c) {
    return c.features_path.empty() ? c.out_dir + "/features.csv" : c.features_path;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_run_meta(const RunConfig& config, const std::string& command,
                    const nlohmann::json& summary, double elapsed_ms) {
    write_json_file(config.out_dir + "/run_" + command + ".json",
                    {{"command", command},
                     {"version", kVersion},
                     {"config", config_to_json(config)},
                     {"summary", summary},
                     {"elapsed_ms", elapsed_ms}});
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char ch : name)
        out.push_back(std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_');
    return out;
}

Matrix select_columns(const Matrix& X, const std::vector<int>& cols,
                      const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out.at(r, c) = X.at(rows[r], static_cast<std::size_t>(cols[c]));
    return out;
}

std::vector<int> resolve_columns(const FeatureTable& table, const std::vector<std::string>& names,
                                 const std::string& command) {
    std::vector<int> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
        const int idx = table.column_index(name);
        if (idx < 0)
            throw std::runtime_error(command + ": missing feature column " + name);
        cols.push_back(idx);
    }
    return cols;
}

std::vector<std::string> classify_feature_names(const RunConfig& config,
                                                const FeatureTable& table) {
    if (config.classify_features.empty()) return top3_feature_names();
    if (config.classify_features.size() == 1 && config.classify_features[0] == "*")
        return table.feature_names;
    return config.classify_features;
}

std::vector<std::string> merged_class_display_names() {
    std::vector<std::string> names;
    names.reserve(kNumMergedClasses);
    for (int k = 0; k < kNumMergedClasses; ++k)
        names.push_back(display_label(static_cast<MergedClass>(k)));
    return names;
}

struct FaultSubset {
    std::vector<std::size_t> rows;
    std::vector<int> y;  // merged-class index
};

FaultSubset fault_rows(const FeatureTable& table) {
    FaultSubset sub;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        if (table.merged[r] == "-") continue;
        sub.rows.push_back(r);
        sub.y.push_back(static_cast<int>(merged_class_from_string(table.merged[r])));
    }
    return sub;
}

std::vector<int> subset_labels(const std::vector<int>& y, const std::vector<std::size_t>& idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(y[i]);
    return out;
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "master_seed",    "out_dir",        "grid",           "include_inrush",
        "nofault_count",  "timing",         "emit_text_records", "catalog_id",
        "dataset_path",   "manifest_path",  "features_path",  "rank_trees",
        "detection_window", "balance_target", "smote_k",      "classifier",
        "hyperparams",    "classify_features", "split_fraction", "kde_features",
        "kde_grid_size"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const auto& k : known)
            if (key == k) ok = true;
        if (!ok) throw std::invalid_argument("config: unknown key: " + key);
    }

    RunConfig c;
    c.master_seed = j.value("master_seed", c.master_seed);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.grid = j.value("grid", c.grid);
    c.include_inrush = j.value("include_inrush", c.include_inrush);
    c.nofault_count = j.value("nofault_count", c.nofault_count);
    if (j.contains("timing")) c.timing = j.at("timing").get<GridTiming>();
    c.emit_text_records = j.value("emit_text_records", c.emit_text_records);
    c.catalog_id = j.value("catalog_id", c.catalog_id);
    c.dataset_path = j.value("dataset_path", c.dataset_path);
    c.manifest_path = j.value("manifest_path", c.manifest_path);
    c.features_path = j.value("features_path", c.features_path);
    c.rank_trees = j.value("rank_trees", c.rank_trees);
    c.detection_window = j.value("detection_window", c.detection_window);
    c.balance_target = j.value("balance_target", c.balance_target);
    c.smote_k = j.value("smote_k", c.smote_k);
    c.classifier = j.value("classifier", c.classifier);
    if (j.contains("hyperparams"))
        c.hyperparams = j.at("hyperparams").get<std::map<std::string, double>>();
    if (j.contains("classify_features"))
        c.classify_features = j.at("classify_features").get<std::vector<std::string>>();
    c.split_fraction = j.value("split_fraction", c.split_fraction);
    if (j.contains("kde_features"))
        c.kde_features = j.at("kde_features").get<std::vector<std::string>>();
    c.kde_grid_size = j.value("kde_grid_size", c.kde_grid_size);

    if (c.grid != "full" && c.grid != "reduced")
        throw std::invalid_argument("config: grid must be 'full' or 'reduced'");
    if (!(c.split_fraction > 0.0 && c.split_fraction < 1.0))
        throw std::invalid_argument("config: split_fraction must be in (0,1)");
    if (c.detection_window < 4)
        throw std::invalid_argument("config: detection_window too small");
    return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
    return {{"master_seed", c.master_seed},
            {"out_dir", c.out_dir},
            {"grid", c.grid},
            {"include_inrush", c.include_inrush},
            {"nofault_count", c.nofault_count},
            {"timing", c.timing},
            {"emit_text_records", c.emit_text_records},
            {"catalog_id", c.catalog_id},
            {"dataset_path", c.dataset_path},
            {"manifest_path", c.manifest_path},
            {"features_path", c.features_path},
            {"rank_trees", c.rank_trees},
            {"detection_window", c.detection_window},
            {"balance_target", c.balance_target},
            {"smote_k", c.smote_k},
            {"classifier", c.classifier},
            {"hyperparams", c.hyperparams},
            {"classify_features", c.classify_features},
            {"split_fraction", c.split_fraction},
            {"kde_features", c.kde_features},
            {"kde_grid_size", c.kde_grid_size}};
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

nlohmann::json cmd_generate(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.out_dir);

    if (config.grid != "full" && config.grid != "reduced")
        throw std::invalid_argument("generate: grid must be 'full' or 'reduced'");
    const auto axes = config.grid == "full" ? FaultGridAxes::full() : FaultGridAxes::reduced();
    DatasetManifest manifest = build_fault_grid(config.master_seed, axes, config.timing);
    if (config.include_inrush)
        manifest.append(build_inrush_grid(config.master_seed, config.timing));
    if (config.nofault_count > 0)
        manifest.append(build_nofault_set(config.master_seed, config.nofault_count, config.timing));

    const auto records = generate_dataset(manifest);
    write_container(records, dataset_path(config));
    write_manifest_file(manifest, manifest_path(config));

    if (config.emit_text_records) {
        const auto dir = config.out_dir + "/records";
        fs::create_directories(dir);
        char name[32];
        for (std::size_t i = 0; i < records.size(); ++i) {
            std::snprintf(name, sizeof name, "/rec_%06zu.txt", i);
            write_record_text(records[i], dir + name);
        }
    }

    nlohmann::json summary = {{"records", records.size()},
                              {"counts", manifest.counts()},
                              {"dataset", dataset_path(config)},
                              {"manifest", manifest_path(config)}};
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start).count();
    write_run_meta(config, "generate", summary, ms);
    return summary;
}

nlohmann::json cmd_extract(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.out_dir);

    const auto records = read_container(dataset_path(config));
    const auto catalog = FeatureCatalog::get(config.catalog_id, config.detection_window);

    std::vector<FeatureVector> vectors(records.size());
    {
        std::atomic<std::size_t> next{0};
        const auto workers =
            std::max(1u, std::min(std::thread::hardware_concurrency(),
                                  static_cast<unsigned>(records.size())));
        std::vector<std::future<void>> futs;
        futs.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next.fetch_add(1); i < records.size();
                     i = next.fetch_add(1))
                    vectors[i] = extract_vector(records[i], catalog);
            }));
        }
        for (auto& f : futs) f.get();
    }

    FeatureTable table;
    table.catalog_id = config.catalog_id;
    table.feature_names = catalog.names();
    for (std::size_t i = 0; i < records.size(); ++i)
        table.push(vectors[i].values, records[i].spec.label(), records[i].spec.merged_label());
    write_feature_csv(table, features_path(config));
    write_json_file(config.out_dir + "/catalog.json", catalog.descriptor());

    nlohmann::json summary = {{"rows", table.rows()},
                              {"columns", table.feature_names.size()},
                              {"catalog", config.catalog_id},
                              {"features", features_path(config)}};
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start).count();
    write_run_meta(config, "extract", summary, ms);
    return summary;
}

nlohmann::json cmd_rank(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.out_dir);

    const auto table = read_feature_csv(features_path(config));
    const auto sub = fault_rows(table);
    if (sub.rows.empty()) throw std::runtime_error("rank: no fault rows in feature table");
    bool multiclass = false;
    for (int label : sub.y)
        if (label != sub.y.front()) multiclass = true;
    if (!multiclass) throw std::runtime_error("rank: need at least 2 classes");

    const Matrix X = table.X.take(sub.rows);
    const auto ranked = rank_features(X, sub.y, table.feature_names, config.rank_trees,
                                      derive_seed(config.master_seed, kRankSeedTag));

    std::string csv = "rank,feature,importance\n";
    for (std::size_t i = 0; i < ranked.size(); ++i)
        csv += std::to_string(i + 1) + "," + ranked[i].name + "," + fmt17(ranked[i].importance) +
               "\n";
    write_text_file(config.out_dir + "/ranked_features.csv", csv);

    nlohmann::json top = nlohmann::json::array();
    for (std::size_t i = 0; i < ranked.size() && i < 3; ++i)
        top.push_back({{"feature", ranked[i].name}, {"importance", ranked[i].importance}});
    nlohmann::json summary = {{"features_ranked", ranked.size()},
                              {"top3", top},
                              {"output", config.out_dir + "/ranked_features.csv"}};
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start).count();
    write_run_meta(config, "rank", summary, ms);
    return summary;
}

nlohmann::json cmd_detect(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.out_dir);

    const auto table = read_feature_csv(features_path(config));
    const auto names = FeatureCatalog::get("detect", config.detection_window).names();
    const auto cols = resolve_columns(table, names, "detect");

    std::vector<std::size_t> rows;
    std::vector<int> y;  // 0 = inrush, 1 = fault
    for (std::size_t r = 0; r < table.rows(); ++r) {
        if (table.labels[r] == "INRUSH") {
            rows.push_back(r);
            y.push_back(0);
        } else if (table.merged[r] != "-") {
            rows.push_back(r);
            y.push_back(1);
        }
    }
    if (rows.empty()) throw std::runtime_error("detect: no fault or inrush rows");
    if (std::count(y.begin(), y.end(), 0) == 0 ||
        std::count(y.begin(), y.end(), 1) == 0)
        throw std::runtime_error("detect: single-class input");

    const Matrix X = select_columns(table.X, cols, rows);
    const auto [train_idx, test_idx] =
        stratified_split(y, config.split_fraction, derive_seed(config.master_seed, kDetectSeedTag));

    const Matrix train_X = X.take(train_idx);
    const auto train_y = subset_labels(y, train_idx);
    const auto balanced =
        rebalance_binary(train_X, train_y, derive_seed(config.master_seed, kBalanceSeedTag),
                         config.balance_target, config.smote_k);

    FeatureTable balanced_table;
    balanced_table.catalog_id = table.catalog_id;
    balanced_table.feature_names = names;
    for (std::size_t r = 0; r < balanced.X.rows; ++r) {
        const char* prov = balanced.provenance[r] == RowProvenance::original  ? "original"
                           : balanced.provenance[r] == RowProvenance::synthetic ? "synthetic"
                                                                                : "retained";
        balanced_table.push(balanced.X.row(r), balanced.labels[r] == 1 ? "fault" : "inrush", "-",
                            prov);
    }
    write_feature_csv(balanced_table, config.out_dir + "/detect_train_balanced.csv");

    const DecisionTree dt = dt_fit(balanced.X, balanced.labels);
    const Matrix test_X = X.take(test_idx);
    const auto test_y = subset_labels(y, test_idx);
    std::vector<int> pred;
    pred.reserve(test_y.size());
    for (std::size_t i = 0; i < test_X.rows; ++i) pred.push_back(dt.predict(test_X.row(i)));

    const auto report = make_report(test_y, pred, {"inrush", "fault"});
    write_json_file(config.out_dir + "/detect_report.json", report_to_json(report));
    write_text_file(config.out_dir + "/detect_report.txt",
                    render_table(report, "fault vs inrush detection"));

    nlohmann::json summary = {{"accuracy", report.accuracy},
                              {"train_rows", train_idx.size()},
                              {"balanced_rows", balanced.X.rows},
                              {"balance_target", balanced.target_count},
                              {"smote_k_reduced", balanced.smote_k_reduced},
                              {"test_rows", test_idx.size()},
                              {"report", config.out_dir + "/detect_report.json"}};
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start).count();
    write_run_meta(config, "detect", summary, ms);
    return summary;
}

nlohmann::json cmd_classify(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.out_dir);

    const auto table = read_feature_csv(features_path(config));
    const auto sub = fault_rows(table);
    if (sub.rows.empty()) throw std::runtime_error("classify: no fault rows in feature table");

    const auto names = classify_feature_names(config, table);
    const auto cols = resolve_columns(table, names, "classify");
    const Matrix X = select_columns(table.X, cols, sub.rows);

    const auto [train_idx, test_idx] = stratified_split(
        sub.y, config.split_fraction, derive_seed(config.master_seed, kClassifySeedTag));
    const Matrix train_X = X.take(train_idx);
    const auto train_y = subset_labels(sub.y, train_idx);

    ParamMap params = config.hyperparams;
    if (config.classifier == "rf" && !params.count("n_estimators"))
        params["n_estimators"] = 595;
    if ((config.classifier == "rf" || config.classifier == "dt") && !params.count("seed"))
        params["seed"] =
            static_cast<double>(derive_seed(config.master_seed, kModelSeedTag) >> 12);

    const AnyModel model = fit_classifier(config.classifier, train_X, train_y, params);

    const Matrix test_X = X.take(test_idx);
    const auto test_y = subset_labels(sub.y, test_idx);
    std::vector<int> pred;
    pred.reserve(test_y.size());
    for (std::size_t i = 0; i < test_X.rows; ++i) pred.push_back(model.predict(test_X.row(i)));

    const auto report = make_report(test_y, pred, merged_class_display_names());
    const auto model_file = config.out_dir + "/model_" + config.classifier + ".json";
    save_model(model, model_file);
    write_json_file(config.out_dir + "/classify_report.json", report_to_json(report));
    write_text_file(config.out_dir + "/classify_report.txt",
                    render_table(report, "7-class fault classification (" + config.classifier +
                                             ")"));

    nlohmann::json summary = {{"accuracy", report.accuracy},
                              {"classifier", config.classifier},
                              {"features", names},
                              {"train_rows", train_idx.size()},
                              {"test_rows", test_idx.size()},
                              {"model", model_file},
                              {"report", config.out_dir + "/classify_report.json"}};
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start).count();
    write_run_meta(config, "classify", summary, ms);
    return summary;
}

nlohmann::json cmd_kde(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.out_dir);
    fs::create_directories(config.out_dir + "/kde");

    const auto table = read_feature_csv(features_path(config));
    const auto sub = fault_rows(table);
    if (sub.rows.empty()) throw std::runtime_error("kde: no fault rows in feature table");

    const auto names = config.kde_features.empty() ? top3_feature_names() : config.kde_features;
    const auto cols = resolve_columns(table, names, "kde");

    nlohmann::json meta_features = nlohmann::json::array();
    std::size_t n_curves = 0;
    for (std::size_t f = 0; f < names.size(); ++f) {
        std::vector<double> column(sub.rows.size());
        for (std::size_t r = 0; r < sub.rows.size(); ++r)
            column[r] = table.X.at(sub.rows[r], static_cast<std::size_t>(cols[f]));

        const bool normalize = names[f].find("abs_energy") != std::string::npos;
        double lo = column.front();
        double hi = column.front();
        for (double v : column) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (normalize) {
            for (double& v : column) v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
        }
        const double h = normalize ? 0.001 : 0.1;

        std::string csv = "x,density,class\n";
        nlohmann::json classes = nlohmann::json::array();
        for (int k = 0; k < kNumMergedClasses; ++k) {
            std::vector<double> samples;
            for (std::size_t r = 0; r < sub.rows.size(); ++r)
                if (sub.y[r] == k) samples.push_back(column[r]);
            if (samples.empty()) continue;
            const auto curve = kde_curve_auto(samples, h, config.kde_grid_size);
            const auto cls = to_string(static_cast<MergedClass>(k));
            for (std::size_t i = 0; i < curve.grid.size(); ++i)
                csv += fmt17(curve.grid[i]) + "," + fmt17(curve.density[i]) + "," + cls + "\n";
            classes.push_back({{"class", cls},
                               {"samples", samples.size()},
                               {"points", curve.n_points},
                               {"integral", trapezoid_integral(curve)}});
            ++n_curves;
        }
        const auto file = config.out_dir + "/kde/" + sanitize(names[f]) + ".csv";
        write_text_file(file, csv);
        meta_features.push_back({{"feature", names[f]},
                                 {"bandwidth", h},
                                 {"normalized", normalize},
                                 {"min", lo},
                                 {"max", hi},
                                 {"file", file},
                                 {"classes", classes}});
    }
    write_json_file(config.out_dir + "/kde/kde_meta.json",
                    {{"features", meta_features}, {"n_curves", n_curves}});

    nlohmann::json summary = {{"n_curves", n_curves},
                              {"features", names},
                              {"meta", config.out_dir + "/kde/kde_meta.json"}};
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start).count();
    write_run_meta(config, "kde", summary, ms);
    return summary;
}

nlohmann::json run_command(const std::string& name, const RunConfig& config) {
    if (name == "generate") return cmd_generate(config);
    if (name == "extract") return cmd_extract(config);
    if (name == "rank") return cmd_rank(config);
    if (name == "detect") return cmd_detect(config);
    if (name == "classify") return cmd_classify(config);
    if (name == "kde") return cmd_kde(config);
    throw std::invalid_argument("unknown command: " + name);
}

}  // namespace xfdiag
