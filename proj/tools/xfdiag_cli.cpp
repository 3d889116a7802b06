#include <cstdint>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "xfdiag/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"3-phase transformer differential-current fault diagnosis toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string grid;
    std::string catalog;
    std::string classifier;
    std::uint64_t seed = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"generate", "synthesize the scenario grid into a waveform container"},
        {"extract", "extract catalog features from generated waveforms"},
        {"rank", "rank features by random-forest importance"},
        {"detect", "train and evaluate the fault-vs-inrush detector"},
        {"classify", "train and evaluate the 7-class fault classifier"},
        {"kde", "emit per-class kernel density curves"},
    };
    for (auto [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "JSON run configuration file");
        sub->add_option("--seed", seed, "master seed override");
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--grid", grid, "scenario grid override: full | reduced");
        sub->add_option("--catalog", catalog, "feature catalog override: default | top3 | detect");
        sub->add_option("--classifier", classifier, "classifier override: dt | rf | gb");
    }
    CLI11_PARSE(app, argc, argv);

    auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        xfdiag::RunConfig config;
        if (!config_path.empty()) config = xfdiag::load_config(config_path);
        if (sub->count("--seed") > 0) config.master_seed = seed;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!grid.empty()) config.grid = grid;
        if (!catalog.empty()) config.catalog_id = catalog;
        if (!classifier.empty()) config.classifier = classifier;

        const auto summary = xfdiag::run_command(command, config);
        std::cout << summary.dump(2) << std::endl;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"command", command}, {"error", e.what()}}.dump()
                  << std::endl;
        return 1;
    }
}
