#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "testdata.hpp"
#include "xfdiag/eval.hpp"
#include "xfdiag/feature_table.hpp"
#include "xfdiag/model_io.hpp"
#include "xfdiag/scenario.hpp"
#include "xfdiag/simgen.hpp"
#include "xfdiag/waveform_io.hpp"

using namespace xfdiag;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& leaf) const { return (dir / leaf).string(); }
};

std::vector<WaveformRecord> sample_records() {
    GridTiming timing;
    timing.run_time = 0.04;
    timing.event_time = 0.015;
    timing.fault_duration = 0.02;

    ScenarioSpec fault;
    fault.kind = ScenarioKind::fault;
    fault.fault = FaultParams{FaultType::BCG, 45.0, 5.0, 60.0, WindingSide::secondary};
    fault.seed = 101;

    ScenarioSpec inrush;
    inrush.kind = ScenarioKind::inrush;
    inrush.inrush = InrushParams{30.0, 40.0, LoadState::noload, 1};
    inrush.seed = 102;

    ScenarioSpec quiet;
    quiet.kind = ScenarioKind::nofault;
    quiet.seed = 103;

    return {synthesize(fault, timing), synthesize(inrush, timing), synthesize(quiet, timing)};
}

void check_equal(const WaveformRecord& a, const WaveformRecord& b) {
    CHECK(a.spec.label() == b.spec.label());
    CHECK(a.spec.seed == b.spec.seed);
    CHECK(a.sample_period == b.sample_period);
    CHECK(a.t0 == b.t0);
    CHECK(a.event_time == b.event_time);
    for (int p = 0; p < 3; ++p) CHECK(a.phases[p] == b.phases[p]);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("waveform container round trip is exact") {
    Scratch tmp("io_container");
    const auto records = sample_records();
    write_container(records, tmp / "set.xfwv");
    const auto loaded = read_container(tmp / "set.xfwv");
    REQUIRE(loaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) check_equal(records[i], loaded[i]);
}

TEST_CASE("container rejects foreign and truncated files") {
    Scratch tmp("io_badfiles");
    {
        std::ofstream out(tmp / "not.xfwv", std::ios::binary);
        out << "definitely not a waveform container";
    }
    CHECK_THROWS_AS(read_container(tmp / "not.xfwv"), std::runtime_error);
    CHECK_THROWS_AS(read_container(tmp / "absent.xfwv"), std::runtime_error);

    write_container(sample_records(), tmp / "whole.xfwv");
    const auto size = fs::file_size(tmp / "whole.xfwv");
    {
        std::ifstream in(tmp / "whole.xfwv", std::ios::binary);
        std::vector<char> head(size / 2);
        in.read(head.data(), static_cast<std::streamsize>(head.size()));
        std::ofstream out(tmp / "cut.xfwv", std::ios::binary);
        out.write(head.data(), static_cast<std::streamsize>(head.size()));
    }
    CHECK_THROWS_AS(read_container(tmp / "cut.xfwv"), std::runtime_error);
}

TEST_CASE("text record round trip is exact") {
    Scratch tmp("io_text");
    const auto records = sample_records();
    write_record_text(records[0], tmp / "one.txt");
    CHECK(fs::exists(tmp / "one.txt.json"));
    const auto loaded = read_record_text(tmp / "one.txt");
    check_equal(records[0], loaded);
}

TEST_CASE("manifest file round trip") {
    Scratch tmp("io_manifest");
    auto manifest = build_fault_grid(7, FaultGridAxes::reduced());
    manifest.append(build_inrush_grid(7));
    write_manifest_file(manifest, tmp / "manifest.json");
    const auto loaded = read_manifest_file(tmp / "manifest.json");
    CHECK(loaded.master_seed == manifest.master_seed);
    CHECK(loaded.specs.size() == manifest.specs.size());
    CHECK(loaded.counts() == manifest.counts());
    CHECK(manifest_to_json(loaded) == manifest_to_json(manifest));
}

TEST_CASE("feature csv round trip is exact") {
    Scratch tmp("io_csv");
    FeatureTable table;
    table.feature_names = {"alpha", "beta"};
    table.catalog_id = "default";
    const double r0[2] = {1.0 / 3.0, -2.5e-17};
    const double r1[2] = {6.02214076e23, 0.0};
    table.push(r0, "AG", "AG");
    table.push(r1, "INRUSH", "");
    write_feature_csv(table, tmp / "t.csv");
    const auto loaded = read_feature_csv(tmp / "t.csv");
    CHECK(loaded.feature_names == table.feature_names);
    CHECK(loaded.catalog_id == "default");
    CHECK(loaded.X.values == table.X.values);
    CHECK(loaded.labels == std::vector<std::string>{"AG", "INRUSH"});
    CHECK(loaded.merged == std::vector<std::string>{"AG", "-"});
    CHECK(loaded.provenance.empty());
}

TEST_CASE("feature csv keeps the provenance column when present") {
    Scratch tmp("io_csv_prov");
    FeatureTable table;
    table.feature_names = {"f"};
    const double a[1] = {1.0}, b[1] = {2.0};
    table.push(a, "fault", "-", "original");
    table.push(b, "inrush", "-", "synthetic");
    write_feature_csv(table, tmp / "p.csv");
    const auto loaded = read_feature_csv(tmp / "p.csv");
    CHECK(loaded.provenance == std::vector<std::string>{"original", "synthetic"});
}

TEST_CASE("feature csv error paths") {
    Scratch tmp("io_csv_bad");
    CHECK_THROWS_AS(read_feature_csv(tmp / "missing.csv"), std::runtime_error);
    {
        std::ofstream out(tmp / "noheader.csv");
        out << "# catalog=default\n";
    }
    CHECK_THROWS_AS(read_feature_csv(tmp / "noheader.csv"), std::runtime_error);
    {
        std::ofstream out(tmp / "badheader.csv");
        out << "a,b,c\n1,2,3\n";
    }
    CHECK_THROWS_AS(read_feature_csv(tmp / "badheader.csv"), std::runtime_error);
    {
        std::ofstream out(tmp / "short.csv");
        out << "f,label,merged_label\n1.0,AG\n";
    }
    CHECK_THROWS_AS(read_feature_csv(tmp / "short.csv"), std::runtime_error);
    {
        std::ofstream out(tmp / "nan.csv");
        out << "f,label,merged_label\nxyz,AG,AG\n";
    }
    CHECK_THROWS_AS(read_feature_csv(tmp / "nan.csv"), std::runtime_error);
}

TEST_CASE("models survive serialization for all three kinds") {
    Scratch tmp("io_models");
    Matrix X;
    std::vector<int> y;
    testdata::blobs(33, 90, 4, 3, 1.2, X, y);
    const auto probes = testdata::uniform_matrix(44, 1000, 4, -10.0, 10.0);
    for (const std::string kind : {"dt", "rf", "gb"}) {
        ParamMap params;
        if (kind == "rf") params["n_estimators"] = 12;
        if (kind == "gb") params["n_estimators"] = 10;
        const auto model = fit_classifier(kind, X, y, params);
        CHECK(model.kind() == kind);
        CHECK(model.n_classes() == 3);

        const auto back = model_from_json(model_to_json(model));
        CHECK(back.kind() == kind);
        const auto path = tmp / (kind + ".json");
        save_model(model, path);
        const auto from_disk = load_model(path);
        for (std::size_t i = 0; i < probes.rows; ++i) {
            const int want = model.predict(probes.row(i));
            CHECK(back.predict(probes.row(i)) == want);
            CHECK(from_disk.predict(probes.row(i)) == want);
        }
        // probabilities survive byte-for-byte as well
        for (std::size_t i = 0; i < 25; ++i)
            CHECK(from_disk.predict_proba(probes.row(i)) == model.predict_proba(probes.row(i)));
    }
}

TEST_CASE("model io input validation") {
    Matrix X;
    std::vector<int> y;
    testdata::blobs(34, 20, 2, 2, 1.0, X, y);
    CHECK_THROWS_AS(fit_classifier("svm", X, y), std::invalid_argument);
    CHECK_THROWS_AS(fit_classifier("dt", X, y, {{"bogus_knob", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(model_from_json(nlohmann::json{{"kind", "unknown"}}), std::invalid_argument);
    CHECK_THROWS_AS(load_model("does_not_exist_model.json"), std::runtime_error);
}

}  // TEST_SUITE
