#include "xfdiag/waveform_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace xfdiag {

namespace {

constexpr char kMagic[4] = {'X', 'F', 'W', 'V'};
constexpr std::uint32_t kVersion = 1;

nlohmann::json record_header(const WaveformRecord& rec) {
    return {{"spec", rec.spec},
            {"sample_period", rec.sample_period},
            {"t0", rec.t0},
            {"event_time", rec.event_time}};
}

void apply_header(const nlohmann::json& j, WaveformRecord& rec) {
    rec.spec = j.at("spec").get<ScenarioSpec>();
    rec.sample_period = j.at("sample_period").get<double>();
    rec.t0 = j.at("t0").get<double>();
    rec.event_time = j.at("event_time").get<double>();
}

template <typename T>
void put(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("waveform container: truncated file");
    return value;
}

}  // namespace

void write_record_text(const WaveformRecord& rec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_record_text: cannot open " + path);
    char line[160];
    for (std::size_t i = 0; i < rec.n(); ++i) {
        const double t = rec.t0 + rec.sample_period * static_cast<double>(i);
        std::snprintf(line, sizeof line, "%.6f %.17g %.17g %.17g\n", t, rec.phases[0][i],
                      rec.phases[1][i], rec.phases[2][i]);
        out << line;
    }
    if (!out) throw std::runtime_error("write_record_text: write failed: " + path);

    nlohmann::json sidecar = record_header(rec);
    sidecar["n"] = rec.n();
    std::ofstream side(path + ".json");
    if (!side) throw std::runtime_error("write_record_text: cannot open " + path + ".json");
    side << sidecar.dump(2) << '\n';
    if (!side) throw std::runtime_error("write_record_text: write failed: " + path + ".json");
}

WaveformRecord read_record_text(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("read_record_text: missing sidecar " + path + ".json");
    nlohmann::json j;
    side >> j;

    WaveformRecord rec;
    apply_header(j, rec);
    const auto n = j.at("n").get<std::size_t>();
    for (auto& phase : rec.phases) phase.reserve(n);

    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_record_text: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        double t = 0;
        double a = 0;
        double b = 0;
        double c = 0;
        if (!(fields >> t >> a >> b >> c))
            throw std::runtime_error("read_record_text: malformed line in " + path);
        rec.phases[0].push_back(a);
        rec.phases[1].push_back(b);
        rec.phases[2].push_back(c);
    }
    if (rec.n() != n) throw std::runtime_error("read_record_text: sample count mismatch in " + path);
    return rec;
}

void write_container(const std::vector<WaveformRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_container: cannot open " + path);
    out.write(kMagic, sizeof kMagic);
    put(out, kVersion);
    put(out, static_cast<std::uint64_t>(records.size()));
    for (const auto& rec : records) {
        const std::string header = record_header(rec).dump();
        put(out, static_cast<std::uint32_t>(header.size()));
        out.write(header.data(), static_cast<std::streamsize>(header.size()));
        put(out, static_cast<std::uint64_t>(rec.n()));
        for (const auto& phase : rec.phases)
            out.write(reinterpret_cast<const char*>(phase.data()),
                      static_cast<std::streamsize>(phase.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("write_container: write failed: " + path);
}

std::vector<WaveformRecord> read_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_container: cannot open " + path);
    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("read_container: not a waveform container: " + path);
    const auto version = take<std::uint32_t>(in);
    if (version != kVersion)
        throw std::runtime_error("read_container: unsupported version in " + path);
    const auto count = take<std::uint64_t>(in);

    std::vector<WaveformRecord> records;
    records.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) {
        const auto header_len = take<std::uint32_t>(in);
        std::string header(header_len, '\0');
        in.read(header.data(), header_len);
        if (!in) throw std::runtime_error("read_container: truncated file");

        WaveformRecord rec;
        apply_header(nlohmann::json::parse(header), rec);
        const auto n = take<std::uint64_t>(in);
        for (auto& phase : rec.phases) {
            phase.resize(n);
            in.read(reinterpret_cast<char*>(phase.data()),
                    static_cast<std::streamsize>(n * sizeof(double)));
            if (!in) throw std::runtime_error("read_container: truncated file");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_manifest_file(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_manifest_file: cannot open " + path);
    out << manifest_to_json(manifest).dump(2) << '\n';
    if (!out) throw std::runtime_error("write_manifest_file: write failed: " + path);
}

DatasetManifest read_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_manifest_file: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return manifest_from_json(j);
}

}  // namespace xfdiag
