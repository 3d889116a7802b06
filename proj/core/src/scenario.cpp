#include "xfdiag/scenario.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "xfdiag/rng.hpp"

namespace xfdiag {

namespace {

// Stream tags keep fault/inrush/nofault seed streams disjoint even when all
// grids are built from the same master seed.
constexpr std::uint64_t kFaultStream = 0x66616c74ULL;    // "falt"
constexpr std::uint64_t kInrushStream = 0x696e7275ULL;   // "inru"
constexpr std::uint64_t kNofaultStream = 0x6e6f666cULL;  // "nofl"

std::uint64_t scenario_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t ordinal) {
    return derive_seed(mix64(master ^ stream), ordinal);
}

constexpr std::array<const char*, 12> kFaultNames = {
    "AG", "BG", "CG", "ABG", "ACG", "BCG", "AB", "AC", "BC", "TPG", "TP", "NOFAULT"};

constexpr std::array<const char*, 7> kMergedNames = {
    "AG", "BG", "CG", "AB_ABG", "BC_BCG", "CA_CAG", "TP_TPG"};

}  // namespace

bool is_internal_fault(FaultType ft) { return ft != FaultType::NOFAULT; }

bool is_ground_fault(FaultType ft) {
    switch (ft) {
        case FaultType::AG:
        case FaultType::BG:
        case FaultType::CG:
        case FaultType::ABG:
        case FaultType::ACG:
        case FaultType::BCG:
        case FaultType::TPG:
            return true;
        default:
            return false;
    }
}

MergedClass merge_class(FaultType ft) {
    switch (ft) {
        case FaultType::AG: return MergedClass::AG;
        case FaultType::BG: return MergedClass::BG;
        case FaultType::CG: return MergedClass::CG;
        case FaultType::AB:
        case FaultType::ABG: return MergedClass::AB_ABG;
        case FaultType::BC:
        case FaultType::BCG: return MergedClass::BC_BCG;
        case FaultType::AC:
        case FaultType::ACG: return MergedClass::CA_CAG;
        case FaultType::TP:
        case FaultType::TPG: return MergedClass::TP_TPG;
        case FaultType::NOFAULT:
            break;
    }
    throw std::invalid_argument("merge_class: not an internal fault");
}

std::string to_string(FaultType ft) { return kFaultNames[static_cast<int>(ft)]; }
std::string to_string(MergedClass mc) { return kMergedNames[static_cast<int>(mc)]; }

FaultType fault_type_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kFaultNames.size(); ++i)
        if (s == kFaultNames[i]) return static_cast<FaultType>(i);
    throw std::invalid_argument("unknown fault type: " + s);
}

MergedClass merged_class_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kMergedNames.size(); ++i)
        if (s == kMergedNames[i]) return static_cast<MergedClass>(i);
    throw std::invalid_argument("unknown merged class: " + s);
}

std::string display_label(MergedClass mc) {
    switch (mc) {
        case MergedClass::AG: return "a-g";
        case MergedClass::BG: return "b-g";
        case MergedClass::CG: return "c-g";
        case MergedClass::AB_ABG: return "ab-g, ab";
        case MergedClass::BC_BCG: return "bc-g, bc";
        case MergedClass::CA_CAG: return "ca-g, ca";
        case MergedClass::TP_TPG: return "3-ph, 3-ph-g";
    }
    return "?";
}

std::string ScenarioSpec::label() const {
    switch (kind) {
        case ScenarioKind::fault: return to_string(fault->type);
        case ScenarioKind::inrush: return "INRUSH";
        case ScenarioKind::nofault: return "NOFAULT";
    }
    return "?";
}

std::string ScenarioSpec::merged_label() const {
    if (kind != ScenarioKind::fault) return "";
    return to_string(merge_class(fault->type));
}

std::size_t GridTiming::n_samples() const {
    return static_cast<std::size_t>(std::llround(run_time / sample_period));
}

FaultGridAxes FaultGridAxes::full() {
    FaultGridAxes a;
    for (int deg = 0; deg < 360; deg += 15) a.inception_angles.push_back(deg);
    a.resistances = {1.0, 5.0, 10.0};
    for (int w = 20; w <= 80; w += 10) a.winding_percents.push_back(w);
    a.sides = {WindingSide::primary, WindingSide::secondary};
    return a;
}

FaultGridAxes FaultGridAxes::reduced() {
    FaultGridAxes a;
    a.inception_angles = {0.0, 90.0, 180.0, 270.0};
    a.resistances = {1.0, 5.0, 10.0};
    a.winding_percents = {20.0, 50.0, 80.0};
    a.sides = {WindingSide::primary, WindingSide::secondary};
    return a;
}

std::map<std::string, std::size_t> DatasetManifest::counts() const {
    std::map<std::string, std::size_t> c;
    for (const auto& s : specs) ++c[s.label()];
    return c;
}

void DatasetManifest::append(const DatasetManifest& other) {
    specs.insert(specs.end(), other.specs.begin(), other.specs.end());
}

DatasetManifest build_fault_grid(std::uint64_t master_seed) {
    return build_fault_grid(master_seed, FaultGridAxes::full());
}

DatasetManifest build_fault_grid(std::uint64_t master_seed, const FaultGridAxes& axes,
                                 const GridTiming& timing) {
    DatasetManifest m;
    m.master_seed = master_seed;
    m.timing = timing;
    std::uint64_t ordinal = 0;
    for (int t = 0; t < kNumInternalFaults; ++t) {
        for (double ang : axes.inception_angles) {
            for (double res : axes.resistances) {
                for (double wind : axes.winding_percents) {
                    for (WindingSide side : axes.sides) {
                        ScenarioSpec s;
                        s.kind = ScenarioKind::fault;
                        s.fault = FaultParams{static_cast<FaultType>(t), ang, res, wind, side};
                        s.seed = scenario_seed(master_seed, kFaultStream, ordinal++);
                        m.specs.push_back(std::move(s));
                    }
                }
            }
        }
    }
    return m;
}

DatasetManifest build_inrush_grid(std::uint64_t master_seed, const GridTiming& timing) {
    DatasetManifest m;
    m.master_seed = master_seed;
    m.timing = timing;
    std::uint64_t ordinal = 0;
    for (int deg = 0; deg < 360; deg += 15) {
        for (double flux : {-80.0, -40.0, 0.0, 40.0, 80.0}) {
            for (LoadState load : {LoadState::load, LoadState::noload}) {
                for (int pattern = 0; pattern < 3; ++pattern) {
                    ScenarioSpec s;
                    s.kind = ScenarioKind::inrush;
                    s.inrush = InrushParams{static_cast<double>(deg), flux, load, pattern};
                    s.seed = scenario_seed(master_seed, kInrushStream, ordinal++);
                    m.specs.push_back(std::move(s));
                }
            }
        }
    }
    return m;
}

DatasetManifest build_nofault_set(std::uint64_t master_seed, std::size_t count,
                                  const GridTiming& timing) {
    DatasetManifest m;
    m.master_seed = master_seed;
    m.timing = timing;
    for (std::size_t i = 0; i < count; ++i) {
        ScenarioSpec s;
        s.kind = ScenarioKind::nofault;
        s.seed = scenario_seed(master_seed, kNofaultStream, i);
        m.specs.push_back(std::move(s));
    }
    return m;
}

void to_json(nlohmann::json& j, const ScenarioSpec& spec) {
    j = nlohmann::json::object();
    switch (spec.kind) {
        case ScenarioKind::fault: j["kind"] = "fault"; break;
        case ScenarioKind::inrush: j["kind"] = "inrush"; break;
        case ScenarioKind::nofault: j["kind"] = "nofault"; break;
    }
    j["seed"] = spec.seed;
    if (spec.fault) {
        j["fault_type"] = to_string(spec.fault->type);
        j["inception_angle"] = spec.fault->inception_angle_deg;
        j["fault_resistance"] = spec.fault->resistance_ohm;
        j["winding_percent"] = spec.fault->winding_percent;
        j["side"] = spec.fault->side == WindingSide::primary ? "primary" : "secondary";
    }
    if (spec.inrush) {
        j["switching_angle"] = spec.inrush->switching_angle_deg;
        j["residual_flux"] = spec.inrush->residual_flux_percent;
        j["load_state"] = spec.inrush->load == LoadState::load ? "load" : "noload";
        j["flux_pattern"] = spec.inrush->flux_pattern;
    }
}

void from_json(const nlohmann::json& j, ScenarioSpec& spec) {
    const std::string kind = j.at("kind");
    spec = ScenarioSpec{};
    spec.seed = j.at("seed").get<std::uint64_t>();
    if (kind == "fault") {
        spec.kind = ScenarioKind::fault;
        FaultParams f;
        f.type = fault_type_from_string(j.at("fault_type"));
        f.inception_angle_deg = j.at("inception_angle");
        f.resistance_ohm = j.at("fault_resistance");
        f.winding_percent = j.at("winding_percent");
        f.side = j.at("side") == "primary" ? WindingSide::primary : WindingSide::secondary;
        spec.fault = f;
    } else if (kind == "inrush") {
        spec.kind = ScenarioKind::inrush;
        InrushParams p;
        p.switching_angle_deg = j.at("switching_angle");
        p.residual_flux_percent = j.at("residual_flux");
        p.load = j.at("load_state") == "load" ? LoadState::load : LoadState::noload;
        p.flux_pattern = j.at("flux_pattern");
        spec.inrush = p;
    } else if (kind == "nofault") {
        spec.kind = ScenarioKind::nofault;
    } else {
        throw std::invalid_argument("unknown scenario kind: " + kind);
    }
}

void to_json(nlohmann::json& j, const GridTiming& t) {
    j = {{"sample_period", t.sample_period},
         {"run_time", t.run_time},
         {"event_time", t.event_time},
         {"fault_duration", t.fault_duration}};
}

void from_json(const nlohmann::json& j, GridTiming& t) {
    t.sample_period = j.at("sample_period");
    t.run_time = j.at("run_time");
    t.event_time = j.at("event_time");
    t.fault_duration = j.at("fault_duration");
}

nlohmann::json manifest_to_json(const DatasetManifest& m) {
    nlohmann::json j;
    j["master_seed"] = m.master_seed;
    j["timing"] = m.timing;
    j["counts"] = m.counts();
    j["n_specs"] = m.specs.size();
    j["specs"] = m.specs;
    return j;
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
    DatasetManifest m;
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.timing = j.at("timing").get<GridTiming>();
    m.specs = j.at("specs").get<std::vector<ScenarioSpec>>();
    return m;
}

}  // namespace xfdiag
