#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace xfdiag {

// The 11 internal winding fault types plus the healthy condition. Inrush is
// not a fault type; it is a scenario kind of its own (see ScenarioSpec).
enum class FaultType { AG, BG, CG, ABG, ACG, BCG, AB, AC, BC, TPG, TP, NOFAULT };

// Classes after merging each phase-phase fault with its grounded variant.
enum class MergedClass { AG, BG, CG, AB_ABG, BC_BCG, CA_CAG, TP_TPG };

enum class ScenarioKind { fault, inrush, nofault };
enum class WindingSide { primary, secondary };
enum class LoadState { load, noload };

inline constexpr int kNumInternalFaults = 11;
inline constexpr int kNumMergedClasses = 7;

bool is_internal_fault(FaultType ft);
bool is_ground_fault(FaultType ft);

// AB/ABG -> AB_ABG, AC/ACG -> CA_CAG, BC/BCG -> BC_BCG, TP/TPG -> TP_TPG,
// single-phase types map to themselves. Throws on NOFAULT.
MergedClass merge_class(FaultType ft);

std::string to_string(FaultType ft);
std::string to_string(MergedClass mc);
FaultType fault_type_from_string(const std::string& s);
MergedClass merged_class_from_string(const std::string& s);

// Report-style labels: "a-g", "ab-g, ab", "3-ph, 3-ph-g", ...
std::string display_label(MergedClass mc);

struct FaultParams {
    FaultType type = FaultType::AG;
    double inception_angle_deg = 0.0;  // 0..345 in 15 deg steps
    double resistance_ohm = 1.0;       // 1, 5, 10
    double winding_percent = 20.0;     // 20..80 in 10 % steps
    WindingSide side = WindingSide::primary;
};

struct InrushParams {
    double switching_angle_deg = 0.0;    // 0..345 in 15 deg steps
    double residual_flux_percent = 0.0;  // -80, -40, 0, 40, 80
    LoadState load = LoadState::load;
    int flux_pattern = 0;  // which phase carries the signed residual flux (0=a,1=b,2=c)
};

// One simulated case. Fault-only fields live in `fault`, inrush-only fields
// in `inrush`; exactly the group matching `kind` is present.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::nofault;
    std::optional<FaultParams> fault;
    std::optional<InrushParams> inrush;
    std::uint64_t seed = 0;

    // "AG".."TP", "INRUSH" or "NOFAULT"
    std::string label() const;
    // merged-class label for fault scenarios, empty otherwise
    std::string merged_label() const;
};

struct GridTiming {
    double sample_period = 1e-4;   // 100 us
    double run_time = 0.12;        // seconds
    double event_time = 0.05;      // fault inception / switch-on instant
    double fault_duration = 0.05;  // 3 cycles at 60 Hz

    std::size_t n_samples() const;
};

struct FaultGridAxes {
    std::vector<double> inception_angles;
    std::vector<double> resistances;
    std::vector<double> winding_percents;
    std::vector<WindingSide> sides;

    // 24 angles x 3 resistances x 7 winding taps x 2 sides = 1008 per type
    static FaultGridAxes full();
    // 4 x 3 x 3 x 2 = 72 per type, for desk-scale runs
    static FaultGridAxes reduced();
};

struct DatasetManifest {
    std::vector<ScenarioSpec> specs;
    std::uint64_t master_seed = 0;
    GridTiming timing;

    std::map<std::string, std::size_t> counts() const;
    // append another manifest built from the same master seed
    void append(const DatasetManifest& other);
};

// Scenario grids. Enumeration order is fixed (outer to inner loop):
//   faults:  type, inception angle, resistance, winding percent, side
//   inrush:  switching angle, residual flux, load state, flux pattern
// Per-scenario seeds derive from (master_seed, stream tag, ordinal), so a
// scenario regenerates identically regardless of which grid subset is built.
DatasetManifest build_fault_grid(std::uint64_t master_seed);
DatasetManifest build_fault_grid(std::uint64_t master_seed, const FaultGridAxes& axes,
                                 const GridTiming& timing = {});
DatasetManifest build_inrush_grid(std::uint64_t master_seed, const GridTiming& timing = {});
DatasetManifest build_nofault_set(std::uint64_t master_seed, std::size_t count,
                                  const GridTiming& timing = {});

void to_json(nlohmann::json& j, const ScenarioSpec& spec);
void from_json(const nlohmann::json& j, ScenarioSpec& spec);
void to_json(nlohmann::json& j, const GridTiming& t);
void from_json(const nlohmann::json& j, GridTiming& t);

nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

}  // namespace xfdiag
