#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "xfdiag/scenario.hpp"

namespace xfdiag {

// Three-phase differential current samples for one scenario.
struct WaveformRecord {
    ScenarioSpec spec;
    std::array<std::vector<double>, 3> phases;  // a, b, c
    double sample_period = 1e-4;
    double t0 = 0.0;
    double event_time = 0.05;

    std::size_t n() const { return phases[0].size(); }
};

// Parametric signal model. Fault currents are a 60 Hz fundamental with a
// decaying DC offset, inrush currents a saturation-clipped flux response;
// both are deterministic functions of the scenario seed.
struct SynthModel {
    double base_frequency = 60.0;

    // fault amplitude law: A = amp_scale * (winding%/100) / (R + r_floor),
    // times turns_ratio for secondary-side cases
    double amp_scale = 2000.0;
    double r_floor = 0.5;
    double turns_ratio = 400.0 / 220.0;
    double dc_tau = 0.02;            // decaying-offset time constant, seconds
    double post_fault_tau = 0.005;   // decay back to zero after clearance
    double impedance_angle_deg = 80.0;
    double zero_seq_fraction = 0.25; // extra common-mode term on multi-phase ground faults
    double noise_fraction = 0.005;   // noise sigma as a fraction of fault amplitude

    // inrush: flux knee and conduction scale, per-unit mutual flux = 1
    double inrush_knee = 1.1;
    double inrush_scale = 300.0;     // amperes per unit of flux above the knee
    double inrush_tau_noload = 0.5;  // DC-flux decay, seconds
    double inrush_tau_load = 0.35;
    double inrush_noise = 0.2;       // amperes

    double floor_noise = 0.05;       // amperes, healthy-condition mismatch noise
};

WaveformRecord synth_fault(const ScenarioSpec& spec, const GridTiming& timing = {},
                           const SynthModel& model = {});
WaveformRecord synth_inrush(const ScenarioSpec& spec, const GridTiming& timing = {},
                            const SynthModel& model = {});
WaveformRecord synth_nofault(const ScenarioSpec& spec, const GridTiming& timing = {},
                             const SynthModel& model = {});

// Dispatch on spec.kind.
WaveformRecord synthesize(const ScenarioSpec& spec, const GridTiming& timing = {},
                          const SynthModel& model = {});

// One record per manifest spec, in manifest order. Generation may run across
// threads; records are independent so the output never depends on schedule.
std::vector<WaveformRecord> generate_dataset(const DatasetManifest& manifest,
                                             const SynthModel& model = {},
                                             bool parallel = true);

// Peak fundamental amplitude the model assigns to a fault spec.
double fault_amplitude(const FaultParams& fault, const SynthModel& model);

}  // namespace xfdiag
