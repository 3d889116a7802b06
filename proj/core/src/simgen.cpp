#include "xfdiag/simgen.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "xfdiag/rng.hpp"

namespace xfdiag {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

// electrical angle of each phase relative to phase a
constexpr double phase_shift_deg(int phase) {
    return phase == 0 ? 0.0 : (phase == 1 ? -120.0 : 120.0);
}

struct PhaseSet {
    bool involved[3] = {false, false, false};
    int count = 0;
};

PhaseSet fault_phases(FaultType ft) {
    PhaseSet p;
    auto add = [&p](int i) { p.involved[i] = true; ++p.count; };
    switch (ft) {
        case FaultType::AG: add(0); break;
        case FaultType::BG: add(1); break;
        case FaultType::CG: add(2); break;
        case FaultType::AB: case FaultType::ABG: add(0); add(1); break;
        case FaultType::AC: case FaultType::ACG: add(0); add(2); break;
        case FaultType::BC: case FaultType::BCG: add(1); add(2); break;
        case FaultType::TP: case FaultType::TPG: add(0); add(1); add(2); break;
        case FaultType::NOFAULT: break;
    }
    return p;
}

WaveformRecord make_empty(const ScenarioSpec& spec, const GridTiming& timing) {
    WaveformRecord rec;
    rec.spec = spec;
    rec.sample_period = timing.sample_period;
    rec.t0 = 0.0;
    rec.event_time = timing.event_time;
    const std::size_t n = timing.n_samples();
    for (auto& ph : rec.phases) ph.assign(n, 0.0);
    return rec;
}

void add_noise(WaveformRecord& rec, double sigma) {
    for (int p = 0; p < 3; ++p) {
        CounterRng rng(derive_seed(rec.spec.seed, static_cast<std::uint64_t>(p)));
        for (double& v : rec.phases[p]) v += sigma * rng.next_normal();
    }
}

}  // namespace

double fault_amplitude(const FaultParams& fault, const SynthModel& model) {
    double a = model.amp_scale * (fault.winding_percent / 100.0) /
               (fault.resistance_ohm + model.r_floor);
    if (fault.side == WindingSide::secondary) a *= model.turns_ratio;
    return a;
}

WaveformRecord synth_fault(const ScenarioSpec& spec, const GridTiming& timing,
                           const SynthModel& model) {
    if (spec.kind != ScenarioKind::fault || !spec.fault)
        throw std::invalid_argument("synth_fault: spec is not a fault scenario");

    WaveformRecord rec = make_empty(spec, timing);
    const FaultParams& f = *spec.fault;
    const PhaseSet phases = fault_phases(f.type);
    const bool grounded = is_ground_fault(f.type);

    const double amp = fault_amplitude(f, model);
    const double omega = 2.0 * kPi * model.base_frequency;
    const double alpha = f.inception_angle_deg * kDegToRad;
    const double theta = model.impedance_angle_deg * kDegToRad;
    const double t_on = timing.event_time;
    const double t_off = timing.event_time + timing.fault_duration;

    // short-circuit current with a decaying offset chosen so i(t_on) = 0
    auto loop_current = [&](double t_rel, double shift_rad) {
        const double phi = alpha + shift_rad - theta;
        return amp * (std::sin(omega * t_rel + phi) -
                      std::sin(phi) * std::exp(-t_rel / model.dc_tau));
    };

    const std::size_t n = rec.n();
    std::array<double, 3> at_clear = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double t = rec.t0 + static_cast<double>(i) * rec.sample_period;
        if (t < t_on) continue;
        const double t_rel = t - t_on;
        const bool in_window = t < t_off;

        std::array<double, 3> cur = {0.0, 0.0, 0.0};
        if (in_window) {
            if (phases.count == 2 && !grounded) {
                // ungrounded phase-phase loop: equal and opposite currents
                int first = -1, second = -1;
                for (int p = 0; p < 3; ++p) {
                    if (!phases.involved[p]) continue;
                    (first < 0 ? first : second) = p;
                }
                const double x = loop_current(t_rel, phase_shift_deg(first) * kDegToRad);
                cur[first] = x;
                cur[second] = -x;
            } else {
                for (int p = 0; p < 3; ++p) {
                    if (!phases.involved[p]) continue;
                    cur[p] = loop_current(t_rel, phase_shift_deg(p) * kDegToRad);
                }
                if (grounded && phases.count >= 2) {
                    // residual ground-path current shared by the faulted phases
                    const double z = model.zero_seq_fraction * loop_current(t_rel, 0.0);
                    for (int p = 0; p < 3; ++p)
                        if (phases.involved[p]) cur[p] += z;
                }
            }
            at_clear = cur;
        } else {
            const double decay = std::exp(-(t - t_off) / model.post_fault_tau);
            for (int p = 0; p < 3; ++p) cur[p] = at_clear[p] * decay;
        }
        for (int p = 0; p < 3; ++p) rec.phases[p][i] = cur[p];
    }

    add_noise(rec, model.noise_fraction * amp);
    return rec;
}

WaveformRecord synth_inrush(const ScenarioSpec& spec, const GridTiming& timing,
                            const SynthModel& model) {
    if (spec.kind != ScenarioKind::inrush || !spec.inrush)
        throw std::invalid_argument("synth_inrush: spec is not an inrush scenario");

    WaveformRecord rec = make_empty(spec, timing);
    const InrushParams& p = *spec.inrush;
    const double omega = 2.0 * kPi * model.base_frequency;
    const double t_sw = timing.event_time;
    const double tau = p.load == LoadState::load ? model.inrush_tau_load
                                                 : model.inrush_tau_noload;

    // residual flux pattern: the carrier phase holds the signed residual,
    // the other two balance it at half magnitude
    std::array<double, 3> residual{};
    for (int ph = 0; ph < 3; ++ph) {
        const double r = p.residual_flux_percent / 100.0;
        residual[ph] = (ph == p.flux_pattern) ? r : -0.5 * r;
    }

    const std::size_t n = rec.n();
    for (int ph = 0; ph < 3; ++ph) {
        const double theta = (p.switching_angle_deg + phase_shift_deg(ph)) * kDegToRad;
        const double offset0 = residual[ph] + std::cos(theta);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = rec.t0 + static_cast<double>(i) * rec.sample_period;
            if (t < t_sw) continue;
            const double t_rel = t - t_sw;
            // core flux in per-unit of the steady-state peak; current flows
            // only while the flux is beyond the saturation knee
            const double flux = offset0 * std::exp(-t_rel / tau) - std::cos(omega * t_rel + theta);
            const double over = std::abs(flux) - model.inrush_knee;
            if (over > 0.0)
                rec.phases[ph][i] = model.inrush_scale * (flux > 0.0 ? over : -over);
        }
    }

    add_noise(rec, model.inrush_noise);
    return rec;
}

WaveformRecord synth_nofault(const ScenarioSpec& spec, const GridTiming& timing,
                             const SynthModel& model) {
    if (spec.kind != ScenarioKind::nofault)
        throw std::invalid_argument("synth_nofault: spec is not a no-fault scenario");
    WaveformRecord rec = make_empty(spec, timing);
    add_noise(rec, model.floor_noise);
    return rec;
}

WaveformRecord synthesize(const ScenarioSpec& spec, const GridTiming& timing,
                          const SynthModel& model) {
    switch (spec.kind) {
        case ScenarioKind::fault: return synth_fault(spec, timing, model);
        case ScenarioKind::inrush: return synth_inrush(spec, timing, model);
        case ScenarioKind::nofault: return synth_nofault(spec, timing, model);
    }
    throw std::invalid_argument("synthesize: unknown scenario kind");
}

std::vector<WaveformRecord> generate_dataset(const DatasetManifest& manifest,
                                             const SynthModel& model, bool parallel) {
    const std::size_t n = manifest.specs.size();
    std::vector<WaveformRecord> out(n);

    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = synthesize(manifest.specs[i], manifest.timing, model);
    };

    const unsigned hw = std::thread::hardware_concurrency();
    if (!parallel || n < 64 || hw < 2) {
        work(0, n);
        return out;
    }

    const std::size_t n_tasks = std::min<std::size_t>(hw, (n + 63) / 64);
    const std::size_t chunk = (n + n_tasks - 1) / n_tasks;
    std::vector<std::future<void>> tasks;
    for (std::size_t lo = 0; lo < n; lo += chunk)
        tasks.push_back(std::async(std::launch::async, work, lo, std::min(lo + chunk, n)));
    for (auto& t : tasks) t.get();
    return out;
}

}  // namespace xfdiag
