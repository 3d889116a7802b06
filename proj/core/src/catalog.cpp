#include "xfdiag/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace xfdiag {

namespace {

using WindowKind = BoundFeature::WindowKind;

struct Def {
    std::string name;
    WindowKind window = WindowKind::full;
    std::size_t min_samples = 2;
    std::function<double(Window)> eval;
    nlohmann::json params;
};

std::string trim_num(double v) {
    std::string s = std::to_string(v);
    while (s.find('.') != std::string::npos && (s.back() == '0' || s.back() == '.')) {
        const bool dot = s.back() == '.';
        s.pop_back();
        if (dot) break;
    }
    return s;
}

void add_change_quantiles(std::vector<Def>& defs) {
    // canonical corridor first; this is the classification feature
    defs.push_back({"change_quantile", WindowKind::full, 2,
                    [](Window w) { return change_quantile(w, 0.25, 0.75); },
                    {{"op", "change_quantile"}, {"ql", 0.25}, {"qh", 0.75}, {"mode", "corridor_mean"}}});
    const std::pair<double, double> corridors[] = {
        {0.0, 1.0}, {0.0, 0.9}, {0.1, 1.0}, {0.1, 0.9},
        {0.2, 0.8}, {0.4, 0.6}, {0.0, 0.4}, {0.6, 1.0}};
    for (auto [ql, qh] : corridors) {
        for (auto mode : {ChangeQuantileMode::corridor_mean, ChangeQuantileMode::eq1_literal}) {
            const std::string tag = mode == ChangeQuantileMode::corridor_mean ? "mean" : "lit";
            defs.push_back({"change_quantile.ql" + trim_num(ql) + ".qh" + trim_num(qh) + "." + tag,
                            WindowKind::full, 2,
                            [ql, qh, mode](Window w) { return change_quantile(w, ql, qh, mode); },
                            {{"op", "change_quantile"},
                             {"ql", ql},
                             {"qh", qh},
                             {"mode", mode == ChangeQuantileMode::corridor_mean ? "corridor_mean"
                                                                                : "eq1_literal"}}});
        }
    }
}

void add_stats(std::vector<Def>& defs) {
    struct Item {
        const char* name;
        double (*pick)(const BasicStats&);
    };
    static const Item items[] = {
        {"min", [](const BasicStats& s) { return s.min; }},
        {"max", [](const BasicStats& s) { return s.max; }},
        {"mean", [](const BasicStats& s) { return s.mean; }},
        {"median", [](const BasicStats& s) { return s.median; }},
        {"stddev", [](const BasicStats& s) { return s.stddev; }},
        {"skewness", [](const BasicStats& s) { return s.skewness; }},
        {"kurtosis", [](const BasicStats& s) { return s.kurtosis; }},
        {"quantile.q0.1", [](const BasicStats& s) { return s.q10; }},
        {"quantile.q0.25", [](const BasicStats& s) { return s.q25; }},
        {"quantile.q0.75", [](const BasicStats& s) { return s.q75; }},
        {"quantile.q0.9", [](const BasicStats& s) { return s.q90; }},
        {"mean_crossings", [](const BasicStats& s) { return static_cast<double>(s.mean_crossings); }},
        {"num_peaks", [](const BasicStats& s) { return static_cast<double>(s.num_peaks); }},
    };
    for (const auto& item : items) {
        auto pick = item.pick;
        defs.push_back({item.name, WindowKind::full, 1,
                        [pick](Window w) { return pick(basic_stats(w)); },
                        {{"op", item.name}}});
    }
}

std::vector<Def> default_defs() {
    std::vector<Def> defs;
    add_change_quantiles(defs);

    defs.push_back({"abs_energy", WindowKind::full, 1, [](Window w) { return abs_energy(w); },
                    {{"op", "abs_energy"}}});
    defs.push_back({"abs_energy.onecycle", WindowKind::post_event_cycle, 1,
                    [](Window w) { return abs_energy(w); },
                    {{"op", "abs_energy"}, {"window", "onecycle"}}});

    defs.push_back({"sample_entropy.onecycle", WindowKind::post_event_cycle, 4,
                    [](Window w) { return sample_entropy(w, 2, 0.2); },
                    {{"op", "sample_entropy"}, {"m", 2}, {"r", 0.2}, {"window", "onecycle"}}});
    defs.push_back({"approx_entropy.onecycle", WindowKind::post_event_cycle, 4,
                    [](Window w) { return approximate_entropy(w, 2, 0.2); },
                    {{"op", "approximate_entropy"}, {"m", 2}, {"r", 0.2}, {"window", "onecycle"}}});

    for (int bins : {5, 10, 20}) {
        defs.push_back({"binned_entropy.b" + std::to_string(bins), WindowKind::full, 1,
                        [bins](Window w) { return binned_entropy(w, bins); },
                        {{"op", "binned_entropy"}, {"bins", bins}}});
    }

    add_stats(defs);

    for (int b = 0; b < 10; ++b) {
        defs.push_back({"fft_mag." + std::to_string(b), WindowKind::full,
                        static_cast<std::size_t>(2 * (b + 1)),
                        [b](Window w) { return fft_magnitudes(w, b + 1).back(); },
                        {{"op", "fft_magnitude"}, {"bin", b}}});
    }
    defs.push_back({"harmonic_ratio.onecycle", WindowKind::post_event_cycle, 6,
                    [](Window w) { return harmonic_ratio(w); },
                    {{"op", "harmonic_ratio"}, {"window", "onecycle"}}});

    for (int lag = 1; lag <= 4; ++lag) {
        defs.push_back({"ar_coeff." + std::to_string(lag), WindowKind::full, 9,
                        [lag](Window w) { return ar_coefficients(w, 4).coeffs[lag - 1]; },
                        {{"op", "ar_coefficient"}, {"order", 4}, {"lag", lag}}});
    }

    for (int lvl = 1; lvl <= 3; ++lvl) {
        defs.push_back({"dwt_detail_energy." + std::to_string(lvl), WindowKind::full, 8,
                        [lvl](Window w) { return dwt_coefficients(w, 3).detail_energy[lvl - 1]; },
                        {{"op", "dwt_detail_energy"}, {"wavelet", "haar"}, {"level", lvl}}});
    }
    for (int i = 0; i < 8; ++i) {
        defs.push_back({"dwt_approx." + std::to_string(i), WindowKind::full, 8,
                        [i](Window w) { return dwt_coefficients(w, 3).approx[i]; },
                        {{"op", "dwt_approx"}, {"wavelet", "haar"}, {"levels", 3}, {"index", i}}});
    }
    return defs;
}

BoundFeature bind(int phase, const Def& def) {
    static const char* kPhaseNames[] = {"a", "b", "c"};
    BoundFeature bf;
    bf.phase = phase;
    bf.name = std::string(kPhaseNames[phase]) + "." + def.name;
    bf.window = def.window;
    bf.min_samples = def.min_samples;
    bf.eval = def.eval;
    bf.params = def.params;
    return bf;
}

const Def& find_def(const std::vector<Def>& defs, const std::string& name) {
    for (const auto& d : defs)
        if (d.name == name) return d;
    throw std::logic_error("catalog def not found: " + name);
}

}  // namespace

FeatureCatalog FeatureCatalog::get(const std::string& catalog_id, int one_cycle_samples) {
    FeatureCatalog cat;
    cat.id_ = catalog_id;
    cat.cycle_ = one_cycle_samples;
    const auto defs = default_defs();
    if (catalog_id == "default") {
        for (int phase = 0; phase < 3; ++phase)
            for (const auto& d : defs) cat.entries_.push_back(bind(phase, d));
    } else if (catalog_id == "top3") {
        cat.entries_.push_back(bind(2, find_def(defs, "change_quantile")));
        cat.entries_.push_back(bind(0, find_def(defs, "change_quantile")));
        cat.entries_.push_back(bind(1, find_def(defs, "abs_energy")));
    } else if (catalog_id == "detect") {
        for (int phase = 0; phase < 3; ++phase)
            cat.entries_.push_back(bind(phase, find_def(defs, "sample_entropy.onecycle")));
    } else {
        throw std::invalid_argument("unknown catalog id: " + catalog_id);
    }
    return cat;
}

std::vector<std::string> FeatureCatalog::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
}

nlohmann::json FeatureCatalog::descriptor() const {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& e : entries_) {
        nlohmann::json f = e.params;
        f["name"] = e.name;
        f["window"] = e.window == BoundFeature::WindowKind::full ? "full" : "post_event_cycle";
        features.push_back(std::move(f));
    }
    return {{"catalog_id", id_}, {"one_cycle_samples", cycle_}, {"features", features}};
}

std::vector<std::string> top3_feature_names() {
    return {"c.change_quantile", "a.change_quantile", "b.abs_energy"};
}

FeatureVector extract_vector(const WaveformRecord& rec, const FeatureCatalog& catalog) {
    FeatureVector fv;
    fv.catalog_id = catalog.id();
    fv.names.reserve(catalog.entries().size());
    fv.values.reserve(catalog.entries().size());

    const auto cycle = static_cast<std::size_t>(catalog.one_cycle_samples());
    const auto event_idx = static_cast<std::size_t>(
        std::llround((rec.event_time - rec.t0) / rec.sample_period));

    std::string short_list;
    for (const auto& e : catalog.entries()) {
        const auto& phase = rec.phases[static_cast<std::size_t>(e.phase)];
        Window w;
        if (e.window == BoundFeature::WindowKind::full) {
            w = Window(phase);
        } else {
            if (event_idx + cycle > phase.size()) {
                short_list += short_list.empty() ? e.name : ", " + e.name;
                continue;
            }
            w = Window(phase).subspan(event_idx, cycle);
        }
        if (w.size() < e.min_samples) {
            short_list += short_list.empty() ? e.name : ", " + e.name;
            continue;
        }
        const double v = e.eval(w);
        if (!std::isfinite(v))
            throw std::runtime_error("extract_vector: non-finite value for " + e.name);
        fv.names.push_back(e.name);
        fv.values.push_back(v);
    }
    if (!short_list.empty())
        throw std::invalid_argument("extract_vector: record too short for: " + short_list);
    return fv;
}

}  // namespace xfdiag
