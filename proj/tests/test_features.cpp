#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "testdata.hpp"
#include "xfdiag/catalog.hpp"
#include "xfdiag/features.hpp"
#include "xfdiag/simgen.hpp"

using namespace xfdiag;

namespace {

bool close(double a, double b, double tol = 1e-9) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

TEST_SUITE("features") {

TEST_CASE("quantile interpolates between order statistics") {
    const std::vector<double> w = {4.0, 1.0, 3.0, 2.0};
    CHECK(quantile(w, 0.0) == 1.0);
    CHECK(quantile(w, 1.0) == 4.0);
    CHECK(quantile(w, 0.5) == 2.5);
    CHECK(quantile(w, 0.25) == 1.75);
    CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(quantile(w, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(quantile(w, 1.1), std::invalid_argument);
}

TEST_CASE("change quantile hand fixtures") {
    // full corridor, literal normalization: (1 + 2 + 3) / 4
    const std::vector<double> ramp = {1.0, 2.0, 4.0, 7.0};
    CHECK(change_quantile(ramp, 0.0, 1.0, ChangeQuantileMode::eq1_literal) == 1.5);
    // constant series: no changes at all
    const std::vector<double> flat = {5.0, 5.0, 5.0, 5.0};
    CHECK(change_quantile(flat, 0.0, 1.0) == 0.0);
    CHECK(change_quantile(flat, 0.0, 1.0, ChangeQuantileMode::eq1_literal) == 0.0);
    // absolute corridor [0, 5]: only the (1, 2) pair qualifies
    const std::vector<double> spiky = {0.0, 10.0, 1.0, 2.0};
    CHECK(change_quantile_bounds(spiky, 0.0, 5.0) == 1.0);
    // no qualifying pair at all
    CHECK(change_quantile_bounds(spiky, 100.0, 200.0) == 0.0);
    CHECK_THROWS_AS(change_quantile(std::vector<double>{1.0}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(change_quantile(ramp, 0.8, 0.2), std::invalid_argument);
}

TEST_CASE("change quantile is translation invariant") {
    const auto w = testdata::window(101, 1, 167);
    auto shifted = w;
    for (auto& v : shifted) v += 37.5;
    for (auto mode : {ChangeQuantileMode::corridor_mean, ChangeQuantileMode::eq1_literal})
        CHECK(close(change_quantile(w, 0.1, 0.9, mode), change_quantile(shifted, 0.1, 0.9, mode)));
}

TEST_CASE("absolute energy hand fixtures and scaling") {
    CHECK(abs_energy(std::vector<double>{1.0, 2.0, 3.0}) == 14.0);
    CHECK(abs_energy(std::vector<double>{-2.0}) == 4.0);
    CHECK(abs_energy(std::vector<double>{}) == 0.0);
    const auto w = testdata::window(102, 2, 167);
    auto scaled = w;
    for (auto& v : scaled) v *= 3.0;
    CHECK(close(abs_energy(scaled), 9.0 * abs_energy(w), 1e-12));
}

TEST_CASE("sample entropy of regular series is zero") {
    const std::vector<double> flat(20, 3.0);
    CHECK(sample_entropy(flat, 2, 0.2) == 0.0);
    std::vector<double> alt(30);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? 1.0 : 0.0;
    // every length-2 match extends to length 3, so -ln(A/B) = 0
    CHECK(sample_entropy(alt, 2, 0.2) == 0.0);
}

TEST_CASE("sample entropy matches the reference on noise") {
    const auto w = testdata::window(103, 4, 167);
    CHECK(close(sample_entropy(w, 2, 0.2), oracle::sample_entropy(w, 2, 0.2)));
    CHECK(close(approximate_entropy(w, 2, 0.2), oracle::approx_entropy(w, 2, 0.2)));
}

TEST_CASE("entropy with a relative radius is affine invariant") {
    const auto w = testdata::window(104, 0, 120);
    std::vector<double> mapped(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) mapped[i] = 3.75 * w[i] + 11.0;
    CHECK(close(sample_entropy(w, 2, 0.2), sample_entropy(mapped, 2, 0.2)));
    CHECK(close(approximate_entropy(w, 2, 0.2), approximate_entropy(mapped, 2, 0.2)));
}

TEST_CASE("entropy guards") {
    const std::vector<double> tiny = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(sample_entropy(tiny, 2, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(approximate_entropy(tiny, 2, 0.2), std::invalid_argument);
    const std::vector<double> w = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK_THROWS_AS(sample_entropy(w, 0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(approximate_entropy(w, 0, 0.2), std::invalid_argument);
}

TEST_CASE("approximate entropy of a constant series is zero") {
    const std::vector<double> flat(25, 1.5);
    CHECK(approximate_entropy(flat, 2, 0.2) == 0.0);
}

TEST_CASE("binned entropy fixtures") {
    CHECK(binned_entropy(std::vector<double>(10, 4.0), 10) == 0.0);
    std::vector<double> uniform(10);
    for (std::size_t i = 0; i < uniform.size(); ++i) uniform[i] = static_cast<double>(i);
    CHECK(binned_entropy(uniform, 10) == doctest::Approx(std::log(10.0)));
    const std::vector<double> halves = {0.0, 0.0, 1.0, 1.0};
    CHECK(binned_entropy(halves, 2) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(binned_entropy({}, 10), std::invalid_argument);
    CHECK_THROWS_AS(binned_entropy(halves, 0), std::invalid_argument);
}

TEST_CASE("basic stats hand fixtures") {
    const auto st = basic_stats(std::vector<double>{1.0, 2.0, 3.0});
    CHECK(st.min == 1.0);
    CHECK(st.max == 3.0);
    CHECK(st.mean == 2.0);
    CHECK(st.median == 2.0);
    CHECK(st.stddev == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(st.skewness == 0.0);
    CHECK(st.mean_crossings == 1);
    CHECK(st.num_peaks == 0);

    const auto zigzag = basic_stats(std::vector<double>{0.0, 1.0, 0.0, 1.0, 0.0});
    CHECK(zigzag.num_peaks == 2);
    CHECK(zigzag.mean_crossings == 4);

    const auto skewed = basic_stats(std::vector<double>{0.0, 0.0, 0.0, 10.0});
    CHECK(skewed.skewness > 0.0);

    const auto flat = basic_stats(std::vector<double>(6, 2.0));
    CHECK(flat.stddev == 0.0);
    CHECK(flat.skewness == 0.0);
    CHECK(flat.kurtosis == 0.0);
    CHECK_THROWS_AS(basic_stats({}), std::invalid_argument);
}

TEST_CASE("dft magnitudes of pure tones") {
    const std::size_t n = 167;
    std::vector<double> tone(n), flat(n, 2.5);
    for (std::size_t t = 0; t < n; ++t)
        tone[t] = 3.0 * std::sin(testdata::kTau * static_cast<double>(t) / static_cast<double>(n));
    const auto mags = fft_magnitudes(tone, 3);
    CHECK(mags[1] == doctest::Approx(3.0 * static_cast<double>(n) / 2.0).epsilon(0.02));
    CHECK(mags[0] < 0.01 * mags[1]);
    CHECK(mags[2] < 0.01 * mags[1]);
    const auto dc = fft_magnitudes(flat, 2);
    CHECK(dc[0] == doctest::Approx(2.5 * static_cast<double>(n)));
    CHECK(dc[1] < 1e-9 * dc[0]);
    CHECK_THROWS_AS(fft_magnitudes(std::vector<double>{1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(fft_magnitudes(tone, 0), std::invalid_argument);
    CHECK_THROWS_AS(fft_magnitudes(tone, static_cast<int>(n)), std::invalid_argument);
}

TEST_CASE("harmonic ratio looks at the leading cycle only") {
    std::vector<double> w(400, 0.0);
    for (std::size_t t = 0; t < 167; ++t)
        w[t] = std::sin(testdata::kTau * static_cast<double>(t) / 167.0);
    for (std::size_t t = 167; t < w.size(); ++t) w[t] = 50.0;  // ignored
    const double r = harmonic_ratio(w);
    CHECK(r == doctest::Approx(harmonic_ratio(std::span(w).first(167))));
    CHECK(r < 0.05);

    std::vector<double> second(167);
    for (std::size_t t = 0; t < second.size(); ++t)
        second[t] = 0.1 * std::sin(testdata::kTau * static_cast<double>(t) / 167.0) +
                    2.0 * std::sin(2.0 * testdata::kTau * static_cast<double>(t) / 167.0);
    CHECK(harmonic_ratio(second) > 5.0);
    CHECK(fft_coefficients(second, 5).size() == 6);
    CHECK(fft_coefficients(second, 5).back() == doctest::Approx(harmonic_ratio(second)));
}

TEST_CASE("exact linear recursions are recovered") {
    // second-order recursion with poles at radius 0.98
    const double a1 = 2.0 * 0.98 * std::cos(testdata::kTau / 20.0);
    const double a2 = -0.98 * 0.98;
    std::vector<double> w(120);
    w[0] = 0.3;
    w[1] = -0.2;
    for (std::size_t t = 2; t < w.size(); ++t) w[t] = a1 * w[t - 1] + a2 * w[t - 2];
    const auto fit = ar_coefficients(w, 2);
    REQUIRE(!fit.degenerate);
    CHECK(close(fit.coeffs[0], a1));
    CHECK(close(fit.coeffs[1], a2));

    // order 4 on the same data is rank deficient
    CHECK(ar_coefficients(w, 4).degenerate);
}

TEST_CASE("noisy first-order recursion is recovered approximately") {
    CounterRng rng(12345);
    std::vector<double> w(1500);
    w[0] = 0.0;
    for (std::size_t t = 1; t < w.size(); ++t)
        w[t] = 0.9 * w[t - 1] + 0.1 * (2.0 * rng.next_uniform() - 1.0);
    const auto fit = ar_coefficients(w, 1);
    REQUIRE(!fit.degenerate);
    CHECK(std::fabs(fit.coeffs[0] - 0.9) < 0.02);
}

TEST_CASE("degenerate autoregression inputs") {
    CHECK(ar_coefficients(std::vector<double>(30, 0.0), 4).degenerate);
    CHECK(ar_coefficients(std::vector<double>(30, 2.0), 4).degenerate);
    const auto degenerate = ar_coefficients(std::vector<double>(30, 2.0), 4);
    CHECK(degenerate.coeffs == std::vector<double>(4, 0.0));
    CHECK_THROWS_AS(ar_coefficients(std::vector<double>(8, 1.0), 4), std::invalid_argument);
    CHECK_THROWS_AS(ar_coefficients(std::vector<double>(30, 1.0), 0), std::invalid_argument);
}

TEST_CASE("haar transform hand fixtures") {
    const auto flat = dwt_coefficients(std::vector<double>(8, 2.0), 3);
    CHECK(flat.detail_energy == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(flat.approx[0] == doctest::Approx(16.0 / (2.0 * std::numbers::sqrt2)));
    for (int i = 1; i < 8; ++i) CHECK(flat.approx[static_cast<std::size_t>(i)] == 0.0);

    // step edge inside a pair: energies 0.5 / 0.25 / 1.125, approx 2.5 / sqrt(2)
    const std::vector<double> step = {0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    const auto r = dwt_coefficients(step, 3);
    CHECK(r.detail_energy[0] == doctest::Approx(0.5));
    CHECK(r.detail_energy[1] == doctest::Approx(0.25));
    CHECK(r.detail_energy[2] == doctest::Approx(1.125));
    CHECK(r.approx[0] == doctest::Approx(2.5 / std::numbers::sqrt2));
}

TEST_CASE("haar transform conserves energy on power-of-two windows") {
    const auto w = testdata::window(105, 1, 64);
    const auto r = dwt_coefficients(w, 3);
    double total = 0.0;
    for (double e : r.detail_energy) total += e;
    for (double a : r.approx) total += a * a;  // 64 / 2^3 = 8 coefficients, all kept
    CHECK(close(total, abs_energy(w), 1e-12));
}

TEST_CASE("haar transform zero-pads to the next power of two") {
    const std::vector<double> w = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
    const auto r = dwt_coefficients(w, 3);  // padded to 16, final approx has 2 slots
    CHECK(r.approx[2] == 0.0);
    CHECK(r.approx[7] == 0.0);
    CHECK_THROWS_AS(dwt_coefficients(std::vector<double>(6, 1.0), 3), std::invalid_argument);
    CHECK_THROWS_AS(dwt_coefficients(w, 0), std::invalid_argument);
}

TEST_CASE("default catalog shape") {
    const auto cat = FeatureCatalog::get("default");
    const auto names = cat.names();
    CHECK(names.size() == 189);
    CHECK(names.front() == "a.change_quantile");
    std::set<std::string> unique(names.begin(), names.end());
    CHECK(unique.size() == names.size());
    // phase-major layout: same 63 features repeated for a, b, c
    for (std::size_t i = 0; i < 63; ++i) {
        CHECK(names[i].substr(0, 2) == "a.");
        CHECK(names[i + 63] == "b." + names[i].substr(2));
        CHECK(names[i + 126] == "c." + names[i].substr(2));
    }
    const auto desc = cat.descriptor();
    CHECK(desc.at("catalog_id") == "default");
    CHECK(desc.at("one_cycle_samples") == kOneCycleSamples);
    CHECK(desc.at("features").size() == 189);
}

TEST_CASE("named catalogs") {
    CHECK(FeatureCatalog::get("top3").names() ==
          std::vector<std::string>{"c.change_quantile", "a.change_quantile", "b.abs_energy"});
    CHECK(FeatureCatalog::get("top3").names() == top3_feature_names());
    CHECK(FeatureCatalog::get("detect").names() ==
          std::vector<std::string>{"a.sample_entropy.onecycle", "b.sample_entropy.onecycle",
                                   "c.sample_entropy.onecycle"});
    CHECK_THROWS_AS(FeatureCatalog::get("bogus"), std::invalid_argument);
}

TEST_CASE("extract_vector is deterministic and complete") {
    ScenarioSpec s;
    s.kind = ScenarioKind::fault;
    s.fault = FaultParams{FaultType::ABG, 75.0, 5.0, 40.0, WindingSide::primary};
    s.seed = 9;
    const auto rec = synth_fault(s);
    const auto cat = FeatureCatalog::get("default");
    const auto a = extract_vector(rec, cat);
    const auto b = extract_vector(rec, cat);
    CHECK(a.names.size() == 189);
    CHECK(a.values == b.values);
    for (double v : a.values) CHECK(std::isfinite(v));
    CHECK(a.catalog_id == "default");
}

TEST_CASE("extract_vector reports every short feature") {
    WaveformRecord rec;
    rec.spec.kind = ScenarioKind::nofault;
    rec.sample_period = 1e-4;
    rec.t0 = 0.0;
    rec.event_time = 0.005;  // event at sample 50, so no room for a full cycle
    for (auto& ph : rec.phases) ph.assign(100, 0.25);
    try {
        extract_vector(rec, FeatureCatalog::get("default"));
        FAIL("expected a too-short error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("a.sample_entropy.onecycle") != std::string::npos);
        CHECK(msg.find("c.abs_energy.onecycle") != std::string::npos);
        CHECK(msg.find("a.change_quantile") == std::string::npos);
    }
}

}  // TEST_SUITE
