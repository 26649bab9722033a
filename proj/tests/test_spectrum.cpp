#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

using namespace ltvcomm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

/// Direct O(N^2) one-sided periodogram, written from the definition.
std::vector<double> direct_periodogram(std::vector<double> x, double fs, Window window) {
    if (x.size() % 2 == 1) x.pop_back();
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> w(n, 1.0);
    if (window == Window::Hann) {
        for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(std::sin(pi * static_cast<double>(i) / n), 2);
    }
    double wsum2 = 0.0;
    for (double v : w) wsum2 += v * v;
    std::vector<double> p(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        long double re = 0.0L;
        long double im = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            const long double arg = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * i) % n) / n;
            const long double v = (x[i] - mean) * w[i];
            re += v * std::cos(arg);
            im += v * std::sin(arg);
        }
        const double weight = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        p[k] = weight * static_cast<double>(re * re + im * im) / (fs * wsum2);
    }
    return p;
}

double windowed_mean_square(std::span<const double> series, Window window) {
    const auto x = prepared_series(series, window);
    const auto w = window_coefficients(window, x.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += x[i] * x[i];
        den += w[i] * w[i];
    }
    return num / den;
}

PowerSpectrum single_bin(std::size_t bins, std::size_t k) {
    PowerSpectrum p;
    p.sample_rate_hz = 2.0 * static_cast<double>(bins - 1);
    for (std::size_t i = 0; i < bins; ++i) {
        p.frequencies_hz.push_back(static_cast<double>(i));
        p.power.push_back(i == k ? 1.0 : 0.0);
    }
    return p;
}

}  // namespace

TEST_CASE("zero series gives zero power") {
    const auto ps = periodogram(std::vector<double>(64, 0.0), 10.0);
    for (double p : ps.power) CHECK(p == 0.0);
    const auto flat = periodogram(std::vector<double>(64, 3.5), 10.0);
    for (double p : flat.power) CHECK(p == 0.0);
}

TEST_CASE("bin-aligned tone") {
    constexpr std::size_t n = 1000;
    constexpr double fs = 100.0;
    constexpr std::size_t k = 70;
    constexpr double amplitude = 4.0;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = amplitude * std::cos(2.0 * pi * k * static_cast<double>(i) / n + 0.3);
    const auto ps = periodogram(x, fs, Window::Rectangular);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps.power[i] > ps.power[peak]) peak = i;
    }
    CHECK(peak == k);
    CHECK_THAT(ps.frequencies_hz[peak], WithinAbs(7.0, 1e-12));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i != k) CHECK(ps.power[i] < 1e-20 * ps.power[k]);
    }
    CHECK_THAT(integrated_power(ps), WithinRel(amplitude * amplitude / 2.0, 1e-6));
}

TEST_CASE("frequency grid") {
    const auto even = periodogram(std::vector<double>(100, 1.0), 50.0);
    CHECK(even.size() == 51);
    CHECK(even.frequencies_hz.front() == 0.0);
    CHECK(even.frequencies_hz.back() == 25.0);
    CHECK(even.sample_rate_hz == 50.0);
    CHECK(even.window == Window::Hann);
    for (std::size_t i = 1; i < even.size(); ++i) CHECK(even.frequencies_hz[i] > even.frequencies_hz[i - 1]);

    std::vector<double> odd(101);
    for (std::size_t i = 0; i < odd.size(); ++i) odd[i] = std::sin(0.3 * i) + 0.01 * i;
    const auto po = periodogram(odd, 50.0);
    CHECK(po.size() == 51);
    CHECK(po.frequencies_hz.back() == 25.0);
    const auto truncated = periodogram(std::span<const double>(odd).first(100), 50.0);
    CHECK(po.power == truncated.power);
}

TEST_CASE("short series are rejected") {
    CHECK_THROWS_AS(periodogram(std::vector<double>(15, 1.0), 1.0), SeriesTooShort);
    CHECK_NOTHROW(periodogram(std::vector<double>(16, 1.0), 1.0));
    CHECK_THROWS_AS(periodogram(std::vector<double>(32, 1.0), 0.0), ConfigError);
}

TEST_CASE("periodogram matches a direct DFT") {
    testsupport::ExpressionGenerator gen(8);
    for (std::size_t n : {16u, 17u, 64u, 255u, 1000u, 2001u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = gen.uniform(-3.0, 5.0);
        for (Window w : {Window::Rectangular, Window::Hann}) {
            const auto ps = periodogram(x, 7.5, w);
            const auto ref = direct_periodogram(x, 7.5, w);
            REQUIRE(ps.size() == ref.size());
            // Relative to the spectral peak: near-empty bins such as DC carry only rounding noise.
            const double peak = *std::max_element(ref.begin(), ref.end());
            for (std::size_t k = 0; k < ref.size(); ++k) {
                INFO("n = " << n << ", k = " << k);
                CHECK_THAT(ps.power[k], WithinAbs(ref[k], 1e-9 * peak));
            }
            CHECK(oracle::periodogram_vs_direct_dft(x, 7.5, w) <= 1e-9);
        }
    }
}

TEST_CASE("power is non-negative") {
    testsupport::ExpressionGenerator gen(19);
    std::vector<double> x(513);
    for (auto& v : x) v = gen.uniform(-1.0, 1.0);
    for (double p : periodogram(x, 1.0).power) CHECK(p >= 0.0);
}

TEST_CASE("Parseval holds for random series") {
    testsupport::ExpressionGenerator gen(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(std::uniform_int_distribution<int>(16, 5000)(gen.rng()));
        for (auto& v : x) v = gen.uniform(-10.0, 10.0) + 3.0;
        for (Window w : {Window::Rectangular, Window::Hann}) {
            const auto ps = periodogram(x, gen.uniform(1.0, 1000.0), w);
            CHECK_THAT(integrated_power(ps), WithinRel(windowed_mean_square(x, w), 1e-6));
        }
        // With a rectangular window this is the plain mean square of the mean-removed series.
        const auto x0 = prepared_series(x, Window::Rectangular);
        double ms = 0.0;
        for (double v : x0) ms += v * v;
        ms /= static_cast<double>(x0.size());
        CHECK_THAT(integrated_power(periodogram(x, 3.0, Window::Rectangular)), WithinRel(ms, 1e-6));
    }
}

TEST_CASE("Parseval holds on every bundled trace") {
    for (const auto& name : testsupport::bundled_scenarios()) {
        const auto sc = testsupport::load(name);
        const auto r = run_scenario(sc, RunOptions{".", false});
        const std::size_t factor = spectrum_decimation(sc.solver, 100.0);
        std::vector<const SimulationTrace*> traces{&r.ab, &r.ba};
        if (r.switched) traces.push_back(&*r.switched);
        for (const auto* tr : traces) {
            for (const auto* series : {&tr->input, &tr->transmitted, &tr->output}) {
                const auto x = decimate(*series, factor);
                const auto ps = periodogram(x, 100.0, Window::Hann);
                INFO(name);
                CHECK_THAT(integrated_power(ps), WithinRel(windowed_mean_square(x, Window::Hann), 1e-6));
            }
        }
    }
}

TEST_CASE("spectral distance properties") {
    testsupport::ExpressionGenerator gen(41);
    std::vector<double> x(400);
    std::vector<double> y(400);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::sin(0.2 * i) + gen.uniform(-0.2, 0.2);
        y[i] = std::sin(0.5 * i) + gen.uniform(-0.2, 0.2);
    }
    const auto p = periodogram(x, 10.0);
    const auto q = periodogram(y, 10.0);
    CHECK_THAT(spectral_distance(p, p), WithinAbs(0.0, 1e-15));
    const double d = spectral_distance(p, q);
    CHECK(d > 0.0);
    CHECK(d <= 1.0);
    CHECK(d == spectral_distance(q, p));

    for (double s : {1e-6, 0.5, 3.0, 1e8}) {
        auto scaled = q;
        for (auto& v : scaled.power) v *= s;
        CHECK_THAT(spectral_distance(p, scaled), WithinAbs(d, 1e-12));
    }

    CHECK(spectral_distance(single_bin(9, 2), single_bin(9, 5)) == 1.0);
    CHECK(spectral_distance(single_bin(9, 3), single_bin(9, 3)) == 0.0);

    auto zero = p;
    for (auto& v : zero.power) v = 0.0;
    CHECK(spectral_distance(zero, zero) == 0.0);
    CHECK(spectral_distance(zero, p) == 1.0);

    CHECK_THROWS_AS(spectral_distance(p, periodogram(std::vector<double>(402, 0.0), 10.0)), GridMismatch);
    CHECK_THROWS_AS(spectral_distance(p, periodogram(x, 20.0)), GridMismatch);
}

TEST_CASE("example 1 spectra contrast") {
    const auto a = catalog::example1_a();
    const auto b = catalog::example1_b();
    const SolverConfig cfg{1e-3, 20.0, 1};
    const auto ab = integrate_cascade(a, b, catalog::example1_input(), cfg);
    const auto ba = integrate_cascade(b, a, catalog::example1_input(), cfg);
    const auto f = [](const std::vector<double>& s) { return periodogram(decimate(s, 10), 100.0, Window::Hann); };
    CHECK(spectral_distance(f(ab.transmitted), f(ba.transmitted)) > 0.1);
    CHECK(spectral_distance(f(ab.output), f(ba.output)) < 1e-3);
}

TEST_CASE("decimation") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5, 6};
    CHECK(decimate(x, 1) == x);
    CHECK(decimate(x, 3) == std::vector<double>{0, 3, 6});
    CHECK(decimate(x, 10) == std::vector<double>{0});
    CHECK_THROWS_AS(decimate(x, 0), ConfigError);
}

TEST_CASE("spectrum CSV export") {
    PowerSpectrum ps;
    ps.frequencies_hz = {0.0, 0.5, 1.0};
    ps.power = {0.0, 1.0 / 3.0, 12345.678912345};
    ps.sample_rate_hz = 2.0;
    CHECK(export_spectrum_csv(ps) == "frequency_hz,power\n0,0\n0.5,0.333333333\n1,12345.6789\n");
    CHECK(format_sig9(-2.5e-7) == "-2.5e-07");
    CHECK(format_sig9(123456789012.0) == "1.23456789e+11");
}
