#pragma once

// One-sided periodogram of a real series and a cosine distance between spectra.
//
//   P[k] = (2 - [k in {0, N/2}]) |DFT(w x)[k]|^2 / (fs sum w^2),   k = 0..N/2
//
// The series is mean-removed before windowing. Odd-length series drop their
// final sample so that the grid always ends exactly at Nyquist.

#include "ltvcomm/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace ltvcomm {

enum class Window { Rectangular, Hann };

inline constexpr std::size_t kMinSpectrumLength = 16;

struct PowerSpectrum {
    std::vector<double> frequencies_hz;
    std::vector<double> power;
    double sample_rate_hz = 0.0;
    Window window = Window::Hann;

    [[nodiscard]] std::size_t size() const noexcept { return power.size(); }
};

/// Periodic (DFT-even) window of length n.
inline std::vector<double> window_coefficients(Window window, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (window == Window::Hann) {
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
        }
    }
    return w;
}

/// Mean-removed, windowed series as fed to the DFT (even length).
inline std::vector<double> prepared_series(std::span<const double> series, Window window) {
    const std::size_t n = series.size() - series.size() % 2;
    const double mean = std::accumulate(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(n), 0.0) /
                        static_cast<double>(n);
    const auto w = window_coefficients(window, n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (series[i] - mean) * w[i];
    return out;
}

inline PowerSpectrum periodogram(std::span<const double> series, double sample_rate_hz, Window window = Window::Hann) {
    if (series.size() < kMinSpectrumLength) {
        throw SeriesTooShort("periodogram needs at least " + std::to_string(kMinSpectrumLength) + " samples, got " +
                             std::to_string(series.size()));
    }
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");

    auto x = prepared_series(series, window);
    const std::size_t n = x.size();
    const std::size_t bins = n / 2 + 1;
    const auto w = window_coefficients(window, n);
    double wsum2 = 0.0;
    for (double v : w) wsum2 += v * v;

    std::vector<std::complex<double>> spec(bins);
    {
        // FFTW planning is not thread-safe; estimate mode keeps it cheap.
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(),
                                              reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
        std::unique_ptr<std::remove_pointer_t<fftw_plan>, decltype(&fftw_destroy_plan)> guard(plan,
                                                                                               fftw_destroy_plan);
        fftw_execute(plan);
    }

    PowerSpectrum ps;
    ps.sample_rate_hz = sample_rate_hz;
    ps.window = window;
    ps.frequencies_hz.resize(bins);
    ps.power.resize(bins);
    const double scale = 1.0 / (sample_rate_hz * wsum2);
    for (std::size_t k = 0; k < bins; ++k) {
        ps.frequencies_hz[k] = sample_rate_hz * static_cast<double>(k) / static_cast<double>(n);
        const double weight = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        ps.power[k] = weight * std::norm(spec[k]) * scale;
    }
    ps.frequencies_hz.back() = sample_rate_hz / 2.0;
    return ps;
}

/// Discrete Parseval sum of the one-sided density: sum_k P[k] * fs / N.
/// Equals sum((w x)^2) / sum(w^2), the plain mean square for a rectangular window.
inline double integrated_power(const PowerSpectrum& ps) {
    if (ps.size() < 2) return 0.0;
    const double df = ps.frequencies_hz[1] - ps.frequencies_hz[0];
    double acc = 0.0;
    for (double p : ps.power) acc += p;
    return acc * df;
}

/// 1 - <p/|p|, q/|q|>; 0 for two zero spectra, 1 when exactly one is zero.
inline double spectral_distance(const PowerSpectrum& p, const PowerSpectrum& q) {
    if (p.size() != q.size() || p.frequencies_hz != q.frequencies_hz) {
        throw GridMismatch("spectra are on different frequency grids");
    }
    double pp = 0.0;
    double qq = 0.0;
    double pq = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        pp += p.power[k] * p.power[k];
        qq += q.power[k] * q.power[k];
        pq += p.power[k] * q.power[k];
    }
    if (pp == 0.0 && qq == 0.0) return 0.0;
    if (pp == 0.0 || qq == 0.0) return 1.0;
    const double cosine = pq / (std::sqrt(pp) * std::sqrt(qq));
    return std::clamp(1.0 - cosine, 0.0, 1.0);
}

/// Keeps every factor-th sample.
inline std::vector<double> decimate(std::span<const double> series, std::size_t factor) {
    if (factor == 0) throw ConfigError("decimation factor must be positive");
    std::vector<double> out;
    out.reserve(series.size() / factor + 1);
    for (std::size_t i = 0; i < series.size(); i += factor) out.push_back(series[i]);
    return out;
}

/// 9 significant digits, '.' separator, "0" for zero.
inline std::string format_sig9(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    if (ec != std::errc{}) throw std::runtime_error("cannot format value");
    return std::string(buf, end);
}

/// CSV with header frequency_hz,power.
inline std::string export_spectrum_csv(const PowerSpectrum& ps) {
    std::string out = "frequency_hz,power\n";
    for (std::size_t k = 0; k < ps.size(); ++k) {
        out += format_sig9(ps.frequencies_hz[k]);
        out += ',';
        out += format_sig9(ps.power[k]);
        out += '\n';
    }
    return out;
}

}  // namespace ltvcomm
