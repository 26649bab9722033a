#pragma once

// =============================================================================
// Cascade simulation
// =============================================================================
// Both subsystems are advanced together as one augmented state with classical
// fixed-step RK4. Inside every stage the downstream subsystem is driven by the
// upstream subsystem's stage output, so no interpolation is involved. In the
// switched topology the two state vectors persist across switching instants
// and only the interconnection order changes.
// =============================================================================

#include "ltvcomm/error.hpp"
#include "ltvcomm/ltvsys.hpp"
#include "ltvcomm/signalgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ltvcomm {

inline constexpr double kMaxStepsPerRun = 1e8;

struct SolverConfig {
    double step = 1e-3;
    double horizon = 20.0;
    std::size_t record_decimation = 1;

    void validate() const {
        if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("solver step must be positive");
        if (!(horizon >= step) || !std::isfinite(horizon)) throw ConfigError("solver horizon must be >= step");
        if (horizon / step > kMaxStepsPerRun) throw ConfigError("horizon / step exceeds 1e8");
        if (record_decimation == 0) throw ConfigError("record decimation must be positive");
    }

    /// Number of integration steps covering the horizon.
    [[nodiscard]] std::size_t step_count() const {
        return static_cast<std::size_t>(std::floor(horizon / step * (1.0 + 1e-12)));
    }
};

/// Interconnection order: AB means A is on the transmitter side, B on the receiver side.
enum class Path : std::uint8_t { AB, BA };

inline const char* to_string(Path p) { return p == Path::AB ? "AB" : "BA"; }
inline Path flipped(Path p) { return p == Path::AB ? Path::BA : Path::AB; }

struct SwitchingSchedule {
    /// Switching instants, strictly increasing and > 0.
    std::vector<double> boundaries;
    Path initial_path = Path::AB;
    /// Optional explicit path per slot (boundaries.size() + 1 entries); empty means alternate.
    std::vector<Path> paths;

    /// Slots of equal length starting from t = 0; instants at or beyond the horizon are dropped.
    static SwitchingSchedule periodic(double slot, double horizon, Path initial) {
        if (!(slot > 0.0)) throw ConfigError("switching slot must be positive");
        SwitchingSchedule s;
        s.initial_path = initial;
        for (std::size_t k = 1;; ++k) {
            const double ts = slot * static_cast<double>(k);
            if (ts >= horizon * (1.0 - 1e-12)) break;
            s.boundaries.push_back(ts);
        }
        return s;
    }

    [[nodiscard]] Path path_for_slot(std::size_t slot) const {
        if (!paths.empty()) return paths.at(slot);
        return slot % 2 == 0 ? initial_path : flipped(initial_path);
    }

    void validate(double horizon) const {
        for (std::size_t i = 0; i < boundaries.size(); ++i) {
            if (!(boundaries[i] > 0.0)) throw ConfigError("switching instants must be positive");
            if (i > 0 && !(boundaries[i] > boundaries[i - 1])) {
                throw ConfigError("switching instants must be strictly increasing");
            }
            if (boundaries[i] > horizon) throw ConfigError("switching instant beyond the horizon");
        }
        if (!paths.empty() && paths.size() != boundaries.size() + 1) {
            throw ConfigError("explicit path list needs one entry per slot");
        }
    }
};

struct SimulationTrace {
    std::vector<double> times;
    std::vector<double> input;
    /// Output of the current first-in-chain subsystem: the signal on the medium.
    std::vector<double> transmitted;
    std::vector<double> output;
    /// Internal state of the first / second system argument (A and B in switched runs).
    std::vector<std::array<double, 2>> state_first;
    std::vector<std::array<double, 2>> state_second;
    std::vector<Path> active_path;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

namespace detail {

inline void check_horizon(const LtvSystem& sys, double horizon) {
    if (sys.horizon() < horizon * (1.0 - 1e-12)) {
        throw ConfigError("system " + sys.label() + " validated up to t = " + std::to_string(sys.horizon()) +
                          " but the solver horizon is " + std::to_string(horizon));
    }
}

inline std::array<double, 2> to_array(const SystemState& s, const LtvSystem& sys) {
    if (s.values.size() != static_cast<std::size_t>(sys.order())) {
        throw ArityError("initial state of " + sys.label() + " has wrong length");
    }
    std::array<double, 2> out{0.0, 0.0};
    std::copy(s.values.begin(), s.values.end(), out.begin());
    return out;
}

inline SimulationTrace integrate(const LtvSystem& a, const LtvSystem& b, const SwitchingSchedule& schedule,
                                 const SignalSpec& input, const SolverConfig& cfg, std::array<double, 2> ya,
                                 std::array<double, 2> yb) {
    cfg.validate();
    schedule.validate(cfg.horizon);
    check_horizon(a, cfg.horizon);
    check_horizon(b, cfg.horizon);

    const double h = cfg.step;
    const std::size_t n = cfg.step_count();

    std::vector<std::size_t> switch_steps;
    for (double ts : schedule.boundaries) {
        const auto k = static_cast<std::size_t>(std::llround(ts / h));
        if (k == 0 || (!switch_steps.empty() && k <= switch_steps.back())) {
            throw ConfigError("switching instants collapse onto the same integration step");
        }
        switch_steps.push_back(k);
    }

    using State = std::array<double, 4>;  // [yA, yA', yB, yB']
    auto deriv = [&](double t, const State& s, Path path) {
        const double x = input(t);
        const double ua = path == Path::AB ? x : s[2];
        const double ub = path == Path::AB ? s[0] : x;
        State d{};
        derivative_into(a, t, &s[0], ua, &d[0]);
        derivative_into(b, t, &s[2], ub, &d[2]);
        return d;
    };

    State s{ya[0], ya[1], yb[0], yb[1]};
    std::size_t slot = 0;
    Path path = schedule.path_for_slot(0);

    SimulationTrace trace;
    const std::size_t samples = n / cfg.record_decimation + 1;
    trace.times.reserve(samples);
    trace.input.reserve(samples);
    trace.transmitted.reserve(samples);
    trace.output.reserve(samples);
    trace.state_first.reserve(samples);
    trace.state_second.reserve(samples);
    trace.active_path.reserve(samples);

    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * h;
        // Left-closed slots: the new path already applies at the switching step.
        while (slot < switch_steps.size() && switch_steps[slot] == i) {
            ++slot;
            path = schedule.path_for_slot(slot);
        }
        if (i % cfg.record_decimation == 0) {
            trace.times.push_back(t);
            trace.input.push_back(input(t));
            trace.transmitted.push_back(path == Path::AB ? s[0] : s[2]);
            trace.output.push_back(path == Path::AB ? s[2] : s[0]);
            trace.state_first.push_back({s[0], s[1]});
            trace.state_second.push_back({s[2], s[3]});
            trace.active_path.push_back(path);
        }
        if (i == n) break;

        const State k1 = deriv(t, s, path);
        State tmp;
        for (std::size_t j = 0; j < 4; ++j) tmp[j] = s[j] + 0.5 * h * k1[j];
        const State k2 = deriv(t + 0.5 * h, tmp, path);
        for (std::size_t j = 0; j < 4; ++j) tmp[j] = s[j] + 0.5 * h * k2[j];
        const State k3 = deriv(t + 0.5 * h, tmp, path);
        for (std::size_t j = 0; j < 4; ++j) tmp[j] = s[j] + h * k3[j];
        const State k4 = deriv(t + h, tmp, path);
        for (std::size_t j = 0; j < 4; ++j) s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return trace;
}

}  // namespace detail

/// Fixed cascade first -> second. Initial states default to zero (relaxed systems).
inline SimulationTrace integrate_cascade(const LtvSystem& first, const LtvSystem& second, const SignalSpec& input,
                                         const SolverConfig& cfg,
                                         const std::optional<std::pair<SystemState, SystemState>>& initial = {}) {
    std::array<double, 2> y1{0.0, 0.0};
    std::array<double, 2> y2{0.0, 0.0};
    if (initial) {
        y1 = detail::to_array(initial->first, first);
        y2 = detail::to_array(initial->second, second);
    }
    return detail::integrate(first, second, SwitchingSchedule{}, input, cfg, y1, y2);
}

/// Single time-shared channel. Starts relaxed; switching instants snap to the nearest step.
inline SimulationTrace integrate_switched(const LtvSystem& a, const LtvSystem& b, const SwitchingSchedule& schedule,
                                          const SignalSpec& input, const SolverConfig& cfg) {
    return detail::integrate(a, b, schedule, input, cfg, {0.0, 0.0}, {0.0, 0.0});
}

/// sup|x - y| / max(sup|x|, 1e-12)
inline double relative_sup_deviation(std::span<const double> reference, std::span<const double> other) {
    if (reference.size() != other.size()) throw ConfigError("series lengths differ");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        num = std::max(num, std::abs(reference[i] - other[i]));
        den = std::max(den, std::abs(reference[i]));
    }
    return num / std::max(den, 1e-12);
}

/// Time after each switching instant until the switched output stays within
/// band_fraction * max|reference| of the reference for the rest of the slot.
/// +inf when the slot ends outside the band.
inline std::vector<double> settle_times(const SimulationTrace& switched, const SimulationTrace& reference,
                                        std::span<const double> switch_instants, double band_fraction = 0.05) {
    if (switched.size() != reference.size() || switched.size() < 2) {
        throw ConfigError("settle time needs two traces on the same sample grid");
    }
    double peak = 0.0;
    for (double v : reference.output) peak = std::max(peak, std::abs(v));
    const double threshold = band_fraction * peak;
    const double dt = switched.times[1] - switched.times[0];
    const std::size_t n = switched.size();

    auto index_of = [&](double ts) {
        const auto k = static_cast<std::size_t>(std::ceil(ts / dt - 1e-9));
        return std::min(k, n);
    };

    std::vector<double> out;
    for (std::size_t j = 0; j < switch_instants.size(); ++j) {
        const std::size_t i0 = index_of(switch_instants[j]);
        const std::size_t i1 = j + 1 < switch_instants.size() ? index_of(switch_instants[j + 1]) : n;
        std::optional<std::size_t> last;
        for (std::size_t i = i0; i < i1; ++i) {
            if (std::abs(switched.output[i] - reference.output[i]) > threshold) last = i;
        }
        if (!last) {
            out.push_back(0.0);
        } else if (*last + 1 >= i1) {
            out.push_back(std::numeric_limits<double>::infinity());
        } else {
            out.push_back(switched.times[*last + 1] - switched.times[i0]);
        }
    }
    return out;
}

}  // namespace ltvcomm
