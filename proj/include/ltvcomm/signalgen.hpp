#pragma once

#include "ltvcomm/error.hpp"

#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

namespace ltvcomm {

/// amplitude * sin(2 pi f t + phase)
struct Sine {
    double amplitude = 0.0;
    double frequency_hz = 0.0;
    double phase_rad = 0.0;
};

/// Rising ramp from min_value to max_value, resetting to min_value every period.
struct Sawtooth {
    double period_s = 1.0;
    double min_value = -1.0;
    double max_value = 1.0;
};

/// amplitude for the first duty_fraction of each period, 0 for the rest.
struct PulseTrain {
    double amplitude = 1.0;
    double period_s = 1.0;
    double duty_fraction = 0.5;
};

struct ConstantLevel {
    double value = 0.0;
};

using SignalTerm = std::variant<Sine, Sawtooth, PulseTrain, ConstantLevel>;

namespace detail {

/// Fractional part in [0, 1).
inline double frac(double x) {
    const double f = x - std::floor(x);
    return f < 1.0 ? f : 0.0;
}

inline void validate(const SignalTerm& term) {
    if (const auto* s = std::get_if<Sawtooth>(&term)) {
        if (!(s->period_s > 0.0)) throw ConfigError("sawtooth period must be positive");
        if (!(s->min_value < s->max_value)) throw ConfigError("sawtooth min must be below max");
    } else if (const auto* p = std::get_if<PulseTrain>(&term)) {
        if (!(p->period_s > 0.0)) throw ConfigError("pulse period must be positive");
        if (!(p->duty_fraction > 0.0 && p->duty_fraction < 1.0)) {
            throw ConfigError("pulse duty fraction must lie in (0, 1)");
        }
    }
}

inline double sample_term(const SignalTerm& term, double t) {
    struct Visitor {
        double t;
        double operator()(const Sine& s) const {
            return s.amplitude * std::sin(2.0 * std::numbers::pi * s.frequency_hz * t + s.phase_rad);
        }
        double operator()(const Sawtooth& s) const {
            const double v = s.min_value + (s.max_value - s.min_value) * frac(t / s.period_s);
            return v < s.max_value ? v : std::nextafter(s.max_value, s.min_value);
        }
        double operator()(const PulseTrain& p) const {
            return frac(t / p.period_s) < p.duty_fraction ? p.amplitude : 0.0;
        }
        double operator()(const ConstantLevel& c) const { return c.value; }
    };
    return std::visit(Visitor{t}, term);
}

}  // namespace detail

/// Input signal as a sum of primitive waveforms.
class SignalSpec {
public:
    SignalSpec() = default;

    explicit SignalSpec(std::vector<SignalTerm> terms) : terms_(std::move(terms)) {
        for (const auto& term : terms_) detail::validate(term);
    }

    SignalSpec& add(SignalTerm term) {
        detail::validate(term);
        terms_.push_back(term);
        return *this;
    }

    [[nodiscard]] const std::vector<SignalTerm>& terms() const noexcept { return terms_; }

    [[nodiscard]] double operator()(double t) const {
        double acc = 0.0;
        for (const auto& term : terms_) acc += detail::sample_term(term, t);
        return acc;
    }

private:
    std::vector<SignalTerm> terms_;
};

inline double sample(const SignalSpec& spec, double t) { return spec(t); }

}  // namespace ltvcomm
