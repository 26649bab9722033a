#pragma once

// =============================================================================
// First- and second-order linear time-varying systems
// =============================================================================
//   order 1:  a1(t) y' + a0(t) y = x
//   order 2:  a2(t) y'' + a1(t) y' + a0(t) y = x
// Coefficients are stored highest order first.
// =============================================================================

#include "ltvcomm/error.hpp"
#include "ltvcomm/timefn.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ltvcomm {

/// Positivity floor for the leading coefficient.
inline constexpr double kLeadingEpsilon = 1e-6;

/// Grid size for the leading-coefficient check.
inline constexpr std::size_t kLeadingCheckPoints = 10'000;

/// Composite Simpson subintervals used by average_eigenvalues.
inline constexpr std::size_t kAverageSubintervals = 10'000;

class LtvSystem {
public:
    LtvSystem(int order, std::vector<TimeFunction> coefficients, double horizon, std::string label)
        : order_(order), coefficients_(std::move(coefficients)), horizon_(horizon), label_(std::move(label)) {}

    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    /// Coefficients highest order first: [a_n, ..., a_0].
    [[nodiscard]] std::span<const TimeFunction> coefficients() const noexcept { return coefficients_; }

    /// Coefficient multiplying the k-th derivative of y.
    [[nodiscard]] const TimeFunction& coefficient(int k) const {
        return coefficients_.at(static_cast<std::size_t>(order_ - k));
    }

    [[nodiscard]] const TimeFunction& leading() const noexcept { return coefficients_.front(); }

private:
    int order_;
    std::vector<TimeFunction> coefficients_;
    double horizon_;
    std::string label_;
};

/// [y] for order 1, [y, y'] for order 2.
struct SystemState {
    std::vector<double> values;
    double time = 0.0;

    static SystemState zero(int order, double t = 0.0) {
        return SystemState{std::vector<double>(static_cast<std::size_t>(order), 0.0), t};
    }
};

enum class EigenKind { AverageOverPeriod, FrozenAtInstant };

struct EigenvalueReport {
    std::vector<std::complex<double>> eigenvalues;
    EigenKind kind = EigenKind::FrozenAtInstant;
    double period_or_instant = 0.0;
};

/// Validates arity and checks a_n(t) >= kLeadingEpsilon on a uniform grid over [0, horizon].
inline LtvSystem make_system(int order, std::vector<TimeFunction> coefficients, double horizon, std::string label) {
    if (order != 1 && order != 2) {
        throw ArityError("system " + label + ": unsupported order " + std::to_string(order));
    }
    if (coefficients.size() != static_cast<std::size_t>(order + 1)) {
        throw ArityError("system " + label + ": order " + std::to_string(order) + " needs " +
                         std::to_string(order + 1) + " coefficients, got " + std::to_string(coefficients.size()));
    }
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
        throw ConfigError("system " + label + ": horizon must be finite and non-negative");
    }
    for (auto& c : coefficients) c = normalize(c);

    const auto& lead = coefficients.front();
    const std::size_t points = horizon > 0.0 ? kLeadingCheckPoints : 1;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : horizon * static_cast<double>(i) / static_cast<double>(points - 1);
        const double v = evaluate(lead, t);
        if (!(v >= kLeadingEpsilon)) {
            throw DegenerateLeadingCoefficient("system " + label + ": leading coefficient " + render(lead) +
                                               " = " + std::to_string(v) + " at t = " + std::to_string(t) +
                                               " is below " + std::to_string(kLeadingEpsilon));
        }
    }
    return LtvSystem(order, std::move(coefficients), horizon, std::move(label));
}

namespace detail {

/// Hot-path form of state_derivative; y and dy hold sys.order() entries.
inline void derivative_into(const LtvSystem& sys, double t, const double* y, double input, double* dy) {
    const auto c = sys.coefficients();
    if (sys.order() == 1) {
        dy[0] = (input - evaluate(c[1], t) * y[0]) / evaluate(c[0], t);
    } else {
        dy[0] = y[1];
        dy[1] = (input - evaluate(c[1], t) * y[1] - evaluate(c[2], t) * y[0]) / evaluate(c[0], t);
    }
}

inline std::vector<std::complex<double>> characteristic_roots(std::span<const double> coef) {
    if (coef.size() == 2) return {std::complex<double>(-coef[1] / coef[0], 0.0)};
    const double a = coef[0];
    const double b = coef[1];
    const double c = coef[2];
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        const double re = -b / (2.0 * a);
        const double im = std::sqrt(-disc) / (2.0 * a);
        return {{re, im}, {re, -im}};
    }
    // Cancellation-free real roots.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = q / a;
    double r2 = q != 0.0 ? c / q : 0.0;
    if (r1 < r2) std::swap(r1, r2);
    return {{r1, 0.0}, {r2, 0.0}};
}

/// Mean of f over [0, period] by composite Simpson with n (even) subintervals.
inline double simpson_mean(const TimeFunction& f, double period, std::size_t n) {
    const double h = period / static_cast<double>(n);
    double acc = evaluate(f, 0.0) + evaluate(f, period);
    for (std::size_t i = 1; i < n; ++i) {
        acc += (i % 2 == 1 ? 4.0 : 2.0) * evaluate(f, h * static_cast<double>(i));
    }
    return acc * h / 3.0 / period;
}

}  // namespace detail

/// Right-hand side of the first-order state form at time t.
inline std::vector<double> state_derivative(const LtvSystem& sys, double t, const SystemState& state, double input) {
    if (state.values.size() != static_cast<std::size_t>(sys.order())) {
        throw ArityError("state length " + std::to_string(state.values.size()) + " does not match order " +
                         std::to_string(sys.order()));
    }
    std::vector<double> dy(state.values.size());
    detail::derivative_into(sys, t, state.values.data(), input, dy.data());
    return dy;
}

/// Roots of the characteristic polynomial with every coefficient replaced by its mean over [0, period].
inline EigenvalueReport average_eigenvalues(const LtvSystem& sys, double period) {
    if (!(period > 0.0)) throw ConfigError("averaging period must be positive");
    std::vector<double> means;
    for (const auto& c : sys.coefficients()) {
        means.push_back(detail::simpson_mean(c, period, kAverageSubintervals));
    }
    return {detail::characteristic_roots(means), EigenKind::AverageOverPeriod, period};
}

/// Roots of the characteristic polynomial with coefficients frozen at t.
inline EigenvalueReport frozen_eigenvalues(const LtvSystem& sys, double t) {
    std::vector<double> values;
    for (const auto& c : sys.coefficients()) values.push_back(evaluate(c, t));
    if (!(values.front() >= kLeadingEpsilon)) {
        throw DegenerateLeadingCoefficient("leading coefficient vanishes at t = " + std::to_string(t));
    }
    return {detail::characteristic_roots(values), EigenKind::FrozenAtInstant, t};
}

}  // namespace ltvcomm
