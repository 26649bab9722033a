#pragma once

// =============================================================================
// Commutative pair synthesis
// =============================================================================
// Order 2 (k2 > 0):
//   b2 = a2 k2
//   b1 = a1 k2 + sqrt(a2) k1
//   b0 = a0 k2 + fA k1 + k0,        fA = (2 a1 - a2') / (4 sqrt(a2))
// Exact commutativity for k1 != 0 requires A0 = a0 - fA^2 - sqrt(a2) fA' to be
// constant.
//
// Order 1:
//   b1 = a1 c1
//   b0 = a0 c1 + c0
// Exact for constant c1, c0; time-varying c1(t), c0(t) give pseudo-commutative
// pairs. Unrelaxed commutativity additionally needs c1 + c0 = 1.
// =============================================================================

#include "ltvcomm/error.hpp"
#include "ltvcomm/ltvsys.hpp"
#include "ltvcomm/signalgen.hpp"
#include "ltvcomm/simulate.hpp"
#include "ltvcomm/timefn.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace ltvcomm {

/// Relative tolerance for declaring an indicator constant.
inline constexpr double kConstantTolerance = 1e-6;

/// Samples used for indicator constancy checks.
inline constexpr std::size_t kIndicatorSamples = 1'000;

struct SecondOrderParams {
    double k2 = 1.0;
    double k1 = 0.0;
    double k0 = 0.0;
};

struct FirstOrderParams {
    TimeFunction c1 = TimeFunction::constant(1.0);
    TimeFunction c0 = TimeFunction::constant(0.0);
};

using SynthesisParams = std::variant<SecondOrderParams, FirstOrderParams>;

inline int order_of(const SynthesisParams& p) { return std::holds_alternative<SecondOrderParams>(p) ? 2 : 1; }

struct CommutativityVerdict {
    TimeFunction indicator;
    bool is_constant = false;
    double constant_value = 0.0;
    double max_deviation_from_mean = 0.0;
    bool nonzero_ic_ok = false;
};

/// Verdict for a pair of first-order systems: B = c1 A + c0 with c1 = b1/a1, c0 = b0 - a0 c1.
struct FirstOrderPairVerdict {
    CommutativityVerdict c1;
    CommutativityVerdict c0;
    bool nonzero_ic_ok = false;
};

namespace detail {

inline void require_positive_on_grid(const TimeFunction& f, double horizon, const std::string& what) {
    const std::size_t points = horizon > 0.0 ? kLeadingCheckPoints : 1;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : horizon * static_cast<double>(i) / static_cast<double>(points - 1);
        if (!(evaluate(f, t) > 0.0)) {
            throw DomainError(what + " is not positive at t = " + std::to_string(t));
        }
    }
}

inline CommutativityVerdict constancy(const TimeFunction& indicator, double horizon) {
    CommutativityVerdict v;
    v.indicator = indicator;
    std::vector<double> samples;
    samples.reserve(kIndicatorSamples);
    for (std::size_t i = 0; i < kIndicatorSamples; ++i) {
        const double t =
            horizon > 0.0 ? horizon * static_cast<double>(i) / static_cast<double>(kIndicatorSamples - 1) : 0.0;
        samples.push_back(evaluate(indicator, t));
    }
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double dev = 0.0;
    for (double s : samples) dev = std::max(dev, std::abs(s - mean));
    v.constant_value = mean;
    v.max_deviation_from_mean = dev;
    v.is_constant = dev <= kConstantTolerance * std::max(1.0, std::abs(mean));
    return v;
}

inline void require_order(const LtvSystem& sys, int order, const char* op) {
    if (sys.order() != order) {
        throw NotApplicable(std::string(op) + " needs an order-" + std::to_string(order) + " system, got " +
                            sys.label() + " of order " + std::to_string(sys.order()));
    }
}

}  // namespace detail

/// fA = (2 a1 - a2') / (4 sqrt(a2)), normalized.
inline TimeFunction feedthrough_fn(const LtvSystem& a) {
    detail::require_order(a, 2, "feedthrough_fn");
    const auto& a2 = a.coefficient(2);
    const auto& a1 = a.coefficient(1);
    detail::require_positive_on_grid(a2, a.horizon(), "a2 of " + a.label());
    return normalize(TimeFunction::product(
        {TimeFunction::constant(0.25), 2.0 * a1 - differentiate(a2), TimeFunction::recip_sqrt(a2)}));
}

/// A0(t) = a0 - fA^2 - sqrt(a2) fA', sampled over A's horizon for constancy.
inline CommutativityVerdict commutativity_indicator(const LtvSystem& a) {
    detail::require_order(a, 2, "commutativity_indicator");
    const auto fa = feedthrough_fn(a);
    const auto indicator = normalize(a.coefficient(0) - TimeFunction::power(fa, 2.0) -
                                     TimeFunction::sqrt(a.coefficient(2)) * differentiate(fa));
    return detail::constancy(indicator, a.horizon());
}

struct PairSynthesis {
    LtvSystem system;
    /// Constancy of A0; B commutes with A for k1 != 0 only when it holds.
    CommutativityVerdict verdict;
};

inline PairSynthesis synthesize_pair_order2(const LtvSystem& a, const SecondOrderParams& p) {
    detail::require_order(a, 2, "synthesize_pair_order2");
    if (!(p.k2 > 0.0)) throw NonPositiveLeading("k2 must be positive, got " + std::to_string(p.k2));
    const auto fa = feedthrough_fn(a);
    const auto& a2 = a.coefficient(2);
    const auto& a1 = a.coefficient(1);
    const auto& a0 = a.coefficient(0);
    std::vector<TimeFunction> b{
        normalize(a2 * p.k2),
        normalize(a1 * p.k2 + TimeFunction::sqrt(a2) * p.k1),
        normalize(a0 * p.k2 + fa * p.k1 + TimeFunction::constant(p.k0)),
    };
    return {make_system(2, std::move(b), a.horizon(), "B"), commutativity_indicator(a)};
}

inline LtvSystem synthesize_pair_order1(const LtvSystem& a, const FirstOrderParams& p) {
    detail::require_order(a, 1, "synthesize_pair_order1");
    std::vector<TimeFunction> b{
        normalize(a.coefficient(1) * p.c1),
        normalize(a.coefficient(0) * p.c1 + p.c0),
    };
    try {
        return make_system(1, std::move(b), a.horizon(), "B");
    } catch (const DegenerateLeadingCoefficient& e) {
        throw NonPositiveLeading(std::string("synthesized b1 = a1 c1: ") + e.what());
    }
}

/// Dispatches on the parameter order.
inline LtvSystem synthesize_pair(const LtvSystem& a, const SynthesisParams& p) {
    if (const auto* p2 = std::get_if<SecondOrderParams>(&p)) return synthesize_pair_order2(a, *p2).system;
    return synthesize_pair_order1(a, std::get<FirstOrderParams>(p));
}

/// c1 + c0 = 1 for constant first-order parameters.
inline bool nonzero_ic_condition(const SynthesisParams& params) {
    const auto* p = std::get_if<FirstOrderParams>(&params);
    if (p == nullptr) throw NotApplicable("nonzero-IC condition is defined for first-order parameters only");
    const auto c1 = normalize(p->c1);
    const auto c0 = normalize(p->c0);
    if (!c1.is_constant() || !c0.is_constant()) {
        throw NotApplicable("nonzero-IC condition needs constant c1 and c0");
    }
    return std::abs(c1.value() + c0.value() - 1.0) <= 1e-12;
}

/// Recovers c1(t) = b1/a1 and c0(t) = b0 - a0 c1 and checks both for constancy.
inline FirstOrderPairVerdict first_order_pair_verdict(const LtvSystem& a, const LtvSystem& b) {
    detail::require_order(a, 1, "first_order_pair_verdict");
    detail::require_order(b, 1, "first_order_pair_verdict");
    const auto& a1 = a.coefficient(1);
    const auto inv_a1 = TimeFunction::recip_sqrt(a1) * TimeFunction::recip_sqrt(a1);
    const auto c1 = normalize(b.coefficient(1) * inv_a1);
    const auto c0 = normalize(b.coefficient(0) - a.coefficient(0) * c1);
    const double horizon = std::min(a.horizon(), b.horizon());
    FirstOrderPairVerdict v{detail::constancy(c1, horizon), detail::constancy(c0, horizon), false};
    v.nonzero_ic_ok = v.c1.is_constant && v.c0.is_constant &&
                      std::abs(v.c1.constant_value + v.c0.constant_value - 1.0) <=
                          kConstantTolerance * std::max(1.0, std::abs(v.c1.constant_value));
    v.c1.nonzero_ic_ok = v.nonzero_ic_ok;
    v.c0.nonzero_ic_ok = v.nonzero_ic_ok;
    return v;
}

/// Relative sup-norm distance between the relaxed AB and BA outputs.
inline double commutation_deviation(const LtvSystem& a, const LtvSystem& b, const SignalSpec& input,
                                    const SolverConfig& cfg) {
    const auto ab = integrate_cascade(a, b, input, cfg);
    const auto ba = integrate_cascade(b, a, input, cfg);
    return relative_sup_deviation(ab.output, ba.output);
}

}  // namespace ltvcomm
