#pragma once

// Built-in reference systems, parameters and inputs used by the bundled
// scenarios, the selftest and the acceptance suite.

#include "ltvcomm/commute.hpp"
#include "ltvcomm/expr_parser.hpp"
#include "ltvcomm/ltvsys.hpp"
#include "ltvcomm/signalgen.hpp"

namespace ltvcomm::catalog {

/// Second-order pair with w0 = 2 pi (coefficient period 1 s).
inline LtvSystem example1_a(double horizon = 20.0) {
    return make_system(2,
                       {parse_expression("1"), parse_expression("2 + 2*sin(2*pi*t)"),
                        parse_expression("5 - 1/2*cos(4*pi*t) + 2*sin(2*pi*t) + 2*pi*cos(2*pi*t)")},
                       horizon, "A");
}

inline LtvSystem example1_b(double horizon = 20.0) {
    return make_system(2,
                       {parse_expression("1/2"), parse_expression("3/4 + sin(2*pi*t)"),
                        parse_expression("409/32 - 1/4*cos(4*pi*t) + 3/4*sin(2*pi*t) + pi*cos(2*pi*t)")},
                       horizon, "B");
}

/// k0 = 337/32 reproduces example1_b exactly.
inline SecondOrderParams example1_params() { return {0.5, -0.25, 337.0 / 32.0}; }

/// k0 as printed alongside the example; it does not reproduce example1_b.
inline constexpr double kExample1PrintedK0 = 4213.0 / 400.0;

/// Lightly damped first-order system; its frozen eigenvalue touches 0 at odd t.
inline LtvSystem example2_a(double horizon = 40.0) {
    return make_system(1, {parse_expression("1"), parse_expression("1 + cos(pi*t)")}, horizon, "A");
}

inline FirstOrderParams example2_params() { return {TimeFunction::constant(1.0), TimeFunction::constant(1.0)}; }

/// Heavily damped first-order system.
inline LtvSystem example3_a(double horizon = 40.0) {
    return make_system(1, {parse_expression("1"), parse_expression("5 + cos(pi*t)")}, horizon, "A");
}

inline FirstOrderParams example3_params() { return {TimeFunction::constant(1.0), TimeFunction::constant(-3.0)}; }

/// Slowly varying parameters giving a pseudo-commutative partner for example3_a.
inline FirstOrderParams example4_params() {
    return {parse_expression("2 + sin(0.1*pi*t)"), parse_expression("-3*cos(0.2*pi*t)")};
}

/// 30 sin(1.2 pi t) + sawtooth(3.3 s, -30..30)
inline SignalSpec example1_input() { return SignalSpec({Sine{30.0, 0.6, 0.0}, Sawtooth{3.3, -30.0, 30.0}}); }

/// Pulse train, amplitude 30, period 5 s, 10 % duty.
inline SignalSpec example1_pulse_input() { return SignalSpec({PulseTrain{30.0, 5.0, 0.10}}); }

/// 10 sin(2 pi t) + sawtooth(3 s, -30..30)
inline SignalSpec switching_input() { return SignalSpec({Sine{10.0, 1.0, 0.0}, Sawtooth{3.0, -30.0, 30.0}}); }

/// 12 sin(2 pi t)
inline SignalSpec example4_input() { return SignalSpec({Sine{12.0, 1.0, 0.0}}); }

}  // namespace ltvcomm::catalog
