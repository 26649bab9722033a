#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace ltvcomm;
using Catch::Matchers::WithinAbs;

namespace {

TimeFunction P(const char* text) { return parse_expression(text); }
TimeFunction C(double v) { return TimeFunction::constant(v); }

LtvSystem order2(const char* a2, const char* a1, const char* a0, double horizon = 10.0) {
    return make_system(2, {P(a2), P(a1), P(a0)}, horizon, "A");
}

bool systems_equal(const LtvSystem& x, const LtvSystem& y) {
    if (x.order() != y.order()) return false;
    for (std::size_t k = 0; k < x.coefficients().size(); ++k) {
        if (!structurally_equal(normalize(x.coefficients()[k]), normalize(y.coefficients()[k]))) return false;
    }
    return true;
}

bool systems_close(const LtvSystem& x, const LtvSystem& y, double rel_tol) {
    if (x.order() != y.order()) return false;
    for (std::size_t k = 0; k < x.coefficients().size(); ++k) {
        if (!structurally_close(normalize(x.coefficients()[k]), normalize(y.coefficients()[k]), rel_tol)) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("feedthrough function examples") {
    const auto fa = feedthrough_fn(catalog::example1_a());
    CHECK(structurally_equal(fa, normalize(P("1 + sin(2*pi*t)"))));
    const auto f_const = feedthrough_fn(order2("1", "2", "7"));
    REQUIRE(f_const.is_constant());
    CHECK(f_const.value() == 1.0);
    const auto f_zero = feedthrough_fn(order2("4", "0", "7"));
    REQUIRE(f_zero.is_constant());
    CHECK(f_zero.value() == 0.0);
}

TEST_CASE("feedthrough function with a time-varying leading coefficient") {
    // a2 = 2 + sin t, a1 = 1: fA = (2 - cos t) / (4 sqrt(2 + sin t))
    const auto fa = feedthrough_fn(order2("2 + sin(t)", "1", "3"));
    for (double t : {0.0, 0.8, 2.2, 6.0}) {
        CHECK_THAT(evaluate(fa, t), WithinAbs((2.0 - std::cos(t)) / (4.0 * std::sqrt(2.0 + std::sin(t))), 1e-14));
    }
}

TEST_CASE("feedthrough function needs an order-2 system") {
    CHECK_THROWS_AS(feedthrough_fn(catalog::example2_a()), NotApplicable);
    CHECK_THROWS_AS(commutativity_indicator(catalog::example2_a()), NotApplicable);
}

TEST_CASE("commutativity indicator examples") {
    const auto v = commutativity_indicator(catalog::example1_a());
    CHECK(v.is_constant);
    CHECK_THAT(v.constant_value, WithinAbs(3.5, 1e-12));
    CHECK(v.max_deviation_from_mean < 1e-9);

    const auto lti = commutativity_indicator(order2("1", "2", "5"));
    CHECK(lti.is_constant);
    CHECK(lti.constant_value == 4.0);
    CHECK(lti.indicator.is_constant());

    const auto ramp = commutativity_indicator(order2("1", "2", "4 + t"));
    CHECK_FALSE(ramp.is_constant);
    // fA = 1, fA' = 0, so A0 = 4 + t - 1 = 3 + t.
    CHECK_THAT(evaluate(ramp.indicator, 0.0), WithinAbs(3.0, 1e-15));
    CHECK_THAT(evaluate(ramp.indicator, 1.0), WithinAbs(4.0, 1e-15));
}

TEST_CASE("order-2 synthesis reproduces example 1") {
    const auto a = catalog::example1_a();
    const auto syn = synthesize_pair_order2(a, catalog::example1_params());
    CHECK(syn.verdict.is_constant);
    const auto& b = syn.system;
    CHECK(structurally_equal(b.coefficient(2), C(0.5)));
    CHECK(structurally_equal(b.coefficient(1), normalize(P("3/4 + sin(2*pi*t)"))));
    CHECK(systems_close(b, catalog::example1_b(), 1e-14));

    // The consistent k0 follows from matching constant terms:
    // 5/2 - 1/4 + k0 = 409/32.
    const double k0 = 409.0 / 32.0 - 5.0 / 2.0 + 1.0 / 4.0;
    CHECK(k0 == 337.0 / 32.0);
    CHECK(catalog::example1_params().k0 == k0);

    SecondOrderParams printed = catalog::example1_params();
    printed.k0 = catalog::kExample1PrintedK0;
    CHECK_FALSE(systems_close(synthesize_pair_order2(a, printed).system, catalog::example1_b(), 1e-9));
}

TEST_CASE("identity synthesis returns the base system") {
    const auto a = catalog::example1_a();
    CHECK(systems_equal(synthesize_pair_order2(a, {1.0, 0.0, 0.0}).system, a));
    const auto a1 = catalog::example2_a();
    CHECK(systems_equal(synthesize_pair_order1(a1, {C(1.0), C(0.0)}), a1));
}

TEST_CASE("synthesis rejects non-positive leading coefficients") {
    CHECK_THROWS_AS(synthesize_pair_order2(catalog::example1_a(), {0.0, 1.0, 1.0}), NonPositiveLeading);
    CHECK_THROWS_AS(synthesize_pair_order2(catalog::example1_a(), {-1.0, 1.0, 1.0}), NonPositiveLeading);
    CHECK_THROWS_AS(synthesize_pair_order1(catalog::example2_a(), {C(-1.0), C(0.0)}), NonPositiveLeading);
    CHECK_THROWS_AS(synthesize_pair_order1(catalog::example2_a(), {P("sin(t)"), C(0.0)}), NonPositiveLeading);
    CHECK_THROWS_AS(synthesize_pair_order1(catalog::example1_a(), {C(1.0), C(0.0)}), NotApplicable);
    CHECK_THROWS_AS(synthesize_pair(catalog::example2_a(), SecondOrderParams{1.0, 0.0, 0.0}), NotApplicable);
}

TEST_CASE("first-order transformations of examples 2 and 3") {
    const auto expected = normalize(P("2 + cos(pi*t)"));
    const auto b2 = synthesize_pair_order1(catalog::example2_a(), catalog::example2_params());
    CHECK(structurally_equal(b2.coefficient(1), C(1.0)));
    CHECK(structurally_equal(b2.coefficient(0), expected));
    const auto b3 = synthesize_pair_order1(catalog::example3_a(), catalog::example3_params());
    CHECK(structurally_equal(b3.coefficient(1), C(1.0)));
    CHECK(structurally_equal(b3.coefficient(0), expected));
}

TEST_CASE("pseudo-commutative synthesis of example 4") {
    const auto b = synthesize_pair_order1(catalog::example3_a(40.0), catalog::example4_params());
    CHECK(structurally_equal(b.coefficient(1), normalize(P("2 + sin(0.1*pi*t)"))));
    CHECK(structurally_equal(b.coefficient(0), normalize(P("(5 + cos(pi*t))*(2 + sin(0.1*pi*t)) - 3*cos(0.2*pi*t)"))));
    // Products of sums are not expanded, so the expanded form is compared by value.
    const auto expanded = P("10 + 5*sin(0.1*pi*t) + 2*cos(pi*t) + cos(pi*t)*sin(0.1*pi*t) - 3*cos(0.2*pi*t)");
    for (int i = 0; i <= 400; ++i) {
        const double t = 0.1 * i;
        const double pi = std::numbers::pi;
        const double direct = (5.0 + std::cos(pi * t)) * (2.0 + std::sin(0.1 * pi * t)) - 3.0 * std::cos(0.2 * pi * t);
        REQUIRE_THAT(evaluate(b.coefficient(0), t), WithinAbs(direct, 1e-12));
        REQUIRE_THAT(evaluate(expanded, t), WithinAbs(direct, 1e-12));
    }
}

TEST_CASE("nonzero initial condition condition") {
    CHECK_FALSE(nonzero_ic_condition(FirstOrderParams{C(1.0), C(1.0)}));
    CHECK(nonzero_ic_condition(FirstOrderParams{C(1.0), C(0.0)}));
    CHECK(nonzero_ic_condition(FirstOrderParams{C(4.0), C(-3.0)}));
    CHECK_FALSE(nonzero_ic_condition(FirstOrderParams{C(1.0), C(-3.0)}));
    CHECK_THROWS_AS(nonzero_ic_condition(catalog::example4_params()), NotApplicable);
    CHECK_THROWS_AS(nonzero_ic_condition(SecondOrderParams{1.0, 0.0, 0.0}), NotApplicable);
}

TEST_CASE("first-order pair verdict recovers the parameters") {
    const auto a = catalog::example2_a();
    const auto v = first_order_pair_verdict(a, synthesize_pair_order1(a, catalog::example2_params()));
    CHECK(v.c1.is_constant);
    CHECK(v.c0.is_constant);
    CHECK_THAT(v.c1.constant_value, WithinAbs(1.0, 1e-12));
    CHECK_THAT(v.c0.constant_value, WithinAbs(1.0, 1e-12));
    CHECK_FALSE(v.nonzero_ic_ok);

    const auto a3 = catalog::example3_a(40.0);
    const auto v4 = first_order_pair_verdict(a3, synthesize_pair_order1(a3, catalog::example4_params()));
    CHECK_FALSE(v4.c1.is_constant);
    CHECK_FALSE(v4.c0.is_constant);

    const auto v_id = first_order_pair_verdict(a3, synthesize_pair_order1(a3, {C(4.0), C(-3.0)}));
    CHECK(v_id.nonzero_ic_ok);
}

TEST_CASE("order-1 synthesis round-trips through the inverse parameters") {
    // Dyadic parameters keep every intermediate product exact.
    testsupport::ExpressionGenerator gen(17);
    for (int i = 0; i < 40; ++i) {
        const double c1 = std::ldexp(1.0, std::uniform_int_distribution<int>(-3, 3)(gen.rng()));
        const double c0 = std::uniform_int_distribution<int>(-16, 16)(gen.rng()) / 8.0;
        const auto a = make_system(1, {P("1 + 0.5*sin(t)"), P("3 + 1.5*cos(2*t)")}, 10.0, "A");
        const auto b = synthesize_pair_order1(a, {C(c1), C(c0)});
        const auto back = synthesize_pair_order1(b, {C(1.0 / c1), C(-c0 / c1)});
        INFO("c1 = " << c1 << ", c0 = " << c0);
        CHECK(systems_equal(back, a));
    }
    for (int i = 0; i < 40; ++i) {
        const double c1 = gen.uniform(0.1, 5.0);
        const double c0 = gen.uniform(-3.0, 3.0);
        const auto a = make_system(1, {P("1 + 0.5*sin(t)"), P("3 + 1.5*cos(2*t)")}, 10.0, "A");
        const auto back =
            synthesize_pair_order1(synthesize_pair_order1(a, {C(c1), C(c0)}), {C(1.0 / c1), C(-c0 / c1)});
        CHECK(systems_close(back, a, 1e-12));
        for (int k = 0; k < 100; ++k) {
            const double t = 0.1 * k;
            for (int j = 0; j <= 1; ++j) {
                REQUIRE_THAT(evaluate(back.coefficient(j), t), WithinAbs(evaluate(a.coefficient(j), t), 1e-12));
            }
        }
    }
}

TEST_CASE("time-varying base systems give time-varying partners") {
    testsupport::ExpressionGenerator gen(23);
    for (int i = 0; i < 20; ++i) {
        const double c1 = gen.uniform(0.1, 4.0) * (i % 2 == 0 ? 1.0 : -1.0);
        const auto a = make_system(1, {C(1.0), P("2 + cos(pi*t)")}, 10.0, "A");
        if (c1 <= 0.0) {
            CHECK_THROWS_AS(synthesize_pair_order1(a, {C(c1), C(gen.uniform(-2.0, 2.0))}), NonPositiveLeading);
            continue;
        }
        const auto b = synthesize_pair_order1(a, {C(c1), C(gen.uniform(-2.0, 2.0))});
        CHECK_FALSE(b.coefficient(0).is_constant());
    }
}

TEST_CASE("randomized first-order pairs commute") {
    testsupport::ExpressionGenerator gen(1234);
    const SolverConfig cfg{1e-3, 20.0, 1};
    for (int i = 0; i < 20; ++i) {
        const double r1 = gen.uniform(-3.0, 3.0);
        const double r0 = std::abs(r1) + 1.0 + gen.uniform(0.0, 3.0);
        const double w = gen.uniform(0.2, 2.0 * std::numbers::pi);
        const auto a0 = normalize(C(r0) + C(r1) * TimeFunction::cos(C(w) * TimeFunction::time()));
        const auto a = make_system(1, {C(1.0), a0}, 20.0, "A");
        const auto b = synthesize_pair_order1(a, {C(gen.uniform(0.2, 3.0)), C(gen.uniform(-2.0, 2.0))});

        SignalSpec x;
        const int sines = std::uniform_int_distribution<int>(0, 3)(gen.rng());
        for (int k = 0; k < sines; ++k) x.add(Sine{gen.uniform(1.0, 20.0), gen.uniform(0.05, 3.0), gen.uniform(0.0, 6.0)});
        const double span = gen.uniform(1.0, 30.0);
        x.add(Sawtooth{gen.uniform(1.0, 5.0), -span, span});

        const double d = commutation_deviation(a, b, x, cfg);
        INFO("pair " << i << ": deviation " << d);
        CHECK(d < 1e-3);
    }
}

TEST_CASE("randomized order-2 parameters commute with example 1") {
    testsupport::ExpressionGenerator gen(4321);
    const auto a = catalog::example1_a();
    const SolverConfig cfg{1e-3, 20.0, 1};
    for (int i = 0; i < 5; ++i) {
        const SecondOrderParams p{gen.uniform(0.05, 2.0), gen.uniform(-2.0, 2.0), gen.uniform(-2.0, 2.0)};
        const auto syn = synthesize_pair_order2(a, p);
        CHECK(syn.verdict.is_constant);
        const double d = commutation_deviation(a, syn.system, catalog::example1_input(), cfg);
        INFO("k = (" << p.k2 << ", " << p.k1 << ", " << p.k0 << "): deviation " << d);
        CHECK(d < 1e-3);
    }
}

TEST_CASE("breaking the transformation breaks commutativity") {
    const auto a = catalog::example3_a(40.0);
    const auto b = synthesize_pair_order1(a, catalog::example3_params());
    const auto broken = make_system(1, {C(1.0), P("2 + cos(pi*t) + 0.1*t")}, 40.0, "B");
    const SolverConfig cfg{1e-3, 40.0, 1};
    const double good = commutation_deviation(a, b, catalog::switching_input(), cfg);
    const double bad = commutation_deviation(a, broken, catalog::switching_input(), cfg);
    CHECK(good < 1e-3);
    CHECK(bad > 10.0 * good);
}

TEST_CASE("scaling the base system leaves the deviation unchanged") {
    const auto a = catalog::example1_a();
    std::vector<TimeFunction> scaled;
    for (const auto& c : a.coefficients()) scaled.push_back(normalize(3.0 * c));
    const auto a3 = make_system(2, scaled, a.horizon(), "A");
    const SolverConfig cfg{1e-3, 20.0, 1};
    const SecondOrderParams p{0.7, 0.4, -1.1};
    const double d1 = commutation_deviation(a, synthesize_pair_order2(a, p).system, catalog::example1_input(), cfg);
    const double d3 = commutation_deviation(a3, synthesize_pair_order2(a3, p).system, catalog::example1_input(), cfg);
    CHECK(d1 < 1e-9);
    CHECK(d3 < 1e-9);
    CHECK(std::abs(d1 - d3) < 1e-9);
}

TEST_CASE("example 4 is approximately commutative") {
    const auto a = catalog::example3_a(40.0);
    const auto b = synthesize_pair_order1(a, catalog::example4_params());
    const double d = commutation_deviation(a, b, catalog::example4_input(), SolverConfig{1e-3, 40.0, 1});
    CHECK(d < 5e-2);
    CHECK(d > 1e-6);
}
