#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>

using namespace ltvcomm;
using Catch::Matchers::WithinAbs;

namespace {

bool expects(const ParseError& e, const std::string& token) {
    return std::find(e.expected().begin(), e.expected().end(), token) != e.expected().end();
}

}  // namespace

TEST_CASE("parser handles the full grammar") {
    const auto f = parse_expression("409/32 - 1/4*cos(4*pi*t) + 3/4*sin(2*pi*t) + pi*cos(2*pi*t)");
    const double b0_at_0 = 409.0 / 32.0 - 0.25 + std::numbers::pi;
    CHECK_THAT(evaluate(f, 0.0), WithinAbs(b0_at_0, 1e-14));

    CHECK(evaluate(parse_expression("-(-t)"), 3.0) == 3.0);
    CHECK(evaluate(parse_expression("--2"), 0.0) == 2.0);
    CHECK(evaluate(parse_expression("sqrt(4)"), 0.0) == 2.0);
    CHECK(evaluate(parse_expression("rsqrt(4)"), 0.0) == 0.5);
    CHECK(evaluate(parse_expression("0.001*t"), 2.0) == 0.002);
    CHECK(evaluate(parse_expression("  2 *  t "), 2.0) == 4.0);
    CHECK(evaluate(parse_expression("2*3 + 4"), 0.0) == 10.0);
    CHECK(evaluate(parse_expression("2*(3 + 4)"), 0.0) == 14.0);
    CHECK(evaluate(parse_expression("1 - 2 - 3"), 0.0) == -4.0);
}

TEST_CASE("division is only accepted between numbers") {
    CHECK_THROWS_AS(parse_expression("t/2"), ParseError);
    CHECK_THROWS_AS(parse_expression("1/t"), ParseError);
    CHECK_THROWS_AS(parse_expression("1/(2)"), ParseError);
    CHECK_THROWS_AS(parse_expression("1/0"), ParseError);
    CHECK(evaluate(parse_expression("3/4"), 0.0) == 0.75);
}

TEST_CASE("parse errors report position and expected tokens") {
    try {
        (void)parse_expression("2 + * t");
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
        CHECK(expects(e, "NUMBER"));
        CHECK(expects(e, "'t'"));
    }
    try {
        (void)parse_expression("sin(t", 7, 10);
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
        CHECK(e.column() == 15);
        CHECK(expects(e, "')'"));
    }
    try {
        (void)parse_expression("2 t");
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column() == 3);
        CHECK(expects(e, "end of expression"));
    }
    CHECK_THROWS_AS(parse_expression(""), ParseError);
    CHECK_THROWS_AS(parse_expression("tan(t)"), ParseError);
    CHECK_THROWS_AS(parse_expression("2 +"), ParseError);
    CHECK_THROWS_AS(parse_expression("1..2"), ParseError);
}

TEST_CASE("parse error messages name the position") {
    try {
        (void)parse_expression("cos(", 3, 1);
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3, column 5") != std::string::npos);
        CHECK(msg.find("expected") != std::string::npos);
    }
}
