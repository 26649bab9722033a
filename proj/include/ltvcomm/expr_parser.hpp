#pragma once

// Recursive-descent parser for the coefficient expression grammar:
//
//   expr   := term (("+" | "-") term)*
//   term   := factor ("*" factor)*
//   factor := NUMBER ["/" NUMBER] | "pi" | "t"
//           | ("sin" | "cos" | "sqrt" | "rsqrt") "(" expr ")"
//           | "(" expr ")" | "-" factor
//
// "/" is only accepted between two numeric literals (409/32).

#include "ltvcomm/error.hpp"
#include "ltvcomm/timefn.hpp"

#include <cctype>
#include <charconv>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace ltvcomm {

namespace detail {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, std::size_t line, std::size_t column_offset)
        : text_(text), line_(line), column_offset_(column_offset) {}

    TimeFunction parse_all() {
        auto result = expr();
        skip_ws();
        if (pos_ != text_.size()) fail({"'+'", "'-'", "'*'", "end of expression"});
        return result;
    }

private:
    TimeFunction expr() {
        std::vector<TimeFunction> terms{term()};
        for (;;) {
            skip_ws();
            if (accept('+')) {
                terms.push_back(term());
            } else if (accept('-')) {
                terms.push_back(TimeFunction::negate(term()));
            } else {
                break;
            }
        }
        if (terms.size() == 1) return terms.front();
        return TimeFunction::sum(std::move(terms));
    }

    TimeFunction term() {
        std::vector<TimeFunction> factors{factor()};
        for (;;) {
            skip_ws();
            if (!accept('*')) break;
            factors.push_back(factor());
        }
        if (factors.size() == 1) return factors.front();
        return TimeFunction::product(std::move(factors));
    }

    TimeFunction factor() {
        skip_ws();
        if (pos_ >= text_.size()) fail(factor_start());
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = number();
            skip_ws();
            if (accept('/')) {
                skip_ws();
                if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                              text_[pos_] == '.')) {
                    fail({"NUMBER"});
                }
                const std::size_t denom_pos = pos_;
                const double denom = number();
                if (denom == 0.0) {
                    pos_ = denom_pos;
                    fail({"non-zero NUMBER"});
                }
                value /= denom;
            }
            return TimeFunction::constant(value);
        }
        if (accept('(')) {
            auto inner = expr();
            expect(')');
            return inner;
        }
        if (accept('-')) return TimeFunction::negate(factor());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view ident = text_.substr(start, pos_ - start);
            if (ident == "pi") return TimeFunction::constant(std::numbers::pi);
            if (ident == "t") return TimeFunction::time();
            if (ident == "sin" || ident == "cos" || ident == "sqrt" || ident == "rsqrt") {
                expect('(');
                auto arg = expr();
                expect(')');
                if (ident == "sin") return TimeFunction::sin(std::move(arg));
                if (ident == "cos") return TimeFunction::cos(std::move(arg));
                if (ident == "sqrt") return TimeFunction::sqrt(std::move(arg));
                return TimeFunction::recip_sqrt(std::move(arg));
            }
            pos_ = start;
            fail(factor_start());
        }
        fail(factor_start());
    }

    double number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        const std::string_view lexeme = text_.substr(start, pos_ - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
        if (ec != std::errc{} || ptr != lexeme.data() + lexeme.size()) {
            pos_ = start;
            fail({"NUMBER"});
        }
        return value;
    }

    static std::vector<std::string> factor_start() {
        return {"NUMBER", "'pi'", "'t'", "'sin'", "'cos'", "'sqrt'", "'rsqrt'", "'('", "'-'"};
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (!accept(c)) fail({std::string("'") + c + "'"});
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        std::string found = "end of expression";
        if (pos_ < text_.size()) found = std::string("'") + text_[pos_] + "'";
        throw ParseError(line_, column_offset_ + pos_, std::move(expected), found);
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t column_offset_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an expression; line and column_offset position error reports inside a larger file.
inline TimeFunction parse_expression(std::string_view text, std::size_t line = 1, std::size_t column_offset = 1) {
    return detail::ExpressionParser(text, line, column_offset).parse_all();
}

}  // namespace ltvcomm
