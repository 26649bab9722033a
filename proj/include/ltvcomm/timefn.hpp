#pragma once

// =============================================================================
// Time functions
// =============================================================================
// Immutable expression trees over the time variable t. Every time-varying
// coefficient in the library (system coefficients, synthesis parameters,
// feedthrough and indicator functions) is a TimeFunction.
// =============================================================================

#include "ltvcomm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltvcomm {

/// Node kinds, in canonical ordering rank.
enum class NodeKind : std::uint8_t {
    Constant,
    Time,
    Sin,
    Cos,
    Sum,
    Product,
    Negate,
    Power,      ///< exponent in {0.5, 1, 2}
    RecipSqrt,  ///< base^(-1/2); the only division the algebra needs
};

class TimeFunction {
public:
    /// Constant zero.
    TimeFunction() : TimeFunction(make(NodeKind::Constant, 0.0, {})) {}

    static TimeFunction constant(double v) { return TimeFunction(make(NodeKind::Constant, v, {})); }
    static TimeFunction time() { return TimeFunction(make(NodeKind::Time, 0.0, {})); }
    static TimeFunction sin(TimeFunction arg) { return TimeFunction(make(NodeKind::Sin, 0.0, {std::move(arg)})); }
    static TimeFunction cos(TimeFunction arg) { return TimeFunction(make(NodeKind::Cos, 0.0, {std::move(arg)})); }
    static TimeFunction negate(TimeFunction arg) {
        return TimeFunction(make(NodeKind::Negate, 0.0, {std::move(arg)}));
    }

    static TimeFunction sum(std::vector<TimeFunction> terms) {
        if (terms.empty()) return constant(0.0);
        return TimeFunction(make(NodeKind::Sum, 0.0, std::move(terms)));
    }

    static TimeFunction product(std::vector<TimeFunction> factors) {
        if (factors.empty()) return constant(1.0);
        return TimeFunction(make(NodeKind::Product, 0.0, std::move(factors)));
    }

    static TimeFunction power(TimeFunction base, double exponent) {
        if (exponent != 0.5 && exponent != 1.0 && exponent != 2.0) {
            throw std::invalid_argument("power exponent must be 0.5, 1 or 2");
        }
        return TimeFunction(make(NodeKind::Power, exponent, {std::move(base)}));
    }

    static TimeFunction sqrt(TimeFunction base) { return power(std::move(base), 0.5); }

    static TimeFunction recip_sqrt(TimeFunction base) {
        return TimeFunction(make(NodeKind::RecipSqrt, 0.0, {std::move(base)}));
    }

    [[nodiscard]] NodeKind kind() const noexcept;

    /// Constant value for Constant nodes, exponent for Power nodes, 0 otherwise.
    [[nodiscard]] double value() const noexcept;

    [[nodiscard]] std::span<const TimeFunction> children() const noexcept;

    [[nodiscard]] bool is_constant() const noexcept { return kind() == NodeKind::Constant; }

private:
    struct Node;

    explicit TimeFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static std::shared_ptr<const Node> make(NodeKind kind, double value, std::vector<TimeFunction> children);

    std::shared_ptr<const Node> node_;
};

struct TimeFunction::Node {
    NodeKind kind;
    double value;
    std::vector<TimeFunction> children;
};

inline std::shared_ptr<const TimeFunction::Node> TimeFunction::make(NodeKind kind, double value,
                                                                    std::vector<TimeFunction> children) {
    return std::make_shared<const Node>(Node{kind, value, std::move(children)});
}

inline NodeKind TimeFunction::kind() const noexcept { return node_->kind; }
inline double TimeFunction::value() const noexcept { return node_->value; }
inline std::span<const TimeFunction> TimeFunction::children() const noexcept { return node_->children; }

// -----------------------------------------------------------------------------
// Arithmetic sugar (builds raw, unnormalized trees)
// -----------------------------------------------------------------------------

inline TimeFunction operator+(const TimeFunction& a, const TimeFunction& b) { return TimeFunction::sum({a, b}); }
inline TimeFunction operator+(const TimeFunction& a, double b) { return a + TimeFunction::constant(b); }
inline TimeFunction operator+(double a, const TimeFunction& b) { return TimeFunction::constant(a) + b; }
inline TimeFunction operator-(const TimeFunction& a) { return TimeFunction::negate(a); }
inline TimeFunction operator-(const TimeFunction& a, const TimeFunction& b) {
    return TimeFunction::sum({a, TimeFunction::negate(b)});
}
inline TimeFunction operator-(const TimeFunction& a, double b) { return a - TimeFunction::constant(b); }
inline TimeFunction operator-(double a, const TimeFunction& b) { return TimeFunction::constant(a) - b; }
inline TimeFunction operator*(const TimeFunction& a, const TimeFunction& b) {
    return TimeFunction::product({a, b});
}
inline TimeFunction operator*(const TimeFunction& a, double b) { return a * TimeFunction::constant(b); }
inline TimeFunction operator*(double a, const TimeFunction& b) { return TimeFunction::constant(a) * b; }

// -----------------------------------------------------------------------------
// Evaluation
// -----------------------------------------------------------------------------

inline double evaluate(const TimeFunction& f, double t) {
    const auto ch = f.children();
    switch (f.kind()) {
        case NodeKind::Constant:
            return f.value();
        case NodeKind::Time:
            return t;
        case NodeKind::Sin:
            return std::sin(evaluate(ch[0], t));
        case NodeKind::Cos:
            return std::cos(evaluate(ch[0], t));
        case NodeKind::Sum: {
            double acc = 0.0;
            for (const auto& c : ch) acc += evaluate(c, t);
            return acc;
        }
        case NodeKind::Product: {
            double acc = 1.0;
            for (const auto& c : ch) acc *= evaluate(c, t);
            return acc;
        }
        case NodeKind::Negate:
            return -evaluate(ch[0], t);
        case NodeKind::Power: {
            const double b = evaluate(ch[0], t);
            if (f.value() == 2.0) return b * b;
            if (f.value() == 1.0) return b;
            if (!(b > 0.0)) {
                throw DomainError("square root of non-positive value " + std::to_string(b) + " at t = " +
                                  std::to_string(t));
            }
            return std::sqrt(b);
        }
        case NodeKind::RecipSqrt: {
            const double b = evaluate(ch[0], t);
            if (!(b > 0.0)) {
                throw DomainError("reciprocal square root of non-positive value " + std::to_string(b) +
                                  " at t = " + std::to_string(t));
            }
            return 1.0 / std::sqrt(b);
        }
    }
    return 0.0;
}

// -----------------------------------------------------------------------------
// Canonical ordering
// -----------------------------------------------------------------------------

/// Total order: kind rank, then children lexicographically, then value.
inline int compare(const TimeFunction& a, const TimeFunction& b) {
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    const auto ca = a.children();
    const auto cb = b.children();
    const std::size_t n = std::min(ca.size(), cb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (const int c = compare(ca[i], cb[i]); c != 0) return c;
    }
    if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
    if (a.value() < b.value()) return -1;
    if (b.value() < a.value()) return 1;
    return 0;
}

/// Exact structural equality. Apply normalize() first for canonical comparison.
inline bool structurally_equal(const TimeFunction& a, const TimeFunction& b) { return compare(a, b) == 0; }

/// Structural equality where constants may differ by rel_tol relative to max(1, |value|).
inline bool structurally_close(const TimeFunction& a, const TimeFunction& b, double rel_tol) {
    if (a.kind() != b.kind()) return false;
    const auto ca = a.children();
    const auto cb = b.children();
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (!structurally_close(ca[i], cb[i], rel_tol)) return false;
    }
    const double scale = std::max({1.0, std::abs(a.value()), std::abs(b.value())});
    return std::abs(a.value() - b.value()) <= rel_tol * scale;
}

// -----------------------------------------------------------------------------
// Normalization
// -----------------------------------------------------------------------------

namespace detail {

/// A sum term split as coefficient * monomial; constants have no monomial.
struct ScaledTerm {
    double coef;
    std::optional<TimeFunction> mono;
};

inline ScaledTerm split_term(const TimeFunction& n) {
    if (n.is_constant()) return {n.value(), std::nullopt};
    if (n.kind() == NodeKind::Product && n.children().front().is_constant()) {
        const auto ch = n.children();
        std::vector<TimeFunction> rest(ch.begin() + 1, ch.end());
        if (rest.size() == 1) return {ch.front().value(), rest.front()};
        return {ch.front().value(), TimeFunction::product(std::move(rest))};
    }
    return {1.0, n};
}

inline TimeFunction build_term(double coef, const TimeFunction& mono) {
    if (coef == 1.0) return mono;
    std::vector<TimeFunction> factors{TimeFunction::constant(coef)};
    if (mono.kind() == NodeKind::Product) {
        factors.insert(factors.end(), mono.children().begin(), mono.children().end());
    } else {
        factors.push_back(mono);
    }
    return TimeFunction::product(std::move(factors));
}

inline void sort_canonical(std::vector<TimeFunction>& v) {
    std::stable_sort(v.begin(), v.end(),
                     [](const TimeFunction& a, const TimeFunction& b) { return compare(a, b) < 0; });
}

TimeFunction normalize_product(const std::vector<TimeFunction>& normalized_factors);

/// Terms must already be normalized.
inline TimeFunction normalize_sum(const std::vector<TimeFunction>& normalized_terms) {
    std::vector<TimeFunction> flat;
    for (const auto& term : normalized_terms) {
        if (term.kind() == NodeKind::Sum) {
            flat.insert(flat.end(), term.children().begin(), term.children().end());
        } else {
            flat.push_back(term);
        }
    }

    double constant = 0.0;
    std::vector<std::pair<double, TimeFunction>> scaled;
    for (const auto& term : flat) {
        auto [coef, mono] = split_term(term);
        if (!mono) {
            constant += coef;
        } else {
            scaled.emplace_back(coef, *mono);
        }
    }
    std::stable_sort(scaled.begin(), scaled.end(),
                     [](const auto& a, const auto& b) { return compare(a.second, b.second) < 0; });

    std::vector<TimeFunction> out;
    for (std::size_t i = 0; i < scaled.size();) {
        double coef = scaled[i].first;
        std::size_t j = i + 1;
        while (j < scaled.size() && structurally_equal(scaled[j].second, scaled[i].second)) {
            coef += scaled[j].first;
            ++j;
        }
        if (coef != 0.0) out.push_back(build_term(coef, scaled[i].second));
        i = j;
    }
    if (constant != 0.0) out.push_back(TimeFunction::constant(constant));

    if (out.empty()) return TimeFunction::constant(0.0);
    if (out.size() == 1) return out.front();
    sort_canonical(out);
    return TimeFunction::sum(std::move(out));
}

/// Factors must already be normalized. A lone sum factor absorbs the scalar coefficient.
inline TimeFunction normalize_product(const std::vector<TimeFunction>& normalized_factors) {
    double coef = 1.0;
    std::vector<TimeFunction> factors;
    auto absorb = [&](const TimeFunction& f) {
        if (f.is_constant()) {
            coef *= f.value();
        } else {
            factors.push_back(f);
        }
    };
    for (const auto& f : normalized_factors) {
        if (f.kind() == NodeKind::Product) {
            for (const auto& g : f.children()) absorb(g);
        } else {
            absorb(f);
        }
    }
    if (coef == 0.0) return TimeFunction::constant(0.0);
    if (factors.empty()) return TimeFunction::constant(coef);
    if (factors.size() == 1) {
        if (coef == 1.0) return factors.front();
        if (factors.front().kind() == NodeKind::Sum) {
            std::vector<TimeFunction> terms;
            for (const auto& term : factors.front().children()) {
                terms.push_back(normalize_product({TimeFunction::constant(coef), term}));
            }
            return normalize_sum(terms);
        }
    }
    sort_canonical(factors);
    if (coef != 1.0) factors.insert(factors.begin(), TimeFunction::constant(coef));
    return TimeFunction::product(std::move(factors));
}

}  // namespace detail

/// Canonical form: constants folded, sums and products flattened and sorted,
/// like terms merged, zero terms and unit factors removed, scalar factors
/// distributed over a lone sum, Power(·,1) and Power(·,2) rewritten as products.
/// No trigonometric identities are applied.
inline TimeFunction normalize(const TimeFunction& f) {
    const auto ch = f.children();
    switch (f.kind()) {
        case NodeKind::Constant:
        case NodeKind::Time:
            return f;
        case NodeKind::Sin:
        case NodeKind::Cos: {
            auto arg = normalize(ch[0]);
            if (arg.is_constant()) {
                return TimeFunction::constant(f.kind() == NodeKind::Sin ? std::sin(arg.value())
                                                                        : std::cos(arg.value()));
            }
            return f.kind() == NodeKind::Sin ? TimeFunction::sin(std::move(arg)) : TimeFunction::cos(std::move(arg));
        }
        case NodeKind::Sum: {
            std::vector<TimeFunction> terms;
            terms.reserve(ch.size());
            for (const auto& c : ch) terms.push_back(normalize(c));
            return detail::normalize_sum(terms);
        }
        case NodeKind::Product: {
            std::vector<TimeFunction> factors;
            factors.reserve(ch.size());
            for (const auto& c : ch) factors.push_back(normalize(c));
            return detail::normalize_product(factors);
        }
        case NodeKind::Negate:
            return detail::normalize_product({TimeFunction::constant(-1.0), normalize(ch[0])});
        case NodeKind::Power: {
            auto base = normalize(ch[0]);
            if (f.value() == 1.0) return base;
            if (f.value() == 2.0) return detail::normalize_product({base, base});
            if (base.is_constant() && base.value() > 0.0) return TimeFunction::constant(std::sqrt(base.value()));
            return TimeFunction::sqrt(std::move(base));
        }
        case NodeKind::RecipSqrt: {
            auto base = normalize(ch[0]);
            if (base.is_constant() && base.value() > 0.0) {
                return TimeFunction::constant(1.0 / std::sqrt(base.value()));
            }
            return TimeFunction::recip_sqrt(std::move(base));
        }
    }
    return f;
}

// -----------------------------------------------------------------------------
// Differentiation
// -----------------------------------------------------------------------------

namespace detail {

inline TimeFunction derivative_raw(const TimeFunction& f) {
    using TF = TimeFunction;
    const auto ch = f.children();
    switch (f.kind()) {
        case NodeKind::Constant:
            return TF::constant(0.0);
        case NodeKind::Time:
            return TF::constant(1.0);
        case NodeKind::Sin:
            return TF::product({TF::cos(ch[0]), derivative_raw(ch[0])});
        case NodeKind::Cos:
            return TF::product({TF::constant(-1.0), TF::sin(ch[0]), derivative_raw(ch[0])});
        case NodeKind::Sum: {
            std::vector<TF> terms;
            for (const auto& c : ch) terms.push_back(derivative_raw(c));
            return TF::sum(std::move(terms));
        }
        case NodeKind::Product: {
            std::vector<TF> terms;
            for (std::size_t i = 0; i < ch.size(); ++i) {
                std::vector<TF> factors(ch.begin(), ch.end());
                factors[i] = derivative_raw(ch[i]);
                terms.push_back(TF::product(std::move(factors)));
            }
            return TF::sum(std::move(terms));
        }
        case NodeKind::Negate:
            return TF::negate(derivative_raw(ch[0]));
        case NodeKind::Power: {
            const auto& u = ch[0];
            if (f.value() == 1.0) return derivative_raw(u);
            if (f.value() == 2.0) return TF::product({TF::constant(2.0), u, derivative_raw(u)});
            return TF::product({TF::constant(0.5), derivative_raw(u), TF::recip_sqrt(u)});
        }
        case NodeKind::RecipSqrt: {
            const auto& u = ch[0];
            const auto r = TF::recip_sqrt(u);
            return TF::product({TF::constant(-0.5), derivative_raw(u), r, r, r});
        }
    }
    return TF::constant(0.0);
}

}  // namespace detail

/// d/dt in closed form; the result is normalized.
inline TimeFunction differentiate(const TimeFunction& f) { return normalize(detail::derivative_raw(f)); }

// -----------------------------------------------------------------------------
// Rendering
// -----------------------------------------------------------------------------

/// Shortest decimal (non-exponent) text that parses back to exactly v.
inline std::string format_number(double v) {
    char buf[512];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    if (ec != std::errc{}) throw std::runtime_error("cannot format number");
    return std::string(buf, end);
}

namespace detail {

std::string render_expr(const TimeFunction& f);

inline bool is_negative_term(const TimeFunction& f) {
    if (f.is_constant()) return std::signbit(f.value()) && f.value() != 0.0;
    if (f.kind() == NodeKind::Negate) return true;
    if (f.kind() == NodeKind::Product) {
        const auto& lead = f.children().front();
        return lead.is_constant() && lead.value() < 0.0;
    }
    return false;
}

inline TimeFunction negated_term(const TimeFunction& f) {
    if (f.is_constant()) return TimeFunction::constant(-f.value());
    if (f.kind() == NodeKind::Negate) return f.children().front();
    std::vector<TimeFunction> factors(f.children().begin(), f.children().end());
    factors.front() = TimeFunction::constant(-factors.front().value());
    return TimeFunction::product(std::move(factors));
}

inline std::string render_factor(const TimeFunction& f) {
    const auto ch = f.children();
    switch (f.kind()) {
        case NodeKind::Constant:
            if (f.value() < 0.0) return "-" + format_number(-f.value());
            return format_number(f.value());
        case NodeKind::Time:
            return "t";
        case NodeKind::Sin:
            return "sin(" + render_expr(ch[0]) + ")";
        case NodeKind::Cos:
            return "cos(" + render_expr(ch[0]) + ")";
        case NodeKind::Negate:
            return "-" + render_factor(ch[0]);
        case NodeKind::Power:
            if (f.value() == 0.5) return "sqrt(" + render_expr(ch[0]) + ")";
            if (f.value() == 1.0) return render_factor(ch[0]);
            return "(" + render_expr(f) + ")";
        case NodeKind::RecipSqrt:
            return "rsqrt(" + render_expr(ch[0]) + ")";
        case NodeKind::Sum:
        case NodeKind::Product:
            return "(" + render_expr(f) + ")";
    }
    return {};
}

inline std::string render_term(const TimeFunction& f) {
    if (f.kind() == NodeKind::Product) {
        const auto ch = f.children();
        std::string out;
        std::size_t first = 0;
        if (ch.size() > 1 && ch.front().is_constant() && ch.front().value() == 1.0) first = 1;
        for (std::size_t i = first; i < ch.size(); ++i) {
            if (i != first) out += "*";
            out += render_factor(ch[i]);
        }
        return out;
    }
    if (f.kind() == NodeKind::Power && f.value() == 2.0) {
        const auto base = render_factor(f.children().front());
        return base + "*" + base;
    }
    return render_factor(f);
}

inline std::string render_expr(const TimeFunction& f) {
    if (f.kind() != NodeKind::Sum) return render_term(f);
    const auto ch = f.children();
    std::string out = render_term(ch[0]);
    for (std::size_t i = 1; i < ch.size(); ++i) {
        if (is_negative_term(ch[i])) {
            out += " - " + render_term(negated_term(ch[i]));
        } else {
            out += " + " + render_term(ch[i]);
        }
    }
    return out;
}

}  // namespace detail

/// Text in the expression grammar accepted by parse_expression().
inline std::string render(const TimeFunction& f) { return detail::render_expr(f); }

}  // namespace ltvcomm
