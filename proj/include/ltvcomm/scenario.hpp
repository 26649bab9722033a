#pragma once

// =============================================================================
// Scenario files
// =============================================================================
// Sectioned key = value text with '#' comments:
//
//   label = example1            # preamble keys: label (required), period
//   period = 1
//
//   [system.A]                  order, a2/a1/a0 (expressions in t)
//   [system.B]                  order, b2/b1/b0        -- or --
//   [synthesize.B]              order, k2/k1/k0 (order 2) or c1/c0 (order 1)
//   [input]                     term = sine(A, f_hz, phase) | sawtooth(P, lo, hi)
//                                    | pulse(A, P, duty) | constant(v)   (repeatable)
//   [solver]                    step, horizon, decimation
//   [switching]                 slot + initial_path, or boundaries [+ paths]
//   [output]                    artifacts = trace, deviation, verdict, spectrum
//                               spectrum_rate, window = hann | rectangular
// =============================================================================

#include "ltvcomm/commute.hpp"
#include "ltvcomm/error.hpp"
#include "ltvcomm/expr_parser.hpp"
#include "ltvcomm/signalgen.hpp"
#include "ltvcomm/simulate.hpp"
#include "ltvcomm/spectrum.hpp"
#include "ltvcomm/timefn.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ltvcomm {

struct SystemDefinition {
    int order = 1;
    /// Highest order first, as written in the file (not normalized).
    std::vector<TimeFunction> coefficients;
};

struct SynthesisDefinition {
    SynthesisParams params;
};

struct SwitchingDefinition {
    std::optional<double> slot;
    Path initial_path = Path::AB;
    std::vector<double> boundaries;
    std::vector<Path> paths;

    [[nodiscard]] SwitchingSchedule resolve(double horizon) const {
        if (slot) return SwitchingSchedule::periodic(*slot, horizon, initial_path);
        return SwitchingSchedule{boundaries, initial_path, paths};
    }
};

enum class Artifact { Trace, Deviation, Verdict, Spectrum };

inline const char* to_string(Artifact a) {
    switch (a) {
        case Artifact::Trace: return "trace";
        case Artifact::Deviation: return "deviation";
        case Artifact::Verdict: return "verdict";
        case Artifact::Spectrum: return "spectrum";
    }
    return "";
}

struct OutputDefinition {
    std::vector<Artifact> artifacts;
    double spectrum_rate_hz = 100.0;
    Window window = Window::Hann;

    [[nodiscard]] bool wants(Artifact a) const {
        return std::find(artifacts.begin(), artifacts.end(), a) != artifacts.end();
    }
};

struct Scenario {
    std::string label;
    /// Coefficient period for average eigenvalues.
    std::optional<double> period;
    SystemDefinition system_a;
    std::variant<SystemDefinition, SynthesisDefinition> system_b;
    SignalSpec input;
    SolverConfig solver;
    std::optional<SwitchingDefinition> switching;
    OutputDefinition outputs;
    /// Ignored keys when parsed with strict = false.
    std::vector<std::string> warnings;
};

struct ParseOptions {
    bool strict = true;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// One `key = value` entry with its source position.
struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
    std::size_t value_column = 0;
};

struct Section {
    std::string name;
    std::size_t line = 0;
    std::vector<Entry> entries;
};

inline const std::set<std::string>& known_sections() {
    static const std::set<std::string> names{"system.A", "system.B", "synthesize.B", "input",
                                             "solver",   "switching", "output"};
    return names;
}

inline std::vector<Section> split_sections(std::string_view text) {
    std::vector<Section> sections{Section{"", 1, {}}};
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view raw = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        const std::size_t indent = static_cast<std::size_t>(line.data() - raw.data());
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(line_no, indent + line.size() + 1, {"']'"}, "end of line");
            }
            std::string name(trim(line.substr(1, line.size() - 2)));
            if (known_sections().count(name) == 0) {
                std::vector<std::string> expected;
                for (const auto& s : known_sections()) expected.push_back("[" + s + "]");
                throw ParseError(line_no, indent + 1, expected, "[" + name + "]");
            }
            if (!seen.insert(name).second) throw SemanticError("duplicate section [" + name + "] at line " +
                                                               std::to_string(line_no));
            sections.push_back(Section{name, line_no, {}});
        } else {
            const auto eq = line.find('=');
            std::size_t key_end = 0;
            while (key_end < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[key_end])) || line[key_end] == '_')) {
                ++key_end;
            }
            if (key_end == 0) {
                throw ParseError(line_no, indent + 1, {"key", "'['"}, std::string("'") + line.front() + "'");
            }
            if (eq == std::string_view::npos || !trim(line.substr(key_end, eq - key_end)).empty()) {
                const std::size_t col = indent + key_end + 1;
                const std::string found = key_end < line.size() ? std::string("'") + line[key_end] + "'" : "end of line";
                throw ParseError(line_no, col, {"'='"}, found);
            }
            const std::string_view after = line.substr(eq + 1);
            const std::string_view value = trim(after);
            const std::size_t value_col = indent + eq + 2 + static_cast<std::size_t>(value.data() - after.data());
            if (value.empty()) throw ParseError(line_no, value_col, {"value"}, "end of line");
            sections.back().entries.push_back(
                Entry{std::string(line.substr(0, key_end)), std::string(value), line_no, value_col});
        }
        if (end == text.size()) break;
    }
    return sections;
}

/// Key lookup over one section with strictness and duplicate handling.
class SectionReader {
public:
    SectionReader(const Section* section, std::string display, std::set<std::string> allowed, bool strict,
                  std::vector<std::string>& warnings)
        : section_(section), display_(std::move(display)) {
        if (section_ == nullptr) return;
        std::set<std::string> seen;
        for (const auto& e : section_->entries) {
            if (allowed.count(e.key) == 0) {
                const std::string msg = "unknown key '" + e.key + "' in " + display_ + " at line " +
                                        std::to_string(e.line);
                if (strict) throw SemanticError(msg);
                warnings.push_back(msg);
                continue;
            }
            if (e.key != "term" && !seen.insert(e.key).second) {
                throw SemanticError("duplicate key '" + e.key + "' in " + display_ + " at line " +
                                    std::to_string(e.line));
            }
            entries_.push_back(&e);
        }
    }

    [[nodiscard]] const Entry* find(const std::string& key) const {
        for (const auto* e : entries_) {
            if (e->key == key) return e;
        }
        return nullptr;
    }

    [[nodiscard]] const Entry& require(const std::string& key) const {
        const auto* e = find(key);
        if (e == nullptr) throw SemanticError("missing required key '" + key + "' in " + display_);
        return *e;
    }

    [[nodiscard]] std::vector<const Entry*> all(const std::string& key) const {
        std::vector<const Entry*> out;
        for (const auto* e : entries_) {
            if (e->key == key) out.push_back(e);
        }
        return out;
    }

private:
    const Section* section_;
    std::string display_;
    std::vector<const Entry*> entries_;
};

inline TimeFunction parse_entry_expression(const Entry& e) { return parse_expression(e.value, e.line, e.value_column); }

inline double parse_constant(std::string_view text, std::size_t line, std::size_t column, const std::string& what) {
    const auto f = normalize(parse_expression(text, line, column));
    if (!f.is_constant()) throw SemanticError(what + " at line " + std::to_string(line) + " must be a constant");
    return f.value();
}

inline double parse_constant(const Entry& e) { return parse_constant(e.value, e.line, e.value_column, "'" + e.key + "'"); }

inline int parse_integer(const Entry& e) {
    const double v = parse_constant(e);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw SemanticError("'" + e.key + "' at line " + std::to_string(e.line) + " must be an integer");
    }
    return static_cast<int>(v);
}

/// Comma-separated items with their source columns.
inline std::vector<std::pair<std::string, std::size_t>> split_list(std::string_view text, std::size_t column) {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size() && text[i] == '(') ++depth;
        if (i < text.size() && text[i] == ')') --depth;
        if (i == text.size() || (text[i] == ',' && depth == 0)) {
            const std::string_view raw = text.substr(start, i - start);
            const std::string_view item = trim(raw);
            out.emplace_back(std::string(item), column + start + static_cast<std::size_t>(item.data() - raw.data()));
            start = i + 1;
        }
    }
    return out;
}

inline Path parse_path(std::string_view text, std::size_t line, std::size_t column) {
    if (text == "AB") return Path::AB;
    if (text == "BA") return Path::BA;
    throw ParseError(line, column, {"'AB'", "'BA'"}, "'" + std::string(text) + "'");
}

inline SignalTerm parse_signal_term(const Entry& e) {
    const std::string_view v = e.value;
    std::size_t name_end = 0;
    while (name_end < v.size() && std::isalpha(static_cast<unsigned char>(v[name_end]))) ++name_end;
    const std::string name(v.substr(0, name_end));
    static const std::vector<std::string> kinds{"'sine'", "'sawtooth'", "'pulse'", "'constant'"};
    if (name != "sine" && name != "sawtooth" && name != "pulse" && name != "constant") {
        throw ParseError(e.line, e.value_column, kinds, "'" + std::string(v.substr(0, std::max<std::size_t>(name_end, 1))) + "'");
    }
    std::size_t open = name_end;
    while (open < v.size() && std::isspace(static_cast<unsigned char>(v[open]))) ++open;
    if (open >= v.size() || v[open] != '(') {
        throw ParseError(e.line, e.value_column + open, {"'('"}, open < v.size() ? std::string("'") + v[open] + "'" : "end of line");
    }
    if (v.back() != ')') throw ParseError(e.line, e.value_column + v.size(), {"')'"}, "end of line");
    const auto args = split_list(v.substr(open + 1, v.size() - open - 2), e.value_column + open + 1);
    std::vector<double> nums;
    for (const auto& [text, col] : args) {
        if (text.empty()) throw ParseError(e.line, col, {"NUMBER"}, "','");
        nums.push_back(parse_constant(text, e.line, col, "signal argument"));
    }
    const std::size_t expected = name == "constant" ? 1 : 3;
    if (nums.size() != expected) {
        throw SemanticError(name + "(...) at line " + std::to_string(e.line) + " takes " + std::to_string(expected) +
                            " arguments, got " + std::to_string(nums.size()));
    }
    try {
        SignalTerm term;
        if (name == "sine") term = Sine{nums[0], nums[1], nums[2]};
        if (name == "sawtooth") term = Sawtooth{nums[0], nums[1], nums[2]};
        if (name == "pulse") term = PulseTrain{nums[0], nums[1], nums[2]};
        if (name == "constant") term = ConstantLevel{nums[0]};
        validate(term);
        return term;
    } catch (const ConfigError& err) {
        throw SemanticError(std::string(err.what()) + " at line " + std::to_string(e.line));
    }
}

inline std::vector<std::string> coefficient_keys(char prefix, int order) {
    std::vector<std::string> keys;
    for (int k = order; k >= 0; --k) keys.push_back(std::string(1, prefix) + std::to_string(k));
    return keys;
}

inline SystemDefinition read_system(const Section* section, const std::string& display, char prefix, bool strict,
                                    std::vector<std::string>& warnings) {
    // Accept every potential coefficient key first; reject the ones that do not fit the order below.
    std::vector<std::string> scratch;
    SectionReader probe(section, display, {"order", std::string(1, prefix) + "2", std::string(1, prefix) + "1",
                                           std::string(1, prefix) + "0"},
                        false, scratch);
    const auto& order_entry = probe.require("order");
    const int order = parse_integer(order_entry);
    if (order != 1 && order != 2) {
        throw SemanticError("unsupported order " + std::to_string(order) + " in " + display + " at line " +
                            std::to_string(order_entry.line) + " (supported: 1, 2)");
    }
    auto keys = coefficient_keys(prefix, order);
    std::set<std::string> allowed(keys.begin(), keys.end());
    allowed.insert("order");
    SectionReader reader(section, display, allowed, strict, warnings);
    SystemDefinition def;
    def.order = order;
    for (const auto& key : keys) def.coefficients.push_back(parse_entry_expression(reader.require(key)));
    return def;
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text, const ParseOptions& options = {}) {
    using namespace detail;
    const auto sections = split_sections(text);
    auto find_section = [&](const std::string& name) -> const Section* {
        for (const auto& s : sections) {
            if (s.name == name) return &s;
        }
        return nullptr;
    };

    Scenario sc;
    auto& warnings = sc.warnings;
    const bool strict = options.strict;

    SectionReader preamble(&sections.front(), "the preamble", {"label", "period"}, strict, warnings);
    sc.label = preamble.require("label").value;
    for (char c : sc.label) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
            throw SemanticError("label may only contain letters, digits, '_', '-' and '.'");
        }
    }
    if (const auto* e = preamble.find("period")) {
        sc.period = parse_constant(*e);
        if (!(*sc.period > 0.0)) throw SemanticError("'period' must be positive");
    }

    const Section* sys_a = find_section("system.A");
    if (sys_a == nullptr) throw SemanticError("missing required section [system.A]");
    sc.system_a = read_system(sys_a, "[system.A]", 'a', strict, warnings);

    const Section* sys_b = find_section("system.B");
    const Section* syn_b = find_section("synthesize.B");
    if ((sys_b == nullptr) == (syn_b == nullptr)) {
        throw SemanticError("exactly one of [system.B] and [synthesize.B] is required");
    }
    if (sys_b != nullptr) {
        sc.system_b = read_system(sys_b, "[system.B]", 'b', strict, warnings);
    } else {
        std::vector<std::string> scratch;
        SectionReader probe(syn_b, "[synthesize.B]", {"order", "k2", "k1", "k0", "c1", "c0"}, false, scratch);
        const auto& order_entry = probe.require("order");
        const int order = parse_integer(order_entry);
        if (order != 1 && order != 2) {
            throw SemanticError("unsupported order " + std::to_string(order) + " in [synthesize.B] at line " +
                                std::to_string(order_entry.line) + " (supported: 1, 2)");
        }
        if (order != sc.system_a.order) {
            throw SemanticError("[synthesize.B] order " + std::to_string(order) + " differs from [system.A] order " +
                                std::to_string(sc.system_a.order));
        }
        if (order == 2) {
            SectionReader reader(syn_b, "[synthesize.B]", {"order", "k2", "k1", "k0"}, strict, warnings);
            SecondOrderParams p{parse_constant(reader.require("k2")), parse_constant(reader.require("k1")),
                                parse_constant(reader.require("k0"))};
            if (!(p.k2 > 0.0)) throw SemanticError("'k2' must be positive");
            sc.system_b = SynthesisDefinition{p};
        } else {
            SectionReader reader(syn_b, "[synthesize.B]", {"order", "c1", "c0"}, strict, warnings);
            sc.system_b = SynthesisDefinition{FirstOrderParams{parse_entry_expression(reader.require("c1")),
                                                               parse_entry_expression(reader.require("c0"))}};
        }
    }

    const Section* input = find_section("input");
    if (input == nullptr) throw SemanticError("missing required section [input]");
    {
        SectionReader reader(input, "[input]", {"term"}, strict, warnings);
        const auto terms = reader.all("term");
        if (terms.empty()) throw SemanticError("missing required key 'term' in [input]");
        for (const auto* e : terms) sc.input.add(parse_signal_term(*e));
    }

    const Section* solver = find_section("solver");
    if (solver == nullptr) throw SemanticError("missing required section [solver]");
    {
        SectionReader reader(solver, "[solver]", {"step", "horizon", "decimation"}, strict, warnings);
        sc.solver.step = parse_constant(reader.require("step"));
        sc.solver.horizon = parse_constant(reader.require("horizon"));
        if (const auto* e = reader.find("decimation")) {
            const int d = parse_integer(*e);
            if (d < 1) throw SemanticError("'decimation' must be >= 1");
            sc.solver.record_decimation = static_cast<std::size_t>(d);
        }
        try {
            sc.solver.validate();
        } catch (const ConfigError& err) {
            throw SemanticError(std::string("[solver]: ") + err.what());
        }
    }

    if (const Section* sw = find_section("switching")) {
        SectionReader reader(sw, "[switching]", {"slot", "initial_path", "boundaries", "paths"}, strict, warnings);
        SwitchingDefinition def;
        const auto* slot = reader.find("slot");
        const auto* bounds = reader.find("boundaries");
        if ((slot == nullptr) == (bounds == nullptr)) {
            throw SemanticError("[switching] needs exactly one of 'slot' and 'boundaries'");
        }
        if (const auto* e = reader.find("initial_path")) def.initial_path = parse_path(e->value, e->line, e->value_column);
        if (slot != nullptr) {
            if (reader.find("paths") != nullptr) throw SemanticError("'paths' requires 'boundaries' in [switching]");
            def.slot = parse_constant(*slot);
            if (!(*def.slot > 0.0)) throw SemanticError("'slot' must be positive");
        } else {
            for (const auto& [text, col] : split_list(bounds->value, bounds->value_column)) {
                def.boundaries.push_back(parse_constant(text, bounds->line, col, "switching boundary"));
            }
            if (const auto* e = reader.find("paths")) {
                for (const auto& [text, col] : split_list(e->value, e->value_column)) {
                    def.paths.push_back(parse_path(text, e->line, col));
                }
            }
        }
        try {
            def.resolve(sc.solver.horizon).validate(sc.solver.horizon);
        } catch (const ConfigError& err) {
            throw SemanticError(std::string("[switching]: ") + err.what());
        }
        sc.switching = def;
    }

    const Section* output = find_section("output");
    if (output == nullptr) throw SemanticError("missing required section [output]");
    {
        SectionReader reader(output, "[output]", {"artifacts", "spectrum_rate", "window"}, strict, warnings);
        const auto& e = reader.require("artifacts");
        for (const auto& [text, col] : split_list(e.value, e.value_column)) {
            if (text == "trace") sc.outputs.artifacts.push_back(Artifact::Trace);
            else if (text == "deviation") sc.outputs.artifacts.push_back(Artifact::Deviation);
            else if (text == "verdict") sc.outputs.artifacts.push_back(Artifact::Verdict);
            else if (text == "spectrum") sc.outputs.artifacts.push_back(Artifact::Spectrum);
            else throw ParseError(e.line, col, {"'trace'", "'deviation'", "'verdict'", "'spectrum'"}, "'" + text + "'");
        }
        if (const auto* r = reader.find("spectrum_rate")) {
            sc.outputs.spectrum_rate_hz = parse_constant(*r);
            if (!(sc.outputs.spectrum_rate_hz > 0.0)) throw SemanticError("'spectrum_rate' must be positive");
        }
        if (const auto* w = reader.find("window")) {
            if (w->value == "hann") sc.outputs.window = Window::Hann;
            else if (w->value == "rectangular") sc.outputs.window = Window::Rectangular;
            else throw ParseError(w->line, w->value_column, {"'hann'", "'rectangular'"}, "'" + w->value + "'");
        }
    }
    return sc;
}

// -----------------------------------------------------------------------------
// Rendering
// -----------------------------------------------------------------------------

namespace detail {

inline std::string render_signal_term(const SignalTerm& term) {
    struct Visitor {
        std::string operator()(const Sine& s) const {
            return "sine(" + format_number(s.amplitude) + ", " + format_number(s.frequency_hz) + ", " +
                   format_number(s.phase_rad) + ")";
        }
        std::string operator()(const Sawtooth& s) const {
            return "sawtooth(" + format_number(s.period_s) + ", " + format_number(s.min_value) + ", " +
                   format_number(s.max_value) + ")";
        }
        std::string operator()(const PulseTrain& p) const {
            return "pulse(" + format_number(p.amplitude) + ", " + format_number(p.period_s) + ", " +
                   format_number(p.duty_fraction) + ")";
        }
        std::string operator()(const ConstantLevel& c) const { return "constant(" + format_number(c.value) + ")"; }
    };
    return std::visit(Visitor{}, term);
}

inline void render_system(std::ostringstream& os, const SystemDefinition& def, char prefix) {
    os << "order = " << def.order << '\n';
    for (std::size_t i = 0; i < def.coefficients.size(); ++i) {
        os << prefix << (def.order - static_cast<int>(i)) << " = " << render(def.coefficients[i]) << '\n';
    }
}

}  // namespace detail

/// Canonical text form; parse_scenario(render_scenario(s)) reproduces s.
inline std::string render_scenario(const Scenario& sc) {
    std::ostringstream os;
    os << "label = " << sc.label << '\n';
    if (sc.period) os << "period = " << format_number(*sc.period) << '\n';

    os << "\n[system.A]\n";
    detail::render_system(os, sc.system_a, 'a');

    if (const auto* b = std::get_if<SystemDefinition>(&sc.system_b)) {
        os << "\n[system.B]\n";
        detail::render_system(os, *b, 'b');
    } else {
        const auto& syn = std::get<SynthesisDefinition>(sc.system_b);
        os << "\n[synthesize.B]\n";
        if (const auto* p2 = std::get_if<SecondOrderParams>(&syn.params)) {
            os << "order = 2\n";
            os << "k2 = " << render(TimeFunction::constant(p2->k2)) << '\n';
            os << "k1 = " << render(TimeFunction::constant(p2->k1)) << '\n';
            os << "k0 = " << render(TimeFunction::constant(p2->k0)) << '\n';
        } else {
            const auto& p1 = std::get<FirstOrderParams>(syn.params);
            os << "order = 1\n";
            os << "c1 = " << render(p1.c1) << '\n';
            os << "c0 = " << render(p1.c0) << '\n';
        }
    }

    os << "\n[input]\n";
    for (const auto& term : sc.input.terms()) os << "term = " << detail::render_signal_term(term) << '\n';

    os << "\n[solver]\n";
    os << "step = " << format_number(sc.solver.step) << '\n';
    os << "horizon = " << format_number(sc.solver.horizon) << '\n';
    os << "decimation = " << sc.solver.record_decimation << '\n';

    if (sc.switching) {
        const auto& sw = *sc.switching;
        os << "\n[switching]\n";
        if (sw.slot) {
            os << "slot = " << format_number(*sw.slot) << '\n';
        } else {
            os << "boundaries = ";
            for (std::size_t i = 0; i < sw.boundaries.size(); ++i) {
                os << (i ? ", " : "") << format_number(sw.boundaries[i]);
            }
            os << '\n';
            if (!sw.paths.empty()) {
                os << "paths = ";
                for (std::size_t i = 0; i < sw.paths.size(); ++i) os << (i ? ", " : "") << to_string(sw.paths[i]);
                os << '\n';
            }
        }
        os << "initial_path = " << to_string(sw.initial_path) << '\n';
    }

    os << "\n[output]\n";
    os << "artifacts = ";
    for (std::size_t i = 0; i < sc.outputs.artifacts.size(); ++i) {
        os << (i ? ", " : "") << to_string(sc.outputs.artifacts[i]);
    }
    os << '\n';
    os << "spectrum_rate = " << format_number(sc.outputs.spectrum_rate_hz) << '\n';
    os << "window = " << (sc.outputs.window == Window::Hann ? "hann" : "rectangular") << '\n';
    return os.str();
}

// -----------------------------------------------------------------------------
// Structural equality (expressions compared after normalization)
// -----------------------------------------------------------------------------

namespace detail {

inline bool same_fn(const TimeFunction& a, const TimeFunction& b) {
    return structurally_equal(normalize(a), normalize(b));
}

inline bool same_system(const SystemDefinition& a, const SystemDefinition& b) {
    if (a.order != b.order || a.coefficients.size() != b.coefficients.size()) return false;
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
        if (!same_fn(a.coefficients[i], b.coefficients[i])) return false;
    }
    return true;
}

inline bool same_term(const SignalTerm& a, const SignalTerm& b) {
    if (a.index() != b.index()) return false;
    if (const auto* s = std::get_if<Sine>(&a)) {
        const auto& o = std::get<Sine>(b);
        return s->amplitude == o.amplitude && s->frequency_hz == o.frequency_hz && s->phase_rad == o.phase_rad;
    }
    if (const auto* s = std::get_if<Sawtooth>(&a)) {
        const auto& o = std::get<Sawtooth>(b);
        return s->period_s == o.period_s && s->min_value == o.min_value && s->max_value == o.max_value;
    }
    if (const auto* p = std::get_if<PulseTrain>(&a)) {
        const auto& o = std::get<PulseTrain>(b);
        return p->amplitude == o.amplitude && p->period_s == o.period_s && p->duty_fraction == o.duty_fraction;
    }
    return std::get<ConstantLevel>(a).value == std::get<ConstantLevel>(b).value;
}

}  // namespace detail

inline bool scenarios_equal(const Scenario& a, const Scenario& b) {
    using namespace detail;
    if (a.label != b.label || a.period != b.period) return false;
    if (!same_system(a.system_a, b.system_a)) return false;
    if (a.system_b.index() != b.system_b.index()) return false;
    if (const auto* sa = std::get_if<SystemDefinition>(&a.system_b)) {
        if (!same_system(*sa, std::get<SystemDefinition>(b.system_b))) return false;
    } else {
        const auto& pa = std::get<SynthesisDefinition>(a.system_b).params;
        const auto& pb = std::get<SynthesisDefinition>(b.system_b).params;
        if (pa.index() != pb.index()) return false;
        if (const auto* k = std::get_if<SecondOrderParams>(&pa)) {
            const auto& o = std::get<SecondOrderParams>(pb);
            if (k->k2 != o.k2 || k->k1 != o.k1 || k->k0 != o.k0) return false;
        } else {
            const auto& c = std::get<FirstOrderParams>(pa);
            const auto& o = std::get<FirstOrderParams>(pb);
            if (!same_fn(c.c1, o.c1) || !same_fn(c.c0, o.c0)) return false;
        }
    }
    if (a.input.terms().size() != b.input.terms().size()) return false;
    for (std::size_t i = 0; i < a.input.terms().size(); ++i) {
        if (!same_term(a.input.terms()[i], b.input.terms()[i])) return false;
    }
    if (a.solver.step != b.solver.step || a.solver.horizon != b.solver.horizon ||
        a.solver.record_decimation != b.solver.record_decimation) {
        return false;
    }
    if (a.switching.has_value() != b.switching.has_value()) return false;
    if (a.switching) {
        const auto& x = *a.switching;
        const auto& y = *b.switching;
        if (x.slot != y.slot || x.initial_path != y.initial_path || x.boundaries != y.boundaries || x.paths != y.paths) {
            return false;
        }
    }
    return a.outputs.artifacts == b.outputs.artifacts && a.outputs.spectrum_rate_hz == b.outputs.spectrum_rate_hz &&
           a.outputs.window == b.outputs.window;
}

}  // namespace ltvcomm
