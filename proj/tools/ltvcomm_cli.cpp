#include "ltvcomm/ltvcomm.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace ltvcomm;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const SemanticError*>(&e)) return "SemanticError";
    if (dynamic_cast<const NonPositiveLeading*>(&e)) return "NonPositiveLeading";
    if (dynamic_cast<const DegenerateLeadingCoefficient*>(&e)) return "DegenerateLeadingCoefficient";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const ArityError*>(&e)) return "ArityError";
    if (dynamic_cast<const NotApplicable*>(&e)) return "NotApplicable";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const SeriesTooShort*>(&e)) return "SeriesTooShort";
    if (dynamic_cast<const GridMismatch*>(&e)) return "GridMismatch";
    return "error";
}

struct GlobalOptions {
    std::optional<double> step;
    std::optional<double> horizon;
    std::string out_dir = ".";
    bool strict = true;
};

Scenario load_scenario(const std::string& path, const GlobalOptions& g) {
    Scenario sc = parse_scenario(read_text(path), ParseOptions{g.strict});
    for (const auto& w : sc.warnings) std::cerr << path << ": warning: " << w << '\n';
    if (g.step) sc.solver.step = *g.step;
    if (g.horizon) sc.solver.horizon = *g.horizon;
    sc.solver.validate();
    if (sc.switching) sc.switching->resolve(sc.solver.horizon).validate(sc.solver.horizon);
    return sc;
}

int cmd_run(const std::string& file, const GlobalOptions& g) {
    const auto sc = load_scenario(file, g);
    const auto result = run_scenario(sc, RunOptions{g.out_dir, true});
    std::cout << result.report;
    for (const auto& p : result.written) std::cout << "wrote " << p.string() << '\n';
    return 0;
}

int cmd_check(const std::string& file, const GlobalOptions& g) {
    const auto sc = load_scenario(file, g);
    std::cout << verdict_report(sc, build_systems(sc));
    return 0;
}

int cmd_synthesize(const std::string& file, const GlobalOptions& g) {
    const auto sc = load_scenario(file, g);
    std::cout << coefficients_report(build_systems(sc));
    return 0;
}

int cmd_spectrum(const std::string& file, double rate, const std::string& column, const std::string& window,
                 const std::optional<std::string>& output) {
    const auto trace = parse_trace_csv(read_text(file));
    if (trace.size() < 2) throw SeriesTooShort("trace has fewer than two samples");
    const double trace_rate = 1.0 / (trace.times[1] - trace.times[0]);
    const double ratio = trace_rate / rate;
    const double factor = std::round(ratio);
    if (factor < 1.0 || std::abs(ratio - factor) > 1e-6 * ratio) {
        throw ConfigError("analysis rate " + format_sig9(rate) + " Hz does not divide the trace rate " +
                          format_sig9(trace_rate) + " Hz");
    }
    const std::vector<double>* series = &trace.output;
    if (column == "transmitted") series = &trace.transmitted;
    else if (column == "input") series = &trace.input;
    const auto ps = periodogram(decimate(*series, static_cast<std::size_t>(factor)), rate,
                                window == "rectangular" ? Window::Rectangular : Window::Hann);
    const auto csv = export_spectrum_csv(ps);
    if (output) {
        std::ofstream out(*output, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + *output + "'");
        out << csv;
    } else {
        std::cout << csv;
    }
    return 0;
}

int cmd_selftest() {
    bool ok = true;
    for (const auto& c : run_selftest()) {
        ok = ok && c.passed();
        std::cout << (c.passed() ? "PASS  " : "FAIL  ") << c.name << "  (" << format_sig9(c.error);
        if (c.lower > 0.0) std::cout << " in [" << format_sig9(c.lower) << ", " << format_sig9(c.tolerance) << "])\n";
        else std::cout << " <= " << format_sig9(c.tolerance) << ")\n";
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulate and analyse commutative cascades of linear time-varying systems"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--step", g.step, "Override the solver step [s]")->check(CLI::PositiveNumber);
    app.add_option("--horizon", g.horizon, "Override the simulation horizon [s]")->check(CLI::NonNegativeNumber);
    app.add_option("--out-dir", g.out_dir, "Directory for written artifacts");
    app.add_flag("--strict,!--no-strict", g.strict, "Reject unknown scenario keys (default on)");

    std::string file;
    auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
    run->add_option("file", file, "Scenario file")->required();
    auto* check = app.add_subcommand("check", "Print the commutativity verdict only");
    check->add_option("file", file, "Scenario file")->required();
    auto* synth = app.add_subcommand("synthesize", "Print the coefficients of A and B");
    synth->add_option("file", file, "Scenario file")->required();

    auto* spectrum = app.add_subcommand("spectrum", "Periodogram of one column of a trace CSV");
    double rate = 100.0;
    std::string column = "output";
    std::string window = "hann";
    std::optional<std::string> output;
    spectrum->add_option("trace", file, "Trace CSV written by run")->required();
    spectrum->add_option("--rate", rate, "Analysis sample rate [Hz]; the trace is decimated to it")
        ->required()
        ->check(CLI::PositiveNumber);
    spectrum->add_option("--column", column, "Signal to analyse")
        ->check(CLI::IsMember({"input", "transmitted", "output"}));
    spectrum->add_option("--window", window, "Window")->check(CLI::IsMember({"hann", "rectangular"}));
    spectrum->add_option("-o,--output", output, "Write the spectrum CSV here instead of stdout");

    auto* selftest = app.add_subcommand("selftest", "Run the analytic-oracle suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(file, g);
        if (*check) return cmd_check(file, g);
        if (*synth) return cmd_synthesize(file, g);
        if (*spectrum) return cmd_spectrum(file, rate, column, window, output);
        if (*selftest) return cmd_selftest();
    } catch (const std::exception& e) {
        if (!file.empty()) std::cerr << file << ": ";
        std::cerr << error_kind(e) << ": " << e.what() << '\n';
        return 1;
    }
    return 1;
}
