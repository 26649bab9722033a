#pragma once

// Scenario execution, trace CSV export/import and the text report.

#include "ltvcomm/commute.hpp"
#include "ltvcomm/error.hpp"
#include "ltvcomm/ltvsys.hpp"
#include "ltvcomm/scenario.hpp"
#include "ltvcomm/simulate.hpp"
#include "ltvcomm/spectrum.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ltvcomm {

/// Header t,input,transmitted,output,active_path; 9 significant digits.
inline std::string export_csv(const SimulationTrace& trace) {
    std::string out = "t,input,transmitted,output,active_path\n";
    out.reserve(out.size() + trace.size() * 64);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += format_sig9(trace.times[i]);
        out += ',';
        out += format_sig9(trace.input[i]);
        out += ',';
        out += format_sig9(trace.transmitted[i]);
        out += ',';
        out += format_sig9(trace.output[i]);
        out += ',';
        out += to_string(trace.active_path[i]);
        out += '\n';
    }
    return out;
}

/// Reads a CSV written by export_csv (subsystem states are not part of the format).
inline SimulationTrace parse_trace_csv(std::string_view text) {
    SimulationTrace trace;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1) {
            if (line != "t,input,transmitted,output,active_path") {
                throw ParseError(1, 1, {"'t,input,transmitted,output,active_path'"}, "'" + std::string(line) + "'");
            }
            continue;
        }
        if (line.empty()) continue;
        double values[4];
        std::size_t pos = 0;
        for (int c = 0; c < 4; ++c) {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string_view::npos) throw ParseError(line_no, line.size() + 1, {"','"}, "end of line");
            const auto field = line.substr(pos, comma - pos);
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), values[c]);
            if (ec != std::errc{} || ptr != field.data() + field.size()) {
                throw ParseError(line_no, pos + 1, {"number"}, "'" + std::string(field) + "'");
            }
            pos = comma + 1;
        }
        trace.times.push_back(values[0]);
        trace.input.push_back(values[1]);
        trace.transmitted.push_back(values[2]);
        trace.output.push_back(values[3]);
        trace.active_path.push_back(detail::parse_path(line.substr(pos), line_no, pos + 1));
        trace.state_first.push_back({0.0, 0.0});
        trace.state_second.push_back({0.0, 0.0});
    }
    return trace;
}

struct BuiltSystems {
    LtvSystem a;
    LtvSystem b;
};

/// Builds A and B over the scenario horizon (B explicit or synthesized from A).
inline BuiltSystems build_systems(const Scenario& sc) {
    const double horizon = sc.solver.horizon;
    auto a = make_system(sc.system_a.order, sc.system_a.coefficients, horizon, "A");
    if (const auto* b = std::get_if<SystemDefinition>(&sc.system_b)) {
        return {a, make_system(b->order, b->coefficients, horizon, "B")};
    }
    return {a, synthesize_pair(a, std::get<SynthesisDefinition>(sc.system_b).params)};
}

struct SpectrumSummary {
    PowerSpectrum transmitted_ab;
    PowerSpectrum transmitted_ba;
    PowerSpectrum output_ab;
    PowerSpectrum output_ba;
    double transmitted_distance = 0.0;
    double output_distance = 0.0;
};

struct RunResult {
    SimulationTrace ab;
    SimulationTrace ba;
    std::optional<SimulationTrace> switched;
    std::vector<double> switch_instants;
    double deviation = 0.0;                   ///< AB vs BA output, relative sup-norm
    std::optional<double> switched_deviation;  ///< switched vs AB output, relative sup-norm
    std::vector<double> settle;                ///< per switching instant
    std::optional<CommutativityVerdict> verdict;
    std::optional<FirstOrderPairVerdict> first_order_verdict;
    std::optional<EigenvalueReport> eigen_a;
    std::optional<EigenvalueReport> eigen_b;
    std::optional<SpectrumSummary> spectra;
    std::string report;
    std::vector<std::filesystem::path> written;
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool write_files = true;
};

/// Decimation factor mapping the trace rate to the spectrum rate.
inline std::size_t spectrum_decimation(const SolverConfig& cfg, double spectrum_rate_hz) {
    const double trace_rate = 1.0 / (cfg.step * static_cast<double>(cfg.record_decimation));
    const double ratio = trace_rate / spectrum_rate_hz;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * ratio) {
        throw ConfigError("spectrum rate " + std::to_string(spectrum_rate_hz) + " Hz does not divide the trace rate " +
                          std::to_string(trace_rate) + " Hz");
    }
    return static_cast<std::size_t>(rounded);
}

namespace detail {

inline std::string format_complex(std::complex<double> z) {
    std::ostringstream os;
    os.precision(10);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "j";
    return os.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("failed writing " + path.string());
}

inline std::string describe_verdict(const CommutativityVerdict& v) {
    std::ostringstream os;
    os.precision(10);
    os << render(v.indicator) << "\n    constant: " << (v.is_constant ? "yes" : "no") << ", mean " << v.constant_value
       << ", max deviation from mean " << v.max_deviation_from_mean;
    return os.str();
}

}  // namespace detail

/// Verdict-only part of a run (the `check` subcommand).
inline std::string verdict_report(const Scenario& sc, const BuiltSystems& sys, RunResult* result = nullptr) {
    std::ostringstream os;
    os.precision(10);
    if (sys.a.order() == 2) {
        const auto fa = feedthrough_fn(sys.a);
        const auto v = commutativity_indicator(sys.a);
        os << "feedthrough fA(t) = " << render(fa) << '\n';
        os << "indicator A0(t) = " << detail::describe_verdict(v) << '\n';
        if (result != nullptr) result->verdict = v;
    } else if (sys.b.order() == 1) {
        const auto v = first_order_pair_verdict(sys.a, sys.b);
        os << "c1(t) = " << detail::describe_verdict(v.c1) << '\n';
        os << "c0(t) = " << detail::describe_verdict(v.c0) << '\n';
        os << "commutative for relaxed systems: " << (v.c1.is_constant && v.c0.is_constant ? "yes" : "no") << '\n';
        os << "c1 + c0 = 1 (unrelaxed condition): " << (v.nonzero_ic_ok ? "yes" : "no") << '\n';
        if (result != nullptr) result->first_order_verdict = v;
    }
    if (sc.period) {
        const auto ea = average_eigenvalues(sys.a, *sc.period);
        const auto eb = average_eigenvalues(sys.b, *sc.period);
        os << "average eigenvalues over " << *sc.period << " s:\n";
        os << "  A:";
        for (auto z : ea.eigenvalues) os << "  " << detail::format_complex(z);
        os << "\n  B:";
        for (auto z : eb.eigenvalues) os << "  " << detail::format_complex(z);
        os << '\n';
        if (result != nullptr) {
            result->eigen_a = ea;
            result->eigen_b = eb;
        }
    }
    return os.str();
}

/// Coefficients of both systems in expression syntax (the `synthesize` subcommand).
inline std::string coefficients_report(const BuiltSystems& sys) {
    std::ostringstream os;
    for (const auto* s : {&sys.a, &sys.b}) {
        const char prefix = s == &sys.a ? 'a' : 'b';
        os << "[system." << s->label() << "]\norder = " << s->order() << '\n';
        for (int k = s->order(); k >= 0; --k) os << prefix << k << " = " << render(s->coefficient(k)) << '\n';
        os << '\n';
    }
    return os.str();
}

inline RunResult run_scenario(const Scenario& sc, const RunOptions& options = {}) {
    RunResult r;
    const auto sys = build_systems(sc);
    std::ostringstream report;
    report.precision(10);
    report << "scenario " << sc.label << "\n";
    report << "step " << sc.solver.step << " s, horizon " << sc.solver.horizon << " s\n\n";

    if (sc.outputs.wants(Artifact::Verdict)) report << verdict_report(sc, sys, &r) << '\n';

    r.ab = integrate_cascade(sys.a, sys.b, sc.input, sc.solver);
    r.ba = integrate_cascade(sys.b, sys.a, sc.input, sc.solver);
    r.deviation = relative_sup_deviation(r.ab.output, r.ba.output);

    if (sc.switching) {
        const auto schedule = sc.switching->resolve(sc.solver.horizon);
        r.switch_instants = schedule.boundaries;
        r.switched = integrate_switched(sys.a, sys.b, schedule, sc.input, sc.solver);
        // The unswitched reference starts on the same path as the switched channel.
        const auto& reference = schedule.path_for_slot(0) == Path::AB ? r.ab : r.ba;
        r.switched_deviation = relative_sup_deviation(reference.output, r.switched->output);
        r.settle = settle_times(*r.switched, reference, r.switch_instants);
    }

    if (sc.outputs.wants(Artifact::Deviation)) {
        report << "output deviation AB vs BA (relative sup-norm): " << r.deviation << '\n';
        if (r.switched) {
            report << "switched vs unswitched output (relative sup-norm): " << *r.switched_deviation << '\n';
            report << "settle time after each switch (5% band):\n";
            for (std::size_t i = 0; i < r.settle.size(); ++i) {
                report << "  t_s = " << r.switch_instants[i] << " s: " << r.settle[i] << " s\n";
            }
        }
        report << '\n';
    }

    std::vector<std::pair<std::string, std::string>> files;
    if (sc.outputs.wants(Artifact::Trace)) {
        files.emplace_back(sc.label + "_AB.csv", export_csv(r.ab));
        files.emplace_back(sc.label + "_BA.csv", export_csv(r.ba));
        if (r.switched) files.emplace_back(sc.label + "_switched.csv", export_csv(*r.switched));
    }

    if (sc.outputs.wants(Artifact::Spectrum)) {
        const std::size_t factor = spectrum_decimation(sc.solver, sc.outputs.spectrum_rate_hz);
        const double rate = sc.outputs.spectrum_rate_hz;
        const auto w = sc.outputs.window;
        SpectrumSummary s{
            periodogram(decimate(r.ab.transmitted, factor), rate, w),
            periodogram(decimate(r.ba.transmitted, factor), rate, w),
            periodogram(decimate(r.ab.output, factor), rate, w),
            periodogram(decimate(r.ba.output, factor), rate, w),
        };
        s.transmitted_distance = spectral_distance(s.transmitted_ab, s.transmitted_ba);
        s.output_distance = spectral_distance(s.output_ab, s.output_ba);
        report << "spectral distance, transmitted AB vs BA: " << s.transmitted_distance << '\n';
        report << "spectral distance, output AB vs BA: " << s.output_distance << "\n\n";
        files.emplace_back(sc.label + "_spectrum_transmitted_AB.csv", export_spectrum_csv(s.transmitted_ab));
        files.emplace_back(sc.label + "_spectrum_transmitted_BA.csv", export_spectrum_csv(s.transmitted_ba));
        files.emplace_back(sc.label + "_spectrum_output_AB.csv", export_spectrum_csv(s.output_ab));
        files.emplace_back(sc.label + "_spectrum_output_BA.csv", export_spectrum_csv(s.output_ba));
        r.spectra = std::move(s);
    }

    r.report = report.str();
    files.emplace_back(sc.label + "_report.txt", r.report);

    if (options.write_files) {
        std::filesystem::create_directories(options.out_dir);
        for (const auto& [name, content] : files) {
            const auto path = options.out_dir / name;
            detail::write_file(path, content);
            r.written.push_back(path);
        }
    }
    return r;
}

}  // namespace ltvcomm
