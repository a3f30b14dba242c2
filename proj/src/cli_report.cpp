#include "qswap/cli_report.hpp"

#include "json_reader.hpp"
#include "qswap/errors.hpp"
#include "qswap/evolve.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qswap {

namespace {

using detail::JsonReader;
using detail::ordered_json;

Experiment parse_experiment(const std::string& name, const std::string& where) {
    for (Experiment e : {Experiment::quantum_wire, Experiment::classical_wire, Experiment::copy_table,
                         Experiment::gate, Experiment::eps_sweep}) {
        if (to_string(e) == name) {
            return e;
        }
    }
    throw ConfigError(where, "unknown experiment '" + name +
                                 "' (quantum_wire, classical_wire, copy_table, gate, eps_sweep)");
}

void require_section(bool present, bool used, Experiment e, const std::string& where) {
    if (present && !used) {
        throw ConfigError(where, "not used by experiment " + std::string(to_string(e)));
    }
}

DesignConfig parse_design(JsonReader r) {
    DesignConfig d;
    d.pulse_ns = r.number_optional("pulse_ns");
    d.delta_mhz = r.number_optional("delta_mhz");
    if (d.pulse_ns.has_value() == d.delta_mhz.has_value()) {
        throw ConfigError(r.where(), "give exactly one of pulse_ns and delta_mhz");
    }
    d.m = r.integer_optional("m").value_or(1);
    d.n = r.integer_optional("n").value_or(0);
    const std::string mode = r.string_optional("phase_mode").value_or("exact");
    if (mode == "exact") {
        d.mode = PhaseMode::exact;
    } else if (mode == "any") {
        d.mode = PhaseMode::any;
    } else {
        throw ConfigError(r.child("phase_mode"), "expected \"exact\" or \"any\"");
    }
    r.finish();
    return d;
}

EpsHighConfig parse_eps(JsonReader r) {
    EpsHighConfig c;
    const std::string policy = r.string("policy");
    if (policy == "ratio") {
        c.policy = EpsPolicy::ratio;
        c.ratio = r.number("ratio");
    } else if (policy == "commensurate") {
        c.policy = EpsPolicy::commensurate;
        c.ratio = r.number("ratio");
    } else if (policy == "fixed") {
        c.policy = EpsPolicy::fixed;
        c.eps_high_mhz = r.number("eps_high_mhz");
        if (!(c.eps_high_mhz > 0.0)) {
            throw ConfigError(r.child("eps_high_mhz"), "must be > 0");
        }
    } else {
        throw ConfigError(r.child("policy"), "expected \"ratio\", \"commensurate\" or \"fixed\"");
    }
    if (c.policy != EpsPolicy::fixed && !(c.ratio > 0.0)) {
        throw ConfigError(r.child("ratio"), "must be > 0");
    }
    r.finish();
    return c;
}

Ket2 parse_ket(JsonReader r) {
    const Ket2 k = ket(Complex(r.number("alpha_re"), r.number("alpha_im")),
                       Complex(r.number("beta_re"), r.number("beta_im")));
    r.finish();
    if (std::abs(k.squaredNorm() - 1.0) > 1e-9) {
        throw ConfigError(r.where(), "state is not normalized");
    }
    return k;
}

ordered_json ket_json(const Ket2& k) {
    return ordered_json{{"alpha_re", k(0).real()}, {"alpha_im", k(0).imag()},
                        {"beta_re", k(1).real()}, {"beta_im", k(1).imag()}};
}

std::string bits_string(const std::array<Bit, 3>& bits) {
    std::string s;
    for (Bit b : bits) {
        s.push_back(b == Bit::one ? '1' : '0');
    }
    return s;
}

ordered_json lines_json(const PulseSchedule& schedule, const LineAssignment& lines,
                        std::vector<std::string>& failures) {
    const std::vector<LineConflict> conflicts = line_conflict_check(schedule, lines);
    ordered_json j;
    j["line_count"] = lines.line_count;
    j["lines_used"] = lines.lines_used();
    ordered_json list = ordered_json::array();
    for (const LineConflict& c : conflicts) {
        list.push_back(c.message);
        failures.push_back("line conflict: " + c.message);
    }
    j["conflicts"] = list;
    return j;
}

std::string csv_of_trajectory(const std::vector<TrajectoryRow>& rows, int n_qubits) {
    std::ostringstream out;
    write_trajectory_csv(out, rows, n_qubits);
    return out.str();
}

void check_min(std::optional<double> bound, double value, const std::string& what,
               std::vector<std::string>& failures) {
    if (bound && !(value >= *bound)) {
        failures.push_back(what + " " + format_double(value) + " < " + format_double(*bound));
    }
}

}  // namespace

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::quantum_wire: return "quantum_wire";
        case Experiment::classical_wire: return "classical_wire";
        case Experiment::copy_table: return "copy_table";
        case Experiment::gate: return "gate";
        case Experiment::eps_sweep: return "eps_sweep";
    }
    return "quantum_wire";
}

RunConfig parse_run_config(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("/", std::string("not valid JSON: ") + e.what());
    }
    JsonReader r(doc, "");
    RunConfig c;
    c.experiment = parse_experiment(r.string("experiment"), r.child("experiment"));
    c.name = r.string_optional("name").value_or(std::string(to_string(c.experiment)));
    if (auto seed = r.raw_optional("seed")) {
        if (!seed->get().is_number_unsigned()) {
            throw ConfigError(r.child("seed"), "expected a non-negative integer");
        }
        c.seed = seed->get().get<std::uint64_t>();
    }
    c.design = parse_design(JsonReader(r.raw("design"), r.child("design")));

    {
        JsonReader cr(r.raw("chain"), r.child("chain"));
        c.n_qubits = cr.integer("n_qubits");
        if (c.n_qubits < 1 || c.n_qubits > kDefaultQubitCap) {
            throw ConfigError(cr.child("n_qubits"),
                              "must be between 1 and " + std::to_string(kDefaultQubitCap));
        }
        if (auto eps = cr.raw_optional("eps_high")) {
            c.eps_high = parse_eps(JsonReader(eps->get(), cr.child("eps_high")));
        }
        cr.finish();
    }
    const bool three = c.experiment == Experiment::copy_table || c.experiment == Experiment::gate ||
                       c.experiment == Experiment::eps_sweep;
    if (three && c.n_qubits != 3) {
        throw ConfigError(r.child("chain") + "/n_qubits",
                          std::string(to_string(c.experiment)) + " runs on a 3-qubit chain");
    }
    if (auto model = r.string_optional("model")) {
        if (*model == "reduced") {
            c.model = SimulationModel::reduced;
        } else if (*model == "full") {
            c.model = SimulationModel::full;
        } else {
            throw ConfigError(r.child("model"), "expected \"reduced\" or \"full\"");
        }
    }

    require_section(r.has("quantum"), c.experiment == Experiment::quantum_wire, c.experiment,
                    r.child("quantum"));
    require_section(r.has("classical"), c.experiment == Experiment::classical_wire, c.experiment,
                    r.child("classical"));
    require_section(r.has("sweep"), c.experiment == Experiment::eps_sweep, c.experiment,
                    r.child("sweep"));

    if (c.experiment == Experiment::quantum_wire) {
        JsonReader qr(r.raw("quantum"), r.child("quantum"));
        if (auto states = qr.raw_optional("states")) {
            if (!states->get().is_array()) {
                throw ConfigError(qr.child("states"), "expected an array");
            }
            for (std::size_t i = 0; i < states->get().size(); ++i) {
                c.states.push_back(
                    parse_ket(JsonReader(states->get()[i], qr.child("states") + "/" + std::to_string(i))));
            }
        }
        c.random_states = qr.integer_optional("random_states").value_or(0);
        if (c.random_states < 0) {
            throw ConfigError(qr.child("random_states"), "must be >= 0");
        }
        if (c.random_states > 0 && !c.seed) {
            throw ConfigError(r.child("seed"), "required when random_states > 0");
        }
        if (c.states.empty() && c.random_states == 0) {
            throw ConfigError(qr.where(), "no states to send");
        }
        if (auto scheme = qr.string_optional("line_scheme")) {
            if (*scheme == "eight_line") {
                c.line_scheme = LineScheme::eight_line;
            } else if (*scheme == "compact_five") {
                c.line_scheme = LineScheme::compact_five;
            } else {
                throw ConfigError(qr.child("line_scheme"), "expected \"eight_line\" or \"compact_five\"");
            }
        }
        c.allow_even_length = qr.boolean("allow_even_length", false);
        qr.finish();
    }
    if (c.experiment == Experiment::classical_wire) {
        JsonReader br(r.raw("classical"), r.child("classical"));
        const ordered_json& bits = br.array("bits");
        for (std::size_t i = 0; i < bits.size(); ++i) {
            const std::string where = br.child("bits") + "/" + std::to_string(i);
            const int b = JsonReader::as_integer(bits[i], where);
            if (b != 0 && b != 1) {
                throw ConfigError(where, "bits are 0 or 1");
            }
            c.bits.push_back(b);
        }
        if (c.bits.empty()) {
            throw ConfigError(br.child("bits"), "no bits to send");
        }
        br.finish();
    }
    if (c.experiment == Experiment::eps_sweep) {
        JsonReader sr(r.raw("sweep"), r.child("sweep"));
        const ordered_json& grid = sr.array("eps_grid_ratio");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const std::string where = sr.child("eps_grid_ratio") + "/" + std::to_string(i);
            const double v = JsonReader::as_number(grid[i], where);
            if (!(v > 0.0)) {
                throw ConfigError(where, "must be > 0");
            }
            c.eps_grid_ratio.push_back(v);
        }
        if (c.eps_grid_ratio.empty()) {
            throw ConfigError(sr.child("eps_grid_ratio"), "empty grid");
        }
        sr.finish();
    }

    if (auto a = r.raw_optional("assertions")) {
        JsonReader ar(a->get(), r.child("assertions"));
        c.assertions.min_fidelity = ar.number_optional("min_fidelity");
        c.assertions.max_abs_phase_rad = ar.number_optional("max_abs_phase_rad");
        c.assertions.latency_sequences = ar.integer_optional("latency_sequences");
        c.assertions.echo_bits = ar.boolean("echo_bits", false);
        c.assertions.max_distance = ar.number_optional("max_distance");
        c.assertions.slope_min = ar.number_optional("slope_min");
        c.assertions.slope_max = ar.number_optional("slope_max");
        c.assertions.monotone = ar.boolean("monotone", false);
        ar.finish();
    }
    if (auto o = r.raw_optional("output")) {
        JsonReader orr(o->get(), r.child("output"));
        c.output.report_json = orr.string_optional("report_json");
        c.output.trajectory_csv = orr.string_optional("trajectory_csv");
        c.output.sweep_csv = orr.string_optional("sweep_csv");
        orr.finish();
    }
    r.finish();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("/", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

GateDesign resolve_design(const DesignConfig& config) {
    if (config.pulse_ns) {
        return solve_parameters(*config.pulse_ns, config.m, config.n, config.mode);
    }
    if (config.delta_mhz) {
        return solve_for_timestep(*config.delta_mhz, config.m, config.n, config.mode);
    }
    throw ConfigError("/design", "give exactly one of pulse_ns and delta_mhz");
}

double resolve_eps_high(const EpsHighConfig& config, const GateDesign& design) {
    switch (config.policy) {
        case EpsPolicy::ratio: return config.ratio * design.delta_mhz;
        case EpsPolicy::commensurate: return commensurate_eps_high(design, config.ratio);
        case EpsPolicy::fixed: return config.eps_high_mhz;
    }
    return config.ratio * design.delta_mhz;
}

Ket2 random_qubit_state(std::mt19937_64& rng) {
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double cos_theta = 1.0 - 2.0 * unit();
    const double phi = 2.0 * std::numbers::pi * unit();
    const double c = std::sqrt(std::max(0.0, (1.0 + cos_theta) / 2.0));
    const double s = std::sqrt(std::max(0.0, (1.0 - cos_theta) / 2.0));
    return ket(Complex(c, 0.0), std::polar(s, phi));
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string design_json(const GateDesign& design, PhaseMode mode) {
    const GateConditionReport cond = validate_gate_conditions(design, mode);
    ordered_json j;
    j["pulse_ns"] = design.pulse_ns;
    j["m"] = design.m;
    j["n"] = design.n;
    j["delta_mhz"] = design.delta_mhz;
    j["xi_mhz"] = design.xi_mhz;
    j["f1_mhz"] = cond.f1_mhz;
    j["f2_mhz"] = cond.f2_mhz;
    j["f1_times_t"] = cond.f1_times_t;
    j["f2_times_t"] = cond.f2_times_t;
    j["phase_exact"] = cond.m_odd && cond.n_even;
    return j.dump(2) + "\n";
}

RunResult execute_run(const RunConfig& config) {
    const GateDesign design = resolve_design(config.design);
    const double eps = resolve_eps_high(config.eps_high, design);
    const ChainSpec spec = ChainSpec::make(config.n_qubits, design.delta_mhz, design.xi_mhz, eps);
    const Assertions& as = config.assertions;

    RunResult out;
    std::vector<std::string>& failures = out.failures;
    ordered_json report;
    report["experiment"] = to_string(config.experiment);
    report["name"] = config.name;
    report["seed"] = config.seed ? ordered_json(*config.seed) : ordered_json(nullptr);
    report["model"] = to_string(config.model);
    report["design"] = ordered_json::parse(design_json(design, config.design.mode));
    report["chain"] = ordered_json{{"n_qubits", spec.n_qubits},
                                   {"delta_mhz", spec.delta_mhz},
                                   {"xi_mhz", spec.xi_mhz},
                                   {"eps_high_mhz", spec.eps_high_mhz}};
    ordered_json result;
    RunOptions run_opts;
    run_opts.model = config.model;
    run_opts.record_trajectory = config.output.trajectory_csv.has_value();

    switch (config.experiment) {
        case Experiment::quantum_wire: {
            std::vector<Ket2> states = config.states;
            if (config.random_states > 0) {
                std::mt19937_64 rng(*config.seed);
                for (int i = 0; i < config.random_states; ++i) {
                    states.push_back(random_qubit_state(rng));
                }
            }
            QuantumScheduleOptions qopts;
            qopts.line_scheme = config.line_scheme;
            qopts.allow_even_length = config.allow_even_length;
            const ChannelPlan plan =
                quantum_channel_schedule(spec, static_cast<int>(states.size()), design.pulse_ns, qopts);
            const TransferReport r = run_quantum_channel(spec, plan.schedule, states, run_opts);
            result["makespan_ns"] = r.makespan_ns;
            result["pulse_count"] = r.pulse_count;
            result["lines"] = lines_json(plan.schedule, plan.lines, failures);
            result["final_trace"] = r.final_trace;
            ordered_json rows = ordered_json::array();
            for (const StateTransfer& st : r.states) {
                ordered_json s;
                s["data_id"] = st.data_id;
                s["input"] = ket_json(st.input);
                s["arrival_window"] = st.arrival_window;
                s["fidelity_raw"] = st.fidelity_raw;
                s["fidelity_corrected"] = st.fidelity_corrected;
                s["phase_defined"] = st.phase_defined;
                s["phase_raw_rad"] = st.phase_raw;
                s["phase_corrected_rad"] = st.phase_corrected;
                s["purity"] = st.purity;
                rows.push_back(s);
                const std::string tag = "state " + std::to_string(st.data_id);
                if (st.arrival_window < 0) {
                    failures.push_back(tag + " never reached the output");
                }
                check_min(as.min_fidelity, st.fidelity_corrected, tag + " fidelity", failures);
                if (as.max_abs_phase_rad && st.phase_defined &&
                    !(std::abs(st.phase_corrected) <= *as.max_abs_phase_rad)) {
                    failures.push_back(tag + " phase " + format_double(st.phase_corrected) +
                                       " exceeds " + format_double(*as.max_abs_phase_rad));
                }
            }
            result["states"] = rows;
            result["warnings"] = r.warnings;
            if (run_opts.record_trajectory) {
                out.trajectory_csv = csv_of_trajectory(r.trajectory, spec.n_qubits);
            }
            break;
        }
        case Experiment::classical_wire: {
            const ChannelPlan plan =
                classical_channel_schedule(spec, static_cast<int>(config.bits.size()), design.pulse_ns);
            const std::vector<Ket2> kets = bits_to_kets(config.bits);
            const ClassicalReport r = run_classical_channel(spec, plan.schedule, kets, run_opts);
            result["makespan_ns"] = r.makespan_ns;
            result["pulse_count"] = r.pulse_count;
            result["lines"] = lines_json(plan.schedule, plan.lines, failures);
            result["final_trace"] = r.final_trace;
            result["bits_in"] = r.bits_in;
            result["bits_out"] = r.bits_out;
            result["bit_fidelity"] = r.bit_fidelity;
            result["read_window"] = r.read_window;
            result["latency_sequences"] = r.latency_sequences;
            result["warnings"] = r.warnings;
            if (as.echo_bits && r.bits_out != r.bits_in) {
                failures.push_back("output bits differ from input bits");
            }
            if (as.latency_sequences && r.latency_sequences != *as.latency_sequences) {
                failures.push_back("latency " + std::to_string(r.latency_sequences) +
                                   " sequences, expected " + std::to_string(*as.latency_sequences));
            }
            for (std::size_t j = 0; j < r.bit_fidelity.size(); ++j) {
                check_min(as.min_fidelity, r.bit_fidelity[j], "bit " + std::to_string(j) + " fidelity",
                          failures);
            }
            if (run_opts.record_trajectory) {
                out.trajectory_csv = csv_of_trajectory(r.trajectory, spec.n_qubits);
            }
            break;
        }
        case Experiment::copy_table: {
            const CopyTable t = copy_truth_table(spec, design, config.model);
            ordered_json rows = ordered_json::array();
            for (const CopyTableRow& row : t.rows) {
                rows.push_back(ordered_json{{"input", bits_string(row.input)},
                                            {"expected", bits_string(row.expected)},
                                            {"flipped", row.flipped},
                                            {"fidelity", row.fidelity},
                                            {"phase_rad", row.phase_rad}});
                check_min(as.min_fidelity, row.fidelity, "row " + bits_string(row.input) + " fidelity",
                          failures);
            }
            result["rows"] = rows;
            break;
        }
        case Experiment::gate: {
            GateExperimentOptions gopts;
            gopts.model = config.model;
            gopts.mode = config.design.mode;
            const GateReport g = run_gate_experiment(spec, design, gopts);
            ordered_json m = ordered_json::array();
            for (int i = 0; i < 4; ++i) {
                ordered_json row = ordered_json::array();
                for (int k = 0; k < 4; ++k) {
                    row.push_back(ordered_json::array({g.gate(i, k).real(), g.gate(i, k).imag()}));
                }
                m.push_back(row);
            }
            result["gate"] = m;
            result["distance"] = g.distance;
            result["truth_table_fidelity"] = g.truth_table_fidelity;
            result["worst_infidelity"] = g.worst_infidelity;
            if (as.max_distance && !(g.distance <= *as.max_distance)) {
                failures.push_back("gate distance " + format_double(g.distance) + " exceeds " +
                                   format_double(*as.max_distance));
            }
            check_min(as.min_fidelity, 1.0 - g.worst_infidelity, "truth-table fidelity", failures);
            break;
        }
        case Experiment::eps_sweep: {
            std::vector<double> grid;
            for (double ratio : config.eps_grid_ratio) {
                grid.push_back(ratio * design.delta_mhz);
            }
            const EpsSweep s = sweep_eps_high(spec, design, grid, config.model);
            ordered_json rows = ordered_json::array();
            for (const SweepRow& row : s.rows) {
                rows.push_back(ordered_json{{"eps_high_mhz", row.eps_high_mhz},
                                            {"eps_over_delta", row.eps_over_delta},
                                            {"worst_infidelity", row.worst_infidelity}});
            }
            result["rows"] = rows;
            result["log_log_slope"] = s.log_log_slope ? ordered_json(*s.log_log_slope) : ordered_json(nullptr);
            result["monotone"] = s.monotone;
            if ((as.slope_min || as.slope_max) && !s.log_log_slope) {
                failures.push_back("slope undefined on this grid");
            } else {
                check_min(as.slope_min, s.log_log_slope.value_or(0.0), "log-log slope", failures);
                if (as.slope_max && !(*s.log_log_slope <= *as.slope_max)) {
                    failures.push_back("log-log slope " + format_double(*s.log_log_slope) + " > " +
                                       format_double(*as.slope_max));
                }
            }
            if (as.monotone && !s.monotone) {
                failures.push_back("infidelity is not non-increasing over the grid");
            }
            check_min(as.min_fidelity, 1.0 - s.rows.back().worst_infidelity, "top-point fidelity",
                      failures);
            std::ostringstream csv;
            write_sweep_csv(csv, s);
            out.sweep_csv = csv.str();
            break;
        }
    }
    report["result"] = result;
    report["assertions"] = ordered_json{{"passed", failures.empty()}, {"failures", failures}};
    out.report_json = report.dump(2) + "\n";
    return out;
}

void write_sweep_csv(std::ostream& out, const EpsSweep& sweep) {
    out << "eps_high_mhz,eps_over_delta,worst_infidelity\n";
    for (const SweepRow& r : sweep.rows) {
        out << format_double(r.eps_high_mhz) << ',' << format_double(r.eps_over_delta) << ','
            << format_double(r.worst_infidelity) << '\n';
    }
}

void write_rabi_trace_csv(std::ostream& out, const RabiTraceOptions& options) {
    if (!(options.duration_ns >= 0.0) || options.samples < 0) {
        throw PreconditionError("trace: duration and samples must be non-negative");
    }
    if (!(options.delta_mhz > 0.0)) {
        throw PreconditionError("trace: delta must be > 0");
    }
    out << "time_ns,p1_simulated,p1_analytic\n";
    const ChainSpec spec = ChainSpec::make(1, options.delta_mhz, 0.0);
    const BiasProfile profile = BiasProfile::uniform(1, options.sigma_mhz);
    const std::vector<TrajectoryRow> rows = sample_trajectory(
        QuantumState::basis(1, 0), spec, profile, options.duration_ns, options.samples);
    const OscillationDescriptor osc = oscillation_descriptor(options.delta_mhz, options.sigma_mhz);
    for (const TrajectoryRow& r : rows) {
        out << format_double(r.time_ns) << ',' << format_double(r.p_one.front()) << ','
            << format_double(osc.probability(r.time_ns)) << '\n';
    }
}

void write_plot_script(std::ostream& out, const std::string& csv_path) {
    out << "# gnuplot -p <this file>\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 'time (ns)'\n"
        << "set ylabel 'P(|1>)'\n"
        << "plot '" << csv_path << "' using 1:2 with lines lw 2, \\\n"
        << "     '' using 1:3 with points pt 7 ps 0.4\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Error("cannot write " + tmp.string());
        }
        f << content;
        if (!f.flush()) {
            throw Error("cannot write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace qswap
