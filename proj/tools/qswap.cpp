// qswap: command-line front end
//
// Exit codes: 0 pass, 1 configuration or usage error, 2 infeasible physics,
// 3 assertion or validation failure.

#include "qswap/cli_report.hpp"
#include "qswap/errors.hpp"
#include "qswap/schedule_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitAssertion = 3;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qswap::ConfigError("/", "cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        qswap::write_file_atomic(path, text);
    }
}

struct SolveArgs {
    std::optional<double> t_ns;
    std::optional<double> delta_mhz;
    int m = 1;
    int n = 0;
    std::string phase_mode = "exact";
};

qswap::PhaseMode phase_mode(const std::string& s) {
    return s == "any" ? qswap::PhaseMode::any : qswap::PhaseMode::exact;
}

qswap::GateDesign solve(const SolveArgs& a) {
    if (a.t_ns) {
        return qswap::solve_parameters(*a.t_ns, a.m, a.n, phase_mode(a.phase_mode));
    }
    if (a.delta_mhz) {
        return qswap::solve_for_timestep(*a.delta_mhz, a.m, a.n, phase_mode(a.phase_mode));
    }
    return qswap::solve_parameters(10.0, a.m, a.n, phase_mode(a.phase_mode));
}

void add_design_options(CLI::App* cmd, SolveArgs& a) {
    auto* t = cmd->add_option("--t-ns", a.t_ns, "pulse width T (ns)");
    auto* d = cmd->add_option("--delta-mhz", a.delta_mhz, "tunneling (MHz); solves for T");
    t->excludes(d);
    cmd->add_option("--m", a.m, "full cycles at the both-|0> frequency");
    cmd->add_option("--n", a.n, "half-cycle index at the opposite-state frequency");
    cmd->add_option("--phase-mode", a.phase_mode, "exact (M odd, N even) or any")
        ->check(CLI::IsMember({"exact", "any"}));
}

int run_main(int argc, char** argv) {
    CLI::App app{"Simulator and pulse compiler for chains with fixed zz couplings"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "solve (delta, xi) for a pulse width, or T for a delta");
    add_design_options(solve_cmd, solve_args);

    std::string config_path;
    std::string out_dir = ".";
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a JSON config");
    run_cmd->add_option("config", config_path, "config file")->required();
    run_cmd->add_option("--out-dir", out_dir, "directory for report files");

    qswap::RabiTraceOptions trace_opts;
    trace_opts.duration_ns = 40.0;
    std::string trace_out;
    std::string plot_out;
    auto* trace_cmd = app.add_subcommand("trace", "single-qubit P(|1>)(t): simulated and analytic columns");
    trace_cmd->add_option("--delta-mhz", trace_opts.delta_mhz, "tunneling (MHz)")->required();
    trace_cmd->add_option("--sigma-mhz", trace_opts.sigma_mhz, "effective bias (MHz)");
    trace_cmd->add_option("--duration-ns", trace_opts.duration_ns, "trace length (ns)");
    trace_cmd->add_option("--samples", trace_opts.samples, "number of samples");
    trace_cmd->add_option("--out", trace_out, "CSV path (default stdout)");
    trace_cmd->add_option("--plot-script", plot_out, "write a gnuplot script for the CSV");

    SolveArgs sched_design;
    std::string kind = "quantum";
    int n_qubits = 5;
    int count = 1;
    std::optional<double> eps_high_mhz;
    double eps_ratio = qswap::kDefaultEpsHighRatio;
    std::string line_scheme = "eight_line";
    bool allow_even = false;
    std::string sched_out;
    auto* sched_cmd = app.add_subcommand("schedule", "emit a channel schedule as JSON");
    add_design_options(sched_cmd, sched_design);
    sched_cmd->add_option("--kind", kind, "quantum or classical")->check(CLI::IsMember({"quantum", "classical"}));
    sched_cmd->add_option("--n-qubits", n_qubits, "chain length");
    sched_cmd->add_option("--count", count, "states or bits to send");
    auto* eps_abs = sched_cmd->add_option("--eps-high-mhz", eps_high_mhz, "idle bias (MHz)");
    auto* eps_rel = sched_cmd->add_option("--eps-ratio", eps_ratio, "idle bias as a multiple of delta");
    eps_abs->excludes(eps_rel);
    sched_cmd->add_option("--line-scheme", line_scheme, "eight_line or compact_five")
        ->check(CLI::IsMember({"eight_line", "compact_five"}));
    sched_cmd->add_flag("--allow-even-length", allow_even, "permit even quantum chains");
    sched_cmd->add_option("--out", sched_out, "output path (default stdout)");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a schedule JSON file");
    validate_cmd->add_option("schedule", validate_path, "schedule file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*solve_cmd) {
            const qswap::GateDesign d = solve(solve_args);
            std::cout << qswap::design_json(d, phase_mode(solve_args.phase_mode));
            return kExitOk;
        }
        if (*run_cmd) {
            const qswap::RunConfig config = qswap::load_run_config(config_path);
            const qswap::RunResult result = qswap::execute_run(config);
            const std::filesystem::path dir(out_dir);
            if (config.output.report_json) {
                qswap::write_file_atomic(dir / *config.output.report_json, result.report_json);
            } else {
                std::cout << result.report_json;
            }
            if (config.output.trajectory_csv && result.trajectory_csv) {
                qswap::write_file_atomic(dir / *config.output.trajectory_csv, *result.trajectory_csv);
            }
            if (config.output.sweep_csv && result.sweep_csv) {
                qswap::write_file_atomic(dir / *config.output.sweep_csv, *result.sweep_csv);
            }
            for (const std::string& f : result.failures) {
                std::cerr << "assertion failed: " << f << '\n';
            }
            return result.failures.empty() ? kExitOk : kExitAssertion;
        }
        if (*trace_cmd) {
            std::ostringstream csv;
            qswap::write_rabi_trace_csv(csv, trace_opts);
            emit(csv.str(), trace_out);
            if (!plot_out.empty()) {
                std::ostringstream script;
                qswap::write_plot_script(script, trace_out.empty() ? "trace.csv" : trace_out);
                qswap::write_file_atomic(plot_out, script.str());
            }
            return kExitOk;
        }
        if (*sched_cmd) {
            const qswap::GateDesign d = solve(sched_design);
            const double eps = eps_high_mhz ? *eps_high_mhz : eps_ratio * d.delta_mhz;
            const qswap::ChainSpec spec = qswap::ChainSpec::make(n_qubits, d.delta_mhz, d.xi_mhz, eps);
            qswap::ChannelPlan plan;
            if (kind == "quantum") {
                qswap::QuantumScheduleOptions opts;
                opts.line_scheme = line_scheme == "compact_five" ? qswap::LineScheme::compact_five
                                                                 : qswap::LineScheme::eight_line;
                opts.allow_even_length = allow_even;
                plan = qswap::quantum_channel_schedule(spec, count, d.pulse_ns, opts);
            } else {
                plan = qswap::classical_channel_schedule(spec, count, d.pulse_ns);
            }
            emit(qswap::write_schedule_json(plan.schedule, plan.lines), sched_out);
            return kExitOk;
        }
        if (*validate_cmd) {
            const qswap::ScheduleDocument doc = qswap::read_schedule_json(read_text(validate_path));
            const qswap::ReplayTrace trace =
                qswap::replay_occupancy(doc.schedule, qswap::empty_occupancy(doc.schedule.n_qubits));
            nlohmann::ordered_json report;
            nlohmann::ordered_json violations = nlohmann::ordered_json::array();
            for (const qswap::Violation& v : trace.violations) {
                violations.push_back({{"window", v.window},
                                      {"qubit", v.qubit},
                                      {"kind", qswap::to_string(v.kind)},
                                      {"message", v.message}});
            }
            nlohmann::ordered_json conflicts = nlohmann::ordered_json::array();
            if (doc.lines) {
                for (const qswap::LineConflict& c : qswap::line_conflict_check(doc.schedule, *doc.lines)) {
                    conflicts.push_back({{"window", c.window}, {"line", c.line}, {"message", c.message}});
                }
            }
            const bool ok = violations.empty() && conflicts.empty();
            report["ok"] = ok;
            report["n_qubits"] = doc.schedule.n_qubits;
            report["windows"] = doc.schedule.windows.size();
            report["pulse_count"] = doc.schedule.pulse_count();
            report["makespan_ns"] = doc.schedule.makespan_ns();
            report["line_count"] = doc.lines ? nlohmann::ordered_json(doc.lines->line_count) : nullptr;
            report["violations"] = violations;
            report["line_conflicts"] = conflicts;
            std::cout << report.dump(2) << '\n';
            return ok ? kExitOk : kExitAssertion;
        }
    } catch (const qswap::InfeasibleDesign& e) {
        std::cerr << e.what() << '\n';
        return kExitInfeasible;
    } catch (const qswap::ConfigError& e) {
        std::cerr << "config error at " << e.what() << '\n';
        return kExitConfig;
    } catch (const qswap::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    return run_main(argc, argv);
}
