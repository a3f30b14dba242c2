// cli_report.hpp: run configurations and report output
//
// A run config is one JSON object. Unknown keys are errors, and every error
// carries the JSON pointer of the field at fault. Physical quantities always
// carry their unit in the key (_mhz, _ns).

#pragma once

#include "qswap/channel_runner.hpp"
#include "qswap/param_solver.hpp"
#include "qswap/pulse_scheduler.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qswap {

enum class Experiment { quantum_wire, classical_wire, copy_table, gate, eps_sweep };

std::string_view to_string(Experiment e);

// Either pulse_ns or delta_mhz fixes the design.
struct DesignConfig {
    std::optional<double> pulse_ns;
    std::optional<double> delta_mhz;
    int m = 1;
    int n = 0;
    PhaseMode mode = PhaseMode::exact;
};

enum class EpsPolicy {
    ratio,         // eps_high = ratio * delta
    commensurate,  // smallest 1000*k/T MHz >= ratio * delta
    fixed          // eps_high_mhz as given
};

struct EpsHighConfig {
    EpsPolicy policy = EpsPolicy::ratio;
    double ratio = kDefaultEpsHighRatio;
    double eps_high_mhz = 0.0;
};

// Checks applied to the result; any that fail make the run fail.
struct Assertions {
    std::optional<double> min_fidelity;
    std::optional<double> max_abs_phase_rad;
    std::optional<int> latency_sequences;
    bool echo_bits = false;
    std::optional<double> max_distance;
    std::optional<double> slope_min;
    std::optional<double> slope_max;
    bool monotone = false;
};

struct OutputConfig {
    std::optional<std::string> report_json;
    std::optional<std::string> trajectory_csv;
    std::optional<std::string> sweep_csv;
};

struct RunConfig {
    Experiment experiment = Experiment::quantum_wire;
    std::string name;
    std::optional<std::uint64_t> seed;
    DesignConfig design;
    int n_qubits = 5;
    EpsHighConfig eps_high;
    SimulationModel model = SimulationModel::reduced;

    // quantum_wire
    std::vector<Ket2> states;
    int random_states = 0;  // appended after `states`, drawn from `seed`
    LineScheme line_scheme = LineScheme::eight_line;
    bool allow_even_length = false;

    // classical_wire
    std::vector<int> bits;

    // eps_sweep
    std::vector<double> eps_grid_ratio;

    Assertions assertions;
    OutputConfig output;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

// Throws InfeasibleDesign for (T, M, N) with no solution.
GateDesign resolve_design(const DesignConfig& config);
double resolve_eps_high(const EpsHighConfig& config, const GateDesign& design);

// Uniformly distributed on the Bloch sphere. Built from raw generator output,
// so a seed gives the same states on every platform.
Ket2 random_qubit_state(std::mt19937_64& rng);

struct RunResult {
    std::string report_json;
    std::vector<std::string> failures;  // failed assertions
    std::optional<std::string> trajectory_csv;
    std::optional<std::string> sweep_csv;
};

RunResult execute_run(const RunConfig& config);

// ---- formatting ------------------------------------------------------------

// Shortest decimal that reads back to the same double.
std::string format_double(double value);

std::string design_json(const GateDesign& design, PhaseMode mode);

void write_sweep_csv(std::ostream& out, const EpsSweep& sweep);

struct RabiTraceOptions {
    double delta_mhz = 0.0;
    double sigma_mhz = 0.0;
    double duration_ns = 0.0;
    int samples = 201;
};

// time_ns,p1_simulated,p1_analytic for a single qubit started in |0>.
void write_rabi_trace_csv(std::ostream& out, const RabiTraceOptions& options);

// A gnuplot script overlaying both columns of a trace CSV.
void write_plot_script(std::ostream& out, const std::string& csv_path);

// Writes to a temporary file next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qswap
