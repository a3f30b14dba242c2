// channel_runner.hpp: executes pulse schedules and reports gate and transfer quality
//
// Two execution models share one interface:
//   reduced  each pulsed target evolves under delta*X + bias*Z plus the zz
//            links that touch it; idle qubits are frozen (the rotating frame
//            of their own bias energy).
//   full     the whole chain Hamiltonian, idle qubits at their holding bias.
// Full-model reads are also reported after an analytic frame correction that
// removes the idle z-phases, so they can be compared with the reduced frame.

#pragma once

#include "qswap/chain_model.hpp"
#include "qswap/evolve.hpp"
#include "qswap/gate_algebra.hpp"
#include "qswap/param_solver.hpp"
#include "qswap/pulse_scheduler.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qswap {

enum class SimulationModel { reduced, full };

std::string_view to_string(SimulationModel model);
SimulationModel simulation_model_from_string(std::string_view name);

// ---- frame correction ------------------------------------------------------

// z_phase_rad[w][q] = theta: idle evolution in window w multiplies a basis
// amplitude by exp(-i * sum_q theta_q * s_q), with s_q = +1 for |0>, -1 for |1>.
// Pulsed targets get 0.
//
// Swaps permute basis states, so every idle phase picked up by a qubit that
// holds input j can be moved to the end of the run as a z-rotation on input j.
// data_phase_rad[j] is that accumulated angle; phases of empty qubits are global.
struct FrameCorrection {
    std::vector<std::vector<double>> z_phase_rad;
    std::vector<double> data_phase_rad;  // indexed by data id
};

// Throws ScheduleError when an idle data qubit has an idle data neighbour or
// holds a mix of inputs (its phase is then not a known constant), or when the
// replay finds violations.
FrameCorrection compute_frame_correction(const PulseSchedule& schedule, const ChainSpec& spec);

// Multiplies amplitudes by exp(+i sum_q theta_q s_q), undoing idle phases theta.
QuantumState apply_frame_correction(const QuantumState& state, std::span<const double> z_phase_rad);

// ---- schedule execution ----------------------------------------------------

// Executes one window on `state` (pulses and biases from the window).
QuantumState run_window(const QuantumState& state, const ChainSpec& spec,
                        const ScheduleWindow& window, SimulationModel model);

// ---- gate experiment -------------------------------------------------------

struct GateExperimentOptions {
    SimulationModel model = SimulationModel::reduced;
    Bit sacrificial = Bit::zero;  // state of the right-hand qubit
    PhaseMode mode = PhaseMode::exact;
};

// A CNOT pulse on the middle qubit of a 3-chain, control on the left.
struct GateReport {
    SimulationModel model = SimulationModel::reduced;
    double eps_high_mhz = 0.0;
    Eigen::Matrix4cd gate;  // |control, target>, right qubit projected onto its start state
    double distance = 0.0;  // Frobenius, after global and control z-phase alignment
    std::array<double, 4> truth_table_fidelity{};
    double worst_infidelity = 0.0;
};

GateReport run_gate_experiment(const ChainSpec& spec, const GateDesign& design,
                               const GateExperimentOptions& options = {});

// Distance between two 4x4 gates after aligning a phase per control block.
double cnot_distance(const Eigen::Matrix4cd& gate, const Eigen::Matrix4cd& ideal);

// ---- COPY truth table ------------------------------------------------------

struct CopyTableRow {
    std::array<Bit, 3> input{};
    std::array<Bit, 3> expected{};
    bool flipped = false;
    double fidelity = 0.0;   // probability of the expected basis output
    double phase_rad = 0.0;  // arg of the expected output amplitude
};

struct CopyTable {
    SimulationModel model = SimulationModel::reduced;
    double eps_high_mhz = 0.0;
    std::array<CopyTableRow, 4> rows{};
};

CopyTable copy_truth_table(const ChainSpec& spec, const GateDesign& design,
                           SimulationModel model = SimulationModel::reduced);

// ---- eps_high sweep --------------------------------------------------------

struct SweepRow {
    double eps_high_mhz = 0.0;
    double eps_over_delta = 0.0;
    double worst_infidelity = 0.0;
};

struct EpsSweep {
    std::vector<SweepRow> rows;
    std::optional<double> log_log_slope;  // least squares; needs two usable rows
    bool monotone = true;                 // non-increasing within 1e-12
};

EpsSweep sweep_eps_high(const ChainSpec& spec, const GateDesign& design,
                        std::span<const double> eps_grid_mhz,
                        SimulationModel model = SimulationModel::full);

// ---- channels --------------------------------------------------------------

struct RunOptions {
    SimulationModel model = SimulationModel::reduced;
    bool record_trajectory = false;
};

struct StateTransfer {
    int data_id = 0;
    Ket2 input = ket(1.0, 0.0);
    int arrival_window = 0;
    double fidelity_raw = 0.0;
    double fidelity_corrected = 0.0;
    bool phase_defined = false;  // both branches populated
    double phase_raw = 0.0;      // relative branch phase, (-pi, pi]
    double phase_corrected = 0.0;
    double purity = 1.0;  // of the read qubit, just before reset
};

struct TransferReport {
    SimulationModel model = SimulationModel::reduced;
    std::vector<StateTransfer> states;
    double makespan_ns = 0.0;
    int pulse_count = 0;
    double final_trace = 1.0;
    std::vector<std::string> warnings;
    std::vector<TrajectoryRow> trajectory;  // per-qubit P(|1>) at each window end (raw)
};

TransferReport run_quantum_channel(const ChainSpec& spec, const PulseSchedule& schedule,
                                   std::span<const Ket2> data_states,
                                   const RunOptions& options = {});

struct ClassicalReport {
    SimulationModel model = SimulationModel::reduced;
    std::vector<int> bits_in;
    std::vector<int> bits_out;
    std::vector<double> bit_fidelity;  // probability of the correct value at readout
    std::vector<int> read_window;
    int latency_sequences = 0;  // sequences until the first bit is read
    double makespan_ns = 0.0;
    int pulse_count = 0;
    double final_trace = 1.0;
    std::vector<std::string> warnings;
    std::vector<TrajectoryRow> trajectory;
};

// Inputs must be computational basis kets.
ClassicalReport run_classical_channel(const ChainSpec& spec, const PulseSchedule& schedule,
                                      std::span<const Ket2> inputs,
                                      const RunOptions& options = {});

std::vector<Ket2> bits_to_kets(std::span<const int> bits);

// F = <psi| rho |psi> and the relative phase arg(<0|psi><psi|1>) - arg(rho_01).
struct StateComparison {
    double fidelity = 0.0;
    bool phase_defined = false;
    double phase_rad = 0.0;
    double purity = 1.0;
};

StateComparison compare_qubit(const QuantumState& state, int qubit, const Ket2& expected);

}  // namespace qswap
