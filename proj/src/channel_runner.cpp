#include "qswap/channel_runner.hpp"

#include "qswap/errors.hpp"
#include "qswap/units.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <string>
#include <utility>

namespace qswap {

namespace {

constexpr double kEntangledWarnPurity = 1e-3;
constexpr double kBasisTolerance = 1e-9;
constexpr double kPhaseFloor = 1e-9;

bool is_pulse(const PulseEvent& p) {
    return p.kind == EventKind::cnot_pulse || p.kind == EventKind::readout_pulse;
}

std::set<int> window_targets(const ScheduleWindow& window) {
    std::set<int> targets;
    for (const PulseEvent& p : window.pulses) {
        if (is_pulse(p)) {
            targets.insert(p.qubit);
        }
    }
    return targets;
}

// delta*X_t + bias*Z_t + xi*Z_t*Z_n on (t-1, t, t+1) clipped to the chain.
std::pair<Eigen::MatrixXcd, std::vector<int>> target_block(const ChainSpec& spec, int target,
                                                           double bias_mhz) {
    std::vector<int> qubits;
    for (int q = target - 1; q <= target + 1; ++q) {
        if (q >= 0 && q < spec.n_qubits) {
            qubits.push_back(q);
        }
    }
    const int k = static_cast<int>(qubits.size());
    const int pos = static_cast<int>(std::find(qubits.begin(), qubits.end(), target) - qubits.begin());
    const Eigen::Index dim = Eigen::Index{1} << k;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        const auto idx = static_cast<std::uint64_t>(l);
        const int zt = basis_bit(idx, pos, k) ? -1 : 1;
        double diag = bias_mhz * zt;
        for (int j = 0; j < k; ++j) {
            if (j != pos) {
                diag += spec.xi_mhz * zt * (basis_bit(idx, j, k) ? -1 : 1);
            }
        }
        h(l, l) += diag;
        const Eigen::Index flipped = l ^ (Eigen::Index{1} << (k - 1 - pos));
        h(flipped, l) += spec.delta_mhz;
    }
    return {std::move(h), std::move(qubits)};
}

Eigen::VectorXd basis_phase_sum(int n_qubits, std::span<const double> theta) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::VectorXd phases = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        double s = 0.0;
        for (int q = 0; q < n_qubits; ++q) {
            if (theta[static_cast<std::size_t>(q)] != 0.0) {
                s += theta[static_cast<std::size_t>(q)] *
                     (basis_bit(static_cast<std::uint64_t>(i), q, n_qubits) ? -1.0 : 1.0);
            }
        }
        phases(i) = s;
    }
    return phases;
}

// Runs windows with a propagator cache for repeated bias profiles.
class Executor {
public:
    Executor(const ChainSpec& spec, SimulationModel model) : spec_(spec), model_(model) {}

    QuantumState step(const QuantumState& state, const ScheduleWindow& window) {
        if (window.biases.size() != static_cast<std::size_t>(spec_.n_qubits)) {
            throw ScheduleError("window has " + std::to_string(window.biases.size()) +
                                " biases for a chain of " + std::to_string(spec_.n_qubits));
        }
        if (model_ == SimulationModel::full) {
            return apply_unitary(state, cached(window.biases, std::vector<bool>(), window.duration_ns));
        }
        const std::set<int> targets = window_targets(window);
        if (targets.empty()) {
            return state;
        }
        bool adjacent = false;
        for (int t : targets) {
            adjacent = adjacent || targets.count(t + 1) > 0;
        }
        if (adjacent) {
            std::vector<bool> active(static_cast<std::size_t>(spec_.n_qubits), false);
            for (int t : targets) {
                active[static_cast<std::size_t>(t)] = true;
            }
            return apply_unitary(state, cached(window.biases, active, window.duration_ns));
        }
        QuantumState out = state;
        for (int t : targets) {
            auto [h, qubits] = target_block(spec_, t, window.biases[static_cast<std::size_t>(t)]);
            const UnitaryOperator u =
                propagator(HermitianOperator::from_matrix(std::move(h)), window.duration_ns);
            out = apply_local(out, u.matrix(), qubits);
        }
        return out;
    }

private:
    const UnitaryOperator& cached(const BiasProfile& biases, const std::vector<bool>& active,
                                  double duration_ns) {
        Key key{biases.biases_mhz, active, duration_ns};
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            const HermitianOperator h = active.empty()
                                            ? build_hamiltonian(spec_, biases)
                                            : build_active_hamiltonian(spec_, biases, active);
            it = cache_.emplace(std::move(key), propagator(h, duration_ns)).first;
        }
        return it->second;
    }

    using Key = std::tuple<std::vector<double>, std::vector<bool>, double>;
    ChainSpec spec_;
    SimulationModel model_;
    std::map<Key, UnitaryOperator> cache_;
};

void check_schedule_matches(const ChainSpec& spec, const PulseSchedule& schedule) {
    spec.validate();
    if (schedule.n_qubits != spec.n_qubits) {
        throw ScheduleError("schedule is for " + std::to_string(schedule.n_qubits) +
                            " qubits, chain has " + std::to_string(spec.n_qubits));
    }
    check_tiling(schedule);
    const std::vector<Violation> violations =
        validate_sacrificial(schedule, empty_occupancy(schedule.n_qubits));
    if (!violations.empty()) {
        throw ScheduleError("schedule replay: " + violations.front().message);
    }
}

void check_injects(const PulseSchedule& schedule, std::size_t n_inputs) {
    std::vector<int> seen(n_inputs, 0);
    auto scan = [&](const std::vector<BoundaryEvent>& events) {
        for (const BoundaryEvent& e : events) {
            if (e.kind != EventKind::inject) {
                continue;
            }
            if (!e.data_id || *e.data_id < 0 || static_cast<std::size_t>(*e.data_id) >= n_inputs) {
                throw ScheduleError("schedule injects data id outside the " +
                                    std::to_string(n_inputs) + " supplied inputs");
            }
            ++seen[static_cast<std::size_t>(*e.data_id)];
        }
    };
    for (const ScheduleWindow& w : schedule.windows) {
        scan(w.events);
    }
    scan(schedule.final_events);
    for (std::size_t j = 0; j < n_inputs; ++j) {
        if (seen[j] != 1) {
            throw ScheduleError("input " + std::to_string(j) + " is injected " +
                                std::to_string(seen[j]) + " times");
        }
    }
}

void check_unit(const Ket2& k) {
    if (std::abs(k.squaredNorm() - 1.0) > kNormTolerance) {
        throw PreconditionError("data state is not normalized");
    }
}

std::optional<int> basis_value(const Ket2& k) {
    if (std::abs(std::abs(k(0)) - 1.0) <= kBasisTolerance && std::abs(k(1)) <= kBasisTolerance) {
        return 0;
    }
    if (std::abs(std::abs(k(1)) - 1.0) <= kBasisTolerance && std::abs(k(0)) <= kBasisTolerance) {
        return 1;
    }
    return std::nullopt;
}

// Inject into a pure reduced-model state keeps it pure; the full model uses
// the exact trace-out-and-attach path on a density matrix.
QuantumState place(const QuantumState& state, int qubit, const Ket2& target,
                   SimulationModel model, std::vector<std::string>& warnings, const char* what) {
    InjectOptions opts;
    opts.strict = false;
    InjectResult r = model == SimulationModel::full
                         ? inject_state(state.to_mixed(), qubit, target, opts)
                         : inject_state(state, qubit, target, opts);
    if (r.pre_inject_purity < 1.0 - kEntangledWarnPurity) {
        warnings.push_back(std::string(what) + " on qubit " + std::to_string(qubit) +
                           ": qubit was entangled (purity " + std::to_string(r.pre_inject_purity) +
                           ")");
    }
    return std::move(r.state);
}

TrajectoryRow trajectory_row(const QuantumState& state, double time_ns) {
    TrajectoryRow row;
    row.time_ns = time_ns;
    for (int q = 0; q < state.n_qubits(); ++q) {
        row.p_one.push_back(sample_probability(state, q));
    }
    return row;
}

void check_design(const ChainSpec& spec, const GateDesign& design, PhaseMode mode) {
    spec.validate();
    if (spec.n_qubits != 3) {
        throw PreconditionError("gate experiments need a 3-qubit chain (got " +
                                std::to_string(spec.n_qubits) + ")");
    }
    const GateConditionReport cond = validate_gate_conditions(design, mode);
    if (!cond.ok) {
        throw InfeasibleDesign("design does not satisfy the CNOT frequency conditions");
    }
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    if (!close(spec.delta_mhz, design.delta_mhz) || !close(spec.xi_mhz, design.xi_mhz)) {
        throw PreconditionError("chain delta/xi do not match the gate design");
    }
}

// U of one zero-bias pulse on the middle qubit of a 3-chain.
Eigen::MatrixXcd middle_pulse_full(const ChainSpec& spec, double pulse_ns) {
    BiasProfile biases{{spec.eps_high_mhz, 0.0, spec.eps_high_mhz}};
    return propagator(build_hamiltonian(spec, biases), pulse_ns).matrix();
}

Eigen::Matrix2cd middle_pulse_reduced(const ChainSpec& spec, Bit left, Bit right, double pulse_ns) {
    const TwoLevelParams p = reduce_to_target(spec, 1, NeighborStates{left, right}, 0.0);
    return propagator(two_level_hamiltonian(p), pulse_ns).matrix();
}

std::uint64_t index3(Bit a, Bit b, Bit c) {
    return (static_cast<std::uint64_t>(a) << 2) | (static_cast<std::uint64_t>(b) << 1) |
           static_cast<std::uint64_t>(c);
}

}  // namespace

std::string_view to_string(SimulationModel model) {
    return model == SimulationModel::full ? "full" : "reduced";
}

SimulationModel simulation_model_from_string(std::string_view name) {
    if (name == "full") {
        return SimulationModel::full;
    }
    if (name == "reduced") {
        return SimulationModel::reduced;
    }
    throw PreconditionError("unknown simulation model '" + std::string(name) + "'");
}

FrameCorrection compute_frame_correction(const PulseSchedule& schedule, const ChainSpec& spec) {
    check_schedule_matches(spec, schedule);
    const ReplayTrace trace = replay_occupancy(schedule, empty_occupancy(schedule.n_qubits));
    FrameCorrection fc;
    const int n = spec.n_qubits;
    auto add_data_phase = [&](const SymbolSet& held, double theta, std::size_t w, int q) {
        const std::optional<int> id = held.single();
        if (!id || *id < 0) {
            throw ScheduleError("occupancy indeterminate: qubit " + std::to_string(q) +
                                " holds a parity of several inputs in window " + std::to_string(w));
        }
        if (fc.data_phase_rad.size() <= static_cast<std::size_t>(*id)) {
            fc.data_phase_rad.resize(static_cast<std::size_t>(*id) + 1, 0.0);
        }
        fc.data_phase_rad[static_cast<std::size_t>(*id)] += theta;
    };
    for (std::size_t w = 0; w < schedule.windows.size(); ++w) {
        const ScheduleWindow& win = schedule.windows[w];
        const Occupancy& occ = trace.before_window[w];
        const std::set<int> targets = window_targets(win);
        std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
        for (int q = 0; q < n; ++q) {
            if (targets.count(q)) {
                continue;
            }
            const SymbolSet& held = occ[static_cast<std::size_t>(q)];
            double energy = win.biases[static_cast<std::size_t>(q)];
            if (!held.empty()) {
                for (int nb : spec.neighbors(q)) {
                    if (targets.count(nb)) {
                        continue;
                    }
                    if (!occ[static_cast<std::size_t>(nb)].empty()) {
                        throw ScheduleError("occupancy indeterminate: idle data qubits " +
                                            std::to_string(q) + " and " + std::to_string(nb) +
                                            " are adjacent in window " + std::to_string(w));
                    }
                    energy += spec.xi_mhz;
                }
            }
            const double angle = phase_rad(energy, win.duration_ns);
            theta[static_cast<std::size_t>(q)] = angle;
            if (!held.empty()) {
                add_data_phase(held, angle, w, q);
            }
        }
        fc.z_phase_rad.push_back(std::move(theta));
    }
    return fc;
}

QuantumState apply_frame_correction(const QuantumState& state, std::span<const double> z_phase_rad) {
    if (z_phase_rad.size() != static_cast<std::size_t>(state.n_qubits())) {
        throw DimensionError("frame correction has the wrong number of qubits");
    }
    return apply_diagonal_phases(state, -basis_phase_sum(state.n_qubits(), z_phase_rad));
}

QuantumState run_window(const QuantumState& state, const ChainSpec& spec,
                        const ScheduleWindow& window, SimulationModel model) {
    if (state.n_qubits() != spec.n_qubits) {
        throw DimensionError("run_window: state does not match chain");
    }
    Executor exec(spec, model);
    return exec.step(state, window);
}

double cnot_distance(const Eigen::Matrix4cd& gate, const Eigen::Matrix4cd& ideal) {
    Eigen::Matrix4cd aligned = ideal;
    for (int k = 0; k < 2; ++k) {
        const Complex overlap = (ideal.block(2 * k, 2 * k, 2, 2).adjoint() * gate.block(2 * k, 2 * k, 2, 2)).trace();
        const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
        aligned.middleRows(2 * k, 2) *= phase;
    }
    return (gate - aligned).norm();
}

GateReport run_gate_experiment(const ChainSpec& spec, const GateDesign& design,
                               const GateExperimentOptions& options) {
    check_design(spec, design, options.mode);
    GateReport report;
    report.model = options.model;
    report.eps_high_mhz = spec.eps_high_mhz;
    report.gate.setZero();
    const Bit s = options.sacrificial;
    if (options.model == SimulationModel::full) {
        const Eigen::MatrixXcd u = middle_pulse_full(spec, design.pulse_ns);
        for (int out = 0; out < 4; ++out) {
            for (int in = 0; in < 4; ++in) {
                const std::uint64_t ro = index3(Bit(out >> 1), Bit(out & 1), s);
                const std::uint64_t ci = index3(Bit(in >> 1), Bit(in & 1), s);
                report.gate(out, in) = u(static_cast<Eigen::Index>(ro), static_cast<Eigen::Index>(ci));
            }
        }
    } else {
        for (int c = 0; c < 2; ++c) {
            report.gate.block(2 * c, 2 * c, 2, 2) =
                middle_pulse_reduced(spec, Bit(c), s, design.pulse_ns);
        }
    }
    const PhasedGate ideal = ideal_cnot();
    report.distance = cnot_distance(report.gate, Eigen::Matrix4cd(ideal.matrix));
    double worst = 0.0;
    for (int in = 0; in < 4; ++in) {
        const BasisImage image = basis_image(ideal, static_cast<std::uint64_t>(in));
        const double f = std::norm(report.gate(static_cast<Eigen::Index>(image.output), in));
        report.truth_table_fidelity[static_cast<std::size_t>(in)] = std::clamp(f, 0.0, 1.0);
        worst = std::max(worst, 1.0 - f);
    }
    report.worst_infidelity = std::max(worst, 0.0);
    return report;
}

CopyTable copy_truth_table(const ChainSpec& spec, const GateDesign& design, SimulationModel model) {
    check_design(spec, design, PhaseMode::any);
    CopyTable table;
    table.model = model;
    table.eps_high_mhz = spec.eps_high_mhz;
    const std::array<CopyRow, 4> ideal = copy_table_rows();
    Eigen::MatrixXcd full;
    if (model == SimulationModel::full) {
        full = middle_pulse_full(spec, design.pulse_ns);
    }
    for (std::size_t r = 0; r < ideal.size(); ++r) {
        const CopyRow& row = ideal[r];
        CopyTableRow& out = table.rows[r];
        out.input = row.input;
        out.expected = row.output;
        out.flipped = row.input[1] != row.output[1];
        Complex amp;
        if (model == SimulationModel::full) {
            amp = full(static_cast<Eigen::Index>(index3(row.output[0], row.output[1], row.output[2])),
                       static_cast<Eigen::Index>(index3(row.input[0], row.input[1], row.input[2])));
        } else {
            const Eigen::Matrix2cd u = middle_pulse_reduced(spec, row.input[0], row.input[2], design.pulse_ns);
            amp = u(static_cast<int>(row.output[1]), static_cast<int>(row.input[1]));
        }
        out.fidelity = std::clamp(std::norm(amp), 0.0, 1.0);
        out.phase_rad = std::arg(amp);
    }
    return table;
}

EpsSweep sweep_eps_high(const ChainSpec& spec, const GateDesign& design,
                        std::span<const double> eps_grid_mhz, SimulationModel model) {
    EpsSweep sweep;
    for (double eps : eps_grid_mhz) {
        if (!(eps > 0.0) || !std::isfinite(eps)) {
            throw PreconditionError("eps_high grid values must be positive");
        }
        ChainSpec s = spec;
        s.eps_high_mhz = eps;
        GateExperimentOptions opts;
        opts.model = model;
        const GateReport r = run_gate_experiment(s, design, opts);
        sweep.rows.push_back(SweepRow{eps, eps / spec.delta_mhz, r.worst_infidelity});
    }
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        if (sweep.rows[i].worst_infidelity > sweep.rows[i - 1].worst_infidelity + 1e-12) {
            sweep.monotone = false;
        }
    }
    std::vector<std::pair<double, double>> pts;
    for (const SweepRow& r : sweep.rows) {
        if (r.worst_infidelity > 0.0) {
            pts.emplace_back(std::log(r.eps_high_mhz), std::log(r.worst_infidelity));
        }
    }
    if (pts.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (auto [x, y] : pts) {
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(pts.size());
        my /= static_cast<double>(pts.size());
        double sxy = 0.0, sxx = 0.0;
        for (auto [x, y] : pts) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
        if (sxx > 0.0) {
            sweep.log_log_slope = sxy / sxx;
        }
    }
    return sweep;
}

StateComparison compare_qubit(const QuantumState& state, int qubit, const Ket2& expected) {
    const ReducedState red = reduced_state(state, qubit);
    StateComparison c;
    c.fidelity = std::clamp(std::real(expected.dot(red.rho * expected)), 0.0, 1.0);
    c.purity = red.purity;
    const Complex want = expected(0) * std::conj(expected(1));
    const Complex got = red.rho(0, 1);
    if (std::abs(want) > kPhaseFloor && std::abs(got) > kPhaseFloor) {
        c.phase_defined = true;
        c.phase_rad = wrap_phase(std::arg(want) - std::arg(got));
    }
    return c;
}

std::vector<Ket2> bits_to_kets(std::span<const int> bits) {
    std::vector<Ket2> kets;
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw PreconditionError("bits must be 0 or 1");
        }
        kets.push_back(b == 0 ? ket(1.0, 0.0) : ket(0.0, 1.0));
    }
    return kets;
}

TransferReport run_quantum_channel(const ChainSpec& spec, const PulseSchedule& schedule,
                                   std::span<const Ket2> data_states, const RunOptions& options) {
    check_schedule_matches(spec, schedule);
    check_injects(schedule, data_states.size());
    for (const Ket2& k : data_states) {
        check_unit(k);
    }
    const bool full = options.model == SimulationModel::full;
    const int n = spec.n_qubits;
    TransferReport report;
    report.model = options.model;
    report.makespan_ns = schedule.makespan_ns();
    report.pulse_count = schedule.pulse_count();
    report.states.resize(data_states.size());
    for (std::size_t j = 0; j < data_states.size(); ++j) {
        report.states[j].data_id = static_cast<int>(j);
        report.states[j].input = data_states[j];
        report.states[j].arrival_window = -1;
    }

    FrameCorrection fc;
    if (full) {
        fc = compute_frame_correction(schedule, spec);
        fc.data_phase_rad.resize(data_states.size(), 0.0);
    }
    Executor exec(spec, options.model);
    QuantumState state = QuantumState::basis(n, 0);

    auto boundary = [&](const std::vector<BoundaryEvent>& events, int window) {
        for (const BoundaryEvent& e : events) {
            if (e.kind == EventKind::inject) {
                state = place(state, e.qubit, data_states[static_cast<std::size_t>(*e.data_id)],
                              options.model, report.warnings, "inject");
                continue;
            }
            if (e.data_id) {
                if (*e.data_id < 0 || static_cast<std::size_t>(*e.data_id) >= data_states.size()) {
                    throw ScheduleError("read expects an unknown data id");
                }
                const auto j = static_cast<std::size_t>(*e.data_id);
                StateTransfer& st = report.states[j];
                const StateComparison r = compare_qubit(state, e.qubit, st.input);
                StateComparison c = r;
                if (full) {
                    std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
                    theta[static_cast<std::size_t>(e.qubit)] = fc.data_phase_rad[j];
                    c = compare_qubit(apply_frame_correction(state, theta), e.qubit, st.input);
                }
                st.arrival_window = window;
                st.fidelity_raw = r.fidelity;
                st.fidelity_corrected = c.fidelity;
                st.phase_defined = r.phase_defined && c.phase_defined;
                st.phase_raw = r.phase_rad;
                st.phase_corrected = c.phase_rad;
                st.purity = r.purity;
            }
            state = place(state, e.qubit, ket(1.0, 0.0), options.model, report.warnings, "reset");
        }
    };

    for (std::size_t w = 0; w < schedule.windows.size(); ++w) {
        const ScheduleWindow& win = schedule.windows[w];
        boundary(win.events, static_cast<int>(w));
        state = exec.step(state, win);
        if (options.record_trajectory) {
            report.trajectory.push_back(trajectory_row(state, win.start_ns + win.duration_ns));
        }
    }
    boundary(schedule.final_events, static_cast<int>(schedule.windows.size()));
    for (const StateTransfer& st : report.states) {
        if (st.arrival_window < 0) {
            report.warnings.push_back("input " + std::to_string(st.data_id) + " was never read");
        }
    }
    report.final_trace = state.trace();
    return report;
}

ClassicalReport run_classical_channel(const ChainSpec& spec, const PulseSchedule& schedule,
                                      std::span<const Ket2> inputs, const RunOptions& options) {
    check_schedule_matches(spec, schedule);
    check_injects(schedule, inputs.size());
    ClassicalReport report;
    report.model = options.model;
    report.makespan_ns = schedule.makespan_ns();
    report.pulse_count = schedule.pulse_count();
    for (const Ket2& k : inputs) {
        const std::optional<int> b = basis_value(k);
        if (!b) {
            throw PreconditionError("classical channel inputs must be basis states");
        }
        report.bits_in.push_back(*b);
    }
    report.bits_out.assign(inputs.size(), -1);
    report.bit_fidelity.assign(inputs.size(), 0.0);
    report.read_window.assign(inputs.size(), -1);

    Executor exec(spec, options.model);
    QuantumState state = QuantumState::basis(spec.n_qubits, 0);
    auto boundary = [&](const std::vector<BoundaryEvent>& events, int window) {
        for (const BoundaryEvent& e : events) {
            if (e.kind == EventKind::inject) {
                state = place(state, e.qubit, inputs[static_cast<std::size_t>(*e.data_id)],
                              options.model, report.warnings, "inject");
                continue;
            }
            if (e.data_id) {
                const auto j = static_cast<std::size_t>(*e.data_id);
                if (j >= inputs.size()) {
                    throw ScheduleError("read expects an unknown data id");
                }
                const double p1 = sample_probability(state, e.qubit);
                report.bits_out[j] = p1 > 0.5 ? 1 : 0;
                report.bit_fidelity[j] = std::clamp(report.bits_in[j] == 1 ? p1 : 1.0 - p1, 0.0, 1.0);
                report.read_window[j] = window;
            }
            state = place(state, e.qubit, ket(1.0, 0.0), options.model, report.warnings, "reset");
        }
    };
    for (std::size_t w = 0; w < schedule.windows.size(); ++w) {
        const ScheduleWindow& win = schedule.windows[w];
        boundary(win.events, static_cast<int>(w));
        state = exec.step(state, win);
        if (options.record_trajectory) {
            report.trajectory.push_back(trajectory_row(state, win.start_ns + win.duration_ns));
        }
    }
    boundary(schedule.final_events, static_cast<int>(schedule.windows.size()));
    if (!report.read_window.empty() && report.read_window.front() >= 0) {
        report.latency_sequences = report.read_window.front() / 2;
    }
    for (std::size_t j = 0; j < report.read_window.size(); ++j) {
        if (report.read_window[j] < 0) {
            report.warnings.push_back("bit " + std::to_string(j) + " was never read");
        }
    }
    report.final_trace = state.trace();
    return report;
}

}  // namespace qswap
