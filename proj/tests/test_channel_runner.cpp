#include "qswap/channel_runner.hpp"
#include "qswap/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qswap;

namespace {

constexpr double kPi = std::numbers::pi;

const GateDesign& design() {
    static const GateDesign d = solve_parameters(10.0);
    return d;
}

ChainSpec chain(int n, double ratio = 100.0) {
    return ChainSpec::make(n, design().delta_mhz, design().xi_mhz, ratio * design().delta_mhz);
}

ChainSpec commensurate_chain(int n, double ratio) {
    return ChainSpec::make(n, design().delta_mhz, design().xi_mhz, commensurate_eps_high(design(), ratio));
}

std::vector<Ket2> cardinal_states() {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    return {ket(1.0, 0.0), ket(0.0, 1.0), ket(r, r), ket(r, -r), ket(r, r * i), ket(r, -r * i)};
}

Ket2 random_ket(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Ket2 k;
    k << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
    return k / k.norm();
}

}  // namespace

TEST(ModelNames, RoundTrip) {
    for (SimulationModel m : {SimulationModel::reduced, SimulationModel::full}) {
        EXPECT_EQ(simulation_model_from_string(to_string(m)), m);
    }
    EXPECT_THROW(simulation_model_from_string("exact"), PreconditionError);
}

TEST(Gate, ReducedModelIsTheIdealCnot) {
    const GateReport r = run_gate_experiment(chain(3), design());
    EXPECT_LT(r.distance, 1e-9);
    EXPECT_LT(r.worst_infidelity, 1e-12);
    const Eigen::Matrix4cd ideal = ideal_cnot().matrix;
    EXPECT_LT((r.gate - ideal).norm(), 1e-9);
}

TEST(Gate, CnotDistanceIgnoresControlPhases) {
    const Eigen::Matrix4cd ideal = ideal_cnot().matrix;
    Eigen::Matrix4cd g = ideal;
    g.topRows(2) *= std::polar(1.0, 0.7);
    g.bottomRows(2) *= std::polar(1.0, -1.9);
    EXPECT_LT(cnot_distance(g, ideal), 1e-12);
    Eigen::Matrix4cd swapped = ideal;
    swapped.row(2).swap(swapped.row(3));
    EXPECT_GT(cnot_distance(swapped, ideal), 1.0);
}

TEST(Gate, SacrificialOneBreaksTheGate) {
    GateExperimentOptions o;
    o.sacrificial = Bit::one;
    const GateReport r = run_gate_experiment(chain(3), design(), o);
    EXPECT_GT(r.distance, 0.1);
}

TEST(Gate, FullModelInfidelityFallsAsEpsSquared) {
    GateExperimentOptions o;
    o.model = SimulationModel::full;
    for (double ratio : {10.0, 100.0, 1000.0}) {
        const GateReport r = run_gate_experiment(chain(3, ratio), design(), o);
        EXPECT_LE(r.worst_infidelity, 1.25 / (ratio * ratio)) << ratio;
        EXPECT_GT(r.worst_infidelity, 0.0);
    }
}

TEST(Gate, UnitsScaleTogether) {
    GateExperimentOptions o;
    o.model = SimulationModel::full;
    const GateDesign slow = solve_parameters(100.0);
    const ChainSpec slow_chain = ChainSpec::make(3, slow.delta_mhz, slow.xi_mhz, 50.0 * slow.delta_mhz);
    const ChainSpec fast_chain = chain(3, 50.0);
    const GateReport a = run_gate_experiment(slow_chain, slow, o);
    const GateReport b = run_gate_experiment(fast_chain, design(), o);
    EXPECT_LT((a.gate - b.gate).norm(), 1e-9);
}

TEST(Gate, RejectsMismatchedChains) {
    EXPECT_THROW(run_gate_experiment(chain(4), design()), PreconditionError);
    const ChainSpec off = ChainSpec::make(3, design().delta_mhz, design().xi_mhz * 1.01);
    EXPECT_THROW(run_gate_experiment(off, design()), PreconditionError);
    GateDesign odd = solve_parameters(10.0, 2, 0, PhaseMode::any);
    const ChainSpec s = ChainSpec::make(3, odd.delta_mhz, odd.xi_mhz);
    EXPECT_THROW(run_gate_experiment(s, odd), InfeasibleDesign);
}

TEST(CopyTable, ReducedRowsMatchTruthTable) {
    const CopyTable t = copy_truth_table(chain(3), design());
    const auto ideal = copy_table_rows();
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(t.rows[i].input, ideal[i].input);
        EXPECT_EQ(t.rows[i].expected, ideal[i].output);
        EXPECT_NEAR(t.rows[i].fidelity, 1.0, 1e-12);
        EXPECT_EQ(t.rows[i].flipped, t.rows[i].input[0] != t.rows[i].input[2]);
    }
}

TEST(CopyTable, FullModelRows) {
    const CopyTable t = copy_truth_table(commensurate_chain(3, 1000.0), design(), SimulationModel::full);
    for (const CopyTableRow& row : t.rows) {
        EXPECT_GE(row.fidelity, 0.999);
    }
}

TEST(Sweep, SlopeNearMinusTwo) {
    const std::vector<double> grid{250.0, 2500.0, 25000.0, 250000.0};
    const EpsSweep s = sweep_eps_high(chain(3), design(), grid);
    ASSERT_EQ(s.rows.size(), 4u);
    ASSERT_TRUE(s.log_log_slope.has_value());
    EXPECT_NEAR(*s.log_log_slope, -2.0, 0.1);
    EXPECT_TRUE(s.monotone);
    EXPECT_DOUBLE_EQ(s.rows[2].eps_over_delta, 1000.0);
}

TEST(Sweep, EdgeCases) {
    const std::vector<double> one{2500.0};
    const EpsSweep s = sweep_eps_high(chain(3), design(), one);
    EXPECT_EQ(s.rows.size(), 1u);
    EXPECT_FALSE(s.log_log_slope.has_value());
    const std::vector<double> equal{design().delta_mhz};
    const EpsSweep e = sweep_eps_high(chain(3), design(), equal);
    EXPECT_TRUE(std::isfinite(e.rows[0].worst_infidelity));
    const std::vector<double> bad{0.0};
    EXPECT_THROW(sweep_eps_high(chain(3), design(), bad), PreconditionError);
}

TEST(FrameCorrection, RotationIsLocalAndInvertible) {
    std::mt19937_64 rng(3);
    const std::vector<Ket2> kets{random_ket(rng), random_ket(rng), random_ket(rng)};
    const QuantumState s = QuantumState::product(kets);
    const std::vector<double> theta{0.3, -1.1, 2.0};
    const std::vector<double> minus{-0.3, 1.1, -2.0};
    const QuantumState back = apply_frame_correction(apply_frame_correction(s, theta), minus);
    EXPECT_LT((back.amplitudes() - s.amplitudes()).norm(), 1e-12);
    const QuantumState rotated = apply_frame_correction(s, theta);
    for (int q = 0; q < 3; ++q) {
        EXPECT_NEAR(sample_probability(rotated, q), sample_probability(s, q), 1e-12);
    }
    const std::vector<double> short_theta{0.1};
    EXPECT_THROW(apply_frame_correction(s, short_theta), DimensionError);
}

TEST(FrameCorrection, TargetsGetNoPhase) {
    const ChainSpec s = chain(5);
    const ChannelPlan plan = quantum_channel_schedule(s, 2, design().pulse_ns);
    const FrameCorrection fc = compute_frame_correction(plan.schedule, s);
    ASSERT_EQ(fc.z_phase_rad.size(), plan.schedule.windows.size());
    ASSERT_EQ(fc.data_phase_rad.size(), 2u);
    for (std::size_t w = 0; w < plan.schedule.windows.size(); ++w) {
        for (const PulseEvent& p : plan.schedule.windows[w].pulses) {
            EXPECT_EQ(fc.z_phase_rad[w][static_cast<std::size_t>(p.qubit)], 0.0);
        }
    }
}

TEST(FrameCorrection, AdjacentIdleDataIsIndeterminate) {
    const ChainSpec s = chain(5);
    std::vector<std::vector<BoundaryEvent>> events{{{EventKind::inject, 0, 0}, {EventKind::inject, 1, 1}}};
    const PulseSchedule sched = assemble_schedule(s, design().pulse_ns, 1, {}, events);
    EXPECT_THROW(compute_frame_correction(sched, s), ScheduleError);
}

TEST(QuantumChannel, ReducedModelIsExactForOddChains) {
    std::mt19937_64 rng(11);
    for (int n = 5; n <= 13; n += 2) {
        const ChainSpec s = chain(n);
        std::vector<Ket2> states{random_ket(rng), random_ket(rng)};
        const ChannelPlan plan = quantum_channel_schedule(s, 2, design().pulse_ns);
        const TransferReport r = run_quantum_channel(s, plan.schedule, states);
        ASSERT_EQ(r.states.size(), 2u);
        for (const StateTransfer& t : r.states) {
            EXPECT_NEAR(t.fidelity_raw, 1.0, 1e-9) << "n=" << n;
            ASSERT_TRUE(t.phase_defined);
            EXPECT_NEAR(t.phase_raw, 0.0, 1e-9) << "n=" << n;
        }
        EXPECT_LT(r.states[0].arrival_window, r.states[1].arrival_window);
        EXPECT_NEAR(r.final_trace, 1.0, 1e-12);
        EXPECT_TRUE(r.warnings.empty());
    }
}

TEST(QuantumChannel, EvenChainsFlipTheRelativePhase) {
    QuantumScheduleOptions o;
    o.allow_even_length = true;
    const double r2 = 1.0 / std::sqrt(2.0);
    const std::vector<Ket2> plus{ket(r2, r2)};
    for (int n : {4, 6}) {
        const ChainSpec s = chain(n);
        const ChannelPlan plan = quantum_channel_schedule(s, 1, design().pulse_ns, o);
        const TransferReport r = run_quantum_channel(s, plan.schedule, plus);
        ASSERT_TRUE(r.states[0].phase_defined);
        EXPECT_NEAR(std::abs(r.states[0].phase_raw), kPi, 1e-9) << n;
    }
}

TEST(QuantumChannel, FullModelDeliversCardinalStates) {
    const ChainSpec s = commensurate_chain(5, 1000.0);
    const ChannelPlan plan = quantum_channel_schedule(s, 1, design().pulse_ns);
    RunOptions o;
    o.model = SimulationModel::full;
    for (const Ket2& k : cardinal_states()) {
        const std::vector<Ket2> one{k};
        const TransferReport r = run_quantum_channel(s, plan.schedule, one, o);
        const StateTransfer& t = r.states[0];
        EXPECT_GE(t.fidelity_corrected, 0.999);
        EXPECT_GE(t.fidelity_corrected, t.fidelity_raw - 1e-12);
        EXPECT_NEAR(r.final_trace, 1.0, 1e-9);
        if (t.phase_defined) {
            EXPECT_LT(std::abs(t.phase_corrected), 0.05);
        }
    }
}

TEST(QuantumChannel, FullModelFidelityImprovesWithEps) {
    RunOptions o;
    o.model = SimulationModel::full;
    const double r2 = 1.0 / std::sqrt(2.0);
    const std::vector<Ket2> plus{ket(r2, r2)};
    std::vector<double> infid;
    for (double ratio : {1000.0, 2000.0, 4000.0, 8000.0}) {
        const ChainSpec s = commensurate_chain(5, ratio);
        const ChannelPlan plan = quantum_channel_schedule(s, 1, design().pulse_ns);
        const TransferReport r = run_quantum_channel(s, plan.schedule, plus, o);
        infid.push_back(1.0 - r.states[0].fidelity_corrected);
    }
    EXPECT_LT(infid.back(), infid.front());
    for (double x : infid) {
        EXPECT_LT(x, 1e-3);
    }
}

TEST(QuantumChannel, TrajectoryAndMismatchChecks) {
    const ChainSpec s = chain(5);
    const ChannelPlan plan = quantum_channel_schedule(s, 1, design().pulse_ns);
    const std::vector<Ket2> one{ket(0.0, 1.0)};
    RunOptions o;
    o.record_trajectory = true;
    const TransferReport r = run_quantum_channel(s, plan.schedule, one, o);
    EXPECT_EQ(r.trajectory.size(), plan.schedule.windows.size());
    EXPECT_DOUBLE_EQ(r.makespan_ns, plan.schedule.makespan_ns());
    EXPECT_THROW(run_quantum_channel(chain(7), plan.schedule, one), ScheduleError);
    const std::vector<Ket2> two{ket(0.0, 1.0), ket(1.0, 0.0)};
    EXPECT_THROW(run_quantum_channel(s, plan.schedule, two), ScheduleError);
    const std::vector<Ket2> unnormalized{ket(1.0, 1.0)};
    EXPECT_THROW(run_quantum_channel(s, plan.schedule, unnormalized), PreconditionError);
}

TEST(ClassicalChannel, EchoesEveryPattern) {
    const ChainSpec s = chain(6);
    const ChannelPlan plan = classical_channel_schedule(s, 3, design().pulse_ns);
    for (int pattern = 0; pattern < 8; ++pattern) {
        const std::vector<int> bits{(pattern >> 2) & 1, (pattern >> 1) & 1, pattern & 1};
        const auto kets = bits_to_kets(bits);
        const ClassicalReport r = run_classical_channel(s, plan.schedule, kets);
        EXPECT_EQ(r.bits_out, bits);
        for (double f : r.bit_fidelity) {
            EXPECT_NEAR(f, 1.0, 1e-9);
        }
        EXPECT_EQ(r.latency_sequences, 3);
    }
}

TEST(ClassicalChannel, LatencyIsHalfTheLength) {
    for (int n : {4, 6, 8}) {
        const ChainSpec s = chain(n);
        const ChannelPlan plan = classical_channel_schedule(s, 2, design().pulse_ns);
        const std::vector<int> bits{1, 1};
        const auto kets = bits_to_kets(bits);
        const ClassicalReport r = run_classical_channel(s, plan.schedule, kets);
        EXPECT_EQ(r.latency_sequences, n / 2);
        EXPECT_EQ(r.bits_out, bits);
    }
}

TEST(ClassicalChannel, FullModel) {
    const ChainSpec s = commensurate_chain(6, 1000.0);
    const ChannelPlan plan = classical_channel_schedule(s, 3, design().pulse_ns);
    const std::vector<int> bits{1, 0, 1};
    const auto kets = bits_to_kets(bits);
    RunOptions o;
    o.model = SimulationModel::full;
    const ClassicalReport r = run_classical_channel(s, plan.schedule, kets, o);
    EXPECT_EQ(r.bits_out, bits);
    for (double f : r.bit_fidelity) {
        EXPECT_GE(f, 0.999);
    }
    EXPECT_NEAR(r.final_trace, 1.0, 1e-8);
}

TEST(ClassicalChannel, RejectsSuperpositions) {
    const ChainSpec s = chain(4);
    const ChannelPlan plan = classical_channel_schedule(s, 1, design().pulse_ns);
    const double r2 = 1.0 / std::sqrt(2.0);
    const std::vector<Ket2> plus{ket(r2, r2)};
    EXPECT_THROW(run_classical_channel(s, plan.schedule, plus), PreconditionError);
    const std::vector<int> two{2};
    EXPECT_THROW(bits_to_kets(two), PreconditionError);
}

TEST(Compare, PhaseAndFidelity) {
    const double r2 = 1.0 / std::sqrt(2.0);
    const std::vector<Ket2> kets{ket(r2, Complex(0.0, r2))};
    const QuantumState s = QuantumState::product(kets);
    const StateComparison c = compare_qubit(s, 0, ket(r2, r2));
    EXPECT_NEAR(c.fidelity, 0.5, 1e-12);
    ASSERT_TRUE(c.phase_defined);
    EXPECT_NEAR(c.phase_rad, kPi / 2, 1e-12);  // extra phase carried by |1>
    const StateComparison z = compare_qubit(s, 0, ket(1.0, 0.0));
    EXPECT_FALSE(z.phase_defined);
}

TEST(FrameCorrection, AllIdleScheduleAccumulatesBiasPhase) {
    const ChainSpec s = chain(4, 37.3);
    const PulseSchedule sched = assemble_schedule(s, design().pulse_ns, 3, {});
    const FrameCorrection fc = compute_frame_correction(sched, s);
    double total = 0.0;
    for (const auto& w : fc.z_phase_rad) {
        total += w[2];
    }
    const double expected = 2.0 * kPi * s.eps_high_mhz * 3.0 * design().pulse_ns * 1e-3;
    EXPECT_NEAR(std::remainder(total - expected, 2.0 * kPi), 0.0, 1e-9);
}

TEST(FrameCorrection, CommensurateEpsGivesWholeTurns) {
    const ChainSpec s = commensurate_chain(5, 1000.0);
    const PulseSchedule sched = assemble_schedule(s, design().pulse_ns, 2, {});
    const FrameCorrection fc = compute_frame_correction(sched, s);
    for (const auto& w : fc.z_phase_rad) {
        for (double theta : w) {
            EXPECT_NEAR(std::remainder(theta, 2.0 * kPi), 0.0, 1e-9);
        }
    }
}
