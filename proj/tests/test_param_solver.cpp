#include "qswap/errors.hpp"
#include "qswap/param_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace qswap;

TEST(Solve, TenNanosecondPoint) {
    const GateDesign d = solve_parameters(10.0);
    EXPECT_NEAR(d.delta_mhz, 25.0, 1e-12);
    EXPECT_NEAR(d.xi_mhz, 21.650635, 1e-6);
    EXPECT_NEAR(d.xi_mhz, 12.5 * std::sqrt(3.0), 1e-12);
}

TEST(Solve, ScalesInverselyWithPulseWidth) {
    const GateDesign a = solve_parameters(10.0);
    const GateDesign b = solve_parameters(100.0);
    EXPECT_NEAR(b.delta_mhz / a.delta_mhz, 0.1, 1e-12);
    EXPECT_NEAR(b.xi_mhz / a.xi_mhz, 0.1, 1e-12);
}

TEST(Solve, FromDelta) {
    const GateDesign d = solve_for_timestep(2.5);
    EXPECT_NEAR(d.pulse_ns, 100.0, 1e-12);
    EXPECT_NEAR(d.xi_mhz, 2.1650635, 1e-6);
}

TEST(Solve, InfeasibleAndNonExactDesigns) {
    EXPECT_THROW(solve_parameters(10.0, 1, 1), InfeasibleDesign);  // 2M <= 2N+1
    EXPECT_THROW(solve_parameters(10.0, 2, 0), InfeasibleDesign);  // M even
    EXPECT_THROW(solve_parameters(10.0, 3, 1), InfeasibleDesign);  // N odd
    EXPECT_NO_THROW(solve_parameters(10.0, 2, 0, PhaseMode::any));
    EXPECT_THROW(solve_parameters(0.0), InfeasibleDesign);
    EXPECT_THROW(solve_parameters(-1.0), InfeasibleDesign);
    EXPECT_THROW(solve_for_timestep(0.0), InfeasibleDesign);
    EXPECT_THROW(solve_parameters(10.0, 0, 0), InfeasibleDesign);
}

TEST(Solve, RoundTripProperty) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> t(0.5, 500.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 * static_cast<int>(rng() % 3);
        int m = 2 * static_cast<int>(rng() % 4) + 1;
        while (2 * m <= 2 * n + 1) {
            m += 2;
        }
        const GateDesign a = solve_parameters(t(rng), m, n);
        const GateDesign b = solve_for_timestep(a.delta_mhz, m, n);
        EXPECT_NEAR(b.pulse_ns / a.pulse_ns, 1.0, 1e-12);
        EXPECT_NEAR(b.xi_mhz / a.xi_mhz, 1.0, 1e-12);
        const GateConditionReport r = validate_gate_conditions(a);
        EXPECT_TRUE(r.ok);
        EXPECT_EQ(r.m_estimate, m);
        EXPECT_EQ(r.n_estimate, n);
    }
}

TEST(Conditions, FrequenciesAtTenNanoseconds) {
    const GateConditionReport r = validate_gate_conditions(solve_parameters(10.0));
    EXPECT_NEAR(r.f1_mhz, 100.0, 1e-9);
    EXPECT_NEAR(r.f2_mhz, 50.0, 1e-9);
    EXPECT_NEAR(r.f1_times_t, 1.0, 1e-9);
    EXPECT_NEAR(r.f2_times_t, 0.5, 1e-9);
    EXPECT_TRUE(r.m_odd);
    EXPECT_TRUE(r.n_even);
    EXPECT_TRUE(r.ok);
}

TEST(Conditions, DetectPerturbedParameters) {
    GateDesign d = solve_parameters(10.0);
    d.xi_mhz *= 1.001;
    EXPECT_FALSE(validate_gate_conditions(d).truth_table_ok);
    d = solve_parameters(10.0);
    d.pulse_ns = 10.5;
    EXPECT_FALSE(validate_gate_conditions(d).ok);
}

TEST(Conditions, ParityOnlyMattersInExactMode) {
    const GateDesign d = solve_parameters(10.0, 2, 0, PhaseMode::any);
    EXPECT_TRUE(validate_gate_conditions(d, PhaseMode::any).ok);
    EXPECT_FALSE(validate_gate_conditions(d, PhaseMode::exact).ok);
    EXPECT_TRUE(validate_gate_conditions(d, PhaseMode::exact).truth_table_ok);
}

TEST(Oscillation, DescriptorAtParameterPoint) {
    const GateDesign g = solve_parameters(10.0);
    const auto both_zero = oscillation_descriptor(g.delta_mhz, 2.0 * g.xi_mhz);
    EXPECT_NEAR(both_zero.frequency_mhz, 100.0, 1e-9);
    EXPECT_NEAR(both_zero.offset, 0.125, 1e-12);  // 625 / (2 * 2500)
    const auto flip = oscillation_descriptor(g.delta_mhz, 0.0);
    EXPECT_NEAR(flip.frequency_mhz, 50.0, 1e-12);
    EXPECT_NEAR(flip.offset, 0.5, 1e-15);
    EXPECT_NEAR(flip.probability(10.0), 1.0, 1e-12);
    EXPECT_NEAR(both_zero.probability(10.0), 0.0, 1e-12);
    EXPECT_THROW(oscillation_descriptor(0.0, 1.0), PreconditionError);
}

TEST(Copy, FrequenciesOfTheThreeBranches) {
    const GateDesign g = solve_parameters(10.0);
    const CopyFrequencies f = copy_frequencies(g.delta_mhz, g.xi_mhz, 0.0);
    EXPECT_NEAR(f.same_zero_mhz, 100.0, 1e-9);
    EXPECT_NEAR(f.same_one_mhz, 100.0, 1e-9);
    EXPECT_NEAR(f.opposite_mhz, 50.0, 1e-9);
}

TEST(EpsHigh, CommensurateValue) {
    const GateDesign g = solve_parameters(10.0);
    EXPECT_DOUBLE_EQ(commensurate_eps_high(g), 25000.0);
    EXPECT_DOUBLE_EQ(commensurate_eps_high(g, 100.0), 2500.0);
    const GateDesign odd = solve_parameters(7.0);
    const double eps = commensurate_eps_high(odd);
    EXPECT_GE(eps, 1000.0 * odd.delta_mhz);
    const double k = eps * odd.pulse_ns * 1e-3;
    EXPECT_NEAR(k, std::round(k), 1e-9);
    EXPECT_LT(eps - 1000.0 / odd.pulse_ns, 1000.0 * odd.delta_mhz);
}
