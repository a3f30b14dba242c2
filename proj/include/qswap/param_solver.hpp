// param_solver.hpp: closed-form oscillation analytics and CNOT/COPY parameter design
//
// A target qubit H = delta*X + sigma*Z started in |0> has
//   P(|1>, t) = X - Y cos(2*pi*f*t),  X = Y = delta^2 / (2(delta^2 + sigma^2)),
//   f = 2 sqrt(delta^2 + sigma^2).
// A single zero-bias pulse of width T acts as CNOT (modulo phase) when
//   2 sqrt(delta^2 + 4 xi^2) = M / T   and   2 delta = (2N + 1) / (2T).

#pragma once

namespace qswap {

inline constexpr double kIntegralityTolerance = 1e-9;

struct OscillationDescriptor {
    double offset = 0.0;     // X
    double amplitude = 0.0;  // Y
    double frequency_mhz = 0.0;

    double probability(double t_ns) const;
};

OscillationDescriptor oscillation_descriptor(double delta_mhz, double effective_bias_mhz);

// Phase-exact designs (M odd, N even) make the control-|0> branch pick up
// exactly -1 and the control-|1> branch exactly -i.
enum class PhaseMode { exact, any };

struct GateDesign {
    double pulse_ns = 0.0;  // T
    int m = 1;              // full cycles at f1
    int n = 0;              // (2N+1)/2 half cycles at f2
    double delta_mhz = 0.0;
    double xi_mhz = 0.0;

    bool operator==(const GateDesign&) const = default;
};

GateDesign solve_parameters(double pulse_ns, int m = 1, int n = 0,
                            PhaseMode mode = PhaseMode::exact);
GateDesign solve_for_timestep(double delta_mhz, int m = 1, int n = 0,
                              PhaseMode mode = PhaseMode::exact);

// Frequencies under a COPY pulse with bias eps on the target:
// both controls |0>, opposite controls, both controls |1>.
struct CopyFrequencies {
    double same_zero_mhz = 0.0;
    double opposite_mhz = 0.0;
    double same_one_mhz = 0.0;
};

CopyFrequencies copy_frequencies(double delta_mhz, double xi_mhz, double bias_mhz);

struct GateConditionReport {
    double f1_mhz = 0.0;
    double f2_mhz = 0.0;
    double f1_times_t = 0.0;  // must be an integer M
    double f2_times_t = 0.0;  // must be (2N+1)/2
    int m_estimate = 0;
    int n_estimate = 0;
    bool m_odd = false;
    bool n_even = false;
    bool truth_table_ok = false;
    bool ok = false;  // truth_table_ok, plus parity when phase-exact was requested
};

// Checks the frequencies implied by (delta, xi, T); the stored M and N are not trusted.
GateConditionReport validate_gate_conditions(const GateDesign& design,
                                             PhaseMode mode = PhaseMode::exact);

// Smallest eps of the form 1000*k/T MHz (integer k, so eps*T*1e-3 is whole)
// that is at least ratio * delta.
double commensurate_eps_high(const GateDesign& design, double ratio = 1000.0);

}  // namespace qswap
