#include "qswap/param_solver.hpp"

#include "qswap/errors.hpp"
#include "qswap/units.hpp"

#include <cmath>
#include <string>

namespace qswap {

namespace {

void check_mn(int m, int n, PhaseMode mode) {
    if (m < 1 || n < 0) {
        throw InfeasibleDesign("need M >= 1 and N >= 0");
    }
    if (2 * m <= 2 * n + 1) {
        throw InfeasibleDesign("infeasible: 2M = " + std::to_string(2 * m) +
                               " must exceed 2N+1 = " + std::to_string(2 * n + 1) +
                               " (coupling would be imaginary)");
    }
    if (mode == PhaseMode::exact && (m % 2 == 0 || n % 2 != 0)) {
        throw InfeasibleDesign("not phase-exact: need M odd and N even (got M=" +
                               std::to_string(m) + ", N=" + std::to_string(n) + ")");
    }
}

// xi * T in MHz*ns for given (M, N).
double xi_times_t(int m, int n) {
    const double k = 2.0 * n + 1.0;
    return std::sqrt(4.0 * m * m - k * k) / 8.0 / kMhzNs;
}

double delta_times_t(int n) {
    return (2.0 * n + 1.0) / 4.0 / kMhzNs;
}

}  // namespace

double OscillationDescriptor::probability(double t_ns) const {
    return offset - amplitude * std::cos(phase_rad(frequency_mhz, t_ns));
}

OscillationDescriptor oscillation_descriptor(double delta_mhz, double effective_bias_mhz) {
    if (!(delta_mhz > 0.0)) {
        throw PreconditionError("oscillation_descriptor: delta must be > 0");
    }
    const double d2 = delta_mhz * delta_mhz;
    const double s2 = effective_bias_mhz * effective_bias_mhz;
    const double denom = 2.0 * (d2 + s2);
    return OscillationDescriptor{0.5 - s2 / denom, d2 / denom, 2.0 * std::sqrt(d2 + s2)};
}

GateDesign solve_parameters(double pulse_ns, int m, int n, PhaseMode mode) {
    if (!(pulse_ns > 0.0) || !std::isfinite(pulse_ns)) {
        throw InfeasibleDesign("pulse width T must be > 0");
    }
    check_mn(m, n, mode);
    return GateDesign{pulse_ns, m, n, delta_times_t(n) / pulse_ns, xi_times_t(m, n) / pulse_ns};
}

GateDesign solve_for_timestep(double delta_mhz, int m, int n, PhaseMode mode) {
    if (!(delta_mhz > 0.0) || !std::isfinite(delta_mhz)) {
        throw InfeasibleDesign("tunneling delta must be > 0");
    }
    check_mn(m, n, mode);
    const double t = delta_times_t(n) / delta_mhz;
    return GateDesign{t, m, n, delta_mhz, xi_times_t(m, n) / t};
}

CopyFrequencies copy_frequencies(double delta_mhz, double xi_mhz, double bias_mhz) {
    if (!(delta_mhz > 0.0)) {
        throw PreconditionError("copy_frequencies: delta must be > 0");
    }
    auto f = [&](double sigma) { return 2.0 * std::sqrt(delta_mhz * delta_mhz + sigma * sigma); };
    return CopyFrequencies{f(bias_mhz + 2.0 * xi_mhz), f(bias_mhz), f(bias_mhz - 2.0 * xi_mhz)};
}

GateConditionReport validate_gate_conditions(const GateDesign& design, PhaseMode mode) {
    GateConditionReport r;
    r.f1_mhz = 2.0 * std::sqrt(design.delta_mhz * design.delta_mhz +
                               4.0 * design.xi_mhz * design.xi_mhz);
    r.f2_mhz = 2.0 * design.delta_mhz;
    r.f1_times_t = r.f1_mhz * design.pulse_ns * kMhzNs;
    r.f2_times_t = r.f2_mhz * design.pulse_ns * kMhzNs;
    if (!std::isfinite(r.f1_times_t) || !std::isfinite(r.f2_times_t) || !(design.pulse_ns > 0.0)) {
        return r;
    }
    const double m_round = std::round(r.f1_times_t);
    const double n_round = std::round(r.f2_times_t - 0.5);
    r.m_estimate = static_cast<int>(m_round);
    r.n_estimate = static_cast<int>(n_round);
    r.m_odd = r.m_estimate % 2 != 0;
    r.n_even = r.n_estimate % 2 == 0;
    const bool f1_whole = std::abs(r.f1_times_t - m_round) <= kIntegralityTolerance &&
                          r.m_estimate >= 1;
    const bool f2_half_odd = std::abs(r.f2_times_t - (n_round + 0.5)) <= kIntegralityTolerance &&
                             r.n_estimate >= 0;
    r.truth_table_ok = f1_whole && f2_half_odd;
    r.ok = r.truth_table_ok && (mode == PhaseMode::any || (r.m_odd && r.n_even));
    return r;
}

double commensurate_eps_high(const GateDesign& design, double ratio) {
    if (!(design.pulse_ns > 0.0) || !(design.delta_mhz > 0.0)) {
        throw PreconditionError("commensurate_eps_high: design must have T > 0 and delta > 0");
    }
    const double quantum = 1.0 / (design.pulse_ns * kMhzNs);
    const double floor_value = ratio * design.delta_mhz;
    double k = std::ceil(floor_value / quantum);
    // Guard against ceil landing one step high on an exact multiple.
    if ((k - 1.0) * quantum >= floor_value) {
        k -= 1.0;
    }
    return k * quantum;
}

}  // namespace qswap
