// evolve.hpp: exact evolution under piecewise-constant Hamiltonians
//
// Propagators use U = exp(-i * 2*pi * H * t * 1e-3) with H in MHz and t in ns,
// computed from the eigendecomposition of H. States are pure vectors or
// density matrices; reset and inject model the classical boxes of a channel.

#pragma once

#include "qswap/chain_model.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <vector>

namespace qswap {

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kDefaultPurityThreshold = 1e-6;

using Ket2 = Eigen::Vector2cd;

inline Ket2 ket(Complex alpha, Complex beta) {
    Ket2 k;
    k << alpha, beta;
    return k;
}

class UnitaryOperator {
public:
    static UnitaryOperator from_matrix(Eigen::MatrixXcd matrix,
                                       double tolerance = kUnitaryTolerance);

    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    Eigen::Index dimension() const noexcept { return matrix_.rows(); }

private:
    explicit UnitaryOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {}
    Eigen::MatrixXcd matrix_;
};

// Largest |U^dagger U - I| entry.
double unitarity_defect(const Eigen::MatrixXcd& matrix);

UnitaryOperator propagator(const HermitianOperator& hamiltonian, double duration_ns);

enum class StateMode { pure, mixed };

class QuantumState {
public:
    static QuantumState pure(Eigen::VectorXcd amplitudes);
    static QuantumState mixed(Eigen::MatrixXcd density);
    static QuantumState basis(int n_qubits, std::uint64_t index);
    // Tensor product of single-qubit kets, qubit 0 first.
    static QuantumState product(std::span<const Ket2> kets);

    StateMode mode() const noexcept { return mode_; }
    int n_qubits() const noexcept { return n_qubits_; }
    Eigen::Index dimension() const noexcept { return Eigen::Index{1} << n_qubits_; }

    const Eigen::VectorXcd& amplitudes() const;
    const Eigen::MatrixXcd& density() const;
    Eigen::MatrixXcd density_matrix() const;
    QuantumState to_mixed() const;

    // Norm squared (pure) or trace (mixed).
    double trace() const;

    // Unchecked constructors for results of norm-preserving operations.
    static QuantumState from_evolved(Eigen::VectorXcd amplitudes);
    static QuantumState from_evolved(Eigen::MatrixXcd density);

private:
    QuantumState() = default;
    StateMode mode_ = StateMode::pure;
    int n_qubits_ = 0;
    Eigen::VectorXcd psi_;
    Eigen::MatrixXcd rho_;
};

QuantumState apply_unitary(const QuantumState& state, const UnitaryOperator& u);

// Applies a 2^k x 2^k operator to the listed qubits (first listed = most
// significant local bit).
QuantumState apply_local(const QuantumState& state, const Eigen::MatrixXcd& op,
                         std::span<const int> qubits);
void apply_local_inplace(Eigen::Ref<Eigen::VectorXcd> amplitudes, int n_qubits,
                         const Eigen::MatrixXcd& op, std::span<const int> qubits);

// Multiplies basis amplitude i by exp(-i * phases[i]).
QuantumState apply_diagonal_phases(const QuantumState& state, const Eigen::VectorXd& phases);

QuantumState evolve_window(const QuantumState& state, const ChainSpec& spec,
                           const BiasProfile& profile, double duration_ns);

// P(qubit in |1>).
double sample_probability(const QuantumState& state, int qubit);

struct ReducedState {
    Eigen::Matrix2cd rho;
    double purity = 1.0;
};

ReducedState reduced_state(const QuantumState& state, int qubit);

// <target| rho_qubit |target> for a normalized single-qubit ket.
double qubit_fidelity(const QuantumState& state, int qubit, const Ket2& target);

struct ResetResult {
    QuantumState state;
    double pre_reset_purity = 1.0;
    bool entangled_warning = false;
};

// Trace the qubit out and put it back in |0>. Always returns a mixed state.
ResetResult reset_qubit(const QuantumState& state, int qubit,
                        double purity_threshold = kDefaultPurityThreshold);

struct InjectOptions {
    double purity_threshold = kDefaultPurityThreshold;
    // Strict: an entangled qubit is a schedule bug and throws. Lenient: the
    // qubit is traced out and replaced, and the result carries a warning.
    bool strict = true;
};

struct InjectResult {
    QuantumState state;
    double pre_inject_purity = 1.0;
    bool entangled_warning = false;
};

InjectResult inject_state(const QuantumState& state, int qubit, const Ket2& target,
                          const InjectOptions& options = {});

struct TrajectoryRow {
    double time_ns = 0.0;
    std::vector<double> p_one;  // per qubit
};

// Samples per-qubit P(|1>) at `samples` evenly spaced times in [0, duration].
// Zero duration or zero samples gives no rows.
std::vector<TrajectoryRow> sample_trajectory(const QuantumState& state, const ChainSpec& spec,
                                             const BiasProfile& profile, double duration_ns,
                                             int samples);

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRow> rows, int n_qubits);

}  // namespace qswap
