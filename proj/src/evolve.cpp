#include "qswap/evolve.hpp"

#include "qswap/errors.hpp"
#include "qswap/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace qswap {

namespace {

int qubits_for_dimension(Eigen::Index dim) {
    if (dim < 2) {
        throw DimensionError("state dimension must be a power of two >= 2");
    }
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        ++n;
    }
    if ((Eigen::Index{1} << n) != dim) {
        throw DimensionError("state dimension " + std::to_string(dim) + " is not a power of two");
    }
    return n;
}

void check_qubit(const QuantumState& state, int qubit, const char* op) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw PreconditionError(std::string(op) + ": qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(state.n_qubits()) +
                                " qubits");
    }
}

std::uint64_t qubit_mask(int qubit, int n_qubits) {
    return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

// Sum over the other qubits, keyed by the index with the chosen qubit cleared.
Eigen::MatrixXcd trace_out(const QuantumState& state, int qubit) {
    const int n = state.n_qubits();
    const std::uint64_t mask = qubit_mask(qubit, n);
    const Eigen::Index dim = state.dimension();
    Eigen::MatrixXcd rest = Eigen::MatrixXcd::Zero(dim, dim);
    const Eigen::MatrixXcd rho = state.density_matrix();
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (static_cast<std::uint64_t>(i) & mask) {
            continue;
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (static_cast<std::uint64_t>(j) & mask) {
                continue;
            }
            const auto i1 = static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) | mask);
            const auto j1 = static_cast<Eigen::Index>(static_cast<std::uint64_t>(j) | mask);
            rest(i, j) = rho(i, j) + rho(i1, j1);
        }
    }
    return rest;
}

// Places `qubit_rho` on `qubit` next to the traced-out remainder from trace_out.
Eigen::MatrixXcd attach_qubit(const Eigen::MatrixXcd& rest, int qubit, int n_qubits,
                              const Eigen::Matrix2cd& qubit_rho) {
    const std::uint64_t mask = qubit_mask(qubit, n_qubits);
    const Eigen::Index dim = rest.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        const int bi = (ui & mask) ? 1 : 0;
        const auto i0 = static_cast<Eigen::Index>(ui & ~mask);
        for (Eigen::Index j = 0; j < dim; ++j) {
            const auto uj = static_cast<std::uint64_t>(j);
            const int bj = (uj & mask) ? 1 : 0;
            const auto j0 = static_cast<Eigen::Index>(uj & ~mask);
            out(i, j) = qubit_rho(bi, bj) * rest(i0, j0);
        }
    }
    return out;
}

void write_double(std::ostream& out, double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.write(buf, res.ptr - buf);
}

}  // namespace

double unitarity_defect(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw DimensionError("unitarity_defect: matrix must be square");
    }
    const Eigen::MatrixXcd gram = matrix.adjoint() * matrix;
    return (gram - Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols())).cwiseAbs().maxCoeff();
}

UnitaryOperator UnitaryOperator::from_matrix(Eigen::MatrixXcd matrix, double tolerance) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw DimensionError("UnitaryOperator: matrix must be square and non-empty");
    }
    const double defect = unitarity_defect(matrix);
    if (!(defect < tolerance)) {
        throw PreconditionError("UnitaryOperator: matrix is not unitary (defect " +
                                std::to_string(defect) + ")");
    }
    return UnitaryOperator(std::move(matrix));
}

UnitaryOperator propagator(const HermitianOperator& hamiltonian, double duration_ns) {
    if (!(duration_ns >= 0.0)) {
        throw PreconditionError("propagator: duration must be >= 0");
    }
    const Eigen::MatrixXcd& h = hamiltonian.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error("propagator: eigendecomposition failed");
    }
    const Eigen::VectorXd& energies = solver.eigenvalues();
    Eigen::VectorXcd phases(energies.size());
    for (Eigen::Index k = 0; k < energies.size(); ++k) {
        phases(k) = std::polar(1.0, -phase_rad(energies(k), duration_ns));
    }
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    Eigen::MatrixXcd u = v * phases.asDiagonal() * v.adjoint();
    return UnitaryOperator::from_matrix(std::move(u));
}

QuantumState QuantumState::pure(Eigen::VectorXcd amplitudes) {
    const double norm2 = amplitudes.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
        throw PreconditionError("QuantumState: amplitudes are not normalized (|psi|^2 = " +
                                std::to_string(norm2) + ")");
    }
    return from_evolved(std::move(amplitudes));
}

QuantumState QuantumState::mixed(Eigen::MatrixXcd density) {
    if (density.rows() != density.cols()) {
        throw DimensionError("QuantumState: density matrix must be square");
    }
    qubits_for_dimension(density.rows());
    const double tr = density.trace().real();
    if (std::abs(tr - 1.0) > kNormTolerance) {
        throw PreconditionError("QuantumState: density trace is " + std::to_string(tr));
    }
    if (hermiticity_defect(density) > kNormTolerance) {
        throw PreconditionError("QuantumState: density matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(density, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kNormTolerance) {
        throw PreconditionError("QuantumState: density matrix has a negative eigenvalue");
    }
    return from_evolved(std::move(density));
}

QuantumState QuantumState::from_evolved(Eigen::VectorXcd amplitudes) {
    QuantumState s;
    s.mode_ = StateMode::pure;
    s.n_qubits_ = qubits_for_dimension(amplitudes.size());
    s.psi_ = std::move(amplitudes);
    return s;
}

QuantumState QuantumState::from_evolved(Eigen::MatrixXcd density) {
    QuantumState s;
    s.mode_ = StateMode::mixed;
    s.n_qubits_ = qubits_for_dimension(density.rows());
    s.rho_ = std::move(density);
    return s;
}

QuantumState QuantumState::basis(int n_qubits, std::uint64_t index) {
    if (n_qubits < 1 || n_qubits > 30) {
        throw PreconditionError("QuantumState::basis: unsupported qubit count");
    }
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (index >= static_cast<std::uint64_t>(dim)) {
        throw PreconditionError("QuantumState::basis: index out of range");
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(static_cast<Eigen::Index>(index)) = 1.0;
    return from_evolved(std::move(psi));
}

QuantumState QuantumState::product(std::span<const Ket2> kets) {
    if (kets.empty()) {
        throw PreconditionError("QuantumState::product: need at least one qubit");
    }
    Eigen::VectorXcd psi(1);
    psi(0) = 1.0;
    for (const Ket2& k : kets) {
        Eigen::VectorXcd next(psi.size() * 2);
        for (Eigen::Index i = 0; i < psi.size(); ++i) {
            next(2 * i) = psi(i) * k(0);
            next(2 * i + 1) = psi(i) * k(1);
        }
        psi = std::move(next);
    }
    return pure(std::move(psi));
}

const Eigen::VectorXcd& QuantumState::amplitudes() const {
    if (mode_ != StateMode::pure) {
        throw PreconditionError("QuantumState: amplitudes requested from a mixed state");
    }
    return psi_;
}

const Eigen::MatrixXcd& QuantumState::density() const {
    if (mode_ != StateMode::mixed) {
        throw PreconditionError("QuantumState: density requested from a pure state");
    }
    return rho_;
}

Eigen::MatrixXcd QuantumState::density_matrix() const {
    if (mode_ == StateMode::mixed) {
        return rho_;
    }
    return psi_ * psi_.adjoint();
}

QuantumState QuantumState::to_mixed() const {
    return from_evolved(density_matrix());
}

double QuantumState::trace() const {
    return mode_ == StateMode::pure ? psi_.squaredNorm() : rho_.trace().real();
}

QuantumState apply_unitary(const QuantumState& state, const UnitaryOperator& u) {
    if (u.dimension() != state.dimension()) {
        throw DimensionError("apply_unitary: operator dimension " + std::to_string(u.dimension()) +
                             " does not match state dimension " +
                             std::to_string(state.dimension()));
    }
    if (state.mode() == StateMode::pure) {
        return QuantumState::from_evolved(Eigen::VectorXcd(u.matrix() * state.amplitudes()));
    }
    Eigen::MatrixXcd rho = u.matrix() * state.density() * u.matrix().adjoint();
    return QuantumState::from_evolved(std::move(rho));
}

void apply_local_inplace(Eigen::Ref<Eigen::VectorXcd> amplitudes, int n_qubits,
                         const Eigen::MatrixXcd& op, std::span<const int> qubits) {
    const auto k = static_cast<int>(qubits.size());
    const Eigen::Index local_dim = Eigen::Index{1} << k;
    if (op.rows() != local_dim || op.cols() != local_dim) {
        throw DimensionError("apply_local: operator size does not match qubit count");
    }
    std::vector<std::uint64_t> offsets(static_cast<std::size_t>(local_dim), 0);
    std::uint64_t all = 0;
    for (int j = 0; j < k; ++j) {
        if (qubits[j] < 0 || qubits[j] >= n_qubits) {
            throw PreconditionError("apply_local: qubit index out of range");
        }
        const std::uint64_t m = qubit_mask(qubits[j], n_qubits);
        if (all & m) {
            throw PreconditionError("apply_local: repeated qubit");
        }
        all |= m;
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            if ((static_cast<std::uint64_t>(l) >> (k - 1 - j)) & 1U) {
                offsets[static_cast<std::size_t>(l)] |= m;
            }
        }
    }
    Eigen::VectorXcd gathered(local_dim);
    const auto dim = static_cast<std::uint64_t>(amplitudes.size());
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & all) {
            continue;
        }
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            gathered(l) = amplitudes(static_cast<Eigen::Index>(base | offsets[l]));
        }
        const Eigen::VectorXcd out = op * gathered;
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            amplitudes(static_cast<Eigen::Index>(base | offsets[l])) = out(l);
        }
    }
}

QuantumState apply_local(const QuantumState& state, const Eigen::MatrixXcd& op,
                         std::span<const int> qubits) {
    const int n = state.n_qubits();
    if (state.mode() == StateMode::pure) {
        Eigen::VectorXcd psi = state.amplitudes();
        apply_local_inplace(psi, n, op, qubits);
        return QuantumState::from_evolved(std::move(psi));
    }
    // rho -> U rho U^dagger = U (U rho)^dagger for Hermitian rho.
    Eigen::MatrixXcd rho = state.density();
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        apply_local_inplace(rho.col(c), n, op, qubits);
    }
    rho.adjointInPlace();
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        apply_local_inplace(rho.col(c), n, op, qubits);
    }
    return QuantumState::from_evolved(std::move(rho));
}

QuantumState apply_diagonal_phases(const QuantumState& state, const Eigen::VectorXd& phases) {
    if (phases.size() != state.dimension()) {
        throw DimensionError("apply_diagonal_phases: phase vector size mismatch");
    }
    Eigen::VectorXcd factors(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        factors(i) = std::polar(1.0, -phases(i));
    }
    if (state.mode() == StateMode::pure) {
        return QuantumState::from_evolved(Eigen::VectorXcd(factors.cwiseProduct(state.amplitudes())));
    }
    Eigen::MatrixXcd rho = factors.asDiagonal() * state.density() * factors.conjugate().asDiagonal();
    return QuantumState::from_evolved(std::move(rho));
}

QuantumState evolve_window(const QuantumState& state, const ChainSpec& spec,
                           const BiasProfile& profile, double duration_ns) {
    if (state.n_qubits() != spec.n_qubits) {
        throw DimensionError("evolve_window: state has " + std::to_string(state.n_qubits()) +
                             " qubits, chain has " + std::to_string(spec.n_qubits));
    }
    if (duration_ns == 0.0) {
        return state;
    }
    return apply_unitary(state, propagator(build_hamiltonian(spec, profile), duration_ns));
}

ReducedState reduced_state(const QuantumState& state, int qubit) {
    check_qubit(state, qubit, "reduced_state");
    const int n = state.n_qubits();
    const std::uint64_t mask = qubit_mask(qubit, n);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    const auto dim = static_cast<std::uint64_t>(state.dimension());
    if (state.mode() == StateMode::pure) {
        const Eigen::VectorXcd& psi = state.amplitudes();
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (i & mask) {
                continue;
            }
            const Complex a0 = psi(static_cast<Eigen::Index>(i));
            const Complex a1 = psi(static_cast<Eigen::Index>(i | mask));
            rho(0, 0) += a0 * std::conj(a0);
            rho(0, 1) += a0 * std::conj(a1);
            rho(1, 1) += a1 * std::conj(a1);
        }
    } else {
        const Eigen::MatrixXcd& r = state.density();
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (i & mask) {
                continue;
            }
            const auto i0 = static_cast<Eigen::Index>(i);
            const auto i1 = static_cast<Eigen::Index>(i | mask);
            rho(0, 0) += r(i0, i0);
            rho(0, 1) += r(i0, i1);
            rho(1, 1) += r(i1, i1);
        }
    }
    rho(1, 0) = std::conj(rho(0, 1));
    rho(0, 0) = rho(0, 0).real();
    rho(1, 1) = rho(1, 1).real();
    const double purity = (rho * rho).trace().real();
    return ReducedState{rho, purity};
}

double sample_probability(const QuantumState& state, int qubit) {
    check_qubit(state, qubit, "sample_probability");
    const double p = reduced_state(state, qubit).rho(1, 1).real();
    return std::clamp(p, 0.0, 1.0);
}

double qubit_fidelity(const QuantumState& state, int qubit, const Ket2& target) {
    const ReducedState r = reduced_state(state, qubit);
    const double f = (target.adjoint() * r.rho * target)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

ResetResult reset_qubit(const QuantumState& state, int qubit, double purity_threshold) {
    check_qubit(state, qubit, "reset_qubit");
    const double purity = reduced_state(state, qubit).purity;
    Eigen::Matrix2cd zero = Eigen::Matrix2cd::Zero();
    zero(0, 0) = 1.0;
    Eigen::MatrixXcd rho = attach_qubit(trace_out(state, qubit), qubit, state.n_qubits(), zero);
    return ResetResult{QuantumState::from_evolved(std::move(rho)), purity,
                       purity < 1.0 - purity_threshold};
}

InjectResult inject_state(const QuantumState& state, int qubit, const Ket2& target,
                          const InjectOptions& options) {
    check_qubit(state, qubit, "inject_state");
    if (std::abs(target.squaredNorm() - 1.0) > kNormTolerance) {
        throw PreconditionError("inject_state: target ket is not normalized");
    }
    const ReducedState reduced = reduced_state(state, qubit);
    const bool entangled = reduced.purity < 1.0 - options.purity_threshold;
    if (entangled && options.strict) {
        throw PreconditionError("inject_state: qubit " + std::to_string(qubit) +
                                " is entangled (purity " + std::to_string(reduced.purity) +
                                "); the schedule did not free it");
    }

    if (state.mode() == StateMode::pure && !entangled) {
        // Contract the old qubit factor away against its dominant eigenvector.
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(reduced.rho);
        const Eigen::Vector2cd old = solver.eigenvectors().col(1);
        const int n = state.n_qubits();
        const std::uint64_t mask = qubit_mask(qubit, n);
        const Eigen::VectorXcd& psi = state.amplitudes();
        const auto dim = static_cast<std::uint64_t>(psi.size());
        Eigen::VectorXcd rest = Eigen::VectorXcd::Zero(psi.size());
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (i & mask) {
                continue;
            }
            rest(static_cast<Eigen::Index>(i)) =
                std::conj(old(0)) * psi(static_cast<Eigen::Index>(i)) +
                std::conj(old(1)) * psi(static_cast<Eigen::Index>(i | mask));
        }
        rest /= rest.norm();
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (i & mask) {
                continue;
            }
            const Complex r = rest(static_cast<Eigen::Index>(i));
            out(static_cast<Eigen::Index>(i)) = target(0) * r;
            out(static_cast<Eigen::Index>(i | mask)) = target(1) * r;
        }
        return InjectResult{QuantumState::from_evolved(std::move(out)), reduced.purity, false};
    }

    const Eigen::Matrix2cd target_rho = target * target.adjoint();
    Eigen::MatrixXcd rho = attach_qubit(trace_out(state, qubit), qubit, state.n_qubits(), target_rho);
    return InjectResult{QuantumState::from_evolved(std::move(rho)), reduced.purity, entangled};
}

std::vector<TrajectoryRow> sample_trajectory(const QuantumState& state, const ChainSpec& spec,
                                             const BiasProfile& profile, double duration_ns,
                                             int samples) {
    if (!(duration_ns >= 0.0) || samples < 0) {
        throw PreconditionError("sample_trajectory: duration and samples must be non-negative");
    }
    std::vector<TrajectoryRow> rows;
    if (duration_ns == 0.0 || samples == 0) {
        return rows;
    }
    if (state.n_qubits() != spec.n_qubits) {
        throw DimensionError("sample_trajectory: state does not match chain");
    }
    const HermitianOperator h = build_hamiltonian(spec, profile);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    const Eigen::VectorXd& energies = solver.eigenvalues();
    rows.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double t = samples == 1 ? 0.0 : duration_ns * k / (samples - 1);
        Eigen::VectorXcd phases(energies.size());
        for (Eigen::Index e = 0; e < energies.size(); ++e) {
            phases(e) = std::polar(1.0, -phase_rad(energies(e), t));
        }
        const Eigen::MatrixXcd u = v * phases.asDiagonal() * v.adjoint();
        QuantumState evolved = state.mode() == StateMode::pure
            ? QuantumState::from_evolved(Eigen::VectorXcd(u * state.amplitudes()))
            : QuantumState::from_evolved(Eigen::MatrixXcd(u * state.density() * u.adjoint()));
        TrajectoryRow row{t, {}};
        for (int q = 0; q < spec.n_qubits; ++q) {
            row.p_one.push_back(sample_probability(evolved, q));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRow> rows, int n_qubits) {
    out << "time_ns";
    for (int q = 0; q < n_qubits; ++q) {
        out << ",p1_q" << q;
    }
    out << '\n';
    for (const TrajectoryRow& row : rows) {
        write_double(out, row.time_ns);
        for (double p : row.p_one) {
            out << ',';
            write_double(out, p);
        }
        out << '\n';
    }
}

}  // namespace qswap
