#include "qswap/gate_algebra.hpp"

#include "qswap/errors.hpp"
#include "qswap/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qswap {

namespace {

const Complex kMinusOne{-1.0, 0.0};
const Complex kMinusI{0.0, -1.0};

std::optional<Bit> as_basis(const Ket2& k, double tolerance = 1e-9) {
    if (std::abs(std::abs(k(0)) - 1.0) <= tolerance && std::abs(k(1)) <= tolerance) {
        return Bit::zero;
    }
    if (std::abs(std::abs(k(1)) - 1.0) <= tolerance && std::abs(k(0)) <= tolerance) {
        return Bit::one;
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(GateKind kind) {
    switch (kind) {
        case GateKind::cnot: return "cnot";
        case GateKind::swap: return "swap";
        case GateKind::copy: return "copy";
        case GateKind::composed: return "composed";
    }
    return "composed";
}

int PhasedGate::n_qubits() const {
    int n = 0;
    while ((Eigen::Index{1} << n) < matrix.rows()) {
        ++n;
    }
    return n;
}

PhasedGate ideal_cnot() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = kMinusOne;  // |00> -> e^{i pi}|00>
    m(1, 1) = kMinusOne;  // |01> -> e^{i pi}|01>
    m(3, 2) = kMinusI;    // |10> -> e^{-i pi/2}|11>
    m(2, 3) = kMinusI;    // |11> -> e^{-i pi/2}|10>
    return PhasedGate{std::move(m), GateKind::cnot};
}

PhasedGate ideal_cnot_target_first() {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(4, 4);
    p(0, 0) = 1.0;
    p(1, 2) = 1.0;
    p(2, 1) = 1.0;
    p(3, 3) = 1.0;
    return PhasedGate{p * ideal_cnot().matrix * p, GateKind::cnot};
}

PhasedGate ideal_swap() {
    const PhasedGate first = ideal_cnot_target_first();
    const PhasedGate second = ideal_cnot();
    PhasedGate g = compose(first, compose(second, first));
    g.kind = GateKind::swap;
    return g;
}

PhasedGate ideal_copy() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
    for (std::uint64_t in = 0; in < 8; ++in) {
        const int left = basis_bit(in, 0, 3);
        const int right = basis_bit(in, 2, 3);
        if (left == right) {
            m(static_cast<Eigen::Index>(in), static_cast<Eigen::Index>(in)) = kMinusOne;
        } else {
            m(static_cast<Eigen::Index>(in ^ 0b010U), static_cast<Eigen::Index>(in)) = kMinusI;
        }
    }
    return PhasedGate{std::move(m), GateKind::copy};
}

PhasedGate compose(const PhasedGate& later, const PhasedGate& earlier) {
    if (later.matrix.rows() != earlier.matrix.rows()) {
        throw DimensionError("compose: gate dimensions differ");
    }
    return PhasedGate{later.matrix * earlier.matrix, GateKind::composed};
}

BasisImage basis_image(const PhasedGate& gate, std::uint64_t input, double tolerance) {
    const auto col = static_cast<Eigen::Index>(input);
    if (col >= gate.matrix.cols()) {
        throw PreconditionError("basis_image: input index out of range");
    }
    Eigen::Index row = 0;
    const double peak = gate.matrix.col(col).cwiseAbs().maxCoeff(&row);
    if (std::abs(peak - 1.0) > tolerance) {
        throw PreconditionError("basis_image: gate is not basis-permuting");
    }
    return BasisImage{static_cast<std::uint64_t>(row), gate.matrix(row, col)};
}

CopyRow ideal_copy_row(const Ket2& left, Bit target, const Ket2& right) {
    const auto l = as_basis(left);
    const auto r = as_basis(right);
    if (!l || !r) {
        throw PreconditionError("ideal_copy: neighbour states must be computational basis states");
    }
    const std::uint64_t in = (static_cast<std::uint64_t>(*l) << 2) |
                             (static_cast<std::uint64_t>(target) << 1) |
                             static_cast<std::uint64_t>(*r);
    const BasisImage img = basis_image(ideal_copy(), in);
    CopyRow row;
    for (int q = 0; q < 3; ++q) {
        row.input[q] = static_cast<Bit>(basis_bit(in, q, 3));
        row.output[q] = static_cast<Bit>(basis_bit(img.output, q, 3));
    }
    row.phase = img.phase;
    return row;
}

std::array<CopyRow, 4> copy_table_rows() {
    const Ket2 zero = ket(1.0, 0.0);
    const Ket2 one = ket(0.0, 1.0);
    return {ideal_copy_row(zero, Bit::zero, zero), ideal_copy_row(zero, Bit::one, one),
            ideal_copy_row(one, Bit::zero, zero), ideal_copy_row(one, Bit::one, one)};
}

Eigen::VectorXcd apply_gate(const Eigen::VectorXcd& state, int n_qubits, const GateStep& step) {
    if (state.size() != (Eigen::Index{1} << n_qubits)) {
        throw DimensionError("apply_gate: state size does not match qubit count");
    }
    Eigen::VectorXcd out = state;
    apply_local_inplace(out, n_qubits, step.gate.matrix, step.qubits);
    return out;
}

std::vector<GateStep> chain_swap_sequence(int from, int to) {
    if (from < 0 || to <= from) {
        throw PreconditionError("chain_swap_sequence: need 0 <= from < to");
    }
    std::vector<GateStep> steps;
    const PhasedGate swap = ideal_swap();
    for (int p = from; p < to; ++p) {
        steps.push_back(GateStep{swap, {p, p + 1}});
    }
    return steps;
}

double PhaseLedger::relative_phase(int qubit) const {
    const BranchPhase* zero = nullptr;
    const BranchPhase* one = nullptr;
    for (const BranchPhase& b : branches) {
        const bool bit = basis_bit(b.output, qubit, n_qubits) != 0;
        const BranchPhase*& slot = bit ? one : zero;
        if (slot != nullptr) {
            throw PreconditionError("relative_phase: more than one branch per value of the qubit");
        }
        slot = &b;
    }
    if (zero == nullptr || one == nullptr) {
        throw PreconditionError("relative_phase: need one branch with the qubit in each state");
    }
    return wrap_phase(one->phase_rad - zero->phase_rad);
}

PhaseLedger track_phases(int n_qubits, std::span<const GateStep> sequence,
                         const Eigen::VectorXcd& input) {
    if (input.size() != (Eigen::Index{1} << n_qubits)) {
        throw DimensionError("track_phases: input size does not match qubit count");
    }
    PhaseLedger ledger{n_qubits, {}};
    for (Eigen::Index i = 0; i < input.size(); ++i) {
        if (std::abs(input(i)) < 1e-12) {
            continue;
        }
        Eigen::VectorXcd branch = Eigen::VectorXcd::Zero(input.size());
        branch(i) = 1.0;
        for (const GateStep& step : sequence) {
            branch = apply_gate(branch, n_qubits, step);
        }
        Eigen::Index row = 0;
        const double peak = branch.cwiseAbs().maxCoeff(&row);
        if (std::abs(peak - 1.0) > 1e-9) {
            throw PreconditionError("track_phases: sequence does not map basis states to basis states");
        }
        ledger.branches.push_back(BranchPhase{static_cast<std::uint64_t>(i),
                                              static_cast<std::uint64_t>(row),
                                              wrap_phase(std::arg(branch(row)))});
    }
    return ledger;
}

}  // namespace qswap
