// gate_algebra.hpp: ideal reduced-model gates and branch phase bookkeeping
//
// A single pulse realizes CNOT up to branch phases: with qubit order
// |control, target>, control |0> picks up exp(i*pi) and control |1> flips the
// target and picks up exp(-i*pi/2). Three such pulses with targets
// (first, second, first) swap two qubits; the |00> branch keeps a -1.

#pragma once

#include "qswap/chain_model.hpp"
#include "qswap/evolve.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qswap {

enum class GateKind { cnot, swap, copy, composed };

std::string_view to_string(GateKind kind);

struct PhasedGate {
    Eigen::MatrixXcd matrix;
    GateKind kind = GateKind::composed;

    int n_qubits() const;
};

// Qubit order |control, target>.
PhasedGate ideal_cnot();
// Same pulse with the target listed first: |target, control>.
PhasedGate ideal_cnot_target_first();
PhasedGate ideal_swap();
// Three-qubit COPY on |left, target, right>: the target flips iff the
// neighbours differ; same-state branches get -1, opposite-state branches -i.
PhasedGate ideal_copy();

// Product gate: `later` applied after `earlier`.
PhasedGate compose(const PhasedGate& later, const PhasedGate& earlier);

// Where a basis state goes under a basis-permuting gate, and with what phase.
struct BasisImage {
    std::uint64_t output = 0;
    Complex phase{1.0, 0.0};
};

// Throws PreconditionError if the column is not a single unit-modulus entry.
BasisImage basis_image(const PhasedGate& gate, std::uint64_t input, double tolerance = 1e-9);

struct CopyRow {
    std::array<Bit, 3> input{};   // IN, A1, B1
    std::array<Bit, 3> output{};
    Complex phase{1.0, 0.0};
};

// One COPY truth-table row for neighbour kets that must be computational basis states.
CopyRow ideal_copy_row(const Ket2& left, Bit target, const Ket2& right);

// The four rows where target and right neighbour start equal.
std::array<CopyRow, 4> copy_table_rows();

struct GateStep {
    PhasedGate gate;
    std::vector<int> qubits;  // chain positions, in the gate's qubit order
};

Eigen::VectorXcd apply_gate(const Eigen::VectorXcd& state, int n_qubits, const GateStep& step);

// Swaps along the chain moving position `from` to position `to` (to > from).
std::vector<GateStep> chain_swap_sequence(int from, int to);

struct BranchPhase {
    std::uint64_t input = 0;
    std::uint64_t output = 0;
    double phase_rad = 0.0;  // arg(out amplitude / in amplitude), in (-pi, pi]
};

struct PhaseLedger {
    int n_qubits = 0;
    std::vector<BranchPhase> branches;

    // Phase of the branch with `qubit` = |1> minus the branch with |0>, in
    // (-pi, pi]. Needs exactly one output branch of each value.
    double relative_phase(int qubit) const;
};

// Follows every nonzero computational branch of `input` through the sequence.
// All gates must be basis-permuting.
PhaseLedger track_phases(int n_qubits, std::span<const GateStep> sequence,
                         const Eigen::VectorXcd& input);

}  // namespace qswap
