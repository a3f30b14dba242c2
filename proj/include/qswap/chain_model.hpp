// chain_model.hpp: device description of a fixed-coupling qubit chain and its Hamiltonian
//
// H = sum_i delta*X_i + sum_i eps_i*Z_i + sum_i xi*Z_i*Z_{i+1}   (MHz)
//
// Basis convention: qubit 0 is the leftmost (most significant) bit of a basis
// index, and |0> is the +1 eigenstate of Z.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qswap {

using Complex = std::complex<double>;

inline constexpr int kDefaultQubitCap = 12;
inline constexpr double kDefaultEpsHighRatio = 100.0;
inline constexpr double kHermitianTolerance = 1e-12;

enum class Bit : std::uint8_t { zero = 0, one = 1 };

inline int z_sign(Bit b) noexcept { return b == Bit::zero ? 1 : -1; }

inline int basis_bit(std::uint64_t index, int qubit, int n_qubits) noexcept {
    return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1U);
}

struct ChainSpec {
    int n_qubits = 1;
    double delta_mhz = 0.0;   // tunneling, identical on every qubit
    double xi_mhz = 0.0;      // nearest-neighbour zz coupling, identical on every link
    double eps_high_mhz = 0.0;  // idle (holding) bias

    // Builds and validates a spec; eps_high defaults to 100 * delta.
    static ChainSpec make(int n_qubits, double delta_mhz, double xi_mhz,
                          std::optional<double> eps_high_mhz = std::nullopt);

    void validate() const;
    std::uint64_t dimension() const noexcept { return std::uint64_t{1} << n_qubits; }
    bool is_end(int qubit) const noexcept { return qubit == 0 || qubit == n_qubits - 1; }
    std::vector<int> neighbors(int qubit) const;
};

struct BiasProfile {
    std::vector<double> biases_mhz;

    static BiasProfile uniform(int n_qubits, double bias_mhz) {
        return BiasProfile{std::vector<double>(static_cast<std::size_t>(n_qubits), bias_mhz)};
    }
    std::size_t size() const noexcept { return biases_mhz.size(); }
    double operator[](std::size_t i) const { return biases_mhz[i]; }
    bool operator==(const BiasProfile&) const = default;
};

// Single-qubit reduction: H = delta*X + effective_bias*Z.
struct TwoLevelParams {
    double delta_mhz = 0.0;
    double effective_bias_mhz = 0.0;
};

// Dense Hermitian matrix; the invariant is checked on construction.
class HermitianOperator {
public:
    static HermitianOperator from_matrix(Eigen::MatrixXcd matrix,
                                         double tolerance = kHermitianTolerance);

    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    Eigen::Index dimension() const noexcept { return matrix_.rows(); }

private:
    explicit HermitianOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {}
    Eigen::MatrixXcd matrix_;
};

// Largest |H - H^dagger| entry.
double hermiticity_defect(const Eigen::MatrixXcd& matrix);

HermitianOperator build_hamiltonian(const ChainSpec& spec, const BiasProfile& profile,
                                    int max_qubits = kDefaultQubitCap);

// Keeps only the terms that involve an active qubit: its X and Z terms and
// every zz link that touches it. With every qubit active this is build_hamiltonian.
HermitianOperator build_active_hamiltonian(const ChainSpec& spec, const BiasProfile& profile,
                                           const std::vector<bool>& active,
                                           int max_qubits = kDefaultQubitCap);

HermitianOperator two_level_hamiltonian(const TwoLevelParams& params);

// Basis states of the target's neighbours, left then right. An end qubit has
// only one neighbour; the missing side must stay empty.
struct NeighborStates {
    std::optional<Bit> left;
    std::optional<Bit> right;
};

// Effective bias seen by `target` when its neighbours sit in definite basis
// states: target_bias + xi * (sum of neighbour z signs).
TwoLevelParams reduce_to_target(const ChainSpec& spec, int target, const NeighborStates& neighbors,
                                double target_bias_mhz);

}  // namespace qswap
