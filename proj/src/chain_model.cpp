#include "qswap/chain_model.hpp"

#include "qswap/errors.hpp"

#include <cmath>
#include <string>

namespace qswap {

ChainSpec ChainSpec::make(int n_qubits, double delta_mhz, double xi_mhz,
                          std::optional<double> eps_high_mhz) {
    ChainSpec spec{n_qubits, delta_mhz, xi_mhz,
                   eps_high_mhz.value_or(kDefaultEpsHighRatio * delta_mhz)};
    spec.validate();
    return spec;
}

void ChainSpec::validate() const {
    if (n_qubits < 1) {
        throw PreconditionError("ChainSpec: n_qubits must be >= 1");
    }
    if (!(delta_mhz > 0.0)) {
        throw PreconditionError("ChainSpec: delta must be > 0");
    }
    if (!(xi_mhz >= 0.0)) {
        throw PreconditionError("ChainSpec: xi must be >= 0");
    }
    if (!(eps_high_mhz >= 0.0)) {
        throw PreconditionError("ChainSpec: eps_high must be >= 0");
    }
}

std::vector<int> ChainSpec::neighbors(int qubit) const {
    std::vector<int> out;
    if (qubit > 0) {
        out.push_back(qubit - 1);
    }
    if (qubit + 1 < n_qubits) {
        out.push_back(qubit + 1);
    }
    return out;
}

double hermiticity_defect(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw DimensionError("hermiticity_defect: matrix must be square");
    }
    if (matrix.size() == 0) {
        return 0.0;
    }
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator HermitianOperator::from_matrix(Eigen::MatrixXcd matrix, double tolerance) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw DimensionError("HermitianOperator: matrix must be square and non-empty");
    }
    const double defect = hermiticity_defect(matrix);
    if (!(defect < tolerance)) {
        throw PreconditionError("HermitianOperator: matrix is not Hermitian (defect " +
                                std::to_string(defect) + ")");
    }
    return HermitianOperator(std::move(matrix));
}

HermitianOperator build_active_hamiltonian(const ChainSpec& spec, const BiasProfile& profile,
                                           const std::vector<bool>& active, int max_qubits) {
    spec.validate();
    const int n = spec.n_qubits;
    if (n > max_qubits) {
        throw PreconditionError("build_hamiltonian: " + std::to_string(n) +
                                " qubits exceeds the cap of " + std::to_string(max_qubits));
    }
    if (profile.size() != static_cast<std::size_t>(n)) {
        throw DimensionError("build_hamiltonian: bias profile has " +
                             std::to_string(profile.size()) + " entries for " +
                             std::to_string(n) + " qubits");
    }
    if (active.size() != static_cast<std::size_t>(n)) {
        throw DimensionError("build_hamiltonian: active mask size mismatch");
    }

    const auto dim = static_cast<Eigen::Index>(spec.dimension());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const auto index = static_cast<std::uint64_t>(idx);
        double diagonal = 0.0;
        for (int q = 0; q < n; ++q) {
            const int s = 1 - 2 * basis_bit(index, q, n);
            if (active[q]) {
                diagonal += profile[q] * s;
            }
            if (q + 1 < n && (active[q] || active[q + 1])) {
                const int s_next = 1 - 2 * basis_bit(index, q + 1, n);
                diagonal += spec.xi_mhz * s * s_next;
            }
        }
        h(idx, idx) = diagonal;
        for (int q = 0; q < n; ++q) {
            if (active[q]) {
                const auto flipped = static_cast<Eigen::Index>(index ^ (std::uint64_t{1} << (n - 1 - q)));
                h(flipped, idx) += spec.delta_mhz;
            }
        }
    }
    return HermitianOperator::from_matrix(std::move(h));
}

HermitianOperator build_hamiltonian(const ChainSpec& spec, const BiasProfile& profile,
                                    int max_qubits) {
    return build_active_hamiltonian(
        spec, profile, std::vector<bool>(static_cast<std::size_t>(spec.n_qubits), true), max_qubits);
}

HermitianOperator two_level_hamiltonian(const TwoLevelParams& params) {
    if (!(params.delta_mhz > 0.0)) {
        throw PreconditionError("TwoLevelParams: delta must be > 0");
    }
    Eigen::MatrixXcd h(2, 2);
    h << params.effective_bias_mhz, params.delta_mhz,
         params.delta_mhz, -params.effective_bias_mhz;
    return HermitianOperator::from_matrix(std::move(h));
}

TwoLevelParams reduce_to_target(const ChainSpec& spec, int target, const NeighborStates& neighbors,
                                double target_bias_mhz) {
    spec.validate();
    if (target < 0 || target >= spec.n_qubits) {
        throw PreconditionError("reduce_to_target: target index out of range");
    }
    const bool has_left = target > 0;
    const bool has_right = target + 1 < spec.n_qubits;
    if (has_left != neighbors.left.has_value()) {
        throw PreconditionError(has_left ? "reduce_to_target: left neighbour state unspecified"
                                         : "reduce_to_target: target has no left neighbour");
    }
    if (has_right != neighbors.right.has_value()) {
        throw PreconditionError(has_right ? "reduce_to_target: right neighbour state unspecified"
                                          : "reduce_to_target: target has no right neighbour");
    }
    double sigma = target_bias_mhz;
    if (neighbors.left) {
        sigma += spec.xi_mhz * z_sign(*neighbors.left);
    }
    if (neighbors.right) {
        sigma += spec.xi_mhz * z_sign(*neighbors.right);
    }
    return TwoLevelParams{spec.delta_mhz, sigma};
}

}  // namespace qswap
