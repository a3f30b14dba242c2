#include "oracles.hpp"
#include "qswap/chain_model.hpp"
#include "qswap/errors.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qswap;

TEST(ChainSpec, DefaultsEpsHighToHundredDelta) {
    const ChainSpec s = ChainSpec::make(4, 25.0, 21.65);
    EXPECT_DOUBLE_EQ(s.eps_high_mhz, 2500.0);
    EXPECT_EQ(s.dimension(), 16u);
    EXPECT_TRUE(s.is_end(0));
    EXPECT_TRUE(s.is_end(3));
    EXPECT_FALSE(s.is_end(1));
    EXPECT_EQ(s.neighbors(0), (std::vector<int>{1}));
    EXPECT_EQ(s.neighbors(2), (std::vector<int>{1, 3}));
}

TEST(ChainSpec, RejectsNonPhysicalParameters) {
    EXPECT_THROW(ChainSpec::make(0, 1.0, 1.0), PreconditionError);
    EXPECT_THROW(ChainSpec::make(3, 0.0, 1.0), PreconditionError);
    EXPECT_THROW(ChainSpec::make(3, 1.0, -1.0), PreconditionError);
    EXPECT_THROW(ChainSpec::make(3, 1.0, 1.0, -5.0), PreconditionError);
}

TEST(Hamiltonian, MatchesKroneckerOracle) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int n = 1; n <= 5; ++n) {
        for (int trial = 0; trial < 4; ++trial) {
            const double delta = std::abs(u(rng)) + 0.1;
            const double xi = std::abs(u(rng));
            std::vector<double> eps;
            for (int q = 0; q < n; ++q) {
                eps.push_back(u(rng));
            }
            const ChainSpec s = ChainSpec::make(n, delta, xi, 10.0);
            const HermitianOperator h = build_hamiltonian(s, BiasProfile{eps});
            const Eigen::MatrixXcd ref = oracle::chain_hamiltonian(n, delta, xi, eps);
            EXPECT_LT((h.matrix() - ref).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
        }
    }
}

TEST(Hamiltonian, IsHermitianForRandomInputs) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1000.0, 1000.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        std::vector<double> eps;
        for (int q = 0; q < n; ++q) {
            eps.push_back(u(rng));
        }
        const ChainSpec s = ChainSpec::make(n, std::abs(u(rng)) + 1.0, std::abs(u(rng)), 1.0);
        EXPECT_LT(hermiticity_defect(build_hamiltonian(s, BiasProfile{eps}).matrix()), 1e-12);
    }
}

TEST(Hamiltonian, RefusesOversizedChainsAndMismatchedProfiles) {
    const ChainSpec big = ChainSpec::make(14, 1.0, 1.0);
    EXPECT_THROW(build_hamiltonian(big, BiasProfile::uniform(14, 0.0)), PreconditionError);
    const ChainSpec s = ChainSpec::make(3, 1.0, 1.0);
    EXPECT_THROW(build_hamiltonian(s, BiasProfile::uniform(2, 0.0)), DimensionError);
}

TEST(Hamiltonian, AllActiveEqualsFull) {
    const ChainSpec s = ChainSpec::make(4, 3.0, 2.0, 40.0);
    const BiasProfile p{{40.0, 0.0, 40.0, 21.0}};
    const auto full = build_hamiltonian(s, p);
    const auto active = build_active_hamiltonian(s, p, std::vector<bool>(4, true));
    EXPECT_LT((full.matrix() - active.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hamiltonian, ActiveSubsetKeepsOnlyTouchingTerms) {
    const ChainSpec s = ChainSpec::make(3, 3.0, 2.0);
    const BiasProfile p{{7.0, 0.5, 9.0}};
    const auto h = build_active_hamiltonian(s, p, {false, true, false});
    const Eigen::MatrixXcd ref = 3.0 * oracle::on_qubit(3, 1, oracle::pauli_x()) +
                                 0.5 * oracle::on_qubit(3, 1, oracle::pauli_z()) +
                                 2.0 * oracle::on_qubit(3, 0, oracle::pauli_z()) * oracle::on_qubit(3, 1, oracle::pauli_z()) +
                                 2.0 * oracle::on_qubit(3, 1, oracle::pauli_z()) * oracle::on_qubit(3, 2, oracle::pauli_z());
    EXPECT_LT((h.matrix() - ref).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HermitianOperator, RejectsNonHermitian) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(HermitianOperator::from_matrix(m), PreconditionError);
    EXPECT_THROW(HermitianOperator::from_matrix(Eigen::MatrixXcd::Zero(2, 3)), DimensionError);
}

TEST(TwoLevel, ReductionAddsNeighbourShifts) {
    const ChainSpec s = ChainSpec::make(3, 25.0, 21.65);
    EXPECT_DOUBLE_EQ(reduce_to_target(s, 1, {Bit::zero, Bit::zero}, 0.0).effective_bias_mhz, 43.3);
    EXPECT_DOUBLE_EQ(reduce_to_target(s, 1, {Bit::one, Bit::zero}, 0.0).effective_bias_mhz, 0.0);
    EXPECT_DOUBLE_EQ(reduce_to_target(s, 1, {Bit::one, Bit::one}, 0.0).effective_bias_mhz, -43.3);
    EXPECT_DOUBLE_EQ(reduce_to_target(s, 0, {std::nullopt, Bit::zero}, 21.65).effective_bias_mhz, 43.3);
    EXPECT_DOUBLE_EQ(reduce_to_target(s, 2, {Bit::one, std::nullopt}, 21.65).effective_bias_mhz, 0.0);
    EXPECT_THROW(reduce_to_target(s, 0, {Bit::zero, Bit::zero}, 0.0), PreconditionError);
    EXPECT_THROW(reduce_to_target(s, 1, {std::nullopt, Bit::zero}, 0.0), PreconditionError);
    EXPECT_THROW(reduce_to_target(s, 3, {Bit::zero, std::nullopt}, 0.0), PreconditionError);
}

TEST(TwoLevel, HamiltonianMatrix) {
    const auto h = two_level_hamiltonian({2.0, 3.0});
    EXPECT_EQ(h.matrix()(0, 0), Complex(3.0));
    EXPECT_EQ(h.matrix()(1, 1), Complex(-3.0));
    EXPECT_EQ(h.matrix()(0, 1), Complex(2.0));
    EXPECT_EQ(h.matrix()(1, 0), Complex(2.0));
}

TEST(Basis, QubitZeroIsMostSignificant) {
    EXPECT_EQ(basis_bit(0b100, 0, 3), 1);
    EXPECT_EQ(basis_bit(0b100, 2, 3), 0);
    EXPECT_EQ(basis_bit(0b001, 2, 3), 1);
    EXPECT_EQ(z_sign(Bit::zero), 1);
    EXPECT_EQ(z_sign(Bit::one), -1);
}
