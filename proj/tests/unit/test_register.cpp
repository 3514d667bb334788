#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "../oracle/oracle.hpp"
#include "../support/random.hpp"
#include "nmlab/register.hpp"

using namespace nmlab;

TEST(Circuit, MatchesBitLevelSimulation) {
  EXPECT_LT(max_abs_diff(circuit_unitary(CircuitVariant::SwapTerminated).mat(),
                         oracle::circuit_matrix(oracle::swap_terminated())),
            1e-14);
  EXPECT_LT(max_abs_diff(circuit_unitary(CircuitVariant::OriginalBbc).mat(),
                         oracle::circuit_matrix(oracle::original_bbc())),
            1e-14);
  EXPECT_EQ(gate_sequence(CircuitVariant::SwapTerminated).size(), 8u);
  EXPECT_EQ(gate_sequence(CircuitVariant::OriginalBbc).size(), 6u);
}

TEST(Circuit, EachGateMatchesOracle) {
  const auto seq = gate_sequence(CircuitVariant::SwapTerminated);
  const auto& ref = oracle::swap_terminated();
  for (std::size_t k = 0; k < seq.size(); ++k) {
    EXPECT_LT(max_abs_diff(gate_unitary(seq[k]).mat(), oracle::circuit_matrix({ref[k]})), 1e-14)
        << seq[k].label();
    EXPECT_EQ(seq[k].index, static_cast<int>(k) + 1);
  }
}

TEST(Circuit, BlocksCompose) {
  const auto b = circuit_blocks();
  EXPECT_LT(max_abs_diff((b.u3 * b.u2 * b.u1).mat(), circuit_unitary(CircuitVariant::SwapTerminated).mat()),
            1e-14);
  EXPECT_LT(max_abs_diff(b.u1.mat(), oracle::circuit_matrix(oracle::swap_terminated(), 2)), 1e-14);
}

TEST(Circuit, TeleportsEveryInput) {
  const UnitaryOp u = circuit_unitary(CircuitVariant::SwapTerminated);
  for (int rep = 0; rep < 10; ++rep) {
    const CVec psi = testing_support::random_ket(2);
    CVec bell = CVec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const CVec out = u.mat() * kron(psi, bell);
    const CMat rho_s = oracle::reduce_to(out * out.adjoint(), 0);
    EXPECT_LT(max_abs_diff(rho_s, psi * psi.adjoint()), 1e-12);
  }
}

TEST(Werner, MatchesExplicitEntries) {
  for (double p : {0.0, 0.2, 0.5, 1.0}) {
    EXPECT_LT(max_abs_diff(werner(WernerParam(p)).mat(), oracle::werner(p)), 1e-15);
  }
  EXPECT_THROW(WernerParam(-0.1), std::invalid_argument);
  EXPECT_THROW(WernerParam(1.1), std::invalid_argument);
}

TEST(BellBasis, Orthonormal) {
  const auto b = bell_basis();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_NEAR(std::abs(b[i].dot(b[j])), i == j ? 1.0 : 0.0, 1e-15);
}

TEST(InputState, Parameterizations) {
  EXPECT_LT(max_abs_diff(InputState::from_alpha(1.0).ket(), CVec::Unit(2, 0)), 1e-15);
  EXPECT_LT(max_abs_diff(InputState::one().ket(), CVec::Unit(2, 1)), 1e-15);
  EXPECT_THROW(InputState::from_alpha(1.2), std::invalid_argument);
  const auto s = InputState::from_bloch(1.1, 2.3);
  EXPECT_NEAR(std::abs(s.ket().dot(s.antipode().ket())), 0.0, 1e-15);
  EXPECT_LT(max_abs_diff(s.ket(), oracle::bloch(1.1, 2.3)), 1e-15);
  EXPECT_NEAR(std::abs(InputState::plus().ket()(1)), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Propagator, BlockEndpointsAndRoots) {
  const Propagator prop(DynamicsScheme::block());
  const CMat u = circuit_unitary(CircuitVariant::SwapTerminated).mat();
  EXPECT_LT(max_abs_diff(prop.at(0.0).mat(), CMat::Identity(8, 8)), 1e-12);
  EXPECT_LT(max_abs_diff(prop.at(1.0).mat(), u), 1e-12);
  EXPECT_LT(max_abs_diff(prop.at(0.5).mat() * prop.at(0.5).mat(), u), 1e-12);
  for (double t : {0.1, 0.37, 0.8}) {
    EXPECT_LT(max_abs_diff(prop.at(t).mat(), oracle::power(u, t)), 1e-10) << t;
  }
  EXPECT_THROW(prop.at(1.01), std::invalid_argument);
  EXPECT_THROW(prop.at(-0.01), std::invalid_argument);
}

TEST(Propagator, GateByGateMatchesOracle) {
  for (auto variant : {CircuitVariant::SwapTerminated, CircuitVariant::OriginalBbc}) {
    const auto& gates = variant == CircuitVariant::SwapTerminated ? oracle::swap_terminated()
                                                                  : oracle::original_bbc();
    const Propagator prop(DynamicsScheme::gates(variant));
    for (double t = 0.0; t <= static_cast<double>(gates.size()) + 1e-12; t += 0.25) {
      EXPECT_LT(max_abs_diff(prop.at(t).mat(), oracle::gates_propagator(gates, t)), 1e-10) << t;
    }
  }
}

TEST(JointState, MatchesOracleEvolution) {
  const auto psi = InputState::from_bloch(0.7, 1.9);
  for (double t : {0.0, 0.3, 1.0}) {
    const UnitaryOp u = propagator(DynamicsScheme::block(), t);
    const CMat ref = oracle::evolve(u.mat(), oracle::product(psi.density().mat(), oracle::werner(0.4)));
    EXPECT_LT(max_abs_diff(joint_state(psi, WernerParam(0.4), u).mat(), ref), 1e-14);
  }
}

TEST(ObservedMap, MatchesOracleForEveryWire) {
  const UnitaryOp u = propagator(DynamicsScheme::gates(), 5.5);
  for (Wire w : {Wire::S, Wire::E1, Wire::E2}) {
    const Superoperator m = observed_map(u, WernerParam(0.65), w);
    EXPECT_LT(max_abs_diff(m.mat(), oracle::observed_superop(u.mat(), 0.65, int(wire_index(w)))), 1e-13)
        << to_string(w);
  }
}

TEST(SystemMap, EndOfBlockIsDepolarizing) {
  for (double p : {0.0, 0.3, 1.0}) {
    const Superoperator m = system_map(DynamicsScheme::block(), WernerParam(p), 1.0);
    for (int rep = 0; rep < 5; ++rep) {
      const CMat rho = testing_support::random_density(2);
      EXPECT_LT(max_abs_diff(m.apply(rho), oracle::depolarize(rho, p)), 1e-12);
    }
  }
}

TEST(E2State, MatchesOriginalCircuit) {
  const auto psi = InputState::from_bloch(1.2, 0.4);
  const CMat u = oracle::gates_propagator(oracle::original_bbc(), 6.0);
  const CMat ref = oracle::reduce_to(oracle::evolve(u, oracle::product(psi.density().mat(), oracle::werner(0.7))), 2);
  EXPECT_LT(max_abs_diff(e2_reduced_state(psi, WernerParam(0.7), 6.0).mat(), ref), 1e-13);
}
