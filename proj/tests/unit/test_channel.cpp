#include <cmath>

#include <gtest/gtest.h>

#include "../oracle/oracle.hpp"
#include "../support/random.hpp"
#include "nmlab/channel.hpp"

using namespace nmlab;

namespace {

// <out| V_{b,jk} |in>: amplitude on S of |out> jk after running the circuit on
// |in> (x) |b>, read off the state vector.
CMat oracle_sandwich(int b, int j, int k) {
  const auto bell = bell_basis();
  CMat v(2, 2);
  for (int in = 0; in < 2; ++in) {
    CVec psi = CVec::Zero(8);
    for (int e = 0; e < 4; ++e) psi(4 * in + e) = bell[static_cast<std::size_t>(b)](e);
    const CVec out = oracle::run(oracle::swap_terminated(), psi);
    for (int o = 0; o < 2; ++o) v(o, in) = out(4 * o + 2 * j + k);
  }
  return v;
}

}  // namespace

TEST(BellSandwich, MatchesStateVectorAndReferenceTable) {
  const auto table = bell_sandwich_table(circuit_unitary(CircuitVariant::SwapTerminated));
  const auto ref = expected_bell_sandwich_table();
  for (int b = 0; b < 4; ++b)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const auto label = static_cast<BellLabel>(b);
        EXPECT_LT(max_abs_diff(table.at(label, j, k), oracle_sandwich(b, j, k)), 1e-14);
        EXPECT_LT(max_abs_diff(table.at(label, j, k), ref.at(label, j, k)), 1e-12)
            << to_string(label) << " " << j << k;
      }
}

TEST(BellSandwich, ReproducesDepolarizingChannel) {
  const auto table = bell_sandwich_table(circuit_unitary(CircuitVariant::SwapTerminated));
  for (double p : {0.0, 0.4, 1.0}) {
    const CMat rho = testing_support::random_density(2);
    EXPECT_LT(max_abs_diff(apply_bell_sandwich(table, rho, WernerParam(p)), oracle::depolarize(rho, p)), 1e-14);
  }
}

TEST(Kraus, CompleteAndDepolarizing) {
  for (int q = 0; q <= 10; ++q) {
    const WernerParam p(q / 10.0);
    const auto k = kraus_set(p);
    EXPECT_LT(max_abs_diff(k.completeness(), CMat::Identity(2, 2)), 1e-15);
    const CMat rho = testing_support::random_density(2);
    EXPECT_LT(max_abs_diff(apply_kraus(k, DensityMatrix(rho)).mat(), oracle::depolarize(rho, p.value())), 1e-15);
    EXPECT_LT(max_abs_diff(apply_effective_channel(DensityMatrix(rho), p).mat(),
                           oracle::depolarize(rho, p.value())),
              1e-15);
  }
}

TEST(Fidelity, LinearInP) {
  for (int a = 0; a <= 10; ++a)
    for (int q = 0; q <= 10; ++q)
      EXPECT_NEAR(output_fidelity(a / 10.0, WernerParam(q / 10.0)), (1.0 + q / 10.0) / 2.0, 1e-14);
  EXPECT_THROW(output_fidelity(1.5, WernerParam(0.5)), std::invalid_argument);
}

TEST(ClosedForms, MatchSimulatedDistances) {
  for (double a1 : {0.0, 0.3, 0.8, 1.0})
    for (double a2 : {0.1, 0.6, 1.0})
      for (double p : {0.0, 0.5, 1.0}) {
        const CMat r1 = oracle::ket_density(oracle::alpha_ket(a1));
        const CMat r2 = oracle::ket_density(oracle::alpha_ket(a2));
        const CMat u1 = oracle::circuit_matrix(oracle::swap_terminated(), 2);
        const CMat u = oracle::circuit_matrix(oracle::swap_terminated());
        const auto at = [&](const CMat& v, const CMat& r) {
          return oracle::reduce_to(oracle::evolve(v, oracle::product(r, oracle::werner(p))), 0);
        };
        EXPECT_NEAR(distance_after_block1(a1, a2), oracle::qubit_distance(at(u1, r1), at(u1, r2)), 1e-14);
        EXPECT_NEAR(final_distance(a1, a2, WernerParam(p)), oracle::qubit_distance(at(u, r1), at(u, r2)), 1e-14);
      }
}
