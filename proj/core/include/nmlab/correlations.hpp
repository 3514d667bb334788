#pragma once

// System-environment correlations across a bipartition: logarithmic
// negativity, projective-measurement classical correlations J(A|B) and the
// corresponding discord D(A|B) = I(A:B) - J(A|B).
//
// With only projective measurements on B, J is a lower bound on the
// POVM-optimized value and the discord an upper bound.

#include <array>
#include <vector>

#include "nmlab/nonmarkov.hpp"
#include "nmlab/qmath.hpp"
#include "nmlab/register.hpp"

namespace nmlab {

/// Rank-1 qubit projectors onto bloch_ket(theta, phi) and its antipode.
struct ProjectiveMeasurement {
  double theta = 0.0;
  double phi = 0.0;

  std::array<CMat, 2> projectors() const;
};

/// Which side of the S | (E1 E2) cut is measured when computing J and D.
enum class MeasuredSide { System, Environment };

struct ClassicalCorrelations {
  double value = 0.0;
  /// Best value on the coarse lattice before refinement.
  double coarse_value = 0.0;
  /// Optimal basis when the measured part is a qubit.
  ProjectiveMeasurement basis;
  /// Optimal basis vectors (columns) for any measured dimension.
  CMat basis_vectors;
};

/// max(0, log2 ||rho^{T_side}||_1), with values below 1e-12 reported as 0.
double log_negativity(const DensityMatrix& rho, const RegisterLayout& layout, const WireSet& side);

/// max over rank-1 projective bases on `measured` of S(rho_A) - sum_i p_i S(rho_A^i),
/// rho_A^i = Tr_B[(I (x) P_i) rho (I (x) P_i)] / p_i. Outcomes with p_i < 1e-12
/// contribute nothing.
///
/// A qubit `measured` part uses the (theta, phi) lattice search of `opt`. A
/// larger measured part runs a deterministic coordinate search over the
/// basis unitary, started from the computational and Bell bases.
ClassicalCorrelations classical_correlations_detail(const DensityMatrix& rho_ab,
                                                    const RegisterLayout& layout,
                                                    const WireSet& measured,
                                                    const OptConfig& opt = {});

double classical_correlations(const DensityMatrix& rho_ab, const RegisterLayout& layout,
                              const WireSet& measured, const OptConfig& opt = {});

double discord(const DensityMatrix& rho_ab, const RegisterLayout& layout, const WireSet& measured,
               const OptConfig& opt = {});

struct CorrelationSample {
  double t = 0.0;
  double p = 0.0;
  double neg = 0.0;
  double discord = 0.0;
  double classical = 0.0;
  double mutual = 0.0;
};

struct CorrelationConfig {
  OptConfig opt;
  MeasuredSide measured = MeasuredSide::System;
};

/// Correlations of one joint register state across S | (E1 E2).
CorrelationSample correlation_sample(const DensityMatrix& joint, double t, double p,
                                     const CorrelationConfig& cfg = {});

std::vector<CorrelationSample> correlation_trajectory(const DynamicsScheme& scheme,
                                                      const InputState& psi, WernerParam p,
                                                      const TimeGrid& grid,
                                                      const CorrelationConfig& cfg = {});

}  // namespace nmlab
