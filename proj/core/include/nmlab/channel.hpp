#pragma once

// Closed-form description of the teleportation circuit as a channel on S:
// Bell-sandwich operators, the Kraus set of the resulting depolarizing map,
// fidelity, and trace distances between outputs.

#include <array>

#include "nmlab/qmath.hpp"
#include "nmlab/register.hpp"

namespace nmlab {

/// The 16 operators <jk|_{E1E2} U |B>_{E1E2} acting on S, one per Bell label
/// and pair of output bits (j, k).
class BellSandwichTable {
 public:
  explicit BellSandwichTable(std::array<std::array<CMat, 4>, 4> entries)
      : entries_(std::move(entries)) {}

  /// Operator for Bell label `b` and output bits j, k.
  const CMat& at(BellLabel b, int j, int k) const;

 private:
  // entries_[bell][2*j + k]
  std::array<std::array<CMat, 4>, 4> entries_;
};

BellSandwichTable bell_sandwich_table(const UnitaryOp& u);

/// The reference values of the sandwich operators for the SWAP-terminated
/// circuit, written out from the Pauli matrices.
BellSandwichTable expected_bell_sandwich_table();

/// rho -> (1+3p)/4 sum_jk V^{phi+} rho V^{phi+ dag} + (1-p)/4 sum' V rho V^dag.
CMat apply_bell_sandwich(const BellSandwichTable& table, const CMat& rho, WernerParam p);

struct KrausSet {
  std::array<CMat, 4> ops;
  WernerParam p;

  /// sum_k K^dag K.
  CMat completeness() const;
};

/// {sqrt((1+3p)/4) I, sqrt((1-p)/4) Z, sqrt((1-p)/4) X, sqrt((1-p)/4) Y}.
KrausSet kraus_set(WernerParam p);

DensityMatrix apply_kraus(const KrausSet& k, const DensityMatrix& rho);

/// Depolarizing action p rho + (1-p) I/2 through the Kraus set.
DensityMatrix apply_effective_channel(const DensityMatrix& rho, WernerParam p);

/// <psi(alpha)| Phi_p(|psi(alpha)><psi(alpha)|) |psi(alpha)>; equals (1+p)/2.
double output_fidelity(double alpha, WernerParam p);

/// Trace distance between the S states after the first block: |a1^2 - a2^2|.
double distance_after_block1(double a1, double a2);

/// Trace distance between the final S states: p |a1 sqrt(1-a2^2) - a2 sqrt(1-a1^2)|.
double final_distance(double a1, double a2, WernerParam p);

}  // namespace nmlab
