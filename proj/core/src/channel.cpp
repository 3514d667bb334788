#include "nmlab/channel.hpp"

#include <cmath>

namespace nmlab {

namespace {

void check_alpha(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
}

}  // namespace

const CMat& BellSandwichTable::at(BellLabel b, int j, int k) const {
  if (j < 0 || j > 1 || k < 0 || k > 1) throw std::out_of_range("BellSandwichTable: bit index");
  return entries_[static_cast<std::size_t>(b)][static_cast<std::size_t>(2 * j + k)];
}

BellSandwichTable bell_sandwich_table(const UnitaryOp& u) {
  if (u.dim() != 8) throw std::invalid_argument("bell_sandwich_table: expected an 8x8 unitary");
  const auto bell = bell_basis();
  std::array<std::array<CMat, 4>, 4> entries;
  for (std::size_t b = 0; b < 4; ++b) {
    for (Index jk = 0; jk < 4; ++jk) {
      // Row block s' with E1E2 = |jk>, column combination over the Bell ket.
      CMat v = CMat::Zero(2, 2);
      for (Index out = 0; out < 2; ++out) {
        for (Index in = 0; in < 2; ++in) {
          for (Index env = 0; env < 4; ++env) {
            v(out, in) += u.mat()(4 * out + jk, 4 * in + env) * bell[b](env);
          }
        }
      }
      entries[b][static_cast<std::size_t>(jk)] = std::move(v);
    }
  }
  return BellSandwichTable(std::move(entries));
}

BellSandwichTable expected_bell_sandwich_table() {
  const Complex i(0.0, 1.0);
  const CMat id = pauli::identity() / 2.0;
  const CMat z = pauli::z() / 2.0;
  const CMat x = pauli::x() / 2.0;
  const CMat iy = i * pauli::y() / 2.0;
  return BellSandwichTable({{
      {id, id, id, id},
      {z, CMat(-z), z, CMat(-z)},
      {x, x, CMat(-x), CMat(-x)},
      {CMat(-iy), iy, iy, CMat(-iy)},
  }});
}

CMat apply_bell_sandwich(const BellSandwichTable& table, const CMat& rho, WernerParam p) {
  const double q = p.value();
  CMat out = CMat::Zero(2, 2);
  for (int b = 0; b < 4; ++b) {
    const double weight = b == 0 ? (1.0 + 3.0 * q) / 4.0 : (1.0 - q) / 4.0;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const CMat& v = table.at(static_cast<BellLabel>(b), j, k);
        out += weight * v * rho * v.adjoint();
      }
    }
  }
  return out;
}

CMat KrausSet::completeness() const {
  CMat sum = CMat::Zero(2, 2);
  for (const auto& k : ops) sum += k.adjoint() * k;
  return sum;
}

KrausSet kraus_set(WernerParam p) {
  const double q = p.value();
  const double c0 = std::sqrt((1.0 + 3.0 * q) / 4.0);
  const double c = std::sqrt((1.0 - q) / 4.0);
  return KrausSet{{c0 * pauli::identity(), c * pauli::z(), c * pauli::x(), c * pauli::y()}, p};
}

DensityMatrix apply_kraus(const KrausSet& k, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("apply_kraus: expected a qubit state");
  CMat out = CMat::Zero(2, 2);
  for (const auto& op : k.ops) out += op * rho.mat() * op.adjoint();
  return DensityMatrix(out);
}

DensityMatrix apply_effective_channel(const DensityMatrix& rho, WernerParam p) {
  return apply_kraus(kraus_set(p), rho);
}

double output_fidelity(double alpha, WernerParam p) {
  check_alpha(alpha);
  const InputState psi = InputState::from_alpha(alpha);
  const DensityMatrix out = apply_effective_channel(psi.density(), p);
  return (psi.ket().adjoint() * out.mat() * psi.ket())(0, 0).real();
}

double distance_after_block1(double a1, double a2) {
  check_alpha(a1);
  check_alpha(a2);
  return std::abs(a1 * a1 - a2 * a2);
}

double final_distance(double a1, double a2, WernerParam p) {
  check_alpha(a1);
  check_alpha(a2);
  return p.value() * std::abs(a1 * std::sqrt(1.0 - a2 * a2) - a2 * std::sqrt(1.0 - a1 * a1));
}

}  // namespace nmlab
