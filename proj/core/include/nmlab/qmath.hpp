#pragma once

// Dense complex linear algebra and quantum-information primitives for the
// small (dim <= 64) operators that appear in a three-qubit register.
//
// Conventions used throughout nmlab:
//   * Tensor products are ordered by wire position; the first wire is the
//     most significant factor of the composite index.
//   * Operators are vectorized by column stacking: vec(|i><j|) has its single
//     nonzero entry at index j*d + i.
//   * Entropies are measured in bits.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nmlab {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kEigenClampTol = 1e-12;
inline constexpr double kPinvRelTol = 1e-10;

/// Thrown when a regularized inverse discards every singular value.
class SingularMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hermitian, unit-trace, positive semidefinite matrix. Construction validates
/// the three properties at `tol` and throws std::invalid_argument otherwise.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMat mat, double tol = kStructuralTol);

  static DensityMatrix from_ket(const CVec& ket);
  static DensityMatrix maximally_mixed(Index dim);

  const CMat& mat() const noexcept { return mat_; }
  Index dim() const noexcept { return mat_.rows(); }

 private:
  CMat mat_;
};

class UnitaryOp {
 public:
  explicit UnitaryOp(CMat mat, double tol = kStructuralTol);

  static UnitaryOp identity(Index dim);

  const CMat& mat() const noexcept { return mat_; }
  Index dim() const noexcept { return mat_.rows(); }
  UnitaryOp adjoint() const;

  /// Operator product; `a * b` applies b first.
  friend UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b);

 private:
  struct Unchecked {};
  UnitaryOp(CMat mat, Unchecked) : mat_(std::move(mat)) {}
  CMat mat_;
};

class HermitianOp {
 public:
  explicit HermitianOp(CMat mat, double tol = kStructuralTol);
  const CMat& mat() const noexcept { return mat_; }
  Index dim() const noexcept { return mat_.rows(); }

 private:
  CMat mat_;
};

/// Linear map on d x d operators, stored as a d^2 x d^2 matrix acting on
/// column-stacked vectors.
class Superoperator {
 public:
  Superoperator(Index d, CMat mat);

  static Superoperator identity(Index d);

  Index d() const noexcept { return d_; }
  const CMat& mat() const noexcept { return mat_; }

  CMat apply(const CMat& op) const;
  /// `a * b` applies b first.
  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

 private:
  Index d_;
  CMat mat_;
};

/// Per-wire dimensions of a tensor-product register. Wire 0 is the most
/// significant factor. For the teleportation register the wires are
/// [S, E1, E2] so the basis index is b = 4*s + 2*e1 + e2.
class RegisterLayout {
 public:
  explicit RegisterLayout(std::vector<Index> dims);

  static RegisterLayout qubits(std::size_t n);
  /// The three-qubit [S, E1, E2] register.
  static RegisterLayout teleportation();

  const std::vector<Index>& dims() const noexcept { return dims_; }
  std::size_t wires() const noexcept { return dims_.size(); }
  Index total_dim() const noexcept;
  Index dim_of(const std::vector<std::size_t>& subset) const;

 private:
  std::vector<Index> dims_;
};

using WireSet = std::vector<std::size_t>;

CMat kron(const CMat& a, const CMat& b);
CVec kron(const CVec& a, const CVec& b);

/// Reduced operator on `keep`. Works on any operator (not only states), so it
/// is also used on Choi matrices and unnormalized conditionals.
CMat partial_trace(const CMat& op, const RegisterLayout& layout, const WireSet& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const RegisterLayout& layout,
                            const WireSet& keep);

CMat partial_transpose(const CMat& op, const RegisterLayout& layout, const WireSet& side);
CMat partial_transpose(const DensityMatrix& rho, const RegisterLayout& layout,
                       const WireSet& side);

/// Reorders the tensor factors so that wire order[k] becomes factor k.
/// `order` must be a permutation of all wires.
CMat permute_wires(const CMat& op, const RegisterLayout& layout, const WireSet& order);

/// Sum of singular values.
double trace_norm(const CMat& a);
/// Trace norm of a Hermitian matrix, via its eigenvalues.
double trace_norm_hermitian(const CMat& a);

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2);
/// Same as above without validating the arguments as states.
double trace_distance(const CMat& r1, const CMat& r2);

/// Von Neumann entropy in bits. Eigenvalues below kEigenClampTol contribute 0.
double vn_entropy(const CMat& rho);
double vn_entropy(const DensityMatrix& rho);

/// S(A) + S(B) - S(AB) for a layout with exactly two wires.
double mutual_information(const CMat& rho_ab, const RegisterLayout& layout);
double mutual_information(const DensityMatrix& rho_ab, const RegisterLayout& layout);

/// Spectral decomposition of a unitary with principal eigenphases in (-pi, pi].
/// Built once and reused for every fractional power along a trajectory.
class UnitarySpectrum {
 public:
  explicit UnitarySpectrum(const UnitaryOp& u);

  UnitaryOp power(double t) const;
  const Eigen::VectorXd& phases() const noexcept { return phases_; }

 private:
  CMat basis_;
  Eigen::VectorXd phases_;
};

/// Principal fractional power u^t. t = 0 gives the identity and t = 1 gives u.
UnitaryOp unitary_fractional_power(const UnitaryOp& u, double t);

using OperatorMap = std::function<CMat(const CMat&)>;

Superoperator superop_from_action(const OperatorMap& apply, Index d);

/// (map (x) id)(|phi+><phi+|) with |phi+> = sum_i |ii>/sqrt(d); the system
/// factor comes first.
CMat choi_state(const Superoperator& s);

struct RegularizedInverse {
  Superoperator inverse;
  bool singular = false;
  Index discarded = 0;
};

/// SVD pseudo-inverse dropping singular values below rel_tol * sigma_max.
/// Throws SingularMapError when nothing survives.
RegularizedInverse regularized_inverse(const Superoperator& s, double rel_tol = kPinvRelTol);

namespace pauli {
CMat identity();
CMat x();
CMat y();
CMat z();
}  // namespace pauli

/// Normalized qubit ket cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
CVec bloch_ket(double theta, double phi);

/// Largest entrywise magnitude of a - b.
double max_abs_diff(const CMat& a, const CMat& b);

}  // namespace nmlab
