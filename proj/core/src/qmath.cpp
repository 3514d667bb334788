#include "nmlab/qmath.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nmlab {

namespace {

void require_square(const CMat& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

bool is_hermitian(const CMat& m, double tol) {
  return max_abs_diff(m, m.adjoint()) <= tol;
}

// Mixed-radix digits of every composite index, most significant wire first.
std::vector<std::vector<Index>> index_digits(const RegisterLayout& layout) {
  const auto& dims = layout.dims();
  const Index total = layout.total_dim();
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(total),
                                      std::vector<Index>(dims.size()));
  for (Index b = 0; b < total; ++b) {
    Index rest = b;
    for (std::size_t w = dims.size(); w-- > 0;) {
      out[static_cast<std::size_t>(b)][w] = rest % dims[w];
      rest /= dims[w];
    }
  }
  return out;
}

Index compose(const std::vector<Index>& digits, const std::vector<Index>& dims,
              const WireSet& wires) {
  Index b = 0;
  for (std::size_t w : wires) b = b * dims[w] + digits[w];
  return b;
}

void validate_subset(const RegisterLayout& layout, const WireSet& subset, const char* what) {
  if (subset.empty()) throw std::invalid_argument(std::string(what) + ": wire subset is empty");
  std::vector<bool> seen(layout.wires(), false);
  for (std::size_t w : subset) {
    if (w >= layout.wires()) {
      throw std::invalid_argument(std::string(what) + ": wire index out of range");
    }
    if (seen[w]) throw std::invalid_argument(std::string(what) + ": duplicate wire in subset");
    seen[w] = true;
  }
}

void validate_layout_dim(const CMat& op, const RegisterLayout& layout, const char* what) {
  require_square(op, what);
  if (op.rows() != layout.total_dim()) {
    throw std::invalid_argument(std::string(what) + ": operator dimension does not match layout");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain types

DensityMatrix::DensityMatrix(CMat mat, double tol) : mat_(std::move(mat)) {
  require_square(mat_, "DensityMatrix");
  if (!is_hermitian(mat_, tol)) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(mat_.trace() - Complex(1.0, 0.0)) > tol) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_ket(const CVec& ket) {
  const double n = ket.norm();
  if (n == 0.0) throw std::invalid_argument("DensityMatrix::from_ket: zero vector");
  const CVec v = ket / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(CMat::Identity(dim, dim) / static_cast<double>(dim));
}

UnitaryOp::UnitaryOp(CMat mat, double tol) : mat_(std::move(mat)) {
  require_square(mat_, "UnitaryOp");
  const CMat id = CMat::Identity(mat_.rows(), mat_.cols());
  if (max_abs_diff(mat_.adjoint() * mat_, id) > tol) {
    throw std::invalid_argument("UnitaryOp: matrix is not unitary");
  }
}

UnitaryOp UnitaryOp::identity(Index dim) { return UnitaryOp(CMat::Identity(dim, dim), Unchecked{}); }

UnitaryOp UnitaryOp::adjoint() const { return UnitaryOp(mat_.adjoint(), Unchecked{}); }

UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("UnitaryOp product: dimension mismatch");
  return UnitaryOp(a.mat_ * b.mat_, UnitaryOp::Unchecked{});
}

HermitianOp::HermitianOp(CMat mat, double tol) : mat_(std::move(mat)) {
  require_square(mat_, "HermitianOp");
  if (!is_hermitian(mat_, tol)) throw std::invalid_argument("HermitianOp: not Hermitian");
}

Superoperator::Superoperator(Index d, CMat mat) : d_(d), mat_(std::move(mat)) {
  if (d <= 0 || mat_.rows() != d * d || mat_.cols() != d * d) {
    throw std::invalid_argument("Superoperator: matrix must be d^2 x d^2");
  }
}

Superoperator Superoperator::identity(Index d) {
  return Superoperator(d, CMat::Identity(d * d, d * d));
}

CMat Superoperator::apply(const CMat& op) const {
  if (op.rows() != d_ || op.cols() != d_) {
    throw std::invalid_argument("Superoperator::apply: operator dimension mismatch");
  }
  const CVec out = mat_ * Eigen::Map<const CVec>(op.data(), d_ * d_);
  return Eigen::Map<const CMat>(out.data(), d_, d_);
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.d_ != b.d_) throw std::invalid_argument("Superoperator product: dimension mismatch");
  return Superoperator(a.d_, a.mat_ * b.mat_);
}

RegisterLayout::RegisterLayout(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("RegisterLayout: no wires");
  for (Index d : dims_) {
    if (d < 1) throw std::invalid_argument("RegisterLayout: wire dimension must be positive");
  }
}

RegisterLayout RegisterLayout::qubits(std::size_t n) {
  return RegisterLayout(std::vector<Index>(n, 2));
}

RegisterLayout RegisterLayout::teleportation() { return qubits(3); }

Index RegisterLayout::total_dim() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
}

Index RegisterLayout::dim_of(const WireSet& subset) const {
  Index d = 1;
  for (std::size_t w : subset) d *= dims_.at(w);
  return d;
}

// ---------------------------------------------------------------------------
// Tensor structure

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMat partial_trace(const CMat& op, const RegisterLayout& layout, const WireSet& keep) {
  validate_layout_dim(op, layout, "partial_trace");
  validate_subset(layout, keep, "partial_trace");
  WireSet traced;
  for (std::size_t w = 0; w < layout.wires(); ++w) {
    if (std::find(keep.begin(), keep.end(), w) == keep.end()) traced.push_back(w);
  }
  const auto digits = index_digits(layout);
  const auto& dims = layout.dims();
  const Index kd = layout.dim_of(keep);
  CMat out = CMat::Zero(kd, kd);
  const Index total = layout.total_dim();
  for (Index i = 0; i < total; ++i) {
    const auto& di = digits[static_cast<std::size_t>(i)];
    const Index ti = compose(di, dims, traced);
    const Index ki = compose(di, dims, keep);
    for (Index j = 0; j < total; ++j) {
      const auto& dj = digits[static_cast<std::size_t>(j)];
      if (compose(dj, dims, traced) != ti) continue;
      out(ki, compose(dj, dims, keep)) += op(i, j);
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const RegisterLayout& layout,
                            const WireSet& keep) {
  return DensityMatrix(partial_trace(rho.mat(), layout, keep));
}

CMat partial_transpose(const CMat& op, const RegisterLayout& layout, const WireSet& side) {
  validate_layout_dim(op, layout, "partial_transpose");
  validate_subset(layout, side, "partial_transpose");
  const auto digits = index_digits(layout);
  WireSet all(layout.wires());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const Index total = layout.total_dim();
  CMat out(total, total);
  for (Index i = 0; i < total; ++i) {
    for (Index j = 0; j < total; ++j) {
      auto di = digits[static_cast<std::size_t>(i)];
      auto dj = digits[static_cast<std::size_t>(j)];
      for (std::size_t w : side) std::swap(di[w], dj[w]);
      out(compose(di, layout.dims(), all), compose(dj, layout.dims(), all)) = op(i, j);
    }
  }
  return out;
}

CMat partial_transpose(const DensityMatrix& rho, const RegisterLayout& layout,
                       const WireSet& side) {
  return partial_transpose(rho.mat(), layout, side);
}

CMat permute_wires(const CMat& op, const RegisterLayout& layout, const WireSet& order) {
  validate_layout_dim(op, layout, "permute_wires");
  validate_subset(layout, order, "permute_wires");
  if (order.size() != layout.wires()) {
    throw std::invalid_argument("permute_wires: order must list every wire");
  }
  const auto digits = index_digits(layout);
  const Index total = layout.total_dim();
  std::vector<Index> image(static_cast<std::size_t>(total));
  for (Index b = 0; b < total; ++b) {
    image[static_cast<std::size_t>(b)] = compose(digits[static_cast<std::size_t>(b)], layout.dims(), order);
  }
  CMat out(total, total);
  for (Index i = 0; i < total; ++i) {
    for (Index j = 0; j < total; ++j) {
      out(image[static_cast<std::size_t>(i)], image[static_cast<std::size_t>(j)]) = op(i, j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norms and entropies

double trace_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues().sum();
}

double trace_norm_hermitian(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const CMat& r1, const CMat& r2) {
  if (r1.rows() != r2.rows() || r1.cols() != r2.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  return 0.5 * trace_norm_hermitian(r1 - r2);
}

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  return trace_distance(r1.mat(), r2.mat());
}

double vn_entropy(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double lam : es.eigenvalues()) {
    if (lam > kEigenClampTol) s -= lam * std::log2(lam);
  }
  return s;
}

double vn_entropy(const DensityMatrix& rho) { return vn_entropy(rho.mat()); }

double mutual_information(const CMat& rho_ab, const RegisterLayout& layout) {
  if (layout.wires() != 2) {
    throw std::invalid_argument("mutual_information: layout must have exactly two parts");
  }
  return vn_entropy(partial_trace(rho_ab, layout, {0})) +
         vn_entropy(partial_trace(rho_ab, layout, {1})) - vn_entropy(rho_ab);
}

double mutual_information(const DensityMatrix& rho_ab, const RegisterLayout& layout) {
  return mutual_information(rho_ab.mat(), layout);
}

// ---------------------------------------------------------------------------
// Fractional powers

UnitarySpectrum::UnitarySpectrum(const UnitaryOp& u) {
  // A unitary is normal, so its complex Schur form is diagonal and the Schur
  // vectors are an orthonormal eigenbasis, including inside degenerate
  // eigenspaces.
  Eigen::ComplexSchur<CMat> schur(u.mat());
  basis_ = schur.matrixU();
  const CMat& tri = schur.matrixT();
  phases_.resize(tri.rows());
  for (Index k = 0; k < tri.rows(); ++k) {
    double theta = std::arg(tri(k, k));
    // Eigenvalue -1 goes to the closed end of (-pi, pi].
    if (theta <= -std::numbers::pi + 1e-9) theta = std::numbers::pi;
    phases_(k) = theta;
  }
}

UnitaryOp UnitarySpectrum::power(double t) const {
  CVec diag(phases_.size());
  for (Index k = 0; k < phases_.size(); ++k) diag(k) = std::polar(1.0, phases_(k) * t);
  return UnitaryOp(basis_ * diag.asDiagonal() * basis_.adjoint(), 1e-8);
}

UnitaryOp unitary_fractional_power(const UnitaryOp& u, double t) {
  return UnitarySpectrum(u).power(t);
}

// ---------------------------------------------------------------------------
// Superoperators

Superoperator superop_from_action(const OperatorMap& apply, Index d) {
  CMat mat(d * d, d * d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      CMat unit = CMat::Zero(d, d);
      unit(i, j) = 1.0;
      const CMat image = apply(unit);
      if (image.rows() != d || image.cols() != d) {
        throw std::invalid_argument("superop_from_action: map changes operator dimension");
      }
      mat.col(j * d + i) = Eigen::Map<const CVec>(image.data(), d * d);
    }
  }
  return Superoperator(d, std::move(mat));
}

CMat choi_state(const Superoperator& s) {
  const Index d = s.d();
  CMat out = CMat::Zero(d * d, d * d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      const CMat image = Eigen::Map<const CMat>(s.mat().col(j * d + i).data(), d, d);
      CMat unit = CMat::Zero(d, d);
      unit(i, j) = 1.0;
      out += kron(image, unit);
    }
  }
  return out / static_cast<double>(d);
}

RegularizedInverse regularized_inverse(const Superoperator& s, double rel_tol) {
  Eigen::JacobiSVD<CMat> svd(s.mat(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rel_tol * sv(0);
  RegularizedInverse out{Superoperator::identity(s.d())};
  Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff && sv(k) > 0.0) {
      inv_sv(k) = 1.0 / sv(k);
    } else {
      ++out.discarded;
    }
  }
  if (out.discarded == sv.size()) {
    throw SingularMapError("regularized_inverse: every singular value is below threshold");
  }
  out.singular = out.discarded > 0;
  out.inverse = Superoperator(
      s.d(), svd.matrixV() * inv_sv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint());
  return out;
}

// ---------------------------------------------------------------------------
// Small helpers

namespace pauli {
CMat identity() { return CMat::Identity(2, 2); }
CMat x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMat y() {
  CMat m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
CMat z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

CVec bloch_ket(double theta, double phi) {
  CVec v(2);
  v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
  return v;
}

double max_abs_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace nmlab
