#include "nmlab/register.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nmlab {

namespace {

constexpr double kDomainSlack = 1e-12;

CMat hadamard_2x2() { return (pauli::x() + pauli::z()) / std::numbers::sqrt2; }

CMat embed_single(const CMat& g, Wire w, const RegisterLayout& layout) {
  CMat out = CMat::Identity(1, 1);
  for (std::size_t k = 0; k < layout.wires(); ++k) {
    const Index d = layout.dims()[k];
    out = kron(out, k == wire_index(w) ? g : CMat(CMat::Identity(d, d)));
  }
  return out;
}

// Permutation matrix acting on basis states by a digit-level rule.
template <typename Rule>
CMat basis_permutation(const RegisterLayout& layout, Rule rule) {
  const Index total = layout.total_dim();
  const auto& dims = layout.dims();
  CMat out = CMat::Zero(total, total);
  std::vector<Index> digits(dims.size());
  for (Index b = 0; b < total; ++b) {
    Index rest = b;
    for (std::size_t w = dims.size(); w-- > 0;) {
      digits[w] = rest % dims[w];
      rest /= dims[w];
    }
    rule(digits);
    Index image = 0;
    for (std::size_t w = 0; w < dims.size(); ++w) image = image * dims[w] + digits[w];
    out(image, b) = 1.0;
  }
  return out;
}

void validate_gate(const GateSpec& g, const RegisterLayout& layout) {
  const auto in_range = [&](Wire w) { return wire_index(w) < layout.wires(); };
  if (!in_range(g.first)) throw std::invalid_argument("gate_unitary: wire outside layout");
  if (g.kind != GateKind::Hadamard) {
    if (!in_range(g.second)) throw std::invalid_argument("gate_unitary: wire outside layout");
    if (g.first == g.second) throw std::invalid_argument("gate_unitary: wires must be distinct");
  }
  for (Index d : layout.dims()) {
    if (d != 2) throw std::invalid_argument("gate_unitary: layout must consist of qubits");
  }
}

}  // namespace

std::string to_string(Wire w) {
  switch (w) {
    case Wire::S: return "S";
    case Wire::E1: return "E1";
    case Wire::E2: return "E2";
  }
  return "?";
}

GateSpec GateSpec::cnot(Wire control, Wire target, int index) {
  return {GateKind::Cnot, control, target, index};
}
GateSpec GateSpec::hadamard(Wire wire, int index) { return {GateKind::Hadamard, wire, wire, index}; }
GateSpec GateSpec::swap(Wire a, Wire b, int index) { return {GateKind::Swap, a, b, index}; }

std::string GateSpec::label() const {
  switch (kind) {
    case GateKind::Cnot: return "CNOT(" + to_string(first) + "," + to_string(second) + ")";
    case GateKind::Hadamard: return "H(" + to_string(first) + ")";
    case GateKind::Swap: return "SWAP(" + to_string(first) + "," + to_string(second) + ")";
  }
  return "?";
}

std::string to_string(CircuitVariant v) {
  return v == CircuitVariant::SwapTerminated ? "swap" : "bbc";
}

std::string to_string(Interpolation i) { return i == Interpolation::BlockLog ? "block" : "gates"; }

double DynamicsScheme::t_end() const noexcept {
  if (interpolation == Interpolation::BlockLog) return 1.0;
  return variant == CircuitVariant::SwapTerminated ? 8.0 : 6.0;
}

std::string DynamicsScheme::name() const {
  return to_string(interpolation) + "/" + to_string(variant);
}

WernerParam::WernerParam(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("WernerParam: p must lie in [0, 1]");
}

InputState::InputState(CVec ket, double theta, double phi)
    : ket_(std::move(ket)), theta_(theta), phi_(phi) {}

InputState InputState::from_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("InputState: alpha must lie in [0, 1]");
  }
  CVec v(2);
  v << alpha, std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  return InputState(std::move(v), 2.0 * std::acos(alpha), 0.0);
}

InputState InputState::from_bloch(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw std::invalid_argument("InputState: theta must lie in [0, pi]");
  }
  if (!std::isfinite(phi)) throw std::invalid_argument("InputState: phi must be finite");
  return InputState(bloch_ket(theta, phi), theta, phi);
}

InputState InputState::plus() { return from_bloch(std::numbers::pi / 2.0, 0.0); }

InputState InputState::antipode() const {
  CVec v(2);
  v << -std::conj(ket_(1)), std::conj(ket_(0));
  double phi = phi_ + std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi -= 2.0 * std::numbers::pi;
  return InputState(std::move(v), std::numbers::pi - theta_, phi);
}

UnitaryOp gate_unitary(const GateSpec& g, const RegisterLayout& layout) {
  validate_gate(g, layout);
  switch (g.kind) {
    case GateKind::Hadamard:
      return UnitaryOp(embed_single(hadamard_2x2(), g.first, layout));
    case GateKind::Cnot: {
      const auto c = wire_index(g.first);
      const auto t = wire_index(g.second);
      return UnitaryOp(basis_permutation(layout, [&](std::vector<Index>& d) {
        if (d[c] == 1) d[t] ^= 1;
      }));
    }
    case GateKind::Swap: {
      const auto a = wire_index(g.first);
      const auto b = wire_index(g.second);
      return UnitaryOp(
          basis_permutation(layout, [&](std::vector<Index>& d) { std::swap(d[a], d[b]); }));
    }
  }
  throw std::invalid_argument("gate_unitary: unknown gate kind");
}

std::vector<GateSpec> gate_sequence(CircuitVariant variant) {
  std::vector<GateSpec> seq{
      GateSpec::cnot(Wire::S, Wire::E1, 1), GateSpec::hadamard(Wire::S, 2),
      GateSpec::cnot(Wire::E1, Wire::E2, 3), GateSpec::hadamard(Wire::E2, 4)};
  if (variant == CircuitVariant::SwapTerminated) {
    seq.push_back(GateSpec::swap(Wire::E1, Wire::E2, 5));
    seq.push_back(GateSpec::cnot(Wire::S, Wire::E1, 6));
    seq.push_back(GateSpec::hadamard(Wire::E1, 7));
    seq.push_back(GateSpec::swap(Wire::S, Wire::E1, 8));
  } else {
    seq.push_back(GateSpec::cnot(Wire::S, Wire::E2, 5));
    seq.push_back(GateSpec::hadamard(Wire::E2, 6));
  }
  return seq;
}

UnitaryOp circuit_unitary(CircuitVariant variant) {
  UnitaryOp u = UnitaryOp::identity(8);
  for (const auto& g : gate_sequence(variant)) u = gate_unitary(g) * u;
  return u;
}

CircuitBlocks circuit_blocks() {
  const auto seq = gate_sequence(CircuitVariant::SwapTerminated);
  const auto product = [&](std::size_t from, std::size_t to) {
    UnitaryOp u = UnitaryOp::identity(8);
    for (std::size_t k = from; k < to; ++k) u = gate_unitary(seq[k]) * u;
    return u;
  };
  return {product(0, 2), product(2, 5), product(5, 8)};
}

DensityMatrix werner(WernerParam p) {
  const auto bell = bell_basis();
  const CVec& phi = bell[0];
  const double q = p.value();
  return DensityMatrix(q * phi * phi.adjoint() + (1.0 - q) / 4.0 * CMat::Identity(4, 4));
}

std::string to_string(BellLabel b) {
  switch (b) {
    case BellLabel::PhiPlus: return "phi+";
    case BellLabel::PhiMinus: return "phi-";
    case BellLabel::PsiPlus: return "psi+";
    case BellLabel::PsiMinus: return "psi-";
  }
  return "?";
}

std::array<CVec, 4> bell_basis() {
  const double r = 1.0 / std::numbers::sqrt2;
  std::array<CVec, 4> out;
  for (auto& v : out) v = CVec::Zero(4);
  out[0](0) = r, out[0](3) = r;
  out[1](0) = r, out[1](3) = -r;
  out[2](1) = r, out[2](2) = r;
  out[3](1) = r, out[3](2) = -r;
  return out;
}

Propagator::Propagator(DynamicsScheme scheme) : scheme_(scheme) {
  if (scheme.interpolation == Interpolation::BlockLog) {
    spectra_.emplace_back(circuit_unitary(scheme.variant));
    return;
  }
  prefix_.push_back(UnitaryOp::identity(8));
  for (const auto& g : gate_sequence(scheme.variant)) {
    const UnitaryOp u = gate_unitary(g);
    spectra_.emplace_back(u);
    prefix_.push_back(u * prefix_.back());
  }
}

UnitaryOp Propagator::at(double t) const {
  if (!(t >= scheme_.t_begin() - kDomainSlack && t <= scheme_.t_end() + kDomainSlack)) {
    throw std::invalid_argument("propagator: t outside the scheme's time domain");
  }
  t = std::clamp(t, scheme_.t_begin(), scheme_.t_end());
  if (scheme_.interpolation == Interpolation::BlockLog) return spectra_.front().power(t);
  if (t == 0.0) return prefix_.front();
  const auto gate = static_cast<std::size_t>(std::ceil(t));  // G_gate is active
  const double s = t - static_cast<double>(gate - 1);
  if (s == 1.0) return prefix_[gate];
  return spectra_[gate - 1].power(s) * prefix_[gate - 1];
}

UnitaryOp propagator(DynamicsScheme scheme, double t) { return Propagator(scheme).at(t); }

DensityMatrix joint_state(const InputState& psi, WernerParam p, const UnitaryOp& u) {
  const CMat rho0 = kron(psi.density().mat(), werner(p).mat());
  const CMat rho = u.mat() * rho0 * u.mat().adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix joint_state(const InputState& psi, WernerParam p, DynamicsScheme scheme, double t) {
  return joint_state(psi, p, propagator(scheme, t));
}

Superoperator observed_map(const UnitaryOp& u, WernerParam p, Wire observed) {
  const CMat w = werner(p).mat();
  const RegisterLayout layout = RegisterLayout::teleportation();
  const CMat& um = u.mat();
  return superop_from_action(
      [&](const CMat& rho_s) {
        return partial_trace(CMat(um * kron(rho_s, w) * um.adjoint()), layout,
                             {wire_index(observed)});
      },
      2);
}

Superoperator system_map(DynamicsScheme scheme, WernerParam p, double t) {
  return observed_map(propagator(scheme, t), p, Wire::S);
}

DensityMatrix e2_reduced_state(const InputState& psi, WernerParam p, double t) {
  const DensityMatrix joint =
      joint_state(psi, p, DynamicsScheme::gates(CircuitVariant::OriginalBbc), t);
  return partial_trace(joint, RegisterLayout::teleportation(), {wire_index(Wire::E2)});
}

}  // namespace nmlab
