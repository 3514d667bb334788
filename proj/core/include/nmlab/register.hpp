#pragma once

// The three-qubit measurement-free teleportation register: gates, the two
// circuit variants, the Werner resource, input states, and the
// time-parameterized propagators that turn the circuit into a dynamics.

#include <array>
#include <string>
#include <vector>

#include "nmlab/qmath.hpp"

namespace nmlab {

enum class Wire : std::size_t { S = 0, E1 = 1, E2 = 2 };

constexpr std::size_t wire_index(Wire w) noexcept { return static_cast<std::size_t>(w); }
std::string to_string(Wire w);

enum class GateKind { Cnot, Hadamard, Swap };

struct GateSpec {
  GateKind kind;
  Wire first;   // control for CNOT, the only wire for Hadamard
  Wire second;  // target for CNOT; ignored for Hadamard
  int index = 0;

  static GateSpec cnot(Wire control, Wire target, int index = 0);
  static GateSpec hadamard(Wire wire, int index = 0);
  static GateSpec swap(Wire a, Wire b, int index = 0);

  std::string label() const;
};

enum class CircuitVariant { SwapTerminated, OriginalBbc };
enum class Interpolation { BlockLog, GateByGate };

std::string to_string(CircuitVariant v);
std::string to_string(Interpolation i);

struct DynamicsScheme {
  Interpolation interpolation = Interpolation::BlockLog;
  CircuitVariant variant = CircuitVariant::SwapTerminated;

  static DynamicsScheme block(CircuitVariant v = CircuitVariant::SwapTerminated) {
    return {Interpolation::BlockLog, v};
  }
  static DynamicsScheme gates(CircuitVariant v = CircuitVariant::SwapTerminated) {
    return {Interpolation::GateByGate, v};
  }

  double t_begin() const noexcept { return 0.0; }
  /// 1 for block interpolation, the gate count otherwise.
  double t_end() const noexcept;
  std::string name() const;

  friend bool operator==(const DynamicsScheme&, const DynamicsScheme&) = default;
};

/// Werner mixing parameter p in [0, 1].
class WernerParam {
 public:
  explicit WernerParam(double p);
  double value() const noexcept { return p_; }

 private:
  double p_;
};

/// Pure input state of S, either alpha|0> + sqrt(1 - alpha^2)|1> or a point
/// on the Bloch sphere.
class InputState {
 public:
  static InputState from_alpha(double alpha);
  static InputState from_bloch(double theta, double phi);
  static InputState zero() { return from_alpha(1.0); }
  static InputState one() { return from_alpha(0.0); }
  static InputState plus();

  const CVec& ket() const noexcept { return ket_; }
  DensityMatrix density() const { return DensityMatrix::from_ket(ket_); }
  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }
  /// The orthogonal state, i.e. the Bloch-sphere antipode.
  InputState antipode() const;

 private:
  InputState(CVec ket, double theta, double phi);
  CVec ket_;
  double theta_;
  double phi_;
};

UnitaryOp gate_unitary(const GateSpec& g,
                       const RegisterLayout& layout = RegisterLayout::teleportation());

/// SWAP_TERMINATED: CNOT(S,E1) H(S) CNOT(E1,E2) H(E2) SWAP(E1,E2) CNOT(S,E1)
/// H(E1) SWAP(S,E1). ORIGINAL_BBC keeps the first four and ends with
/// CNOT(S,E2) H(E2).
std::vector<GateSpec> gate_sequence(CircuitVariant variant);

/// Ordered product G_n ... G_1.
UnitaryOp circuit_unitary(CircuitVariant variant);

struct CircuitBlocks {
  UnitaryOp u1;
  UnitaryOp u2;
  UnitaryOp u3;
};

/// The three blocks of the SWAP-terminated circuit, built from gates 1-2, 3-5
/// and 6-8.
CircuitBlocks circuit_blocks();

DensityMatrix werner(WernerParam p);

enum class BellLabel { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };
std::string to_string(BellLabel b);

/// {|phi+>, |phi->, |psi+>, |psi->} with (|00> +- |11>)/sqrt2 and
/// (|01> +- |10>)/sqrt2.
std::array<CVec, 4> bell_basis();

/// Time-parameterized register unitary U(t). Spectra and gate prefix products
/// are computed once, so evaluating many times along a grid is cheap.
class Propagator {
 public:
  explicit Propagator(DynamicsScheme scheme);

  UnitaryOp at(double t) const;
  const DynamicsScheme& scheme() const noexcept { return scheme_; }

 private:
  DynamicsScheme scheme_;
  std::vector<UnitarySpectrum> spectra_;  // one per gate, or one for the whole circuit
  std::vector<UnitaryOp> prefix_;         // prefix_[k] = G_k ... G_1, prefix_[0] = I
};

UnitaryOp propagator(DynamicsScheme scheme, double t);

/// U (|psi><psi| (x) W(p)) U^dagger.
DensityMatrix joint_state(const InputState& psi, WernerParam p, const UnitaryOp& u);
DensityMatrix joint_state(const InputState& psi, WernerParam p, DynamicsScheme scheme, double t);

/// Superoperator of rho_S -> Tr_{others}[U (rho_S (x) W(p)) U^dagger] restricted
/// to `observed`. With observed = S this is the system dynamical map.
Superoperator observed_map(const UnitaryOp& u, WernerParam p, Wire observed = Wire::S);

Superoperator system_map(DynamicsScheme scheme, WernerParam p, double t);

/// Reduced state of E2 along the gate-by-gate original-BBC trajectory.
DensityMatrix e2_reduced_state(const InputState& psi, WernerParam p, double t);

}  // namespace nmlab
