#pragma once

// Non-Markovianity measures of the reduced dynamics of one register wire:
// trace-distance back-flow (BLP), divisibility breaking through the Choi
// state of the intermediate map (RHP), and mutual-information back-flow with
// an ancilla (LFS).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmlab/qmath.hpp"
#include "nmlab/register.hpp"

namespace nmlab {

/// Uniform sampling t0 = s_0 < ... < s_{n-1} = t1.
class TimeGrid {
 public:
  TimeGrid(double t0, double t1, std::size_t n);

  /// Default sampling of a scheme's whole domain: `per_unit` steps per unit time.
  static TimeGrid for_scheme(const DynamicsScheme& scheme, std::size_t per_unit = 200);

  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return (t1_ - t0_) / static_cast<double>(n_ - 1); }
  double at(std::size_t k) const noexcept;
  std::vector<double> points() const;
  /// Same interval, twice the number of steps.
  TimeGrid refined() const { return TimeGrid(t0_, t1_, 2 * (n_ - 1) + 1); }

 private:
  double t0_;
  double t1_;
  std::size_t n_;
};

/// Deterministic two-stage search over a pair of Bloch angles.
struct OptConfig {
  int coarse_theta = 13;
  int coarse_phi = 25;
  int refine_rounds = 3;
};

struct RhpConfig {
  double eps = 1e-3;
  double pinv_tol = kPinvRelTol;
  /// Also evaluate at eps/2 and report the relative change.
  bool richardson_check = true;
};

/// Positive increments smaller than this are treated as round-off.
inline constexpr double kIncrementFloor = 1e-12;

struct Increment {
  double t_begin;
  double t_end;
  double gain;
};

/// An antipodal pair: the state at (theta, phi) and its orthogonal partner.
struct BlochPair {
  double theta;
  double phi;
};

enum class MeasureKind { Blp, Rhp, Lfs };
std::string to_string(MeasureKind k);

struct MeasureReport {
  MeasureKind kind;
  double value = 0.0;
  WernerParam p;
  DynamicsScheme scheme;
  TimeGrid grid;
  std::optional<BlochPair> optimal_pair;
  std::vector<Increment> increments;
  std::map<std::string, double> diagnostics;
};

/// Maps rho_S -> state of `observed` sampled on a grid.
struct MapTrajectory {
  std::vector<double> times;
  std::vector<Superoperator> maps;
};

MapTrajectory map_trajectory(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid,
                             Wire observed = Wire::S);

/// Trace distance between the images of two inputs at every grid point.
std::vector<double> distance_curve(const MapTrajectory& traj, const CMat& rho1, const CMat& rho2);

/// Sum of positive increments of a sampled curve, grouped into maximal ascent
/// intervals.
std::vector<Increment> positive_increments(const std::vector<double>& times,
                                           const std::vector<double>& values);

MeasureReport blp_pair_gain(const InputState& psi1, const InputState& psi2,
                            const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid,
                            Wire observed = Wire::S);

/// BLP maximized over antipodal pure pairs, theta in [0, pi/2], phi in [0, 2pi).
MeasureReport blp_measure(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid,
                          const OptConfig& opt = {}, Wire observed = Wire::S);

struct RhpSample {
  double g = 0.0;
  bool singular = false;
};

/// Finite-difference rate (||Choi(S(t+eps) S(t)^-1)||_1 - 1)/eps, clamped at 0.
/// Samples whose inverse had to be regularized report singular = true and g = 0.
RhpSample rhp_sample(const Superoperator& at_t, const Superoperator& at_t_eps, double eps,
                     double pinv_tol);

double rhp_g(const DynamicsScheme& scheme, WernerParam p, double t, double eps = 1e-3,
             double tol = kPinvRelTol);

/// Trapezoidal integral of g over the grid. Diagnostics carry the robustness
/// lower bound (value / 2), singular-sample count and the eps/2 comparison.
MeasureReport rhp_measure(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid,
                          const RhpConfig& cfg = {});

/// Positive increments of I(S:A) starting from |phi+>_{SA}.
MeasureReport lfs_measure(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid);

/// Smallest p (in the given order) whose value exceeds `cutoff`.
std::optional<double> first_exceeding(const std::vector<double>& ps,
                                      const std::vector<double>& values, double cutoff = 1e-4);

}  // namespace nmlab
