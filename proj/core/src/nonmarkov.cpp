#include "nmlab/nonmarkov.hpp"

#include <cmath>
#include <numbers>

#include "bloch_search.hpp"

namespace nmlab {

namespace {

double total_gain(const std::vector<Increment>& incs) {
  double s = 0.0;
  for (const auto& inc : incs) s += inc.gain;
  return s;
}

CMat pair_difference(const InputState& a, const InputState& b) {
  return a.density().mat() - b.density().mat();
}

// BLP gain for the difference operator `delta` = rho1 - rho2 along a trajectory.
double gain_for_difference(const MapTrajectory& traj, const CMat& delta) {
  double prev = 0.0;
  double gain = 0.0;
  for (std::size_t k = 0; k < traj.maps.size(); ++k) {
    const double d = 0.5 * trace_norm_hermitian(traj.maps[k].apply(delta));
    if (k > 0 && d - prev > kIncrementFloor) gain += d - prev;
    prev = d;
  }
  return gain;
}

MeasureReport make_report(MeasureKind kind, const DynamicsScheme& scheme, WernerParam p,
                          const TimeGrid& grid) {
  return MeasureReport{kind, 0.0, p, scheme, grid, std::nullopt, {}, {}};
}

void validate_grid_in_domain(const DynamicsScheme& scheme, const TimeGrid& grid) {
  if (grid.t0() < scheme.t_begin() - 1e-12 || grid.t1() > scheme.t_end() + 1e-12) {
    throw std::invalid_argument("time grid extends outside the scheme's time domain");
  }
}

}  // namespace

TimeGrid::TimeGrid(double t0, double t1, std::size_t n) : t0_(t0), t1_(t1), n_(n) {
  if (!(t1 > t0) || n < 2) throw std::invalid_argument("TimeGrid: need t1 > t0 and n >= 2");
}

TimeGrid TimeGrid::for_scheme(const DynamicsScheme& scheme, std::size_t per_unit) {
  const double span = scheme.t_end() - scheme.t_begin();
  const auto steps = static_cast<std::size_t>(std::llround(span * static_cast<double>(per_unit)));
  return TimeGrid(scheme.t_begin(), scheme.t_end(), steps + 1);
}

double TimeGrid::at(std::size_t k) const noexcept {
  if (k + 1 == n_) return t1_;
  return t0_ + (t1_ - t0_) * static_cast<double>(k) / static_cast<double>(n_ - 1);
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = at(k);
  return out;
}

std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::Blp: return "blp";
    case MeasureKind::Rhp: return "rhp";
    case MeasureKind::Lfs: return "lfs";
  }
  return "?";
}

MapTrajectory map_trajectory(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid,
                             Wire observed) {
  validate_grid_in_domain(scheme, grid);
  const Propagator prop(scheme);
  MapTrajectory out;
  out.times = grid.points();
  out.maps.reserve(out.times.size());
  for (double t : out.times) out.maps.push_back(observed_map(prop.at(t), p, observed));
  return out;
}

std::vector<double> distance_curve(const MapTrajectory& traj, const CMat& rho1, const CMat& rho2) {
  std::vector<double> d;
  d.reserve(traj.maps.size());
  const CMat delta = rho1 - rho2;
  for (const auto& m : traj.maps) d.push_back(0.5 * trace_norm_hermitian(m.apply(delta)));
  return d;
}

std::vector<Increment> positive_increments(const std::vector<double>& times,
                                           const std::vector<double>& values) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("positive_increments: size mismatch");
  }
  std::vector<Increment> out;
  bool open = false;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double diff = values[k] - values[k - 1];
    if (diff > kIncrementFloor) {
      if (open) {
        out.back().t_end = times[k];
        out.back().gain += diff;
      } else {
        out.push_back({times[k - 1], times[k], diff});
        open = true;
      }
    } else {
      open = false;
    }
  }
  return out;
}

MeasureReport blp_pair_gain(const InputState& psi1, const InputState& psi2,
                            const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid,
                            Wire observed) {
  if (trace_distance(psi1.density(), psi2.density()) < 1e-12) {
    throw std::invalid_argument("blp_pair_gain: the two inputs coincide");
  }
  const MapTrajectory traj = map_trajectory(scheme, p, grid, observed);
  const auto d = distance_curve(traj, psi1.density().mat(), psi2.density().mat());
  MeasureReport r = make_report(MeasureKind::Blp, scheme, p, grid);
  r.increments = positive_increments(traj.times, d);
  r.value = total_gain(r.increments);
  r.diagnostics["d_initial"] = d.front();
  r.diagnostics["d_final"] = d.back();
  r.diagnostics["observed_wire"] = static_cast<double>(wire_index(observed));
  return r;
}

MeasureReport blp_measure(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid,
                          const OptConfig& opt, Wire observed) {
  const MapTrajectory traj = map_trajectory(scheme, p, grid, observed);
  auto objective = [&](double theta, double phi) {
    const InputState a = InputState::from_bloch(theta, phi);
    return gain_for_difference(traj, pair_difference(a, a.antipode()));
  };
  const auto best = detail::bloch_search(objective, std::numbers::pi / 2.0, opt.coarse_theta,
                                         opt.coarse_phi, opt.refine_rounds);

  const InputState a = InputState::from_bloch(best.theta, best.phi);
  const auto d = distance_curve(traj, a.density().mat(), a.antipode().density().mat());
  MeasureReport r = make_report(MeasureKind::Blp, scheme, p, grid);
  r.optimal_pair = BlochPair{best.theta, best.phi};
  r.increments = positive_increments(traj.times, d);
  r.value = total_gain(r.increments);
  r.diagnostics["coarse_value"] = best.coarse_value;
  r.diagnostics["observed_wire"] = static_cast<double>(wire_index(observed));
  return r;
}

RhpSample rhp_sample(const Superoperator& at_t, const Superoperator& at_t_eps, double eps,
                     double pinv_tol) {
  RhpSample out;
  RegularizedInverse inv{Superoperator::identity(at_t.d())};
  try {
    inv = regularized_inverse(at_t, pinv_tol);
  } catch (const SingularMapError&) {
    out.singular = true;
    return out;
  }
  if (inv.singular) {
    out.singular = true;
    return out;
  }
  const Superoperator step = at_t_eps * inv.inverse;
  const double f_ncp = trace_norm_hermitian(choi_state(step));
  out.g = std::max(0.0, (f_ncp - 1.0) / eps);
  return out;
}

namespace {

// Start time of the finite-difference window at grid time t; the window is
// shifted back at the end of the domain so that t + eps stays inside it.
double rhp_window_start(const DynamicsScheme& scheme, double t, double eps) {
  return std::min(t, scheme.t_end() - eps);
}

struct RhpCurve {
  std::vector<double> g;
  int singular = 0;
};

RhpCurve rhp_curve(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid, double eps,
                   double tol) {
  const Propagator prop(scheme);
  RhpCurve out;
  out.g.reserve(grid.size());
  for (double t : grid.points()) {
    const double s = rhp_window_start(scheme, t, eps);
    const auto sample = rhp_sample(observed_map(prop.at(s), p), observed_map(prop.at(s + eps), p),
                                   eps, tol);
    out.g.push_back(sample.g);
    out.singular += sample.singular ? 1 : 0;
  }
  return out;
}

double trapezoid(const std::vector<double>& g, double h) {
  double s = 0.0;
  for (std::size_t k = 1; k < g.size(); ++k) s += 0.5 * (g[k - 1] + g[k]) * h;
  return s;
}

}  // namespace

double rhp_g(const DynamicsScheme& scheme, WernerParam p, double t, double eps, double tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("rhp_g: eps must be positive");
  if (t < scheme.t_begin() || t + eps > scheme.t_end() + 1e-12) {
    throw std::invalid_argument("rhp_g: t and t + eps must lie in the time domain");
  }
  const Propagator prop(scheme);
  return rhp_sample(observed_map(prop.at(t), p), observed_map(prop.at(t + eps), p), eps, tol).g;
}

MeasureReport rhp_measure(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid,
                          const RhpConfig& cfg) {
  validate_grid_in_domain(scheme, grid);
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("rhp_measure: eps must be positive");
  const RhpCurve curve = rhp_curve(scheme, p, grid, cfg.eps, cfg.pinv_tol);
  const double h = grid.step();

  MeasureReport r = make_report(MeasureKind::Rhp, scheme, p, grid);
  const auto times = grid.points();
  for (std::size_t k = 1; k < curve.g.size(); ++k) {
    const double area = 0.5 * (curve.g[k - 1] + curve.g[k]) * h;
    if (area > 0.0) r.increments.push_back({times[k - 1], times[k], area});
  }
  r.value = total_gain(r.increments);
  r.diagnostics["eps"] = cfg.eps;
  r.diagnostics["pinv_tol"] = cfg.pinv_tol;
  r.diagnostics["singular_samples"] = curve.singular;
  r.diagnostics["robustness_lower_bound"] = r.value / 2.0;
  r.diagnostics["g_max"] = curve.g.empty() ? 0.0 : *std::max_element(curve.g.begin(), curve.g.end());
  if (cfg.richardson_check) {
    const RhpCurve half = rhp_curve(scheme, p, grid, cfg.eps / 2.0, cfg.pinv_tol);
    const double v_half = trapezoid(half.g, h);
    const double scale = std::max(std::abs(r.value), std::abs(v_half));
    const double rel = scale > 0.0 ? std::abs(r.value - v_half) / scale : 0.0;
    r.diagnostics["value_eps_half"] = v_half;
    r.diagnostics["richardson_rel_diff"] = rel;
    r.diagnostics["richardson_ok"] = rel <= 0.05 ? 1.0 : 0.0;
  }
  return r;
}

MeasureReport lfs_measure(const DynamicsScheme& scheme, WernerParam p, const TimeGrid& grid) {
  const MapTrajectory traj = map_trajectory(scheme, p, grid, Wire::S);
  const RegisterLayout sa = RegisterLayout::qubits(2);
  std::vector<double> info;
  info.reserve(traj.maps.size());
  // choi_state is exactly (Phi (x) id)(|phi+><phi+|) with S first.
  for (const auto& m : traj.maps) info.push_back(mutual_information(choi_state(m), sa));

  MeasureReport r = make_report(MeasureKind::Lfs, scheme, p, grid);
  r.increments = positive_increments(traj.times, info);
  r.value = total_gain(r.increments);
  r.diagnostics["mi_initial"] = info.front();
  r.diagnostics["mi_final"] = info.back();
  r.diagnostics["mi_min"] = *std::min_element(info.begin(), info.end());
  return r;
}

std::optional<double> first_exceeding(const std::vector<double>& ps,
                                      const std::vector<double>& values, double cutoff) {
  if (ps.size() != values.size()) throw std::invalid_argument("first_exceeding: size mismatch");
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (values[k] > cutoff) return ps[k];
  }
  return std::nullopt;
}

}  // namespace nmlab
