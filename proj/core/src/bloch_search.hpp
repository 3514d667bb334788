#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nmlab::detail {

struct BlochSearchResult {
  double value;
  double theta;
  double phi;
  double coarse_value;
};

// Maximizes f(theta, phi) over theta in [0, theta_max], phi in [0, 2pi):
// a coarse lattice, then `rounds` passes that halve the step and move to the
// best of the eight neighbours. Only strict improvements (beyond 1e-12) move
// the incumbent, so ties resolve to the earliest lattice point.
//
// With theta_max = pi/2, f is assumed invariant under the antipodal map
// (theta, phi) -> (pi - theta, phi + pi); a neighbour past the equator is
// folded back through it rather than clamped.
template <typename F>
BlochSearchResult bloch_search(F&& f, double theta_max, int n_theta, int n_phi, int rounds) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kImprove = 1e-12;
  n_theta = std::max(n_theta, 2);
  n_phi = std::max(n_phi, 1);

  BlochSearchResult best{-std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
  for (int i = 0; i < n_theta; ++i) {
    const double theta = theta_max * i / (n_theta - 1);
    // phi is meaningless at the poles.
    const int phis = (i == 0) ? 1 : n_phi;
    for (int j = 0; j < phis; ++j) {
      const double phi = kTwoPi * j / n_phi;
      const double v = f(theta, phi);
      if (v > best.value + kImprove) best = {v, theta, phi, 0.0};
    }
  }
  best.coarse_value = best.value;

  const bool fold = std::abs(theta_max - std::numbers::pi / 2.0) < 1e-15;
  double h_theta = theta_max / (n_theta - 1);
  double h_phi = kTwoPi / n_phi;
  for (int r = 0; r < rounds; ++r) {
    h_theta *= 0.5;
    h_phi *= 0.5;
    const double c_theta = best.theta;
    const double c_phi = best.phi;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        double theta = c_theta + di * h_theta;
        double phi = c_phi + dj * h_phi;
        if (theta < 0.0) {
          theta = -theta;
          phi += std::numbers::pi;
        }
        if (theta > theta_max) {
          if (fold) {
            theta = std::numbers::pi - theta;
            phi += std::numbers::pi;
          } else {
            theta = theta_max;
          }
        }
        phi = std::fmod(std::fmod(phi, kTwoPi) + kTwoPi, kTwoPi);
        const double v = f(theta, phi);
        if (v > best.value + kImprove) {
          best.value = v;
          best.theta = theta;
          best.phi = phi;
        }
      }
    }
  }
  return best;
}

}  // namespace nmlab::detail
