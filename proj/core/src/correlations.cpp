#include "nmlab/correlations.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "bloch_search.hpp"

namespace nmlab {

namespace {

constexpr double kOutcomeFloor = 1e-12;
constexpr double kNegativityFloor = 1e-12;

// rho_ab with the measured wires moved to the front, split into dB x dB
// blocks of size dA x dA.
struct MeasuredBlocks {
  Index d_measured;
  Index d_rest;
  CMat rho;  // reordered: measured factor first

  // (<v| (x) I) rho (|v> (x) I): the unnormalized conditional state of the
  // unmeasured part after projecting onto |v>.
  CMat conditional(const CVec& v) const {
    CMat out = CMat::Zero(d_rest, d_rest);
    for (Index a = 0; a < d_measured; ++a) {
      if (v(a) == Complex(0.0)) continue;
      for (Index b = 0; b < d_measured; ++b) {
        if (v(b) == Complex(0.0)) continue;
        out += std::conj(v(a)) * v(b) * rho.block(a * d_rest, b * d_rest, d_rest, d_rest);
      }
    }
    return out;
  }
};

MeasuredBlocks split_measured(const DensityMatrix& rho, const RegisterLayout& layout,
                              const WireSet& measured) {
  if (measured.empty() || measured.size() >= layout.wires()) {
    throw std::invalid_argument("classical_correlations: measured part must be a proper subset");
  }
  WireSet order = measured;
  for (std::size_t w = 0; w < layout.wires(); ++w) {
    if (std::find(measured.begin(), measured.end(), w) == measured.end()) order.push_back(w);
  }
  const Index dm = layout.dim_of(measured);
  return {dm, layout.total_dim() / dm, permute_wires(rho.mat(), layout, order)};
}

double rest_entropy(const MeasuredBlocks& mb) {
  CMat reduced = CMat::Zero(mb.d_rest, mb.d_rest);
  for (Index a = 0; a < mb.d_measured; ++a) {
    reduced += mb.rho.block(a * mb.d_rest, a * mb.d_rest, mb.d_rest, mb.d_rest);
  }
  return vn_entropy(reduced);
}

// S(rho_A) - sum_i p_i S(rho_A^i) for the orthonormal basis in the columns of `basis`.
double information_gain(const MeasuredBlocks& mb, double s_rest, const CMat& basis) {
  double gain = s_rest;
  for (Index i = 0; i < basis.cols(); ++i) {
    const CMat cond = mb.conditional(basis.col(i));
    const double prob = cond.trace().real();
    if (prob < kOutcomeFloor) continue;
    gain -= prob * vn_entropy(CMat(cond / prob));
  }
  return gain;
}

CMat qubit_basis(double theta, double phi) {
  CMat b(2, 2);
  b.col(0) = bloch_ket(theta, phi);
  b.col(1) = bloch_ket(std::numbers::pi - theta, phi + std::numbers::pi);
  return b;
}

// exp(i H) for Hermitian H.
CMat unitary_exp(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  CVec phases(es.eigenvalues().size());
  for (Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Off-diagonal Hermitian generators; diagonal ones only rephase basis vectors
// and leave the projectors unchanged.
std::vector<CMat> basis_generators(Index m) {
  std::vector<CMat> gens;
  for (Index j = 0; j < m; ++j) {
    for (Index k = j + 1; k < m; ++k) {
      CMat re = CMat::Zero(m, m);
      re(j, k) = re(k, j) = 1.0;
      CMat im = CMat::Zero(m, m);
      im(j, k) = Complex(0.0, -1.0);
      im(k, j) = Complex(0.0, 1.0);
      gens.push_back(std::move(re));
      gens.push_back(std::move(im));
    }
  }
  return gens;
}

ClassicalCorrelations search_general_basis(const MeasuredBlocks& mb, double s_rest,
                                           const OptConfig& opt) {
  const Index m = mb.d_measured;
  const auto gens = basis_generators(m);

  std::vector<CMat> starts{CMat::Identity(m, m)};
  if (m == 4) {
    CMat bell(4, 4);
    const auto kets = bell_basis();
    for (Index k = 0; k < 4; ++k) bell.col(k) = kets[static_cast<std::size_t>(k)];
    starts.push_back(bell);
  }

  ClassicalCorrelations best;
  best.value = -std::numeric_limits<double>::infinity();
  const int rounds = std::max(1, 2 * opt.refine_rounds);
  for (const CMat& start : starts) {
    std::vector<double> coeffs(gens.size(), 0.0);
    const auto eval = [&](const std::vector<double>& c) {
      CMat h = CMat::Zero(m, m);
      for (std::size_t g = 0; g < gens.size(); ++g) h += c[g] * gens[g];
      const CMat basis = start * unitary_exp(h);
      return std::pair{information_gain(mb, s_rest, basis), basis};
    };
    auto [value, basis] = eval(coeffs);
    const double start_value = value;
    double step = std::numbers::pi / 4.0;
    for (int r = 0; r < rounds; ++r, step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t g = 0; g < gens.size(); ++g) {
          for (double dir : {1.0, -1.0}) {
            auto trial = coeffs;
            trial[g] += dir * step;
            auto [v, b] = eval(trial);
            if (v > value + 1e-12) {
              value = v;
              basis = std::move(b);
              coeffs = std::move(trial);
              improved = true;
            }
          }
        }
      }
    }
    if (value > best.value + 1e-12) {
      best.value = value;
      best.coarse_value = start_value;
      best.basis_vectors = basis;
    }
  }
  return best;
}

}  // namespace

std::array<CMat, 2> ProjectiveMeasurement::projectors() const {
  const CMat b = qubit_basis(theta, phi);
  return {b.col(0) * b.col(0).adjoint(), b.col(1) * b.col(1).adjoint()};
}

double log_negativity(const DensityMatrix& rho, const RegisterLayout& layout, const WireSet& side) {
  const double norm = trace_norm_hermitian(partial_transpose(rho, layout, side));
  const double e = std::log2(norm);
  return e < kNegativityFloor ? 0.0 : e;
}

ClassicalCorrelations classical_correlations_detail(const DensityMatrix& rho_ab,
                                                    const RegisterLayout& layout,
                                                    const WireSet& measured,
                                                    const OptConfig& opt) {
  const MeasuredBlocks mb = split_measured(rho_ab, layout, measured);
  const double s_rest = rest_entropy(mb);
  if (mb.d_measured != 2) return search_general_basis(mb, s_rest, opt);

  // {|v>, |v_perp>} at (theta, phi) equals the basis at the antipode, so
  // theta in [0, pi/2] covers every qubit projective measurement.
  const auto best = detail::bloch_search(
      [&](double theta, double phi) { return information_gain(mb, s_rest, qubit_basis(theta, phi)); },
      std::numbers::pi / 2.0, opt.coarse_theta, opt.coarse_phi, opt.refine_rounds);
  ClassicalCorrelations out;
  out.value = best.value;
  out.coarse_value = best.coarse_value;
  out.basis = {best.theta, best.phi};
  out.basis_vectors = qubit_basis(best.theta, best.phi);
  return out;
}

double classical_correlations(const DensityMatrix& rho_ab, const RegisterLayout& layout,
                              const WireSet& measured, const OptConfig& opt) {
  return classical_correlations_detail(rho_ab, layout, measured, opt).value;
}

double discord(const DensityMatrix& rho_ab, const RegisterLayout& layout, const WireSet& measured,
               const OptConfig& opt) {
  if (layout.wires() != 2) throw std::invalid_argument("discord: layout must be bipartite");
  return mutual_information(rho_ab, layout) - classical_correlations(rho_ab, layout, measured, opt);
}

CorrelationSample correlation_sample(const DensityMatrix& joint, double t, double p,
                                     const CorrelationConfig& cfg) {
  const RegisterLayout cut({2, 4});
  const WireSet measured{cfg.measured == MeasuredSide::System ? 0u : 1u};
  CorrelationSample s;
  s.t = t;
  s.p = p;
  s.neg = log_negativity(joint, cut, {0});
  s.mutual = mutual_information(joint, cut);
  s.classical = classical_correlations(joint, cut, measured, cfg.opt);
  s.discord = s.mutual - s.classical;
  return s;
}

std::vector<CorrelationSample> correlation_trajectory(const DynamicsScheme& scheme,
                                                      const InputState& psi, WernerParam p,
                                                      const TimeGrid& grid,
                                                      const CorrelationConfig& cfg) {
  const Propagator prop(scheme);
  std::vector<CorrelationSample> out;
  out.reserve(grid.size());
  for (double t : grid.points()) {
    out.push_back(correlation_sample(joint_state(psi, p, prop.at(t)), t, p.value(), cfg));
  }
  return out;
}

}  // namespace nmlab
