// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "../oracle/oracle.hpp"
#include "../support/random.hpp"
#include "nmlab/channel.hpp"
#include "nmlab/correlations.hpp"
#include "nmlab/experiments.hpp"

using namespace nmlab;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("[%s] %2d %-38s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

InputState random_pure() {
  const double u = testing_support::uniform(0.0, 1.0);
  return InputState::from_bloch(std::acos(1.0 - 2.0 * u), testing_support::uniform(0.0, 2.0 * std::numbers::pi));
}

void criterion1() {
  double worst = 0.0;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Superoperator m = system_map(DynamicsScheme::block(), WernerParam(p), 1.0);
    for (int k = 0; k < 20; ++k) {
      const CMat rho = testing_support::random_density(2);
      worst = std::max(worst, trace_distance(m.apply(rho), oracle::depolarize(rho, p)));
    }
  }
  report(1, "channel identity", worst <= 1e-10, "max trace distance " + g(worst) + " (tol 1e-10)");
}

void criterion2() {
  double worst = 0.0;
  for (int a = 0; a <= 10; ++a)
    for (int q = 0; q <= 10; ++q)
      worst = std::max(worst, std::abs(output_fidelity(a / 10.0, WernerParam(q / 10.0)) - (1.0 + q / 10.0) / 2.0));
  report(2, "fidelity law", worst <= 1e-10, "max |F - (1+p)/2| " + g(worst) + " (tol 1e-10)");
}

void criterion3() {
  // Rows: Bell state of the resource; columns: environment outcome 00, 01, 10, 11.
  const Complex i(0.0, 1.0);
  const CMat I = CMat::Identity(2, 2) / 2.0, Z = pauli::z() / 2.0, X = pauli::x() / 2.0,
             iY = i * pauli::y() / 2.0;
  const CMat table[4][4] = {{I, I, I, I}, {Z, -Z, Z, -Z}, {X, X, -X, -X}, {-iY, iY, iY, -iY}};
  const auto sim = bell_sandwich_table(circuit_unitary(CircuitVariant::SwapTerminated));
  int matched = 0;
  double worst = 0.0;
  for (int b = 0; b < 4; ++b)
    for (int jk = 0; jk < 4; ++jk) {
      const double e = max_abs_diff(sim.at(static_cast<BellLabel>(b), jk >> 1, jk & 1), table[b][jk]);
      worst = std::max(worst, e);
      matched += e <= 1e-12;
    }
  report(3, "Table 1 reproduction", matched == 16,
         std::to_string(matched) + "/16 matched, max entry error " + g(worst) + " (tol 1e-12)");
}

void criterion4() {
  const CMat u1 = oracle::circuit_matrix(oracle::swap_terminated(), 2);
  const CMat u = oracle::circuit_matrix(oracle::swap_terminated());
  double worst = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int q = 0; q < 5; ++q) {
        const double a1 = i / 5.0, a2 = j / 5.0, p = q / 4.0;
        const auto s = [&](const CMat& v, double a) {
          return oracle::reduce_to(oracle::evolve(v, oracle::product(oracle::ket_density(oracle::alpha_ket(a)),
                                                                     oracle::werner(p))),
                                   0);
        };
        worst = std::max(worst, std::abs(distance_after_block1(a1, a2) - oracle::qubit_distance(s(u1, a1), s(u1, a2))));
        worst = std::max(worst, std::abs(final_distance(a1, a2, WernerParam(p)) - oracle::qubit_distance(s(u, a1), s(u, a2))));
      }
  report(4, "closed-form distances", worst <= 1e-12, "max deviation " + g(worst) + " (tol 1e-12)");
}

Table fig2_table;

void criterion5_and_10() {
  RunConfig cfg = RunConfig::defaults();
  fig2_table = compute_figure(FigureId::Fig2, cfg);
  std::vector<double> ps, blp, rhp, lfs;
  for (const auto& r : fig2_table.rows) {
    ps.push_back(r[0]);
    blp.push_back(r[1]);
    rhp.push_back(r[2]);
    lfs.push_back(r[3]);
  }
  const auto thresholds = [&](double cutoff, bool& ok) {
    std::string out;
    const std::pair<const char*, std::pair<const std::vector<double>*, double>> rows[] = {
        {"RHP", {&rhp, 0.41}}, {"BLP", {&blp, 0.50}}, {"LFS", {&lfs, 0.65}}};
    ok = true;
    for (const auto& [name, spec] : rows) {
      const auto first = first_exceeding(ps, *spec.first, cutoff);
      const bool hit = first && std::abs(*first - spec.second) <= 0.02 + 1e-12;
      ok = ok && hit;
      out += std::string(name) + "=" + (first ? g(*first) : "none") + " (want " + g(spec.second) + ") ";
    }
    return out;
  };
  bool ok = false;
  const std::string at_cutoff = thresholds(1e-4, ok);
  report(5, "thresholds (cutoff 1e-4)", ok, at_cutoff + "tol 0.02");
  bool floor_ok = false;
  const std::string at_floor = thresholds(1e-9, floor_ok);
  std::printf("[INFO]  5 thresholds at cutoff 1e-9 (not graded): %s%s\n", at_floor.c_str(),
              floor_ok ? "all within 0.02" : "outside 0.02");

  bool consistent = true;
  double lowest = 2.0;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (std::max({blp[k], rhp[k], lfs[k]}) > 1e-4) {
      lowest = std::min(lowest, ps[k]);
      consistent = consistent && ps[k] > 1.0 / 3.0;
    }
  }
  report(10, "entanglement/non-Markovianity", consistent,
         "lowest non-Markovian p " + g(lowest) + " (must exceed 1/3)");
}

void criterion6() {
  const auto gates = DynamicsScheme::gates();
  const TimeGrid grid = TimeGrid::for_scheme(gates);
  const auto rep = blp_measure(gates, WernerParam(0.0), grid);
  const bool z_pair = rep.optimal_pair &&
                      (rep.optimal_pair->theta < 1e-9 || rep.optimal_pair->theta > std::numbers::pi - 1e-9);
  std::size_t inside = 0;
  for (const auto& inc : rep.increments) inside += inc.t_begin >= 7.0 && inc.t_end <= 8.0;
  const auto traj = map_trajectory(gates, WernerParam(0.0), grid);
  const auto d = distance_curve(traj, InputState::zero().density().mat(), InputState::one().density().mat());
  double early = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (traj.times[k] <= 5.0) early = std::max(early, std::abs(d[k] - 1.0));
  const bool ok = rep.value > 0.05 && z_pair && !rep.increments.empty() && inside == rep.increments.size() &&
                  early <= 1e-9;
  report(6, "gate-by-gate back-flow at p=0", ok,
         "N_BLP " + g(rep.value) + ", Z pair " + (z_pair ? "yes" : "no") + ", increments in (7,8] " +
             std::to_string(inside) + "/" + std::to_string(rep.increments.size()) + ", max |D-1| t<=5 " + g(early));
}

void criterion7() {
  const auto bbc = DynamicsScheme::gates(CircuitVariant::OriginalBbc);
  const TimeGrid grid = TimeGrid::for_scheme(bbc);
  double law = 0.0;
  for (int q = 0; q <= 10; ++q) {
    const double p = q / 10.0;
    law = std::max(law, std::abs(blp_pair_gain(InputState::zero(), InputState::one(), bbc, WernerParam(p), grid,
                                               Wire::E2).value - p));
  }
  const auto traj = map_trajectory(bbc, WernerParam(0.0), grid, Wire::E2);
  double zero = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto a = random_pure();
    const auto b = random_pure();
    for (double v : distance_curve(traj, a.density().mat(), b.density().mat())) zero = std::max(zero, v);
  }
  report(7, "original-circuit E2 law", law <= 1e-3 && zero <= 1e-12,
         "max |N_BLP - p| " + g(law) + " (tol 1e-3), max D at p=0 " + g(zero));
}

void criterion8() {
  const auto two = RegisterLayout::qubits(2);
  bool ok = true;
  double worst = 0.0;
  for (double p : {0.0, 0.2, 1.0 / 3.0}) ok = ok && log_negativity(werner(WernerParam(p)), two, {0}) == 0.0;
  for (double p : {0.34, 0.5, 1.0}) {
    const double lib = log_negativity(werner(WernerParam(p)), two, {0});
    Eigen::SelfAdjointEigenSolver<CMat> es(oracle::transpose_second(oracle::werner(p)));
    const double direct = std::log2(es.eigenvalues().cwiseAbs().sum());
    ok = ok && lib > 0.0 && direct > 0.0;
    worst = std::max({worst, std::abs(lib - std::log2((1.0 + 3.0 * p) / 2.0)),
                      std::abs(direct - std::log2((1.0 + 3.0 * p) / 2.0))});
  }
  report(8, "Werner boundary", ok && worst <= 1e-10, "max deviation " + g(worst) + " (tol 1e-10)");
}

void criterion9() {
  const UnitaryOp u = propagator(DynamicsScheme::block(), 1.0);
  bool ok = true;
  std::ostringstream detail;
  for (double p : {0.2, 0.5, 0.8, 1.0}) {
    const auto s = correlation_sample(joint_state(InputState::zero(), WernerParam(p), u), 1.0, p);
    ok = ok && (p < 1.0 ? s.neg <= 1e-9 && s.discord <= 1e-6 && s.classical >= 1e-3
                        : std::max({s.neg, s.discord, s.classical}) <= 1e-6);
    detail << "p=" << p << ":(" << g(s.neg) << "," << g(s.discord) << "," << g(s.classical) << ") ";
  }
  report(9, "end-of-protocol correlations", ok, detail.str() + "(neg, discord, J)");
}

void criterion11() {
  const auto block = DynamicsScheme::block();
  const auto gates = DynamicsScheme::gates();

  double cptp = 0.0;
  std::size_t maps = 0;
  for (const auto& scheme : {block, gates}) {
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      for (const auto& m : map_trajectory(scheme, WernerParam(p), TimeGrid::for_scheme(scheme)).maps) {
        const CMat c = choi_state(m);
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (c + c.adjoint()));
        cptp = std::max({cptp, -es.eigenvalues().minCoeff(), std::abs(c.trace().real() - 1.0)});
        ++maps;
      }
    }
  }
  const bool cptp_ok = cptp <= 1e-9;

  const Propagator prop(block);
  const double ends = std::max(max_abs_diff(prop.at(0.0).mat(), CMat::Identity(8, 8)),
                               max_abs_diff(prop.at(1.0).mat(), oracle::circuit_matrix(oracle::swap_terminated())));
  const bool ends_ok = ends <= 1e-12;

  double round_trip = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Superoperator m = system_map(block, WernerParam(testing_support::uniform(0, 1)), testing_support::uniform(0, 1));
    const Superoperator rebuilt = superop_from_action([&](const CMat& x) { return m.apply(x); }, 2);
    round_trip = std::max(round_trip, max_abs_diff(rebuilt.mat(), m.mat()));
  }
  const bool round_ok = round_trip <= 1e-12;

  const TimeGrid grid = TimeGrid::for_scheme(block);
  double excess = -1.0;
  for (double p : {0.6, 1.0}) {
    const double best = blp_measure(block, WernerParam(p), grid).value;
    for (int k = 0; k < 10; ++k) {
      const auto a = random_pure();
      const auto b = random_pure();
      excess = std::max(excess, blp_pair_gain(a, b, block, WernerParam(p), grid).value - best);
    }
  }
  const bool antipodal_ok = excess <= 1e-12;

  double drift = 0.0;
  std::string drift_at;
  const RhpConfig rc{1e-3, kPinvRelTol, false};
  const auto track = [&](const std::string& what, double coarse, double fine) {
    const double scale = std::max(std::abs(coarse), std::abs(fine));
    const double rel = scale > 0.0 ? std::abs(coarse - fine) / scale : 0.0;
    if (rel > drift) {
      drift = rel;
      drift_at = what;
    }
  };
  for (double p : {0.6, 0.8, 1.0}) {
    const WernerParam wp(p);
    const TimeGrid fine = grid.refined();
    track("BLP p=" + g(p), blp_measure(block, wp, grid).value, blp_measure(block, wp, fine).value);
    track("RHP p=" + g(p), rhp_measure(block, wp, grid, rc).value, rhp_measure(block, wp, fine, rc).value);
    track("LFS p=" + g(p), lfs_measure(block, wp, grid).value, lfs_measure(block, wp, fine).value);
  }
  const TimeGrid ggrid = TimeGrid::for_scheme(gates);
  track("BLP gates p=0", blp_measure(gates, WernerParam(0.0), ggrid).value,
        blp_measure(gates, WernerParam(0.0), ggrid.refined()).value);
  const bool drift_ok = drift < 0.02;

  report(11, "property suites", cptp_ok && ends_ok && round_ok && antipodal_ok && drift_ok,
         "CPTP " + g(cptp) + " over " + std::to_string(maps) + " maps; endpoints " + g(ends) + "; round-trip " +
             g(round_trip) + "; non-antipodal excess " + g(excess) + "; grid drift " + g(drift) +
             (drift_at.empty() ? "" : " at " + drift_at));
}

void criterion12(const std::string& cli) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "nmlab_acceptance";
  fs::remove_all(base);
  const auto run = [&](const std::string& dir, int workers) {
    const std::string cmd = "\"" + cli + "\" figure fig2 --out \"" + (base / dir).string() + "\" --workers " +
                            std::to_string(workers) + " > /dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const bool ran = run("a", 1) && run("b", 3);
  const std::string a = ran ? slurp(base / "a" / "fig2.csv") : "";
  const std::string b = ran ? slurp(base / "b" / "fig2.csv") : "";
  const bool same = ran && !a.empty() && a == b;
  // The in-process table from criterion 5 must match the CLI output too.
  const bool matches_library = same && a == format_csv(fig2_table, FigureId::Fig2, RunConfig::defaults());
  report(12, "determinism", same && matches_library,
         std::string(ran ? "" : "CLI run failed; ") + "workers 1 vs 3 " + (same ? "identical" : "differ") +
             ", library vs CLI " + (matches_library ? "identical" : "differ") + " (" +
             std::to_string(a.size()) + " bytes)");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "nmlab";
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5_and_10();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion11();
  criterion12(cli);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
