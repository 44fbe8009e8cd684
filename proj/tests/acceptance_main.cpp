// Acceptance checklist for the telegraph-process library. Each criterion
// prints exactly one [PASS]/[FAIL] line with the measured numbers, the
// tolerance they are held to, and the elapsed time; the exit code is the
// number of failed criteria. Run through ctest (which exports TG_CLI for
// the determinism criterion) or standalone:
//
//   TG_CLI=build/tools/tg ./build/tests/acceptance

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ck_pde.hpp"
#include "core.hpp"
#include "lorentz.hpp"
#include "moments.hpp"
#include "quantum.hpp"
#include "telegraph_mc.hpp"
#include "version.hpp"

namespace {

using namespace telegraph;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

template <class Fn>
void run_criterion(int num, const char* name, Fn fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("[%s] %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", num, name,
              o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

/* ---- shared bookkeeping for the conservation criterion ---- */

struct SolveAudit {
  std::string label;
  double mass_drift = 0.0;  // max relative deviation from the initial mass
  double min_field = 0.0;
};

std::vector<SolveAudit> g_audits;

double min_field_value(const FieldPair& f) {
  double mn = std::numeric_limits<double>::infinity();
  for (double x : f.f_plus) mn = std::min(mn, x);
  for (double x : f.f_minus) mn = std::min(mn, x);
  return mn;
}

void audit_solve(const std::string& label, const SolveResult& r, double m0) {
  SolveAudit a{label, 0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    a.mass_drift = std::max(a.mass_drift, std::abs(r.mass_at(k) - m0) / m0);
    a.min_field = std::min(a.min_field, min_field_value(r.snapshots[k]));
  }
  g_audits.push_back(std::move(a));
}

/* ---- quadrature of the closed-form density over a cell ---- */

double ac_mass_between(const ModelParams& p, double t, double lo, double hi) {
  // The continuous part lives on |x| < v t; clipping first keeps the jump at
  // the cone edge out of the quadrature panel.
  const double edge = p.v * t;
  lo = std::max(lo, -edge);
  hi = std::min(hi, edge);
  if (!(lo < hi)) return 0.0;
  static const double node[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                 -0.9061798459386640, 0.9061798459386640};
  static const double weight[5] = {0.5688888888888889, 0.4786286704993665,
                                   0.4786286704993665, 0.2369268850561891,
                                   0.2369268850561891};
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double s = 0.0;
  for (int k = 0; k < 5; ++k) {
    s += weight[k] * analytic_density(p, t, mid + half * node[k]).ac;
  }
  return s * half;
}

/* ------------------------------------------------ criterion bodies ---- */

Outcome mean_formula() {
  const ModelParams p{1.0, 1.0, {}};
  const double exact = 0.5 * (1.0 - std::exp(-2.0));

  const auto mc0 = std::chrono::steady_clock::now();
  const auto est = estimate_expectation(
      p, 0.0, Start::Plus, 1.0, [](double x, int) { return x; },
      McConfig{1000000, 2024, 8});
  const double mc_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - mc0)
          .count();
  const double mc_err = std::abs(est.value - exact);
  const double mc_tol = 4.0 * est.std_error;

  const auto pde0 = std::chrono::steady_clock::now();
  const double dx = 1.0 / 1024.0;
  const Grid1D g = Grid1D::centered(2.0, dx);
  FieldPair payoff(g);
  for (std::int64_t i = 0; i < g.nx; ++i) {
    payoff.f_plus[static_cast<std::size_t>(i)] = g.cell_center(i);
    payoff.f_minus[static_cast<std::size_t>(i)] = g.cell_center(i);
  }
  const auto r = solve_backward(p, payoff, {1.0});
  const double pde_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - pde0)
          .count();
  const double u0 =
      r.snapshots[0].f_plus[static_cast<std::size_t>(g.nx / 2)];
  const double pde_err = std::abs(u0 - exact);
  const double pde_tol = 10.0 * dx;

  Outcome o;
  o.pass = mc_err <= mc_tol && pde_err <= pde_tol && mc_secs < 10.0 &&
           pde_secs < 10.0;
  o.detail = "mc err " + fmt(mc_err) + " <= 4se " + fmt(mc_tol) +
             ", backward-pde err " + fmt(pde_err) + " <= 10dx " + fmt(pde_tol);
  return o;
}

Outcome moment_oracle_agreement() {
  const double vs[] = {0.5, 1.0, 2.0};
  const double lambdas[] = {0.1, 1.0, 10.0};
  const std::vector<double> ts = {0.1, 1.0, 5.0};
  const int signs[] = {+1, 0};
  const InitialMoments w0{0.3, 0.2};

  double max_rel = 0.0;
  for (double v : vs) {
    for (double lam : lambdas) {
      for (int s : signs) {
        const ModelParams p{v, lam, {}};
        const auto pts = moment_ode_oracle(p, w0, s, ts);
        for (std::size_t k = 0; k < ts.size(); ++k) {
          const double m1 = mean_closed_form(p, w0.m1, s, ts[k]);
          const double m2 = second_moment_closed_form(p, w0, s, ts[k]);
          max_rel = std::max(max_rel,
                             std::abs(m1 - pts[k].mean) / std::abs(pts[k].mean));
          max_rel = std::max(max_rel, std::abs(m2 - pts[k].second_moment) /
                                          std::abs(pts[k].second_moment));
        }
      }
    }
  }

  // The printed variants of the second-moment transient constant disagree on
  // the sign of its initial-correlation term. The oracle settles it: flipping
  // that sign shifts the curve by 2 s v m1(0) (1 - e^(-2 lambda t)) / lambda,
  // far outside any integration error.
  const ModelParams p1{1.0, 1.0, {}};
  const auto ref = moment_ode_oracle(p1, w0, +1, {1.0})[0].second_moment;
  const double matched = second_moment_closed_form(p1, w0, +1, 1.0);
  const double flipped =
      matched - 2.0 * 1.0 * w0.m1 * (1.0 - std::exp(-2.0)) / 1.0;
  const double matched_err = std::abs(matched - ref);
  const double flipped_err = std::abs(flipped - ref);

  Outcome o;
  o.pass = max_rel <= 1e-8 && flipped_err > 1e-3;
  o.detail = "max rel err " + fmt(max_rel) +
             " <= 1e-08 over 54 cases; transient-constant sign flip is off by " +
             fmt(flipped_err) + " vs matched " + fmt(matched_err);
  return o;
}

Outcome variance_asymptotics() {
  const double lambdas[] = {10.0, 100.0, 1000.0};
  bool var_ok = true;
  double scaled_min = std::numeric_limits<double>::infinity();
  double scaled_max = 0.0;
  double worst_rel = 0.0;
  for (double lam : lambdas) {
    const double v = std::sqrt(lam);  // keeps v^2 / lambda = 1
    const ModelParams p{v, lam, {}};
    const auto pt = stdev_curve(p, 0.01, {1.0})[0];
    const double var = pt.stdev * pt.stdev;
    const double rel = std::abs(var - 1.01) / 1.01;
    if (rel > 5.0 / lam) var_ok = false;
    worst_rel = std::max(worst_rel, rel / (5.0 / lam));
    const double scaled = lam * lam * std::abs(pt.remainder) / (v * v);
    scaled_min = std::min(scaled_min, scaled);
    scaled_max = std::max(scaled_max, scaled);
  }
  const double ratio = scaled_max / scaled_min;

  Outcome o;
  o.pass = var_ok && ratio <= 3.0;
  o.detail = "worst |var-1.01|/1.01 at " + fmt(worst_rel * 100.0) +
             "% of its 5/lambda budget; lambda^2|R|/v^2 spread ratio " +
             fmt(ratio) + " <= 3";
  return o;
}

Outcome lorentz_covariance() {
  const double add_err = std::abs(add_velocities(0.8, 0.5, 1.0) - 0.5);
  const double rate_err = std::abs(rescale_rate(1.0, 0.8, 1.0) - 0.6);

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> frame(-0.9, 0.9);
  double max_round = 0.0, max_interval = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Boost b(frame(rng), 1.0);
    const SpacetimeEvent e{coord(rng), coord(rng)};
    const SpacetimeEvent f = boost_event(b, e);
    const SpacetimeEvent back = inverse_boost_event(b, f);
    max_round = std::max(max_round,
                         std::abs(back.t - e.t) + std::abs(back.x - e.x));
    max_interval = std::max(max_interval, std::abs((f.t * f.t - f.x * f.x) -
                                                   (e.t * e.t - e.x * e.x)));
  }

  ModelParams p{0.8, 1.0, {}};
  p.c = 1.0;
  double res[3];
  const double dxs[3] = {1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0};
  for (int k = 0; k < 3; ++k) {
    const auto level =
        covariance_study_level(p, 0.3, dxs[k], 0.15, 1.0, Interp::Cubic);
    res[k] = level.res_plus + level.res_minus;
  }
  const double order01 = std::log2(res[0] / res[1]);
  const double order12 = std::log2(res[1] / res[2]);

  Outcome o;
  o.pass = add_err <= 1e-15 && rate_err <= 1e-15 && max_round <= 1e-12 &&
           max_interval <= 1e-12 && order01 >= 1.6 && order01 <= 2.4 &&
           order12 >= 1.6 && order12 <= 2.4;
  o.detail = "residual orders " + fmt(order01) + ", " + fmt(order12) +
             " in [1.6,2.4]; addition err " + fmt(add_err) + ", rate err " +
             fmt(rate_err) + " <= 1e-15; round-trip " + fmt(max_round) +
             ", interval " + fmt(max_interval) + " <= 1e-12 on 10^4 events";
  return o;
}

Outcome light_cone() {
  const WavePacket w = WavePacket::uniform(-0.1, 0.1);
  const ModelParams p{1.0, 1.0, {}};
  const double dx = 1.0 / 128.0;
  const Grid1D g = Grid1D::centered(1.3, dx);

  const auto mc =
      averaged_density(w, p, 1.0, g, Method::Mc, McConfig{200000, 5, 8});
  const auto pde = averaged_density(w, p, 1.0, g, Method::Pde);

  const double probe_mc = lightcone_violation_mass(mc, 1.2, 2.2);
  const double probe_pde = lightcone_violation_mass(pde, 1.2, 2.2);

  // Independent audit straight off the arrays: cells lying entirely beyond
  // the cone must hold exactly zero. The PDE represents the packet edge at
  // cell resolution, so its support may poke out by the cell-quantization
  // slack, never more.
  const auto beyond = [&](const AveragedDensity& d, double slack) {
    double total = 0.0;
    for (std::int64_t i = 0; i < g.nx; ++i) {
      const double cell_lo = g.x_min + static_cast<double>(i) * g.dx;
      const double cell_hi = cell_lo + g.dx;
      if (cell_hi <= d.cone_lo - slack || cell_lo >= d.cone_hi + slack) {
        const auto u = static_cast<std::size_t>(i);
        total += (d.rho.f_plus[u] + d.rho.f_minus[u]) * g.dx;
      }
    }
    return total;
  };
  const double raw_mc = beyond(mc, 0.0);
  const double raw_pde = beyond(pde, 2.0 * dx);

  SolveAudit qa{"packet-averaged pde density", std::abs(pde.rho.mass() - 1.0),
                min_field_value(pde.rho)};
  g_audits.push_back(qa);

  Outcome o;
  o.pass = probe_mc == 0.0 && probe_pde <= 1e-12 && raw_mc == 0.0 &&
           raw_pde == 0.0;
  o.detail = "probe(1.2,2.2) mass: mc " + fmt(probe_mc) + " (== 0), pde " +
             fmt(probe_pde) + " (<= 1e-12); raw mass beyond cone: mc " +
             fmt(raw_mc) + ", pde(+2dx slack) " + fmt(raw_pde) + " (== 0)";
  return o;
}

Outcome density_triangle() {
  const ModelParams p{1.0, 1.0, {}};
  const double t = 1.0;
  const double atom = 0.5 * std::exp(-p.lambda * t);

  // MC histogram against the closed-form law, cell by cell plus atoms.
  const Grid1D gc = Grid1D::centered(1.2, 1.0 / 128.0);
  const auto mc =
      empirical_density(p, 0.0, Start::Symmetric, t, gc, McConfig{1000000, 77, 8});
  double l1_mc = 0.0;
  for (std::int64_t i = 0; i < gc.nx; ++i) {
    const double lo = gc.x_min + static_cast<double>(i) * gc.dx;
    const auto u = static_cast<std::size_t>(i);
    const double cell = (mc.fields.f_plus[u] + mc.fields.f_minus[u]) * gc.dx;
    l1_mc += std::abs(cell - ac_mass_between(p, t, lo, lo + gc.dx));
  }
  l1_mc += std::abs(mc.atom_weight_plus - atom) +
           std::abs(mc.atom_weight_minus - atom);

  // Unit-CFL solve against the closed-form law. The single-cell start makes
  // the lattice law alternate between even and odd cells, so cells are
  // compared in consecutive pairs (each pair holds exactly one live cell)
  // and the atoms ride in the extreme live cells.
  const Grid1D gf = Grid1D::centered(1.2, 1.0 / 512.0);
  const auto init = point_mass_init(gf, 0.0, Start::Symmetric);
  const auto sol = solve_forward(p, init, {0.25, 0.5, 0.75, 1.0});
  audit_solve("point-mass forward solve", sol, 1.0);
  const FieldPair& fine = sol.snapshots.back();

  const auto bin_mass = [&](const FieldPair& f, std::int64_t i) {
    const auto u = static_cast<std::size_t>(i);
    double m = (f.f_plus[u] + f.f_minus[u]) * gf.dx;
    if (i + 1 < gf.nx) {
      m += (f.f_plus[u + 1] + f.f_minus[u + 1]) * gf.dx;
    }
    return m;
  };
  const auto bin_bounds = [&](std::int64_t i, double* lo, double* hi) {
    *lo = gf.x_min + static_cast<double>(i) * gf.dx;
    *hi = *lo + (i + 1 < gf.nx ? 2.0 : 1.0) * gf.dx;
  };

  double l1_pde = 0.0;
  for (std::int64_t i = 0; i < gf.nx; i += 2) {
    double lo, hi;
    bin_bounds(i, &lo, &hi);
    double ref = ac_mass_between(p, t, lo, hi);
    if (lo < -p.v * t && -p.v * t < hi) ref += atom;
    if (lo < p.v * t && p.v * t < hi) ref += atom;
    l1_pde += std::abs(bin_mass(fine, i) - ref);
  }

  // Third side of the triangle: a fresh MC run on the fine grid against the
  // solve, binned identically, MC atom weights folded into their bins.
  const auto mcf =
      empirical_density(p, 0.0, Start::Symmetric, t, gf, McConfig{1000000, 78, 8});
  double l1_cross = 0.0;
  for (std::int64_t i = 0; i < gf.nx; i += 2) {
    double lo, hi;
    bin_bounds(i, &lo, &hi);
    double m = bin_mass(mcf.fields, i);
    if (lo < mcf.atom_pos_minus && mcf.atom_pos_minus < hi) {
      m += mcf.atom_weight_minus;
    }
    if (lo < mcf.atom_pos_plus && mcf.atom_pos_plus < hi) {
      m += mcf.atom_weight_plus;
    }
    l1_cross += std::abs(m - bin_mass(fine, i));
  }

  const double tol_pde = 10.0 / 512.0;
  Outcome o;
  o.pass = l1_mc < 0.02 && l1_pde < tol_pde && l1_cross < 0.02 + tol_pde;
  o.detail = "L1(mc, closed form) " + fmt(l1_mc) + " < 0.02; L1(pde, closed form) " +
             fmt(l1_pde) + " < " + fmt(tol_pde) + "; L1(mc, pde) " +
             fmt(l1_cross) + " < " + fmt(0.02 + tol_pde);
  return o;
}

Outcome diffusive_limit() {
  const Grid1D g = Grid1D::centered(6.0, 1.0 / 64.0);
  const auto rows = diffusive_limit_study(1.0, {10.0, 100.0, 1000.0}, 1.0, g);
  const bool decreasing =
      rows[1].l1 < rows[0].l1 && rows[2].l1 < rows[1].l1;

  Outcome o;
  o.pass = decreasing && rows[2].l1 < 0.05;
  o.detail = "L1 ladder " + fmt(rows[0].l1) + " > " + fmt(rows[1].l1) + " > " +
             fmt(rows[2].l1) + ", final < 0.05";
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) return "<missing " + path + ">";
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  // In-process: identical estimates bit for bit across worker counts.
  const ModelParams p{1.0, 1.0, {}};
  const auto f = [](double x, int) { return x; };
  const auto e1 =
      estimate_expectation(p, 0.0, Start::Plus, 1.0, f, McConfig{200000, 7, 1});
  const auto e4 =
      estimate_expectation(p, 0.0, Start::Plus, 1.0, f, McConfig{200000, 7, 4});
  const auto e8 =
      estimate_expectation(p, 0.0, Start::Plus, 1.0, f, McConfig{200000, 7, 8});
  const bool in_proc = e1.value == e4.value && e4.value == e8.value &&
                       e1.std_error == e4.std_error &&
                       e4.std_error == e8.std_error;

  const char* cli = std::getenv("TG_CLI");
  if (cli == nullptr || *cli == '\0') {
    return {false, "TG_CLI is not set; cannot check the command-line artifacts"};
  }
  std::string dir_tmpl = "/tmp/tg_acceptance_XXXXXX";
  std::vector<char> buf(dir_tmpl.begin(), dir_tmpl.end());
  buf.push_back('\0');
  if (mkdtemp(buf.data()) == nullptr) {
    return {false, "mkdtemp failed"};
  }
  const std::string dir(buf.data());

  const auto shell = [&](const std::string& tail) {
    const std::string cmd =
        std::string(cli) + " " + tail + " >/dev/null 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  };

  bool cli_ok = true;
  const int workers[3] = {1, 4, 8};
  std::vector<std::string> sim_csv, sim_json, qua_csv, qua_json;
  for (int wkr : workers) {
    const std::string s_base = dir + "/sim_w" + std::to_string(wkr);
    const std::string q_base = dir + "/qua_w" + std::to_string(wkr);
    cli_ok = cli_ok &&
             shell("simulate --n-paths 200000 --seed 7 --nx 256 --workers " +
                   std::to_string(wkr) + " --out " + s_base) == 0;
    cli_ok = cli_ok &&
             shell("quantum --method mc --n-paths 100000 --seed 11 --t 0.5 "
                   "--workers " +
                   std::to_string(wkr) + " --out " + q_base) == 0;
    sim_csv.push_back(slurp(s_base + ".csv"));
    sim_json.push_back(slurp(s_base + ".json"));
    qua_csv.push_back(slurp(q_base + ".csv"));
    qua_json.push_back(slurp(q_base + ".json"));
  }
  for (int k = 1; k < 3; ++k) {
    cli_ok = cli_ok && sim_csv[k] == sim_csv[0] && sim_json[k] == sim_json[0];
    cli_ok = cli_ok && qua_csv[k] == qua_csv[0] && qua_json[k] == qua_json[0];
  }

  Outcome o;
  o.pass = in_proc && cli_ok;
  o.detail = std::string("in-process estimates ") +
             (in_proc ? "bit-identical" : "DIFFER") +
             " and command-line artifacts " +
             (cli_ok ? "byte-identical" : "DIFFER") +
             " across workers {1,4,8}";
  return o;
}

Outcome conservation() {
  // Reproduce the lab-frame solve behind the covariance ladder: symmetric
  // Gaussian data on [-3, 3] marched at the rescaled rate.
  const ModelParams lab{0.8, rescale_rate(1.0, 0.8, 1.0), {}};
  const Grid1D g(-3.0, 3.0, 768);
  const auto init = gaussian_init(g, 0.0, 0.15, Start::Symmetric);
  const auto sol = solve_forward(lab, init, {0.75, 1.5});
  audit_solve("lab-frame covariance solve", sol, init.mass());

  double worst_drift = 0.0;
  double worst_min = std::numeric_limits<double>::infinity();
  for (const auto& a : g_audits) {
    worst_drift = std::max(worst_drift, a.mass_drift);
    worst_min = std::min(worst_min, a.min_field);
  }

  Outcome o;
  o.pass = !g_audits.empty() && worst_drift <= 1e-12 && worst_min >= -1e-12;
  o.detail = std::to_string(g_audits.size()) +
             " density solves audited: max mass drift " + fmt(worst_drift) +
             " <= 1e-12, min field " + fmt(worst_min) +
             " >= -1e-12 (backward payoff solve exempt: its fields are "
             "signed by construction)";
  return o;
}

}  // namespace

int main() {
  std::printf("telegraph acceptance checklist (library %s)\n",
              telegraph::kVersion);
  run_criterion(1, "mean formula, mc and backward pde", mean_formula);
  run_criterion(2, "moment closed forms vs ode oracle", moment_oracle_agreement);
  run_criterion(3, "variance asymptotics and remainder scaling",
                variance_asymptotics);
  run_criterion(4, "lorentz covariance and boost algebra", lorentz_covariance);
  run_criterion(5, "light-cone containment", light_cone);
  run_criterion(6, "density oracle triangle", density_triangle);
  run_criterion(7, "diffusive limit", diffusive_limit);
  run_criterion(8, "determinism across worker counts", determinism);
  run_criterion(9, "mass conservation and positivity", conservation);
  std::printf("%d/9 criteria passed\n", 9 - g_failures);
  return g_failures;
}
