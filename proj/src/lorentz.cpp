#include "lorentz.hpp"

#include <cmath>
#include <string>

namespace telegraph {

namespace {

void require_light_speed(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(ErrorCode::InvalidArgument, "light speed c must be positive");
}

}  // namespace

Boost::Boost(double V_, double c_) : V(V_), c(c_) {
  require_light_speed(c);
  if (!(std::abs(V) < c))
    throw Error(ErrorCode::SuperluminalSpeed,
                "boost velocity must satisfy |V| < c");
  gamma = 1.0 / std::sqrt((1.0 - V / c) * (1.0 + V / c));
}

SpacetimeEvent boost_event(const Boost& b, const SpacetimeEvent& e) {
  return {b.gamma * (e.t - b.V * e.x / (b.c * b.c)),
          b.gamma * (e.x - b.V * e.t)};
}

SpacetimeEvent inverse_boost_event(const Boost& b, const SpacetimeEvent& e) {
  return {b.gamma * (e.t + b.V * e.x / (b.c * b.c)),
          b.gamma * (e.x + b.V * e.t)};
}

double add_velocities(double v, double V, double c) {
  require_light_speed(c);
  if (!(std::abs(V) < c))
    throw Error(ErrorCode::SuperluminalSpeed, "|V| < c required");
  if (std::abs(v) > c)
    throw Error(ErrorCode::SuperluminalSpeed, "|v| <= c required");
  return (v - V) / (1.0 - v * V / (c * c));
}

double rescale_rate(double lambda, double v, double c) {
  require_light_speed(c);
  if (lambda < 0.0) throw Error(ErrorCode::NegativeRate, "lambda must be >= 0");
  if (std::abs(v) > c)
    throw Error(ErrorCode::SuperluminalSpeed, "|v| <= c required");
  return lambda * std::sqrt((1.0 - v / c) * (1.0 + v / c));
}

double proper_time_factor(double v, double c) {
  require_light_speed(c);
  if (!(std::abs(v) < c))
    throw Error(ErrorCode::SuperluminalSpeed, "|v| < c required");
  return 1.0 / std::sqrt((1.0 - v / c) * (1.0 + v / c));
}

TransformedParams transformed_params(const ModelParams& p, double V) {
  validate_params(p, /*relativistic=*/true);
  const double c = *p.c;
  TransformedParams out;
  out.v_prime = add_velocities(p.v, V, c);
  out.v_double_prime = add_velocities(-p.v, V, c);
  out.lambda_prime = rescale_rate(p.lambda, out.v_prime, c);
  out.lambda_double_prime = rescale_rate(p.lambda, out.v_double_prime, c);
  return out;
}

namespace {

// Separable interpolation on the stored lab lattice. Stencil indices are
// checked, not clamped: a point whose stencil leaves the lattice is a
// coverage error, silently extrapolating would corrupt the residual.
class LabInterpolator {
 public:
  LabInterpolator(const SolveResult& lab, Interp interp)
      : lab_(lab), interp_(interp) {
    const auto n = lab.times.size();
    if (n < (interp == Interp::Cubic ? 4u : 2u))
      throw Error(ErrorCode::InsufficientSnapshots,
                  "lab solution has too few stored times");
    dt_ = lab.times[1] - lab.times[0];
    for (std::size_t k = 1; k + 1 < n; ++k)
      if (std::abs((lab.times[k + 1] - lab.times[k]) - dt_) > 1e-9 * dt_)
        throw Error(ErrorCode::InsufficientSnapshots,
                    "lab solution times must be uniformly spaced");
    t0_ = lab.times.front();
  }

  // f_plus and f_minus of the lab solution at a pulled-back event.
  std::array<double, 2> operator()(const SpacetimeEvent& e) const {
    const Grid1D& g = lab_.grid;
    double r = (e.t - t0_) / dt_;
    double q = (e.x - g.cell_center(0)) / g.dx;
    if (interp_ == Interp::Cubic) {
      auto k = static_cast<std::int64_t>(std::floor(r));
      auto j = static_cast<std::int64_t>(std::floor(q));
      check(k - 1, k + 2, static_cast<std::int64_t>(lab_.times.size()), "time");
      check(j - 1, j + 2, g.nx, "space");
      auto wt = lagrange4(r - static_cast<double>(k));
      auto wx = lagrange4(q - static_cast<double>(j));
      std::array<double, 2> out{0.0, 0.0};
      for (int a = -1; a <= 2; ++a) {
        const FieldPair& snap = lab_.snapshots[static_cast<std::size_t>(k + a)];
        double rp = 0.0, rm = 0.0;
        for (int bidx = -1; bidx <= 2; ++bidx) {
          auto u = static_cast<std::size_t>(j + bidx);
          rp += wx[static_cast<std::size_t>(bidx + 1)] * snap.f_plus[u];
          rm += wx[static_cast<std::size_t>(bidx + 1)] * snap.f_minus[u];
        }
        out[0] += wt[static_cast<std::size_t>(a + 1)] * rp;
        out[1] += wt[static_cast<std::size_t>(a + 1)] * rm;
      }
      return out;
    }
    auto k = static_cast<std::int64_t>(std::floor(r));
    auto j = static_cast<std::int64_t>(std::floor(q));
    check(k, k + 1, static_cast<std::int64_t>(lab_.times.size()), "time");
    check(j, j + 1, g.nx, "space");
    double s = r - static_cast<double>(k);
    double u = q - static_cast<double>(j);
    std::array<double, 2> out{0.0, 0.0};
    for (int a = 0; a <= 1; ++a) {
      const FieldPair& snap = lab_.snapshots[static_cast<std::size_t>(k + a)];
      double wa = a == 0 ? 1.0 - s : s;
      auto jl = static_cast<std::size_t>(j);
      out[0] += wa * ((1.0 - u) * snap.f_plus[jl] + u * snap.f_plus[jl + 1]);
      out[1] += wa * ((1.0 - u) * snap.f_minus[jl] + u * snap.f_minus[jl + 1]);
    }
    return out;
  }

 private:
  static void check(std::int64_t lo, std::int64_t hi, std::int64_t n,
                    const char* axis) {
    if (lo < 0 || hi >= n)
      throw Error(ErrorCode::DomainNotCovered,
                  std::string("pulled-back point needs lab data outside the "
                              "stored lattice (") + axis + " axis)");
  }

  static std::array<double, 4> lagrange4(double s) {
    return {-s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0};
  }

  const SolveResult& lab_;
  Interp interp_;
  double dt_ = 0.0;
  double t0_ = 0.0;
};

}  // namespace

CovarianceResidual covariance_residual(const SolveResult& lab,
                                       const ModelParams& p, const Boost& b,
                                       const Grid1D& moving_grid,
                                       const std::array<double, 3>& moving_times,
                                       Interp interp,
                                       const std::vector<double>& atom_origins) {
  validate_params(p, /*relativistic=*/true);
  const double dtp = moving_times[1] - moving_times[0];
  if (!(dtp > 0.0) ||
      std::abs((moving_times[2] - moving_times[1]) - dtp) > 1e-9 * dtp)
    throw Error(ErrorCode::InsufficientSnapshots,
                "moving-frame times must be three uniformly spaced values");

  const TransformedParams tp = transformed_params(p, b.V);
  LabInterpolator interpolate(lab, interp);

  // Pull back the whole 3 x nJ moving lattice once.
  const auto nj = static_cast<std::size_t>(moving_grid.nx);
  std::vector<std::array<double, 2>> rows[3];
  for (int m = 0; m < 3; ++m) {
    rows[m].resize(nj);
    for (std::size_t j = 0; j < nj; ++j) {
      SpacetimeEvent prime{moving_times[static_cast<std::size_t>(m)],
                           moving_grid.cell_center(static_cast<std::int64_t>(j))};
      rows[m][j] = interpolate(inverse_boost_event(b, prime));
    }
  }

  // Characteristic images of any atoms at the middle frame time.
  const double t_mid = moving_times[1];
  std::vector<double> char_x;
  for (double x0 : atom_origins) {
    for (double u : {p.v, -p.v}) {
      double t_lab = (t_mid / b.gamma + b.V * x0 / (b.c * b.c)) /
                     (1.0 - u * b.V / (b.c * b.c));
      char_x.push_back(b.gamma * (x0 + (u - b.V) * t_lab));
    }
  }

  const double dxp = moving_grid.dx;
  double sum_plus = 0.0, sum_minus = 0.0;
  for (std::size_t j = 1; j + 1 < nj; ++j) {
    double xj = moving_grid.cell_center(static_cast<std::int64_t>(j));
    bool skip = false;
    for (double xc : char_x)
      if (std::abs(xj - xc) <= 2.0 * dxp) { skip = true; break; }
    if (skip) continue;
    double dt_plus = (rows[2][j][0] - rows[0][j][0]) / (2.0 * dtp);
    double dt_minus = (rows[2][j][1] - rows[0][j][1]) / (2.0 * dtp);
    double dx_plus = (rows[1][j + 1][0] - rows[1][j - 1][0]) / (2.0 * dxp);
    double dx_minus = (rows[1][j + 1][1] - rows[1][j - 1][1]) / (2.0 * dxp);
    double r_plus = dt_plus + tp.v_prime * dx_plus +
                    tp.lambda_prime * (rows[1][j][0] - rows[1][j][1]);
    double r_minus = dt_minus + tp.v_double_prime * dx_minus +
                     tp.lambda_double_prime * (rows[1][j][1] - rows[1][j][0]);
    sum_plus += r_plus * r_plus;
    sum_minus += r_minus * r_minus;
  }
  return {std::sqrt(sum_plus * dxp), std::sqrt(sum_minus * dxp)};
}

CovarianceLevel covariance_study_level(const ModelParams& p, double V, double dx,
                                       double init_sigma, double t_prime_center,
                                       Interp interp) {
  validate_params(p, /*relativistic=*/true);
  Boost b(V, *p.c);

  // Lab solve at the velocity-rescaled rate, every step stored so the
  // pullback can interpolate anywhere in the covered window.
  ModelParams lab_params{p.v, rescale_rate(p.lambda, p.v, *p.c), p.c};
  Grid1D lab_grid(-3.0, 3.0, static_cast<std::int64_t>(std::llround(6.0 / dx)));
  FieldPair init = gaussian_init(lab_grid, 0.0, init_sigma, Start::Symmetric);

  const double dtp = dx;
  const double c2 = *p.c * *p.c;
  const double t_hi = b.gamma * (t_prime_center + dtp +
                                 std::abs(V) * 1.5 / c2);
  const double dt_lab = lab_grid.dx / p.v;
  auto last_step =
      static_cast<std::int64_t>(std::ceil(t_hi / dt_lab)) + 3;  // stencil margin
  std::vector<double> store(static_cast<std::size_t>(last_step) + 1);
  for (std::int64_t k = 0; k <= last_step; ++k)
    store[static_cast<std::size_t>(k)] = static_cast<double>(k) * dt_lab;
  SolveResult lab = solve_forward(lab_params, init, store);

  Grid1D moving = Grid1D::centered(1.5, dx);
  std::array<double, 3> times{t_prime_center - dtp, t_prime_center,
                              t_prime_center + dtp};
  CovarianceResidual r = covariance_residual(lab, p, b, moving, times, interp);
  return {dx, r.res_plus, r.res_minus};
}

}  // namespace telegraph
