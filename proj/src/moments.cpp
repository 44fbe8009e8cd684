#include "moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "ck_pde.hpp"

namespace telegraph {

namespace {

void check_start_sign(int s) {
  if (s != -1 && s != 0 && s != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "start_sign must be -1, 0 or +1, got " + std::to_string(s));
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::TimeOutOfRange, "time must be finite and >= 0");
  }
}

// 1 - e^(-2 lambda t) without cancellation for small lambda t.
double one_minus_decay(double lambda, double t) {
  return -std::expm1(-2.0 * lambda * t);
}

}  // namespace

double mean_closed_form(const ModelParams& p, double m1_0, int start_sign,
                        double t) {
  validate_params(p);
  check_start_sign(start_sign);
  check_time(t);
  const double s = static_cast<double>(start_sign);
  if (p.lambda == 0.0) {
    return m1_0 + s * p.v * t;
  }
  return m1_0 + s * p.v / (2.0 * p.lambda) * one_minus_decay(p.lambda, t);
}

double second_moment_closed_form(const ModelParams& p, const InitialMoments& w0,
                                 int start_sign, double t) {
  validate_params(p);
  check_start_sign(start_sign);
  check_time(t);
  if (w0.m2 < w0.m1 * w0.m1) {
    throw Error(ErrorCode::InvalidArgument,
                "initial second moment below square of initial mean");
  }
  const double s = static_cast<double>(start_sign);
  const double v = p.v;
  if (p.lambda == 0.0) {
    // x(t) = x(0) + s v t exactly.
    return w0.m2 + 2.0 * s * v * w0.m1 * t + v * v * t * t;
  }
  const double lam = p.lambda;
  const double d = one_minus_decay(lam, t);
  return w0.m2 + v * v / lam * t - v * v / (2.0 * lam * lam) * d +
         s * v * w0.m1 / lam * d;
}

double variance_closed_form(const ModelParams& p, double var0, int start_sign,
                            double t) {
  validate_params(p);
  check_start_sign(start_sign);
  check_time(t);
  if (var0 < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "negative initial variance");
  }
  const double v = p.v;
  if (p.lambda == 0.0) {
    // Signed start translates the law rigidly; the symmetric start splits it
    // into two translates at +-vt.
    return start_sign == 0 ? var0 + v * v * t * t : var0;
  }
  const double lam = p.lambda;
  const double d = one_minus_decay(lam, t);
  const double common = var0 + v * v / lam * t;
  if (start_sign == 0) {
    return common - v * v / (2.0 * lam * lam) * d;
  }
  // Subtracting the squared mean drift turns the d-term into d(3 - e^(-2
  // lambda t))/4; the result is sign-independent.
  return common - v * v / (4.0 * lam * lam) * d * (2.0 + d);
}

std::vector<MomentPoint> moment_ode_oracle(const ModelParams& p,
                                           const InitialMoments& w0,
                                           int start_sign,
                                           const std::vector<double>& times) {
  validate_params(p);
  check_start_sign(start_sign);
  if (times.empty()) {
    return {};
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    check_time(times[i]);
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "oracle times must be strictly increasing");
    }
  }

  using State = std::array<double, 4>;  // <nu>, m1, q = <nu x>, m2
  const double v = p.v;
  const double lam = p.lambda;
  auto system = [v, lam](const State& y, State& dydt, double /*t*/) {
    dydt[0] = -2.0 * lam * y[0];
    dydt[1] = y[0];
    dydt[2] = v * v - 2.0 * lam * y[2];
    dydt[3] = 2.0 * y[2];
  };

  const double s = static_cast<double>(start_sign);
  State y = {s * v, w0.m1, s * v * w0.m1, w0.m2};

  std::vector<double> ts;
  ts.reserve(times.size() + 1);
  bool synthetic_origin = times.front() > 0.0;
  if (synthetic_origin) {
    ts.push_back(0.0);
  }
  ts.insert(ts.end(), times.begin(), times.end());

  std::vector<MomentPoint> out;
  out.reserve(times.size());
  auto observer = [&out](const State& state, double t) {
    out.push_back(MomentPoint{t, state[1], state[3], state[0]});
  };

  namespace ode = boost::numeric::odeint;
  auto stepper =
      ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_dopri5<State>());
  double dt0 = lam > 0.0 ? std::min(0.1, 0.1 / lam) : 0.1;
  ode::integrate_times(stepper, system, y, ts.begin(), ts.end(), dt0, observer);
  if (synthetic_origin) {
    out.erase(out.begin());
  }
  return out;
}

std::vector<StdevPoint> stdev_curve(const ModelParams& p, double var0,
                                    const std::vector<double>& times) {
  validate_params(p);
  if (var0 < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "negative initial variance");
  }
  std::vector<StdevPoint> out;
  out.reserve(times.size());
  for (double t : times) {
    check_time(t);
    const double exact = variance_closed_form(p, var0, +1, t);
    double leading;
    if (p.lambda == 0.0) {
      leading = var0 + 2.0 * p.v * p.v * t * t;  // limit of the quoted form
    } else {
      leading = var0 +
                p.v * p.v * t / p.lambda * one_minus_decay(p.lambda, t);
    }
    out.push_back(StdevPoint{t, std::sqrt(exact), std::sqrt(leading),
                             exact - leading});
  }
  return out;
}

std::vector<LimitRow> diffusive_limit_study(double sigma,
                                            const std::vector<double>& lambdas,
                                            double t, const Grid1D& eval_grid) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  }
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::TimeOutOfRange, "time must be positive");
  }
  std::vector<LimitRow> out;
  out.reserve(lambdas.size());
  const double gauss_var = sigma * t;
  const double inv_norm = 1.0 / std::sqrt(2.0 * M_PI * gauss_var);
  for (double lam : lambdas) {
    if (!(lam > 0.0)) {
      throw Error(ErrorCode::NegativeRate, "rates must be positive");
    }
    ModelParams p;
    p.v = std::sqrt(sigma * lam);
    p.lambda = lam;

    // Midpoint sums over the shared grid, plus explicit bounds for the mass
    // either law carries outside it: the two atoms at +-vt, the continuous
    // mass beyond the grid edge, and the Gaussian tails.
    double l1 = 0.0;
    double telegraph_inside = 0.0;
    double gauss_inside = 0.0;
    for (std::int64_t i = 0; i < eval_grid.nx; ++i) {
      const double x = eval_grid.cell_center(i);
      const double ac = analytic_density(p, t, x).ac;
      const double g =
          inv_norm * std::exp(-0.5 * x * x / gauss_var);
      l1 += std::abs(ac - g) * eval_grid.dx;
      telegraph_inside += ac * eval_grid.dx;
      gauss_inside += g * eval_grid.dx;
    }
    const double atom_mass = std::exp(-lam * t);
    const double telegraph_outside =
        std::max(0.0, (1.0 - atom_mass) - telegraph_inside);
    const double gauss_outside = std::max(0.0, 1.0 - gauss_inside);
    l1 += atom_mass + telegraph_outside + gauss_outside;
    out.push_back(LimitRow{lam, p.v, l1});
  }
  return out;
}

}  // namespace telegraph
