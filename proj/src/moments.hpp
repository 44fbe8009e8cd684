#pragma once

#include <vector>

#include "core.hpp"

// Moment curves of the switching process: closed forms for <x>(t), <x^2>(t)
// and the variance, an independent ODE oracle that integrates the exact
// moment system numerically (no shared algebra with the closed forms), the
// large-rate leading stdev form with its remainder, and the diffusive-limit
// distance table.
//
// start_sign is +1 / -1 for a deterministic initial velocity sign and 0 for
// the symmetric coin-flip start (which changes the variance: the mixture of
// the two signed laws adds the spread of their means).

namespace telegraph {

struct InitialMoments {
  double m1 = 0.0;
  double m2 = 0.0;  // must satisfy m2 >= m1^2
};

// <x>(t) = m1 + s (v / 2 lambda)(1 - e^(-2 lambda t)); ballistic for
// lambda = 0.
double mean_closed_form(const ModelParams& p, double m1_0, int start_sign,
                        double t);

// Solves d m2/dt + 2 lambda m2 = 2 v^2 t + C2 with the oracle-validated
// constant C2 = 2 lambda m2_0 + 2 s v m1_0 (the first-moment relation forces
// d m2/dt(0) = 2 <nu x>(0) = 2 s v m1_0; printed versions of the constant
// disagree on the sign and drop the factor 2).
double second_moment_closed_form(const ModelParams& p, const InitialMoments& w0,
                                 int start_sign, double t);

double variance_closed_form(const ModelParams& p, double var0, int start_sign,
                            double t);

struct MomentPoint {
  double t = 0.0;
  double mean = 0.0;
  double second_moment = 0.0;
  double mean_velocity = 0.0;  // <nu>(t)
};

// Ground truth: integrates d<nu>/dt = -2 lambda <nu>, dm1/dt = <nu>,
// dq/dt = v^2 - 2 lambda q, dm2/dt = 2q (q = <nu x>, q(0) = s v m1_0)
// with an adaptive Runge-Kutta controlled to 1e-12, well inside the 1e-10
// budget. `times` must be strictly increasing and >= 0.
std::vector<MomentPoint> moment_ode_oracle(const ModelParams& p,
                                           const InitialMoments& w0,
                                           int start_sign,
                                           const std::vector<double>& times);

struct StdevPoint {
  double t = 0.0;
  double stdev = 0.0;          // exact
  double leading_form = 0.0;   // sqrt(var0 + (v^2 t / lambda)(1 - e^(-2 lambda t)))
  double remainder = 0.0;      // stdev^2 - leading_form^2
};

// Signed start (variance is the same for both signs).
std::vector<StdevPoint> stdev_curve(const ModelParams& p, double var0,
                                    const std::vector<double>& times);

struct LimitRow {
  double lambda = 0.0;
  double v = 0.0;      // sqrt(sigma * lambda)
  double l1 = 0.0;     // distance to the Gaussian N(0, sigma t)
};

// Holds sigma = v^2 / lambda fixed and measures the L1 distance between the
// symmetric-start law at time t (atoms included) and its Gaussian limit,
// evaluated on eval_grid with the out-of-grid tails bounded explicitly.
std::vector<LimitRow> diffusive_limit_study(double sigma,
                                            const std::vector<double>& lambdas,
                                            double t, const Grid1D& eval_grid);

}  // namespace telegraph
