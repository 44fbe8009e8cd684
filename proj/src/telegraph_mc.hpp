#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core.hpp"

// Exact Monte Carlo for the velocity-switching process: the switch epochs of
// a path are the events of a rate-lambda Poisson process, positions are
// integrals of the piecewise-constant velocity, and no time stepping is
// involved anywhere. Every estimator below is deterministic in
// (seed, n_paths) and bit-identical for any worker count.

namespace telegraph {

// One sampled path: initial sign and the strictly increasing switch epochs
// in (0, t_max]. Positions at any t <= t_max follow exactly from this.
struct SwitchRecord {
  int sign0 = +1;
  double t_max = 0.0;
  std::vector<double> times;
};

// Exponential(lambda) gaps until the first epoch past t_max (discarded).
// lambda = 0 gives no switches.
SwitchRecord sample_switches(const ModelParams& p, int sign0, double t_max,
                             PathRng& rng);

// Integral of the velocity over [0, t]. Computed from the time spent moving
// right, clamped to [0, t], so |result| <= v*t holds exactly, with equality
// exactly on never-switched paths.
double displacement_integral(const SwitchRecord& rec, const ModelParams& p,
                             double t);

struct PathState {
  double x = 0.0;
  int sign = +1;
};

// Position and current sign at time t in [0, rec.t_max].
PathState position_at(double x0, const SwitchRecord& rec, const ModelParams& p,
                      double t);

struct EnsembleEstimate {
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_paths)
  std::int64_t n_paths = 0;
};

struct McConfig {
  std::int64_t n_paths = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
};

// Mean of f(x(t), sign(t)) over fresh paths started at x0.
EnsembleEstimate estimate_expectation(
    const ModelParams& p, double x0, Start start, double t,
    const std::function<double(double x, int sign)>& f, const McConfig& cfg);

// Histogram of the law of x(t) split by final sign, with the two
// never-switched atoms at x0 +- v*t tallied separately (they are point
// masses, not densities). Single pass also yields moment estimates.
struct EmpiricalDensity {
  EmpiricalDensity(const Grid1D& g) : fields(g) {}

  FieldPair fields;            // switched paths only, 1/length units
  double atom_weight_plus = 0.0;
  double atom_weight_minus = 0.0;
  double atom_pos_plus = 0.0;
  double atom_pos_minus = 0.0;
  EnsembleEstimate mean_x;
  EnsembleEstimate second_moment_x;
  std::int64_t n_paths = 0;

  double total_mass() const;  // fields.mass() + atom weights; 1 up to rounding
};

EmpiricalDensity empirical_density(const ModelParams& p, double x0, Start start,
                                   double t, const Grid1D& grid,
                                   const McConfig& cfg);

}  // namespace telegraph
