#pragma once

#include <array>
#include <vector>

#include "ck_pde.hpp"
#include "core.hpp"

// Special-relativistic side of the model: boosts, Einstein velocity
// addition, the sqrt(1-(v/c)^2) rate rescaling, and an executable form of
// the covariance statement: the lab-frame solution, pulled back through a
// boost and differenced on a moving-frame lattice, must satisfy the
// transformed switching system up to discretization error.

namespace telegraph {

// Boost with velocity V along x, |V| < c. gamma is cached at construction.
struct Boost {
  Boost(double V, double c);

  double V;
  double c;
  double gamma;
};

// (t, x) -> (gamma (t - V x / c^2), gamma (x - V t)); inverse flips V.
SpacetimeEvent boost_event(const Boost& b, const SpacetimeEvent& e);
SpacetimeEvent inverse_boost_event(const Boost& b, const SpacetimeEvent& e);

// Einstein addition (v - V) / (1 - v V / c^2): the velocity, in the moving
// frame, of something moving at v in the lab. |v| <= c, |V| < c.
double add_velocities(double v, double V, double c);

// Effective switching rate sqrt(1 - (v/c)^2) * lambda of a clock riding at
// speed v, lambda being the rest-frame rate.
double rescale_rate(double lambda, double v, double c);

// dt / dtau = 1 / sqrt(1 - (v/c)^2).
double proper_time_factor(double v, double c);

// Moving-frame parameters of the two velocity states +-v: transformed
// speeds and the per-state rates built from the same rest-frame lambda.
struct TransformedParams {
  double v_prime = 0.0;         // image of +v
  double v_double_prime = 0.0;  // image of -v, equals -(v+V)/(1+vV/c^2)
  double lambda_prime = 0.0;
  double lambda_double_prime = 0.0;
};

TransformedParams transformed_params(const ModelParams& p, double V);

enum class Interp {
  Bilinear,
  Cubic,  // separable 4-point Lagrange; the default
};

// L2 norms of the transformed-system residual
//   d/dt' g+ + v'  d/dx' g+ + lambda' (g+ - g-)   and
//   d/dt' g- + v'' d/dx' g- + lambda'' (g- - g+)
// where g+- are the lab solution pulled back through b and interpolated at
// the moving-frame lattice points, differenced centrally. `lab` must hold
// every step of the lab solve (uniform times); `p` carries the rest-frame
// lambda (the lab solve itself runs at rescale_rate(lambda, v, c)).
// moving_times are three uniformly spaced frame times. Points whose
// interpolation stencil leaves the stored lab lattice raise
// DomainNotCovered. Cells within 2 dx' of an atom characteristic image are
// excluded, as in telegraph_residual.
//
// Bilinear interpolation is retained for comparison, but its piecewise
// error differenced at matched resolutions is O(dx), which buries the
// O(dx^2) residual; cubic keeps the interpolation contribution at O(dx^3).
struct CovarianceResidual {
  double res_plus = 0.0;
  double res_minus = 0.0;
};

CovarianceResidual covariance_residual(const SolveResult& lab,
                                       const ModelParams& p, const Boost& b,
                                       const Grid1D& moving_grid,
                                       const std::array<double, 3>& moving_times,
                                       Interp interp = Interp::Cubic,
                                       const std::vector<double>& atom_origins = {});

// Canonical refinement-study level: symmetric Gaussian data of width
// init_sigma on a lab grid [-3, 3] at resolution dx, boosted by V, residual
// sampled on x' in [-1.5, 1.5] around frame time t_prime_center with
// spacings dx' = dt' = dx. Halving dx should show second-order decay.
struct CovarianceLevel {
  double dx = 0.0;
  double res_plus = 0.0;
  double res_minus = 0.0;
};

CovarianceLevel covariance_study_level(const ModelParams& p, double V, double dx,
                                       double init_sigma, double t_prime_center,
                                       Interp interp = Interp::Cubic);

}  // namespace telegraph
