#pragma once

#include <cstdint>
#include <vector>

#include "core.hpp"

// Chapman-Kolmogorov solver for the two-speed switching system
//
//   d/dt f+ + v d/dx f+ = lambda (f- - f+)
//   d/dt f- - v d/dx f- = lambda (f+ - f-)
//
// discretized by Strang splitting of two exactly-solved pieces: advection at
// unit CFL (dt = dx / v, a one-cell index shift, no numerical diffusion) and
// the pointwise 2x2 switching exponential. The only discretization error is
// the O(dt^2) splitting commutator.

namespace telegraph {

// Exact relaxation over dt: with mu = exp(-2 lambda dt),
//   f+ <- (1+mu)/2 f+ + (1-mu)/2 f-,   f- <- (1-mu)/2 f+ + (1+mu)/2 f-.
// Preserves f+ + f- pointwise and nonnegativity.
FieldPair switching_step(const FieldPair& f, double lambda, double dt);

struct SolveMeta {
  double dx = 0.0;
  double dt = 0.0;                // dx / v exactly
  std::int64_t n_steps = 0;
  double lost_mass = 0.0;         // outflow through the boundaries (forward)
  bool times_snapped = false;     // an output time was rounded to a step
};

struct SolveResult {
  SolveResult(const Grid1D& g) : grid(g) {}

  Grid1D grid;
  std::vector<double> times;      // snapped output times, strictly increasing
  std::vector<FieldPair> snapshots;
  SolveMeta meta;

  double mass_at(std::size_t k) const { return snapshots.at(k).mass(); }
};

// Marches the forward system from `init` and stores snapshots at the given
// times (each rounded to the nearest step; must be distinct after rounding).
// Boundary is outflow-with-accounting; the solve aborts with GridTooSmall the
// moment cumulative lost mass exceeds 1e-12 of the initial mass.
SolveResult solve_forward(const ModelParams& p, const FieldPair& init,
                          const std::vector<double>& output_times);

// Backward (expectation) system for u1(t,x) = E[F | start x, +v] and u2
// likewise for -v: same switching, shifts reversed, replicate-edge inflow.
// Values closer than v*t to a boundary are polluted by the inflow guess;
// constants are propagated exactly everywhere.
SolveResult solve_backward(const ModelParams& p, const FieldPair& terminal,
                           const std::vector<double>& output_times);

// Centered second-difference residual of the telegraph equation
//   d2/dt2 f + 2 lambda d/dt f = v^2 d2/dx2 f
// evaluated per component on each consecutive snapshot triple (requires >= 3
// uniformly spaced stored times). For each origin in `atom_origins`, the
// band swept by the characteristics x0 +- v t over the triple's time span
// (padded by 2 dx) is excluded, as are the two boundary cells. Returns the
// discrete L2 norm per triple.
struct ResidualNorm {
  double t = 0.0;       // middle time of the triple
  double res_plus = 0.0;
  double res_minus = 0.0;
};

std::vector<ResidualNorm> telegraph_residual(
    const SolveResult& result, const ModelParams& p,
    const std::vector<double>& atom_origins = {});

// Closed-form law of x(t) for the symmetric start (sign +-1 with equal
// probability, position 0): two atoms of weight e^(-lambda t)/2 at +-v t and
// an absolutely continuous part on |x| < v t built from modified Bessel
// functions. Queries outside the cone return zero density. The signed-start
// law is not provided in closed form here; use solve_forward or the MC
// histogram for it (Unsupported is raised so nobody trips on a half answer).
struct DensityTriple {
  double ac = 0.0;                // density of the absolutely continuous part
  double atom_weight_plus = 0.0;  // point mass at +v t
  double atom_weight_minus = 0.0; // point mass at -v t
};

DensityTriple analytic_density(const ModelParams& p, double t, double x,
                               Start start = Start::Symmetric);

// Initial data builders. Point masses become single-cell masses (x0 should
// be a cell center, e.g. via Grid1D::centered); Gaussians are exact cell
// averages via the error function. Mass 1 total, split across components
// for the symmetric start.
FieldPair point_mass_init(const Grid1D& g, double x0, Start start);
FieldPair gaussian_init(const Grid1D& g, double x0, double sigma, Start start);

}  // namespace telegraph
