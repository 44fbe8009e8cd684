#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core.hpp"
#include "telegraph_mc.hpp"

// Random evolution of a quantum packet whose only motion is rigid
// translation at +-v: the position density of each velocity branch is
// |psi0|^2 translated by the path displacement, so the whole layer works
// with densities and their exact support bounds. No phases or amplitudes
// ever enter.

namespace telegraph {

// Probability density with exact compact support (a, b): closed-form
// profiles or an on-grid sampled one, normalized at construction, plus a
// translation offset. cdf() is exactly 0 left of the support and exactly 1
// right of it, which the light-cone bookkeeping relies on.
class WavePacket {
 public:
  static WavePacket uniform(double a, double b);
  static WavePacket truncated_gaussian(double a, double b, double sigma);
  static WavePacket raised_cosine(double a, double b);
  static WavePacket sampled(const Grid1D& g, const std::vector<double>& density);

  double support_lo() const { return a_ + offset_; }
  double support_hi() const { return b_ + offset_; }
  double density(double x) const;
  double cdf(double x) const;
  double mass_between(double lo, double hi) const;
  double mean() const;
  double second_moment() const;
  double variance() const;

  WavePacket shifted(double delta) const;

 private:
  enum class Profile { Uniform, TruncatedGaussian, RaisedCosine, Sampled };

  WavePacket(Profile profile, double a, double b);

  double base_cdf(double x) const;  // offset removed

  Profile profile_;
  double a_, b_;          // support of the unshifted profile
  double offset_ = 0.0;
  double sigma_ = 0.0;    // truncated gaussian only
  double trunc_z_ = 1.0;  // mass of the untruncated gaussian inside (a, b)
  std::vector<double> cell_mass_;  // sampled only: per-cell masses, sum 1
  std::vector<double> cum_mass_;   // exclusive prefix sums of cell_mass_
  double samp_x0_ = 0.0, samp_dx_ = 0.0;
};

// Free packet evolution is translation: psi(t, x) = psi0(x -+ v t) for the
// +- velocity branch, so the density translates by direction * v * dt.
WavePacket unitary_shift(const WavePacket& w, double v, double dt, int direction);

// Packet translated by the exact path displacement over [0, t].
WavePacket random_state_density(const WavePacket& w0, const SwitchRecord& rec,
                                const ModelParams& p, double t);

enum class Method { Mc, Pde };

// rho_plus / rho_minus: position densities at time t for paths started in
// the +v / -v state, averaged over switching histories and weighted by the
// fair coin flip of the initial sign: each component carries mass 1/2 and
// their sum is the path-averaged probability density (total mass 1).
// `cone_lo/hi` are the exact support bounds (a - v t, b + v t); MC
// accumulations are identically zero outside.
struct AveragedDensity {
  AveragedDensity(const Grid1D& g) : rho(g) {}

  FieldPair rho;  // f_plus = rho_plus, f_minus = rho_minus
  double t = 0.0;
  double cone_lo = 0.0;
  double cone_hi = 0.0;
  Method method = Method::Mc;
  std::int64_t n_paths = 0;  // per component; 0 for the PDE route
};

// mc: average of exactly-translated packet cell masses over sampled paths
// (per-sign sub-ensembles on disjoint path-index ranges).
// pde: solve_forward from (|psi0|^2, 0) and (0, |psi0|^2), summing the two
// components of each solve at time t.
AveragedDensity averaged_density(const WavePacket& w, const ModelParams& p,
                                 double t, const Grid1D& grid, Method method,
                                 const McConfig& cfg = {});

// dx * sum_i f(x_i) rho_i over one component.
double expected_observable(const AveragedDensity& rho, Start component,
                           const std::function<double(double)>& f);

// Mass both components place in the probe interval (b_lo, b_hi), the probe
// clipped to the exact support cone first: cells straddling the cone edge
// carry only inside-cone mass, so a probe disjoint from the cone reports
// exactly 0 rather than a sliver of a straddle cell.
double lightcone_violation_mass(const AveragedDensity& rho, double b_lo,
                                double b_hi);

}  // namespace telegraph
