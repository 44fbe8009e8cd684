#include "quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ck_pde.hpp"
#include "parallel.hpp"

namespace telegraph {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi);
}

}  // namespace

WavePacket::WavePacket(Profile profile, double a, double b)
    : profile_(profile), a_(a), b_(b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::InvalidArgument, "packet support needs a < b");
}

WavePacket WavePacket::uniform(double a, double b) {
  return WavePacket(Profile::Uniform, a, b);
}

WavePacket WavePacket::truncated_gaussian(double a, double b, double sigma) {
  if (!(sigma > 0.0))
    throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  WavePacket w(Profile::TruncatedGaussian, a, b);
  w.sigma_ = sigma;
  double half = 0.5 * (b - a);
  w.trunc_z_ = 2.0 * std_normal_cdf(half / sigma) - 1.0;
  return w;
}

WavePacket WavePacket::raised_cosine(double a, double b) {
  return WavePacket(Profile::RaisedCosine, a, b);
}

WavePacket WavePacket::sampled(const Grid1D& g,
                               const std::vector<double>& density) {
  if (density.size() != static_cast<std::size_t>(g.nx))
    throw Error(ErrorCode::InvalidArgument, "sampled density size != grid nx");
  std::int64_t first = -1, last = -1;
  for (std::int64_t i = 0; i < g.nx; ++i) {
    double d = density[static_cast<std::size_t>(i)];
    if (!(d >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "sampled density must be >= 0");
    if (d > 0.0) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0)
    throw Error(ErrorCode::InvalidArgument, "sampled density is identically 0");
  WavePacket w(Profile::Sampled, g.x_min + static_cast<double>(first) * g.dx,
               g.x_min + static_cast<double>(last + 1) * g.dx);
  w.samp_x0_ = w.a_;
  w.samp_dx_ = g.dx;
  w.cell_mass_.assign(density.begin() + first, density.begin() + last + 1);
  double total = std::accumulate(w.cell_mass_.begin(), w.cell_mass_.end(), 0.0) *
                 g.dx;
  for (auto& m : w.cell_mass_) m *= g.dx / total;
  w.cum_mass_.resize(w.cell_mass_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.cell_mass_.size(); ++i) {
    w.cum_mass_[i] = acc;
    acc += w.cell_mass_[i];
  }
  return w;
}

double WavePacket::base_cdf(double x) const {
  if (x <= a_) return 0.0;
  if (x >= b_) return 1.0;
  switch (profile_) {
    case Profile::Uniform:
      return (x - a_) / (b_ - a_);
    case Profile::TruncatedGaussian: {
      double mid = 0.5 * (a_ + b_);
      return (std_normal_cdf((x - mid) / sigma_) -
              std_normal_cdf((a_ - mid) / sigma_)) /
             trunc_z_;
    }
    case Profile::RaisedCosine: {
      double u = (x - 0.5 * (a_ + b_)) / (b_ - a_);  // in (-1/2, 1/2)
      return u + 0.5 + std::sin(kTwoPi * u) / kTwoPi;
    }
    case Profile::Sampled: {
      double pos = (x - samp_x0_) / samp_dx_;
      auto cell = static_cast<std::size_t>(std::clamp(
          static_cast<std::int64_t>(std::floor(pos)), std::int64_t{0},
          static_cast<std::int64_t>(cell_mass_.size()) - 1));
      return cum_mass_[cell] + cell_mass_[cell] * (pos - static_cast<double>(cell));
    }
  }
  return 0.0;
}

double WavePacket::cdf(double x) const { return base_cdf(x - offset_); }

double WavePacket::density(double x) const {
  double y = x - offset_;
  if (y <= a_ || y >= b_) return 0.0;
  switch (profile_) {
    case Profile::Uniform:
      return 1.0 / (b_ - a_);
    case Profile::TruncatedGaussian: {
      double mid = 0.5 * (a_ + b_);
      return std_normal_pdf((y - mid) / sigma_) / (sigma_ * trunc_z_);
    }
    case Profile::RaisedCosine: {
      double w = b_ - a_;
      double u = (y - 0.5 * (a_ + b_)) / w;
      return (1.0 + std::cos(kTwoPi * u)) / w;
    }
    case Profile::Sampled: {
      auto cell = static_cast<std::size_t>(
          std::floor((y - samp_x0_) / samp_dx_));
      return cell < cell_mass_.size() ? cell_mass_[cell] / samp_dx_ : 0.0;
    }
  }
  return 0.0;
}

double WavePacket::mass_between(double lo, double hi) const {
  return lo < hi ? cdf(hi) - cdf(lo) : 0.0;
}

double WavePacket::mean() const {
  switch (profile_) {
    case Profile::Uniform:
    case Profile::TruncatedGaussian:  // symmetric truncation about the middle
    case Profile::RaisedCosine:
      return 0.5 * (a_ + b_) + offset_;
    case Profile::Sampled: {
      double m = 0.0;
      for (std::size_t i = 0; i < cell_mass_.size(); ++i) {
        double l = samp_x0_ + static_cast<double>(i) * samp_dx_;
        m += cell_mass_[i] * (l + 0.5 * samp_dx_);
      }
      return m + offset_;
    }
  }
  return 0.0;
}

double WavePacket::variance() const {
  switch (profile_) {
    case Profile::Uniform: {
      double w = b_ - a_;
      return w * w / 12.0;
    }
    case Profile::TruncatedGaussian: {
      // Symmetric truncation at +-alpha sigma: Var = sigma^2 (1 - 2 alpha
      // phi(alpha) / Z).
      double alpha = 0.5 * (b_ - a_) / sigma_;
      return sigma_ * sigma_ *
             (1.0 - 2.0 * alpha * std_normal_pdf(alpha) / trunc_z_);
    }
    case Profile::RaisedCosine: {
      double w = b_ - a_;
      return w * w * (1.0 / 12.0 - 1.0 / (2.0 * kPi * kPi));
    }
    case Profile::Sampled: {
      // Exact second moment of the piecewise-constant density.
      double mu = mean() - offset_;
      double m2 = 0.0;
      for (std::size_t i = 0; i < cell_mass_.size(); ++i) {
        double l = samp_x0_ + static_cast<double>(i) * samp_dx_;
        double r = l + samp_dx_;
        m2 += cell_mass_[i] * (r * r + r * l + l * l) / 3.0;
      }
      return m2 - mu * mu;
    }
  }
  return 0.0;
}

double WavePacket::second_moment() const {
  double mu = mean();
  return variance() + mu * mu;
}

WavePacket WavePacket::shifted(double delta) const {
  WavePacket w = *this;
  w.offset_ += delta;
  return w;
}

WavePacket unitary_shift(const WavePacket& w, double v, double dt,
                         int direction) {
  if (direction != +1 && direction != -1)
    throw Error(ErrorCode::InvalidArgument, "direction must be +1 or -1");
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveSpeed, "v must be > 0");
  if (!(dt >= 0.0)) throw Error(ErrorCode::TimeOutOfRange, "dt must be >= 0");
  return w.shifted(direction * v * dt);
}

WavePacket random_state_density(const WavePacket& w0, const SwitchRecord& rec,
                                const ModelParams& p, double t) {
  return w0.shifted(displacement_integral(rec, p, t));
}

AveragedDensity averaged_density(const WavePacket& w, const ModelParams& p,
                                 double t, const Grid1D& grid, Method method,
                                 const McConfig& cfg) {
  validate_params(p);
  if (!(t >= 0.0)) throw Error(ErrorCode::TimeOutOfRange, "t must be >= 0");
  AveragedDensity out(grid);
  out.t = t;
  out.cone_lo = w.support_lo() - p.v * t;
  out.cone_hi = w.support_hi() + p.v * t;
  out.method = method;
  if (!grid.covers(out.cone_lo, out.cone_hi))
    throw Error(ErrorCode::GridTooSmall,
                "grid must cover the support cone (a - v t, b + v t)");

  if (method == Method::Pde) {
    // Initial cell averages of |psi0|^2 in one component, zero in the other.
    std::vector<double> cells(static_cast<std::size_t>(grid.nx));
    for (std::int64_t i = 0; i < grid.nx; ++i) {
      double l = grid.x_min + static_cast<double>(i) * grid.dx;
      cells[static_cast<std::size_t>(i)] =
          w.mass_between(l, l + grid.dx) / grid.dx;
    }
    for (int sign : {+1, -1}) {
      FieldPair init(grid);
      (sign > 0 ? init.f_plus : init.f_minus) = cells;
      SolveResult sol = solve_forward(p, init, {t});
      auto& dest = sign > 0 ? out.rho.f_plus : out.rho.f_minus;
      const FieldPair& f = sol.snapshots.back();
      for (std::size_t i = 0; i < dest.size(); ++i)
        dest[i] = 0.5 * (f.f_plus[i] + f.f_minus[i]);
    }
    return out;
  }

  if (cfg.n_paths < 1)
    throw Error(ErrorCode::InvalidArgument, "n_paths must be >= 1");
  const auto nx = static_cast<std::size_t>(grid.nx);
  const double norm = 0.5 / (static_cast<double>(cfg.n_paths) * grid.dx);
  for (int sign : {+1, -1}) {
    // Disjoint path-index ranges keep the two sub-ensembles independent.
    const std::uint64_t base = sign > 0 ? 0 : static_cast<std::uint64_t>(cfg.n_paths);
    auto partials = run_path_blocks<std::vector<double>>(
        cfg.n_paths, cfg.workers, [&](std::int64_t first, std::int64_t last) {
          std::vector<double> acc(nx, 0.0);
          for (std::int64_t ipath = first; ipath < last; ++ipath) {
            PathRng rng(cfg.seed, base + static_cast<std::uint64_t>(ipath));
            SwitchRecord rec = sample_switches(p, sign, t, rng);
            double d = displacement_integral(rec, p, t);
            std::int64_t i_lo = grid.cell_index(w.support_lo() + d);
            std::int64_t i_hi = grid.cell_index(w.support_hi() + d);
            for (std::int64_t i = i_lo; i <= i_hi; ++i) {
              double l = grid.x_min + static_cast<double>(i) * grid.dx;
              acc[static_cast<std::size_t>(i)] +=
                  w.mass_between(l - d, l + grid.dx - d);
            }
          }
          return acc;
        });
    auto& dest = sign > 0 ? out.rho.f_plus : out.rho.f_minus;
    for (const auto& acc : partials)
      for (std::size_t i = 0; i < nx; ++i) dest[i] += acc[i];
    for (std::size_t i = 0; i < nx; ++i) dest[i] *= norm;
  }
  out.n_paths = cfg.n_paths;
  return out;
}

double expected_observable(const AveragedDensity& rho, Start component,
                           const std::function<double(double)>& f) {
  if (component == Start::Symmetric)
    throw Error(ErrorCode::InvalidArgument,
                "pick one component (Plus or Minus)");
  const Grid1D& g = rho.rho.grid;
  const auto& vals = component == Start::Plus ? rho.rho.f_plus : rho.rho.f_minus;
  double sum = 0.0;
  for (std::int64_t i = 0; i < g.nx; ++i)
    sum += f(g.cell_center(i)) * vals[static_cast<std::size_t>(i)];
  return sum * g.dx;
}

double lightcone_violation_mass(const AveragedDensity& rho, double b_lo,
                                double b_hi) {
  if (!(b_lo < b_hi))
    throw Error(ErrorCode::InvalidArgument, "probe needs b_lo < b_hi");
  const Grid1D& g = rho.rho.grid;
  // Probe clipped to the exact support cone; outside it both measures are
  // identically zero.
  double lo = std::max(b_lo, rho.cone_lo);
  double hi = std::min(b_hi, rho.cone_hi);
  if (!(lo < hi)) return 0.0;
  double mass = 0.0;
  for (std::int64_t i = g.cell_index(lo); i <= g.cell_index(hi); ++i) {
    double l = g.x_min + static_cast<double>(i) * g.dx;
    double overlap = std::min(hi, l + g.dx) - std::max(lo, l);
    if (overlap <= 0.0) continue;
    auto u = static_cast<std::size_t>(i);
    mass += (rho.rho.f_plus[u] + rho.rho.f_minus[u]) * overlap;
  }
  return mass;
}

}  // namespace telegraph
