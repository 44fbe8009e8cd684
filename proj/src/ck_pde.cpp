#include "ck_pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bessel.hpp"

namespace telegraph {

namespace {

constexpr double kLostMassTolerance = 1e-12;

// In-place relaxation in transfer form: d = b (f- - f+), with b the
// half-equilibration weight (1 - exp(-2 lambda dt)) / 2.
void relax(std::vector<double>& f_plus, std::vector<double>& f_minus, double b) {
  if (b == 0.0) return;
  for (std::size_t i = 0; i < f_plus.size(); ++i) {
    double d = b * (f_minus[i] - f_plus[i]);
    f_plus[i] += d;
    f_minus[i] -= d;
  }
}

enum class Mode { Forward, Backward };

std::vector<std::int64_t> snap_output_steps(const std::vector<double>& times,
                                            double dt, bool& snapped) {
  if (times.empty())
    throw Error(ErrorCode::InvalidArgument, "need at least one output time");
  std::vector<std::int64_t> steps;
  steps.reserve(times.size());
  snapped = false;
  for (double t : times) {
    if (!(t >= 0.0))
      throw Error(ErrorCode::TimeOutOfRange, "output times must be >= 0");
    auto k = static_cast<std::int64_t>(std::llround(t / dt));
    if (std::abs(k * dt - t) > 1e-9 * std::max(1.0, t)) snapped = true;
    if (!steps.empty() && k <= steps.back())
      throw Error(ErrorCode::InvalidArgument,
                  "output times must be strictly increasing after snapping");
    steps.push_back(k);
  }
  return steps;
}

SolveResult march(const ModelParams& p, const FieldPair& init,
                  const std::vector<double>& output_times, Mode mode) {
  validate_params(p);
  const Grid1D& g = init.grid;
  const double dt = g.dx / p.v;
  const auto nx = static_cast<std::size_t>(g.nx);

  SolveResult out(g);
  out.meta.dx = g.dx;
  out.meta.dt = dt;
  auto steps = snap_output_steps(output_times, dt, out.meta.times_snapped);
  const std::int64_t last_step = steps.back();
  out.meta.n_steps = last_step;

  const double b_half = 0.5 * (1.0 - std::exp(-p.lambda * dt));
  const double initial_mass = init.mass();
  double lost = 0.0;

  FieldPair f = init;
  std::size_t next_out = 0;
  auto maybe_store = [&](std::int64_t step) {
    while (next_out < steps.size() && steps[next_out] == step) {
      out.times.push_back(static_cast<double>(step) * dt);
      out.snapshots.push_back(f);
      ++next_out;
    }
  };
  maybe_store(0);

  for (std::int64_t step = 1; step <= last_step; ++step) {
    relax(f.f_plus, f.f_minus, b_half);
    if (mode == Mode::Forward) {
      // f+ advects right, f- left; outflow is dropped but accounted for.
      lost += (f.f_plus[nx - 1] + f.f_minus[0]) * g.dx;
      std::copy_backward(f.f_plus.begin(), f.f_plus.end() - 1, f.f_plus.end());
      f.f_plus[0] = 0.0;
      std::copy(f.f_minus.begin() + 1, f.f_minus.end(), f.f_minus.begin());
      f.f_minus[nx - 1] = 0.0;
      if (lost > kLostMassTolerance * std::max(initial_mass, 1e-300))
        throw Error(ErrorCode::GridTooSmall,
                    "support reached the boundary: lost mass " +
                        std::to_string(lost) + " exceeds 1e-12 of total");
    } else {
      // u1 samples to its right (characteristic dx/dt = -v), u2 to its left.
      std::copy(f.f_plus.begin() + 1, f.f_plus.end(), f.f_plus.begin());
      std::copy_backward(f.f_minus.begin(), f.f_minus.end() - 1, f.f_minus.end());
    }
    relax(f.f_plus, f.f_minus, b_half);
    maybe_store(step);
  }
  out.meta.lost_mass = lost;
  return out;
}

}  // namespace

FieldPair switching_step(const FieldPair& f, double lambda, double dt) {
  if (!(lambda >= 0.0))
    throw Error(ErrorCode::NegativeRate, "lambda must be >= 0");
  if (!(dt >= 0.0))
    throw Error(ErrorCode::TimeOutOfRange, "dt must be >= 0");
  FieldPair out = f;
  relax(out.f_plus, out.f_minus, 0.5 * (1.0 - std::exp(-2.0 * lambda * dt)));
  return out;
}

SolveResult solve_forward(const ModelParams& p, const FieldPair& init,
                          const std::vector<double>& output_times) {
  return march(p, init, output_times, Mode::Forward);
}

SolveResult solve_backward(const ModelParams& p, const FieldPair& terminal,
                           const std::vector<double>& output_times) {
  return march(p, terminal, output_times, Mode::Backward);
}

std::vector<ResidualNorm> telegraph_residual(
    const SolveResult& result, const ModelParams& p,
    const std::vector<double>& atom_origins) {
  validate_params(p);
  const auto n = result.snapshots.size();
  if (n < 3)
    throw Error(ErrorCode::InsufficientSnapshots,
                "telegraph residual needs >= 3 snapshots");
  const double dt = result.times[1] - result.times[0];
  for (std::size_t k = 1; k + 1 < n; ++k)
    if (std::abs((result.times[k + 1] - result.times[k]) - dt) > 1e-9 * dt)
      throw Error(ErrorCode::InsufficientSnapshots,
                  "snapshots must be uniformly spaced in time");

  const Grid1D& g = result.grid;
  const double dx = g.dx;
  const double v2 = p.v * p.v;
  std::vector<ResidualNorm> norms;
  norms.reserve(n - 2);

  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double t_mid = result.times[k];
    // The stencil mixes all three times, so mask the whole band each
    // characteristic sweeps during [t_mid - dt, t_mid + dt], padded one
    // stencil width; the jump at the support edge would otherwise leak
    // O(1/dx^2) into the norm.
    auto excluded = [&](double x) {
      for (double x0 : atom_origins) {
        const double lo = p.v * (t_mid - dt) - 2.0 * dx;
        const double hi = p.v * (t_mid + dt) + 2.0 * dx;
        if (x >= x0 + lo && x <= x0 + hi) return true;
        if (x >= x0 - hi && x <= x0 - lo) return true;
      }
      return false;
    };
    auto component_norm = [&](auto field_of) {
      const auto& prev = field_of(result.snapshots[k - 1]);
      const auto& mid = field_of(result.snapshots[k]);
      const auto& next = field_of(result.snapshots[k + 1]);
      double sum = 0.0;
      for (std::int64_t i = 1; i + 1 < g.nx; ++i) {
        if (excluded(g.cell_center(i))) continue;
        auto u = static_cast<std::size_t>(i);
        double dtt = (next[u] - 2.0 * mid[u] + prev[u]) / (dt * dt);
        double dt1 = (next[u] - prev[u]) / (2.0 * dt);
        double dxx = (mid[u + 1] - 2.0 * mid[u] + mid[u - 1]) / (dx * dx);
        double r = dtt + 2.0 * p.lambda * dt1 - v2 * dxx;
        sum += r * r;
      }
      return std::sqrt(sum * dx);
    };
    norms.push_back({t_mid,
                     component_norm([](const FieldPair& f) -> const std::vector<double>& {
                       return f.f_plus;
                     }),
                     component_norm([](const FieldPair& f) -> const std::vector<double>& {
                       return f.f_minus;
                     })});
  }
  return norms;
}

DensityTriple analytic_density(const ModelParams& p, double t, double x,
                               Start start) {
  validate_params(p);
  if (start != Start::Symmetric)
    throw Error(ErrorCode::Unsupported,
                "closed-form density covers the symmetric start only; use "
                "solve_forward or empirical_density for a signed start");
  if (!(t >= 0.0)) throw Error(ErrorCode::TimeOutOfRange, "t must be >= 0");

  DensityTriple out;
  const double w = 0.5 * std::exp(-p.lambda * t);
  out.atom_weight_plus = w;
  out.atom_weight_minus = w;

  const double vt = p.v * t;
  if (t == 0.0 || std::abs(x) >= vt) return out;  // outside the open cone

  // s = sqrt(v^2 t^2 - x^2), xi = (lambda / v) s; the kernel is
  //   e^(-lambda t) (lambda / 2v) [ I0(xi) + lambda t I1(xi)/xi ].
  // Everything is evaluated with e^(-xi)-scaled Bessel terms and one
  // exp(xi - lambda t) <= 1 factor so large lambda t cannot overflow.
  const double s2 = (vt - x) * (vt + x);
  const double xi = (p.lambda / p.v) * std::sqrt(s2);
  const double i0s = bessel_i0_scaled(xi);
  const double i1s_over_xi =
      xi < 1e-8 ? 0.5 * std::exp(-xi) * (1.0 + xi * xi / 8.0)
                : bessel_i1_scaled(xi) / xi;
  out.ac = (p.lambda / (2.0 * p.v)) * std::exp(xi - p.lambda * t) *
           (i0s + p.lambda * t * i1s_over_xi);
  return out;
}

FieldPair point_mass_init(const Grid1D& g, double x0, Start start) {
  if (!(x0 >= g.x_min && x0 <= g.x_max))
    throw Error(ErrorCode::GridTooSmall, "point mass falls outside the grid");
  FieldPair f(g);
  auto i = static_cast<std::size_t>(g.cell_index(x0));
  const double h = 1.0 / g.dx;
  switch (start) {
    case Start::Plus: f.f_plus[i] = h; break;
    case Start::Minus: f.f_minus[i] = h; break;
    case Start::Symmetric:
      f.f_plus[i] = 0.5 * h;
      f.f_minus[i] = 0.5 * h;
      break;
  }
  return f;
}

FieldPair gaussian_init(const Grid1D& g, double x0, double sigma, Start start) {
  if (!(sigma > 0.0))
    throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  FieldPair f(g);
  auto cdf = [&](double x) {
    return 0.5 * std::erfc(-(x - x0) / (sigma * std::sqrt(2.0)));
  };
  for (std::int64_t i = 0; i < g.nx; ++i) {
    double lo = g.x_min + static_cast<double>(i) * g.dx;
    double mass = cdf(lo + g.dx) - cdf(lo);
    double value = mass / g.dx;
    auto u = static_cast<std::size_t>(i);
    switch (start) {
      case Start::Plus: f.f_plus[u] = value; break;
      case Start::Minus: f.f_minus[u] = value; break;
      case Start::Symmetric:
        f.f_plus[u] = 0.5 * value;
        f.f_minus[u] = 0.5 * value;
        break;
    }
  }
  return f;
}

}  // namespace telegraph
