#include "telegraph_mc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"

namespace telegraph {

namespace {

void check_time(double t, double t_max) {
  if (!(t >= 0.0) || t > t_max)
    throw Error(ErrorCode::TimeOutOfRange,
                "time " + std::to_string(t) + " outside [0, " +
                    std::to_string(t_max) + "]");
}

void check_mc_config(const McConfig& cfg) {
  if (cfg.n_paths < 1)
    throw Error(ErrorCode::InvalidArgument, "n_paths must be >= 1");
}

int draw_sign0(Start start, PathRng& rng) {
  if (start == Start::Symmetric) return rng.next_sign();
  return start_sign(start);
}

}  // namespace

SwitchRecord sample_switches(const ModelParams& p, int sign0, double t_max,
                             PathRng& rng) {
  validate_params(p);
  if (!(t_max >= 0.0))
    throw Error(ErrorCode::TimeOutOfRange, "t_max must be >= 0");
  if (sign0 != +1 && sign0 != -1)
    throw Error(ErrorCode::InvalidArgument, "sign0 must be +1 or -1");
  SwitchRecord rec;
  rec.sign0 = sign0;
  rec.t_max = t_max;
  if (p.lambda == 0.0) return rec;
  double t = rng.next_exponential(p.lambda);
  while (t <= t_max) {
    rec.times.push_back(t);
    t += rng.next_exponential(p.lambda);
  }
  return rec;
}

double displacement_integral(const SwitchRecord& rec, const ModelParams& p,
                             double t) {
  check_time(t, rec.t_max);
  double plus_time = 0.0;
  double prev = 0.0;
  int sign = rec.sign0;
  for (double tk : rec.times) {
    if (tk > t) break;
    if (sign > 0) plus_time += tk - prev;
    prev = tk;
    sign = -sign;
  }
  if (sign > 0) plus_time += t - prev;
  plus_time = std::clamp(plus_time, 0.0, t);
  return p.v * (2.0 * plus_time - t);
}

PathState position_at(double x0, const SwitchRecord& rec, const ModelParams& p,
                      double t) {
  PathState st;
  st.x = x0 + displacement_integral(rec, p, t);
  std::size_t flips = 0;
  for (double tk : rec.times) {
    if (tk > t) break;
    ++flips;
  }
  st.sign = (flips % 2 == 0) ? rec.sign0 : -rec.sign0;
  return st;
}

EnsembleEstimate estimate_expectation(
    const ModelParams& p, double x0, Start start, double t,
    const std::function<double(double, int)>& f, const McConfig& cfg) {
  validate_params(p);
  check_mc_config(cfg);
  if (!(t >= 0.0)) throw Error(ErrorCode::TimeOutOfRange, "t must be >= 0");

  auto partials = run_path_blocks<RunningStat>(
      cfg.n_paths, cfg.workers, [&](std::int64_t first, std::int64_t last) {
        RunningStat stat;
        for (std::int64_t i = first; i < last; ++i) {
          PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
          int s0 = draw_sign0(start, rng);
          SwitchRecord rec = sample_switches(p, s0, t, rng);
          PathState st = position_at(x0, rec, p, t);
          stat.add(f(st.x, st.sign));
        }
        return stat;
      });

  RunningStat total;
  for (const auto& s : partials) total.merge(s);
  EnsembleEstimate est;
  est.value = total.mean;
  est.n_paths = total.n;
  est.std_error = std::sqrt(total.variance() / static_cast<double>(total.n));
  return est;
}

double EmpiricalDensity::total_mass() const {
  return fields.mass() + atom_weight_plus + atom_weight_minus;
}

EmpiricalDensity empirical_density(const ModelParams& p, double x0, Start start,
                                   double t, const Grid1D& grid,
                                   const McConfig& cfg) {
  validate_params(p);
  check_mc_config(cfg);
  if (!(t >= 0.0)) throw Error(ErrorCode::TimeOutOfRange, "t must be >= 0");
  if (!grid.covers(x0 - p.v * t, x0 + p.v * t))
    throw Error(ErrorCode::GridTooSmall,
                "grid must cover the cone [x0 - v t, x0 + v t]");

  struct Block {
    std::vector<std::uint64_t> count_plus, count_minus;
    std::uint64_t atom_plus = 0, atom_minus = 0;
    RunningStat x_stat, x2_stat;
  };

  const auto nx = static_cast<std::size_t>(grid.nx);
  auto partials = run_path_blocks<Block>(
      cfg.n_paths, cfg.workers, [&](std::int64_t first, std::int64_t last) {
        Block b;
        b.count_plus.assign(nx, 0);
        b.count_minus.assign(nx, 0);
        for (std::int64_t i = first; i < last; ++i) {
          PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
          int s0 = draw_sign0(start, rng);
          SwitchRecord rec = sample_switches(p, s0, t, rng);
          PathState st = position_at(x0, rec, p, t);
          b.x_stat.add(st.x);
          b.x2_stat.add(st.x * st.x);
          if (rec.times.empty()) {
            (s0 > 0 ? b.atom_plus : b.atom_minus)++;
          } else {
            auto cell = static_cast<std::size_t>(grid.cell_index(st.x));
            (st.sign > 0 ? b.count_plus : b.count_minus)[cell]++;
          }
        }
        return b;
      });

  EmpiricalDensity out(grid);
  std::vector<std::uint64_t> count_plus(nx, 0), count_minus(nx, 0);
  std::uint64_t atom_plus = 0, atom_minus = 0;
  RunningStat x_stat, x2_stat;
  for (const auto& b : partials) {
    for (std::size_t i = 0; i < nx; ++i) {
      count_plus[i] += b.count_plus[i];
      count_minus[i] += b.count_minus[i];
    }
    atom_plus += b.atom_plus;
    atom_minus += b.atom_minus;
    x_stat.merge(b.x_stat);
    x2_stat.merge(b.x2_stat);
  }

  const double norm = 1.0 / (static_cast<double>(cfg.n_paths) * grid.dx);
  for (std::size_t i = 0; i < nx; ++i) {
    out.fields.f_plus[i] = static_cast<double>(count_plus[i]) * norm;
    out.fields.f_minus[i] = static_cast<double>(count_minus[i]) * norm;
  }
  out.atom_weight_plus =
      static_cast<double>(atom_plus) / static_cast<double>(cfg.n_paths);
  out.atom_weight_minus =
      static_cast<double>(atom_minus) / static_cast<double>(cfg.n_paths);
  out.atom_pos_plus = x0 + p.v * t;
  out.atom_pos_minus = x0 - p.v * t;
  out.n_paths = cfg.n_paths;
  out.mean_x = {x_stat.mean,
                std::sqrt(x_stat.variance() / static_cast<double>(x_stat.n)),
                x_stat.n};
  out.second_moment_x = {
      x2_stat.mean,
      std::sqrt(x2_stat.variance() / static_cast<double>(x2_stat.n)), x2_stat.n};
  return out;
}

}  // namespace telegraph
