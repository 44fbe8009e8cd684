// Implementation of the public C interface declared in
// include/telegraph/telegraph.h. Every entry point funnels through guarded(),
// which converts library exceptions into status codes and stashes the message
// in a thread-local slot for tg_last_error().

#include "telegraph/telegraph.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ck_pde.hpp"
#include "core.hpp"
#include "lorentz.hpp"
#include "moments.hpp"
#include "quantum.hpp"
#include "telegraph_mc.hpp"
#include "version.hpp"

struct tg_model {
  telegraph::ModelParams p;
};

struct tg_grid {
  telegraph::Grid1D g;
};

struct tg_solve_result {
  telegraph::SolveResult r;
};

struct tg_packet {
  telegraph::WavePacket w;
};

// Either an MC histogram (atoms, path moments) or a quantum average (support
// cone); exactly one member is engaged.
struct tg_density {
  std::optional<telegraph::EmpiricalDensity> mc;
  std::optional<telegraph::AveragedDensity> quantum;

  const telegraph::FieldPair& fields() const {
    return mc.has_value() ? mc->fields : quantum->rho;
  }
};

namespace {

thread_local std::string g_last_error;

tg_status map_code(telegraph::ErrorCode code) {
  using telegraph::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
      return TG_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonPositiveSpeed:
      return TG_ERR_NONPOSITIVE_SPEED;
    case ErrorCode::NegativeRate:
      return TG_ERR_NEGATIVE_RATE;
    case ErrorCode::SuperluminalSpeed:
      return TG_ERR_SUPERLUMINAL_SPEED;
    case ErrorCode::TimeOutOfRange:
      return TG_ERR_TIME_OUT_OF_RANGE;
    case ErrorCode::GridTooSmall:
      return TG_ERR_GRID_TOO_SMALL;
    case ErrorCode::NonUnitCFL:
      return TG_ERR_NON_UNIT_CFL;
    case ErrorCode::InsufficientSnapshots:
      return TG_ERR_INSUFFICIENT_SNAPSHOTS;
    case ErrorCode::DomainNotCovered:
      return TG_ERR_DOMAIN_NOT_COVERED;
    case ErrorCode::Unsupported:
      return TG_ERR_UNSUPPORTED;
  }
  return TG_ERR_INTERNAL;
}

template <class Fn>
tg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TG_OK;
  } catch (const telegraph::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TG_ERR_INTERNAL;
  }
}

tg_status fail_null(const char* what) {
  g_last_error = std::string("null pointer: ") + what;
  return TG_ERR_NULL_POINTER;
}

telegraph::Start to_start(tg_start s) {
  switch (s) {
    case TG_START_PLUS:
      return telegraph::Start::Plus;
    case TG_START_MINUS:
      return telegraph::Start::Minus;
    case TG_START_SYMMETRIC:
      return telegraph::Start::Symmetric;
  }
  throw telegraph::Error(telegraph::ErrorCode::InvalidArgument,
                         "start must be -1, 0 or +1");
}

telegraph::McConfig mc_config(std::int64_t n_paths, std::uint64_t seed,
                              int workers) {
  telegraph::McConfig cfg;
  cfg.n_paths = n_paths;
  cfg.seed = seed;
  cfg.workers = workers;
  return cfg;
}

std::vector<double> copy_span(const double* data, std::size_t n) {
  return std::vector<double>(data, data + n);
}

}  // namespace

extern "C" {

const char* tg_version(void) { return telegraph::kVersion; }

const char* tg_status_name(tg_status s) {
  switch (s) {
    case TG_OK:
      return "ok";
    case TG_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case TG_ERR_NONPOSITIVE_SPEED:
      return "non-positive speed";
    case TG_ERR_NEGATIVE_RATE:
      return "negative rate";
    case TG_ERR_SUPERLUMINAL_SPEED:
      return "superluminal speed";
    case TG_ERR_TIME_OUT_OF_RANGE:
      return "time out of range";
    case TG_ERR_GRID_TOO_SMALL:
      return "grid too small";
    case TG_ERR_NON_UNIT_CFL:
      return "non-unit CFL";
    case TG_ERR_INSUFFICIENT_SNAPSHOTS:
      return "insufficient snapshots";
    case TG_ERR_DOMAIN_NOT_COVERED:
      return "domain not covered";
    case TG_ERR_UNSUPPORTED:
      return "unsupported";
    case TG_ERR_NULL_POINTER:
      return "null pointer";
    case TG_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* tg_last_error(void) { return g_last_error.c_str(); }

/* model ------------------------------------------------------------------ */

tg_status tg_model_create(double v, double lambda, tg_model** out) {
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded([&] {
    telegraph::ModelParams p;
    p.v = v;
    p.lambda = lambda;
    telegraph::validate_params(p);
    *out = new tg_model{p};
  });
}

tg_status tg_model_create_relativistic(double v, double lambda, double c,
                                       tg_model** out) {
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded([&] {
    telegraph::ModelParams p;
    p.v = v;
    p.lambda = lambda;
    p.c = c;
    telegraph::validate_params(p, /*relativistic=*/true);
    *out = new tg_model{p};
  });
}

void tg_model_destroy(tg_model* m) { delete m; }

/* grid ------------------------------------------------------------------- */

tg_status tg_grid_create(double x_min, double x_max, int64_t nx,
                         tg_grid** out) {
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded([&] { *out = new tg_grid{telegraph::Grid1D(x_min, x_max, nx)}; });
}

tg_status tg_grid_create_centered(double half_width, double dx, tg_grid** out) {
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded(
      [&] { *out = new tg_grid{telegraph::Grid1D::centered(half_width, dx)}; });
}

void tg_grid_destroy(tg_grid* g) { delete g; }

int64_t tg_grid_nx(const tg_grid* g) { return g->g.nx; }
double tg_grid_dx(const tg_grid* g) { return g->g.dx; }
double tg_grid_x_min(const tg_grid* g) { return g->g.x_min; }
double tg_grid_cell_center(const tg_grid* g, int64_t i) {
  return g->g.cell_center(i);
}

/* Monte Carlo ------------------------------------------------------------ */

tg_status tg_mc_expectation(const tg_model* m, double x0, tg_start start,
                            double t, tg_observable f, void* ctx,
                            int64_t n_paths, uint64_t seed, int workers,
                            double* value, double* std_error) {
  if (m == nullptr) return fail_null("model");
  if (f == nullptr) return fail_null("observable");
  if (value == nullptr) return fail_null("value");
  return guarded([&] {
    auto est = telegraph::estimate_expectation(
        m->p, x0, to_start(start), t,
        [f, ctx](double x, int sign) { return f(x, sign, ctx); },
        mc_config(n_paths, seed, workers));
    *value = est.value;
    if (std_error != nullptr) *std_error = est.std_error;
  });
}

tg_status tg_mc_density(const tg_model* m, double x0, tg_start start, double t,
                        const tg_grid* g, int64_t n_paths, uint64_t seed,
                        int workers, tg_density** out) {
  if (m == nullptr) return fail_null("model");
  if (g == nullptr) return fail_null("grid");
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded([&] {
    auto d = telegraph::empirical_density(m->p, x0, to_start(start), t, g->g,
                                          mc_config(n_paths, seed, workers));
    auto* h = new tg_density;
    h->mc.emplace(std::move(d));
    *out = h;
  });
}

/* density results ---------------------------------------------------------- */

void tg_density_destroy(tg_density* d) { delete d; }

int64_t tg_density_size(const tg_density* d) { return d->fields().grid.nx; }
double tg_density_dx(const tg_density* d) { return d->fields().grid.dx; }
double tg_density_cell_center(const tg_density* d, int64_t i) {
  return d->fields().grid.cell_center(i);
}
const double* tg_density_plus(const tg_density* d) {
  return d->fields().f_plus.data();
}
const double* tg_density_minus(const tg_density* d) {
  return d->fields().f_minus.data();
}

double tg_density_mass(const tg_density* d) {
  return d->mc.has_value() ? d->mc->total_mass() : d->quantum->rho.mass();
}

int64_t tg_density_n_paths(const tg_density* d) {
  return d->mc.has_value() ? d->mc->n_paths : d->quantum->n_paths;
}

tg_status tg_density_atom(const tg_density* d, int sign, double* weight,
                          double* position) {
  if (d == nullptr) return fail_null("density");
  return guarded([&] {
    if (!d->mc.has_value()) {
      throw telegraph::Error(telegraph::ErrorCode::Unsupported,
                             "atoms are only tracked for MC histograms");
    }
    if (sign != +1 && sign != -1) {
      throw telegraph::Error(telegraph::ErrorCode::InvalidArgument,
                             "atom sign must be +1 or -1");
    }
    const auto& mc = *d->mc;
    if (weight != nullptr) {
      *weight = sign > 0 ? mc.atom_weight_plus : mc.atom_weight_minus;
    }
    if (position != nullptr) {
      *position = sign > 0 ? mc.atom_pos_plus : mc.atom_pos_minus;
    }
  });
}

tg_status tg_density_path_moments(const tg_density* d, double* mean,
                                  double* mean_se, double* second_moment,
                                  double* second_se) {
  if (d == nullptr) return fail_null("density");
  return guarded([&] {
    if (!d->mc.has_value()) {
      throw telegraph::Error(telegraph::ErrorCode::Unsupported,
                             "path moments are only tracked for MC histograms");
    }
    const auto& mc = *d->mc;
    if (mean != nullptr) *mean = mc.mean_x.value;
    if (mean_se != nullptr) *mean_se = mc.mean_x.std_error;
    if (second_moment != nullptr) *second_moment = mc.second_moment_x.value;
    if (second_se != nullptr) *second_se = mc.second_moment_x.std_error;
  });
}

tg_status tg_density_cone(const tg_density* d, double* lo, double* hi) {
  if (d == nullptr) return fail_null("density");
  return guarded([&] {
    if (!d->quantum.has_value()) {
      throw telegraph::Error(telegraph::ErrorCode::Unsupported,
                             "support cone is only tracked for quantum averages");
    }
    if (lo != nullptr) *lo = d->quantum->cone_lo;
    if (hi != nullptr) *hi = d->quantum->cone_hi;
  });
}

tg_status tg_density_lightcone_mass(const tg_density* d, double b_lo,
                                    double b_hi, double* out) {
  if (d == nullptr) return fail_null("density");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    if (!d->quantum.has_value()) {
      throw telegraph::Error(telegraph::ErrorCode::Unsupported,
                             "light-cone mass applies to quantum averages");
    }
    *out = telegraph::lightcone_violation_mass(*d->quantum, b_lo, b_hi);
  });
}

/* closed-form law ---------------------------------------------------------- */

tg_status tg_analytic_density(const tg_model* m, double t, double x, double* ac,
                              double* atom_plus, double* atom_minus) {
  if (m == nullptr) return fail_null("model");
  return guarded([&] {
    auto d = telegraph::analytic_density(m->p, t, x);
    if (ac != nullptr) *ac = d.ac;
    if (atom_plus != nullptr) *atom_plus = d.atom_weight_plus;
    if (atom_minus != nullptr) *atom_minus = d.atom_weight_minus;
  });
}

/* PDE solver --------------------------------------------------------------- */

namespace {

telegraph::FieldPair pack_fields(const telegraph::Grid1D& g,
                                 const double* f_plus, const double* f_minus) {
  telegraph::FieldPair f(g);
  const auto n = static_cast<std::size_t>(g.nx);
  std::memcpy(f.f_plus.data(), f_plus, n * sizeof(double));
  std::memcpy(f.f_minus.data(), f_minus, n * sizeof(double));
  return f;
}

void unpack_fields(const telegraph::FieldPair& f, double* f_plus,
                   double* f_minus) {
  const auto n = f.f_plus.size();
  std::memcpy(f_plus, f.f_plus.data(), n * sizeof(double));
  std::memcpy(f_minus, f.f_minus.data(), n * sizeof(double));
}

}  // namespace

tg_status tg_init_point_mass(const tg_grid* g, double x0, tg_start start,
                             double* f_plus, double* f_minus) {
  if (g == nullptr) return fail_null("grid");
  if (f_plus == nullptr || f_minus == nullptr) return fail_null("fields");
  return guarded([&] {
    unpack_fields(telegraph::point_mass_init(g->g, x0, to_start(start)), f_plus,
                  f_minus);
  });
}

tg_status tg_init_gaussian(const tg_grid* g, double x0, double sigma,
                           tg_start start, double* f_plus, double* f_minus) {
  if (g == nullptr) return fail_null("grid");
  if (f_plus == nullptr || f_minus == nullptr) return fail_null("fields");
  return guarded([&] {
    unpack_fields(telegraph::gaussian_init(g->g, x0, sigma, to_start(start)),
                  f_plus, f_minus);
  });
}

tg_status tg_pde_solve_forward(const tg_model* m, const tg_grid* g,
                               const double* f_plus, const double* f_minus,
                               const double* times, size_t n_times,
                               tg_solve_result** out) {
  if (m == nullptr) return fail_null("model");
  if (g == nullptr) return fail_null("grid");
  if (f_plus == nullptr || f_minus == nullptr) return fail_null("fields");
  if (times == nullptr) return fail_null("times");
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded([&] {
    auto r = telegraph::solve_forward(m->p, pack_fields(g->g, f_plus, f_minus),
                                      copy_span(times, n_times));
    *out = new tg_solve_result{std::move(r)};
  });
}

tg_status tg_pde_solve_backward(const tg_model* m, const tg_grid* g,
                                const double* f_plus, const double* f_minus,
                                const double* times, size_t n_times,
                                tg_solve_result** out) {
  if (m == nullptr) return fail_null("model");
  if (g == nullptr) return fail_null("grid");
  if (f_plus == nullptr || f_minus == nullptr) return fail_null("fields");
  if (times == nullptr) return fail_null("times");
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded([&] {
    auto r = telegraph::solve_backward(m->p, pack_fields(g->g, f_plus, f_minus),
                                       copy_span(times, n_times));
    *out = new tg_solve_result{std::move(r)};
  });
}

void tg_solve_destroy(tg_solve_result* r) { delete r; }

size_t tg_solve_n_snapshots(const tg_solve_result* r) {
  return r->r.snapshots.size();
}
double tg_solve_time(const tg_solve_result* r, size_t k) {
  return r->r.times.at(k);
}
const double* tg_solve_plus(const tg_solve_result* r, size_t k) {
  return r->r.snapshots.at(k).f_plus.data();
}
const double* tg_solve_minus(const tg_solve_result* r, size_t k) {
  return r->r.snapshots.at(k).f_minus.data();
}
double tg_solve_mass(const tg_solve_result* r, size_t k) {
  return r->r.mass_at(k);
}
double tg_solve_lost_mass(const tg_solve_result* r) {
  return r->r.meta.lost_mass;
}
double tg_solve_dt(const tg_solve_result* r) { return r->r.meta.dt; }
int tg_solve_times_snapped(const tg_solve_result* r) {
  return r->r.meta.times_snapped ? 1 : 0;
}

tg_status tg_solve_residual(const tg_solve_result* r, const tg_model* m,
                            const double* atom_origins, size_t n_origins,
                            double* t_mid, double* res_plus,
                            double* res_minus) {
  if (r == nullptr) return fail_null("result");
  if (m == nullptr) return fail_null("model");
  if (n_origins > 0 && atom_origins == nullptr) return fail_null("atom_origins");
  return guarded([&] {
    std::vector<double> origins =
        n_origins > 0 ? copy_span(atom_origins, n_origins)
                      : std::vector<double>{};
    auto norms = telegraph::telegraph_residual(r->r, m->p, origins);
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (t_mid != nullptr) t_mid[i] = norms[i].t;
      if (res_plus != nullptr) res_plus[i] = norms[i].res_plus;
      if (res_minus != nullptr) res_minus[i] = norms[i].res_minus;
    }
  });
}

/* Lorentz ------------------------------------------------------------------ */

tg_status tg_boost_event(double V, double c, double t, double x, double* t_out,
                         double* x_out) {
  return guarded([&] {
    auto e = telegraph::boost_event(telegraph::Boost(V, c), {t, x});
    if (t_out != nullptr) *t_out = e.t;
    if (x_out != nullptr) *x_out = e.x;
  });
}

tg_status tg_inverse_boost_event(double V, double c, double t, double x,
                                 double* t_out, double* x_out) {
  return guarded([&] {
    auto e = telegraph::inverse_boost_event(telegraph::Boost(V, c), {t, x});
    if (t_out != nullptr) *t_out = e.t;
    if (x_out != nullptr) *x_out = e.x;
  });
}

tg_status tg_add_velocities(double v, double V, double c, double* out) {
  if (out == nullptr) return fail_null("out");
  return guarded([&] { *out = telegraph::add_velocities(v, V, c); });
}

tg_status tg_rescale_rate(double lambda, double v, double c, double* out) {
  if (out == nullptr) return fail_null("out");
  return guarded([&] { *out = telegraph::rescale_rate(lambda, v, c); });
}

tg_status tg_proper_time_factor(double v, double c, double* out) {
  if (out == nullptr) return fail_null("out");
  return guarded([&] { *out = telegraph::proper_time_factor(v, c); });
}

tg_status tg_transformed_params(const tg_model* m, double V, double* v_prime,
                                double* v_double_prime, double* lambda_prime,
                                double* lambda_double_prime) {
  if (m == nullptr) return fail_null("model");
  return guarded([&] {
    auto tp = telegraph::transformed_params(m->p, V);
    if (v_prime != nullptr) *v_prime = tp.v_prime;
    if (v_double_prime != nullptr) *v_double_prime = tp.v_double_prime;
    if (lambda_prime != nullptr) *lambda_prime = tp.lambda_prime;
    if (lambda_double_prime != nullptr) {
      *lambda_double_prime = tp.lambda_double_prime;
    }
  });
}

tg_status tg_covariance_residual_level(const tg_model* m, double V, double dx,
                                       double init_sigma,
                                       double t_prime_center, int cubic_interp,
                                       double* res_plus, double* res_minus) {
  if (m == nullptr) return fail_null("model");
  return guarded([&] {
    auto level = telegraph::covariance_study_level(
        m->p, V, dx, init_sigma, t_prime_center,
        cubic_interp != 0 ? telegraph::Interp::Cubic
                          : telegraph::Interp::Bilinear);
    if (res_plus != nullptr) *res_plus = level.res_plus;
    if (res_minus != nullptr) *res_minus = level.res_minus;
  });
}

/* quantum packets ------------------------------------------------------------ */

tg_status tg_packet_uniform(double a, double b, tg_packet** out) {
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded(
      [&] { *out = new tg_packet{telegraph::WavePacket::uniform(a, b)}; });
}

tg_status tg_packet_truncated_gaussian(double a, double b, double sigma,
                                       tg_packet** out) {
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded([&] {
    *out = new tg_packet{telegraph::WavePacket::truncated_gaussian(a, b, sigma)};
  });
}

tg_status tg_packet_raised_cosine(double a, double b, tg_packet** out) {
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded(
      [&] { *out = new tg_packet{telegraph::WavePacket::raised_cosine(a, b)}; });
}

void tg_packet_destroy(tg_packet* w) { delete w; }

double tg_packet_mass_between(const tg_packet* w, double lo, double hi) {
  return w->w.mass_between(lo, hi);
}

double tg_packet_support_lo(const tg_packet* w) { return w->w.support_lo(); }
double tg_packet_support_hi(const tg_packet* w) { return w->w.support_hi(); }

tg_status tg_packet_moments(const tg_packet* w, double* mean,
                            double* variance) {
  if (w == nullptr) return fail_null("packet");
  return guarded([&] {
    if (mean != nullptr) *mean = w->w.mean();
    if (variance != nullptr) *variance = w->w.variance();
  });
}

tg_status tg_quantum_density(const tg_packet* w, const tg_model* m, double t,
                             const tg_grid* g, tg_method method,
                             int64_t n_paths, uint64_t seed, int workers,
                             tg_density** out) {
  if (w == nullptr) return fail_null("packet");
  if (m == nullptr) return fail_null("model");
  if (g == nullptr) return fail_null("grid");
  if (out == nullptr) return fail_null("out");
  *out = nullptr;
  return guarded([&] {
    if (method != TG_METHOD_MC && method != TG_METHOD_PDE) {
      throw telegraph::Error(telegraph::ErrorCode::InvalidArgument,
                             "method must be TG_METHOD_MC or TG_METHOD_PDE");
    }
    auto d = telegraph::averaged_density(
        w->w, m->p, t, g->g,
        method == TG_METHOD_MC ? telegraph::Method::Mc : telegraph::Method::Pde,
        mc_config(n_paths, seed, workers));
    auto* h = new tg_density;
    h->quantum.emplace(std::move(d));
    *out = h;
  });
}

/* moment curves -------------------------------------------------------------- */

tg_status tg_mean_closed_form(const tg_model* m, double m1_0, int start_sign,
                              double t, double* out) {
  if (m == nullptr) return fail_null("model");
  if (out == nullptr) return fail_null("out");
  return guarded(
      [&] { *out = telegraph::mean_closed_form(m->p, m1_0, start_sign, t); });
}

tg_status tg_second_moment_closed_form(const tg_model* m, double m1_0,
                                       double m2_0, int start_sign, double t,
                                       double* out) {
  if (m == nullptr) return fail_null("model");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    *out = telegraph::second_moment_closed_form(m->p, {m1_0, m2_0}, start_sign,
                                                t);
  });
}

tg_status tg_variance_closed_form(const tg_model* m, double var0,
                                  int start_sign, double t, double* out) {
  if (m == nullptr) return fail_null("model");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    *out = telegraph::variance_closed_form(m->p, var0, start_sign, t);
  });
}

tg_status tg_moment_oracle(const tg_model* m, double m1_0, double m2_0,
                           int start_sign, const double* times, size_t n_times,
                           double* mean, double* second_moment,
                           double* mean_velocity) {
  if (m == nullptr) return fail_null("model");
  if (n_times > 0 && times == nullptr) return fail_null("times");
  return guarded([&] {
    auto pts = telegraph::moment_ode_oracle(m->p, {m1_0, m2_0}, start_sign,
                                            copy_span(times, n_times));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (mean != nullptr) mean[i] = pts[i].mean;
      if (second_moment != nullptr) second_moment[i] = pts[i].second_moment;
      if (mean_velocity != nullptr) mean_velocity[i] = pts[i].mean_velocity;
    }
  });
}

tg_status tg_stdev_curve(const tg_model* m, double var0, const double* times,
                         size_t n_times, double* stdev, double* leading_form,
                         double* remainder) {
  if (m == nullptr) return fail_null("model");
  if (n_times > 0 && times == nullptr) return fail_null("times");
  return guarded([&] {
    auto pts = telegraph::stdev_curve(m->p, var0, copy_span(times, n_times));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (stdev != nullptr) stdev[i] = pts[i].stdev;
      if (leading_form != nullptr) leading_form[i] = pts[i].leading_form;
      if (remainder != nullptr) remainder[i] = pts[i].remainder;
    }
  });
}

tg_status tg_diffusive_limit(double sigma, const double* lambdas, size_t n,
                             double t, const tg_grid* eval_grid, double* v_out,
                             double* l1_out) {
  if (n > 0 && lambdas == nullptr) return fail_null("lambdas");
  if (eval_grid == nullptr) return fail_null("eval_grid");
  if (l1_out == nullptr) return fail_null("l1_out");
  return guarded([&] {
    auto rows = telegraph::diffusive_limit_study(sigma, copy_span(lambdas, n),
                                                 t, eval_grid->g);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (v_out != nullptr) v_out[i] = rows[i].v;
      l1_out[i] = rows[i].l1;
    }
  });
}

}  // extern "C"
