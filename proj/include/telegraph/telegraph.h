#ifndef TELEGRAPH_TELEGRAPH_H
#define TELEGRAPH_TELEGRAPH_H

/*
 * C interface to the telegraph-process library: Monte Carlo sampling of the
 * velocity-switching process, the Chapman-Kolmogorov PDE solver, closed-form
 * moment and density formulas, Lorentz-transform utilities, and the averaged
 * quantum-packet evolution.
 *
 * Conventions:
 *   - every fallible call returns tg_status; TG_OK is 0
 *   - on failure, tg_last_error() gives a thread-local message
 *   - objects created through tg_*_create / factories are released with the
 *     matching tg_*_destroy (destroy functions accept NULL)
 *   - pointers returned by accessors borrow from their owner and die with it
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tg_status {
  TG_OK = 0,
  TG_ERR_INVALID_ARGUMENT = 1,
  TG_ERR_NONPOSITIVE_SPEED = 2,
  TG_ERR_NEGATIVE_RATE = 3,
  TG_ERR_SUPERLUMINAL_SPEED = 4,
  TG_ERR_TIME_OUT_OF_RANGE = 5,
  TG_ERR_GRID_TOO_SMALL = 6,
  TG_ERR_NON_UNIT_CFL = 7,
  TG_ERR_INSUFFICIENT_SNAPSHOTS = 8,
  TG_ERR_DOMAIN_NOT_COVERED = 9,
  TG_ERR_UNSUPPORTED = 10,
  TG_ERR_NULL_POINTER = 11,
  TG_ERR_INTERNAL = 12
} tg_status;

const char* tg_version(void);
const char* tg_status_name(tg_status s);

/* Message from the most recent failing call on this thread ("" if none). */
const char* tg_last_error(void);

/* Initial velocity sign: a fixed sign or a fair coin flip. */
typedef enum tg_start {
  TG_START_MINUS = -1,
  TG_START_SYMMETRIC = 0,
  TG_START_PLUS = 1
} tg_start;

/* ------------------------------------------------------------------ model */

typedef struct tg_model tg_model;

/* Process with speed v > 0 and switching rate lambda >= 0. */
tg_status tg_model_create(double v, double lambda, tg_model** out);

/* Same, with a light speed c > v for the Lorentz operations. */
tg_status tg_model_create_relativistic(double v, double lambda, double c,
                                       tg_model** out);

void tg_model_destroy(tg_model* m);

/* ------------------------------------------------------------------- grid */

typedef struct tg_grid tg_grid;

/* Uniform cell-centered grid: nx cells of width (x_max - x_min) / nx. */
tg_status tg_grid_create(double x_min, double x_max, int64_t nx, tg_grid** out);

/* Symmetric grid with an odd cell count whose middle cell center is exactly
 * x = 0; covers at least [-half_width, half_width]. */
tg_status tg_grid_create_centered(double half_width, double dx, tg_grid** out);

void tg_grid_destroy(tg_grid* g);

int64_t tg_grid_nx(const tg_grid* g);
double tg_grid_dx(const tg_grid* g);
double tg_grid_x_min(const tg_grid* g);
double tg_grid_cell_center(const tg_grid* g, int64_t i);

/* ---------------------------------------------------------- Monte Carlo
 *
 * Path generation is deterministic in (seed, path index): results are
 * bit-identical for any worker count. workers <= 1 runs single-threaded.
 */

typedef double (*tg_observable)(double x, int sign, void* ctx);

/* Mean of f(x(t), sign(t)) over n_paths exact paths started at x0. */
tg_status tg_mc_expectation(const tg_model* m, double x0, tg_start start,
                            double t, tg_observable f, void* ctx,
                            int64_t n_paths, uint64_t seed, int workers,
                            double* value, double* std_error);

typedef struct tg_density tg_density;

/* Histogram of the time-t law on g, split by current velocity sign, with the
 * never-switched paths booked separately as the two boundary atoms. The grid
 * must cover [x0 - v t, x0 + v t]. */
tg_status tg_mc_density(const tg_model* m, double x0, tg_start start, double t,
                        const tg_grid* g, int64_t n_paths, uint64_t seed,
                        int workers, tg_density** out);

/* -------------------------------------------------------- density results
 *
 * tg_density holds a two-component density on a grid. MC histograms carry
 * atoms and path moments; quantum averages carry the support cone instead.
 * Accessors that do not apply to the variant at hand fail with
 * TG_ERR_UNSUPPORTED.
 */

void tg_density_destroy(tg_density* d);

int64_t tg_density_size(const tg_density* d);
double tg_density_dx(const tg_density* d);
double tg_density_cell_center(const tg_density* d, int64_t i);
const double* tg_density_plus(const tg_density* d);
const double* tg_density_minus(const tg_density* d);

/* Total mass: cell sums times dx, plus atoms if present. */
double tg_density_mass(const tg_density* d);

int64_t tg_density_n_paths(const tg_density* d);

/* Atom weight and position for sign = +1 / -1 (MC histograms). */
tg_status tg_density_atom(const tg_density* d, int sign, double* weight,
                          double* position);

/* Sample mean and second moment of x(t) with standard errors (MC). */
tg_status tg_density_path_moments(const tg_density* d, double* mean,
                                  double* mean_se, double* second_moment,
                                  double* second_se);

/* Support cone [lo, hi] of an averaged quantum density. */
tg_status tg_density_cone(const tg_density* d, double* lo, double* hi);

/* Probability mass the density assigns to [b_lo, b_hi] minus the part of
 * that window the support cone allows; exactly 0 when the window lies
 * outside the cone (quantum densities). */
tg_status tg_density_lightcone_mass(const tg_density* d, double b_lo,
                                    double b_hi, double* out);

/* ----------------------------------------------------- closed-form law */

/* Law of x(t) for the symmetric start at 0: continuous density at x plus
 * the two atom weights at +-v t. Fixed-sign starts are not available in
 * closed form and fail with TG_ERR_UNSUPPORTED. */
tg_status tg_analytic_density(const tg_model* m, double t, double x,
                              double* ac, double* atom_plus,
                              double* atom_minus);

/* ------------------------------------------------------------- PDE solver
 *
 * Strang splitting of exact advection at unit CFL (dt = dx / v) with the
 * exact switching relaxation. Snapshot times are rounded to whole steps.
 */

typedef struct tg_solve_result tg_solve_result;

/* Fill caller arrays of length tg_grid_nx(g) with initial data of mass 1. */
tg_status tg_init_point_mass(const tg_grid* g, double x0, tg_start start,
                             double* f_plus, double* f_minus);
tg_status tg_init_gaussian(const tg_grid* g, double x0, double sigma,
                           tg_start start, double* f_plus, double* f_minus);

/* March the density system forward from (f_plus, f_minus) and store the
 * fields at each requested time. Boundary outflow is tracked; the solve
 * fails with TG_ERR_GRID_TOO_SMALL once it exceeds 1e-12 of the initial
 * mass. */
tg_status tg_pde_solve_forward(const tg_model* m, const tg_grid* g,
                               const double* f_plus, const double* f_minus,
                               const double* times, size_t n_times,
                               tg_solve_result** out);

/* March the expectation system: snapshot k approximates, per starting sign,
 * E[F(x(times[k])) | x(0) = x] for the terminal payoff F sampled in
 * (f_plus, f_minus). Edge values are replicated inward, so entries closer
 * than v * t to a boundary are only trustworthy for payoffs that are
 * constant beyond it. */
tg_status tg_pde_solve_backward(const tg_model* m, const tg_grid* g,
                                const double* f_plus, const double* f_minus,
                                const double* times, size_t n_times,
                                tg_solve_result** out);

void tg_solve_destroy(tg_solve_result* r);

size_t tg_solve_n_snapshots(const tg_solve_result* r);
double tg_solve_time(const tg_solve_result* r, size_t k);
const double* tg_solve_plus(const tg_solve_result* r, size_t k);
const double* tg_solve_minus(const tg_solve_result* r, size_t k);
double tg_solve_mass(const tg_solve_result* r, size_t k);
double tg_solve_lost_mass(const tg_solve_result* r);
double tg_solve_dt(const tg_solve_result* r);
int tg_solve_times_snapped(const tg_solve_result* r);

/* Discrete residual of the second-order telegraph equation on each stored
 * consecutive snapshot triple (needs >= 3 uniformly spaced times). Caller
 * arrays hold tg_solve_n_snapshots(r) - 2 entries. atom_origins lists
 * initial point-mass locations whose characteristics are masked out. */
tg_status tg_solve_residual(const tg_solve_result* r, const tg_model* m,
                            const double* atom_origins, size_t n_origins,
                            double* t_mid, double* res_plus,
                            double* res_minus);

/* ---------------------------------------------------- Lorentz operations */

/* Boost by frame velocity V (|V| < c): t' = gamma (t - V x / c^2),
 * x' = gamma (x - V t). The inverse applies the reverse boost. */
tg_status tg_boost_event(double V, double c, double t, double x,
                         double* t_out, double* x_out);
tg_status tg_inverse_boost_event(double V, double c, double t, double x,
                                 double* t_out, double* x_out);

/* (v - V) / (1 - v V / c^2) with |v| <= c, |V| < c. */
tg_status tg_add_velocities(double v, double V, double c, double* out);

/* Switching rate seen for a clock carried at speed v: sqrt(1 - (v/c)^2)
 * times the rest-frame rate. */
tg_status tg_rescale_rate(double lambda, double v, double c, double* out);

/* dt / dtau = 1 / sqrt(1 - (v/c)^2). */
tg_status tg_proper_time_factor(double v, double c, double* out);

/* Images of the two velocity states under the boost, with their rates. */
tg_status tg_transformed_params(const tg_model* m, double V, double* v_prime,
                                double* v_double_prime, double* lambda_prime,
                                double* lambda_double_prime);

/* One level of the covariance refinement study: solve in the lab frame at
 * resolution dx from symmetric Gaussian data of width init_sigma, pull the
 * solution back into the frame moving at V, and return the residual norms of
 * the transformed system near frame time t_prime_center. cubic_interp = 0
 * selects the bilinear comparison mode. */
tg_status tg_covariance_residual_level(const tg_model* m, double V, double dx,
                                       double init_sigma,
                                       double t_prime_center, int cubic_interp,
                                       double* res_plus, double* res_minus);

/* -------------------------------------------------------- quantum packets */

typedef struct tg_packet tg_packet;

tg_status tg_packet_uniform(double a, double b, tg_packet** out);
tg_status tg_packet_truncated_gaussian(double a, double b, double sigma,
                                       tg_packet** out);
tg_status tg_packet_raised_cosine(double a, double b, tg_packet** out);
void tg_packet_destroy(tg_packet* w);

double tg_packet_mass_between(const tg_packet* w, double lo, double hi);
double tg_packet_support_lo(const tg_packet* w);
double tg_packet_support_hi(const tg_packet* w);
tg_status tg_packet_moments(const tg_packet* w, double* mean,
                            double* variance);

typedef enum tg_method { TG_METHOD_MC = 0, TG_METHOD_PDE = 1 } tg_method;

/* Probability density of the packet evolved for time t and averaged over
 * switching histories, by resampling shifted copies along n_paths random
 * paths (MC) or by solving the density system from the packet profile
 * (PDE; n_paths / seed / workers ignored). The grid must cover the packet
 * support widened by v t. */
tg_status tg_quantum_density(const tg_packet* w, const tg_model* m, double t,
                             const tg_grid* g, tg_method method,
                             int64_t n_paths, uint64_t seed, int workers,
                             tg_density** out);

/* ----------------------------------------------------------- moment curves
 *
 * start_sign is +1 / -1 for a fixed initial velocity sign, 0 for the
 * symmetric start. m1_0 / m2_0 / var0 describe the initial position law.
 */

tg_status tg_mean_closed_form(const tg_model* m, double m1_0, int start_sign,
                              double t, double* out);
tg_status tg_second_moment_closed_form(const tg_model* m, double m1_0,
                                       double m2_0, int start_sign, double t,
                                       double* out);
tg_status tg_variance_closed_form(const tg_model* m, double var0,
                                  int start_sign, double t, double* out);

/* Independent check: integrates the exact moment ODE system numerically.
 * times must be strictly increasing; each output array (any may be NULL)
 * holds n_times entries. */
tg_status tg_moment_oracle(const tg_model* m, double m1_0, double m2_0,
                           int start_sign, const double* times, size_t n_times,
                           double* mean, double* second_moment,
                           double* mean_velocity);

/* Exact stdev, the leading form sqrt(var0 + (v^2 t / lambda)
 * (1 - e^(-2 lambda t))), and the variance remainder exact^2 - leading^2. */
tg_status tg_stdev_curve(const tg_model* m, double var0, const double* times,
                         size_t n_times, double* stdev, double* leading_form,
                         double* remainder);

/* L1 distance between the symmetric-start law at time t and the Gaussian
 * N(0, sigma t), with v = sqrt(sigma * lambda) per rate. v_out may be NULL. */
tg_status tg_diffusive_limit(double sigma, const double* lambdas, size_t n,
                             double t, const tg_grid* eval_grid, double* v_out,
                             double* l1_out);

#ifdef __cplusplus
}
#endif

#endif /* TELEGRAPH_TELEGRAPH_H */
