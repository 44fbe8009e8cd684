// tg: command-line front end for the telegraph-process library.
//
// Subcommands: simulate | solve | covariance | quantum | limit. Each run
// writes <out>.csv (table, with a `# key=value` config-echo header) and,
// where there are scalar summaries, <out>.json. With --format json the table
// moves into a single <out>.json. Outputs are byte-identical for identical
// configs, including across --workers values (the worker count only changes
// scheduling, so it is not part of the echoed config).
//
// Exit codes: 0 success, 2 config error, 3 domain/grid error, 4 coverage
// error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "telegraph/telegraph.h"

namespace {

using Json = nlohmann::ordered_json;

struct CliError {
  tg_status status;
  std::string message;
};

void check(tg_status s) {
  if (s != TG_OK) {
    throw CliError{s, std::string(tg_last_error())};
  }
}

int exit_for(tg_status s) {
  switch (s) {
    case TG_ERR_GRID_TOO_SMALL:
    case TG_ERR_NON_UNIT_CFL:
      return 3;
    case TG_ERR_DOMAIN_NOT_COVERED:
      return 4;
    default:
      return 2;
  }
}

[[noreturn]] void config_error(const std::string& message) {
  throw CliError{TG_ERR_INVALID_ARGUMENT, message};
}

// Shortest round-trip decimal form (what the JSON writer emits), reused for
// CSV cells so both formats agree byte for byte on every number.
std::string num(double x) { return Json(x).dump(); }

struct ModelDeleter {
  void operator()(tg_model* m) const { tg_model_destroy(m); }
};
struct GridDeleter {
  void operator()(tg_grid* g) const { tg_grid_destroy(g); }
};
struct DensityDeleter {
  void operator()(tg_density* d) const { tg_density_destroy(d); }
};
struct SolveDeleter {
  void operator()(tg_solve_result* r) const { tg_solve_destroy(r); }
};
struct PacketDeleter {
  void operator()(tg_packet* w) const { tg_packet_destroy(w); }
};

using ModelPtr = std::unique_ptr<tg_model, ModelDeleter>;
using GridPtr = std::unique_ptr<tg_grid, GridDeleter>;
using DensityPtr = std::unique_ptr<tg_density, DensityDeleter>;
using SolvePtr = std::unique_ptr<tg_solve_result, SolveDeleter>;
using PacketPtr = std::unique_ptr<tg_packet, PacketDeleter>;

ModelPtr make_model(double v, double lambda, std::optional<double> c) {
  tg_model* m = nullptr;
  check(c.has_value() ? tg_model_create_relativistic(v, lambda, *c, &m)
                      : tg_model_create(v, lambda, &m));
  return ModelPtr(m);
}

GridPtr make_grid(double x_min, double x_max, std::int64_t nx) {
  tg_grid* g = nullptr;
  check(tg_grid_create(x_min, x_max, nx, &g));
  return GridPtr(g);
}

GridPtr make_centered_grid(double half_width, double dx) {
  tg_grid* g = nullptr;
  check(tg_grid_create_centered(half_width, dx, &g));
  return GridPtr(g);
}

std::string header_block(const Json& config) {
  std::string out = "# artifact_version=" + std::string(tg_version()) + "\n";
  for (const auto& item : config.items()) {
    const Json& value = item.value();
    out += "# " + item.key() + "=" +
           (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    config_error("cannot open output file: " + path);
  }
  f << body;
  if (!f.good()) {
    config_error("failed writing output file: " + path);
  }
}

Json json_document(const Json& config, Json payload) {
  Json doc;
  doc["artifact_version"] = tg_version();
  doc["config"] = config;
  for (auto& item : payload.items()) {
    doc[item.key()] = std::move(item.value());
  }
  return doc;
}

// Emits <out>.csv [+ <out>.json] or a single combined <out>.json depending on
// --format. `table` carries (column name, column cells) in order.
void emit(const std::string& format, const std::string& out_base,
          const Json& config,
          const std::vector<std::pair<std::string, std::vector<std::string>>>& table,
          std::optional<Json> summary) {
  if (format == "csv") {
    std::string csv = header_block(config);
    for (std::size_t c = 0; c < table.size(); ++c) {
      csv += (c == 0 ? "" : ",") + table[c].first;
    }
    csv += "\n";
    const std::size_t rows = table.empty() ? 0 : table.front().second.size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < table.size(); ++c) {
        csv += (c == 0 ? "" : ",") + table[c].second[r];
      }
      csv += "\n";
    }
    write_file(out_base + ".csv", csv);
    if (summary.has_value()) {
      write_file(out_base + ".json",
                 json_document(config, *summary).dump(2) + "\n");
    }
    return;
  }
  // json: one document, table as parallel arrays of raw strings re-parsed
  // into numbers where possible.
  Json tbl = Json::object();
  for (const auto& col : table) {
    Json arr = Json::array();
    for (const auto& cell : col.second) {
      if (cell.empty()) {
        arr.push_back(nullptr);
      } else {
        arr.push_back(Json::parse(cell, nullptr, false));
      }
    }
    tbl[col.first] = std::move(arr);
  }
  Json payload = summary.value_or(Json::object());
  payload["table"] = std::move(tbl);
  write_file(out_base + ".json", json_document(config, payload).dump(2) + "\n");
}

// Options shared by every subcommand.
struct CommonOpts {
  std::string out;
  std::string format = "csv";

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out, "Output path base (writes <out>.csv/.json)")
        ->required();
    cmd->add_option("--format", format, "Output format: csv or json")
        ->default_val("csv");
  }

  void validate() const {
    if (format != "csv" && format != "json") {
      config_error("--format must be csv or json, got '" + format + "'");
    }
  }
};

tg_start start_from_int(int s) {
  if (s != -1 && s != 0 && s != 1) {
    config_error("--start must be -1, 0 or 1");
  }
  return static_cast<tg_start>(s);
}

/* ------------------------------------------------------------- simulate */

struct SimulateOpts {
  double v = 1.0, lambda = 1.0, t = 1.0, x0 = 0.0;
  int start = 0;
  std::int64_t n_paths = 100000, nx = 512;
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<double> x_min, x_max, c;
  CommonOpts common;
};

int run_simulate(const SimulateOpts& o) {
  o.common.validate();
  const tg_start start = start_from_int(o.start);
  auto model = make_model(o.v, o.lambda, o.c);

  // Default grid: the reachable cone plus a one-unit margin each side.
  const double x_min = o.x_min.value_or(o.x0 - o.v * o.t - 1.0);
  const double x_max = o.x_max.value_or(o.x0 + o.v * o.t + 1.0);
  auto grid = make_grid(x_min, x_max, o.nx);

  Json config{{"subcommand", "simulate"}, {"v", o.v},     {"lambda", o.lambda},
              {"t", o.t},                 {"x0", o.x0},   {"start", o.start},
              {"x_min", x_min},           {"x_max", x_max}, {"nx", o.nx},
              {"n_paths", o.n_paths},     {"seed", o.seed}};
  if (o.c.has_value()) config["c"] = *o.c;

  tg_density* raw = nullptr;
  check(tg_mc_density(model.get(), o.x0, start, o.t, grid.get(), o.n_paths,
                      o.seed, o.workers, &raw));
  DensityPtr density(raw);

  const std::int64_t n = tg_density_size(raw);
  const double* fp = tg_density_plus(raw);
  const double* fm = tg_density_minus(raw);
  std::vector<std::string> xs, ps, ms;
  xs.reserve(n);
  ps.reserve(n);
  ms.reserve(n);
  for (std::int64_t i = 0; i < n; ++i) {
    xs.push_back(num(tg_density_cell_center(raw, i)));
    ps.push_back(num(fp[i]));
    ms.push_back(num(fm[i]));
  }

  double wp = 0, xp = 0, wm = 0, xm = 0;
  check(tg_density_atom(raw, +1, &wp, &xp));
  check(tg_density_atom(raw, -1, &wm, &xm));
  double mean = 0, mean_se = 0, second = 0, second_se = 0;
  check(tg_density_path_moments(raw, &mean, &mean_se, &second, &second_se));

  Json summary;
  summary["atoms"] = {{"plus", {{"weight", wp}, {"position", xp}}},
                      {"minus", {{"weight", wm}, {"position", xm}}}};
  summary["moments"] = {{"mean", mean},
                        {"mean_std_error", mean_se},
                        {"second_moment", second},
                        {"second_moment_std_error", second_se}};
  summary["total_mass"] = tg_density_mass(raw);
  summary["n_paths"] = tg_density_n_paths(raw);

  emit(o.common.format, o.common.out, config,
       {{"x", xs}, {"f_plus", ps}, {"f_minus", ms}}, summary);
  return 0;
}

/* ----------------------------------------------------------------- solve */

struct SolveOpts {
  double v = 1.0, lambda = 1.0, x0 = 0.0, sigma = 0.1;
  double x_min = -2.0, x_max = 2.0;
  std::int64_t nx = 512;
  int start = 0;
  std::vector<double> times = {0.25, 0.5, 0.75, 1.0};
  std::string direction = "forward";
  std::string init = "point";
  std::optional<double> c;
  CommonOpts common;
};

int run_solve(const SolveOpts& o) {
  o.common.validate();
  if (o.direction != "forward" && o.direction != "backward") {
    config_error("--direction must be forward or backward");
  }
  if (o.init != "point" && o.init != "gauss" && o.init != "linear") {
    config_error("--init must be point, gauss or linear");
  }
  if (o.times.empty()) {
    config_error("--times needs at least one entry");
  }
  auto model = make_model(o.v, o.lambda, o.c);
  auto grid = make_grid(o.x_min, o.x_max, o.nx);

  Json config{{"subcommand", "solve"},   {"v", o.v},
              {"lambda", o.lambda},      {"direction", o.direction},
              {"init", o.init},          {"x0", o.x0},
              {"sigma", o.sigma},        {"start", o.start},
              {"x_min", o.x_min},        {"x_max", o.x_max},
              {"nx", o.nx},              {"times", o.times}};
  if (o.c.has_value()) config["c"] = *o.c;

  const auto n = static_cast<std::size_t>(o.nx);
  std::vector<double> f_plus(n, 0.0), f_minus(n, 0.0);
  if (o.init == "point") {
    check(tg_init_point_mass(grid.get(), o.x0, start_from_int(o.start),
                             f_plus.data(), f_minus.data()));
  } else if (o.init == "gauss") {
    check(tg_init_gaussian(grid.get(), o.x0, o.sigma, start_from_int(o.start),
                           f_plus.data(), f_minus.data()));
  } else {
    // Payoff F(x) = x in both components; meaningful with --direction
    // backward, where snapshot k holds E[x(t_k)] as a function of the start.
    for (std::size_t i = 0; i < n; ++i) {
      f_plus[i] = f_minus[i] =
          tg_grid_cell_center(grid.get(), static_cast<std::int64_t>(i));
    }
  }

  tg_solve_result* raw = nullptr;
  const auto solve =
      o.direction == "forward" ? tg_pde_solve_forward : tg_pde_solve_backward;
  check(solve(model.get(), grid.get(), f_plus.data(), f_minus.data(),
              o.times.data(), o.times.size(), &raw));
  SolvePtr result(raw);

  std::vector<std::string> ct, cx, cp, cm;
  const std::size_t n_snap = tg_solve_n_snapshots(raw);
  for (std::size_t k = 0; k < n_snap; ++k) {
    const std::string t_str = num(tg_solve_time(raw, k));
    const double* sp = tg_solve_plus(raw, k);
    const double* sm = tg_solve_minus(raw, k);
    for (std::size_t i = 0; i < n; ++i) {
      ct.push_back(t_str);
      cx.push_back(num(tg_grid_cell_center(grid.get(),
                                           static_cast<std::int64_t>(i))));
      cp.push_back(num(sp[i]));
      cm.push_back(num(sm[i]));
    }
  }

  Json summary;
  Json masses = Json::array();
  for (std::size_t k = 0; k < n_snap; ++k) {
    masses.push_back(tg_solve_mass(raw, k));
  }
  summary["times"] = [&] {
    Json arr = Json::array();
    for (std::size_t k = 0; k < n_snap; ++k) arr.push_back(tg_solve_time(raw, k));
    return arr;
  }();
  summary["masses"] = masses;
  if (o.direction == "forward") {
    double init_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) init_mass += f_plus[i] + f_minus[i];
    init_mass *= tg_grid_dx(grid.get());
    double drift = 0.0;
    for (const auto& mk : masses) {
      drift = std::max(drift,
                       std::abs(mk.get<double>() - init_mass) / init_mass);
    }
    summary["mass_drift"] = drift;
    summary["lost_mass"] = tg_solve_lost_mass(raw);
  }
  summary["dt"] = tg_solve_dt(raw);
  summary["times_snapped"] = tg_solve_times_snapped(raw) != 0;

  // Telegraph-equation residual per snapshot triple; needs >= 3 uniformly
  // spaced snapshots, otherwise reported as skipped.
  Json residuals = Json::array();
  bool residuals_available = false;
  if (n_snap >= 3) {
    std::vector<double> t_mid(n_snap - 2), rp(n_snap - 2), rm(n_snap - 2);
    std::vector<double> origins;
    if (o.init == "point") origins.push_back(o.x0);
    const tg_status rs = tg_solve_residual(
        raw, model.get(), origins.empty() ? nullptr : origins.data(),
        origins.size(), t_mid.data(), rp.data(), rm.data());
    if (rs == TG_OK) {
      residuals_available = true;
      for (std::size_t k = 0; k + 2 < n_snap; ++k) {
        residuals.push_back(Json{
            {"t", t_mid[k]}, {"res_plus", rp[k]}, {"res_minus", rm[k]}});
      }
    }
  }
  summary["telegraph_residuals"] =
      residuals_available ? residuals : Json(nullptr);

  emit(o.common.format, o.common.out, config,
       {{"t", ct}, {"x", cx}, {"f_plus", cp}, {"f_minus", cm}}, summary);
  return 0;
}

/* ------------------------------------------------------------ covariance */

struct CovarianceOpts {
  double v = 0.8, lambda = 1.0, c = 1.0;
  double V = 0.0;
  double t_center = 1.0, sigma0 = 0.15;
  double dx0 = 1.0 / 32.0;
  int levels = 3;
  std::string interp = "cubic";
  CommonOpts common;
};

int run_covariance(const CovarianceOpts& o) {
  o.common.validate();
  if (o.levels < 3) {
    config_error("--levels must be at least 3 for an order estimate");
  }
  if (o.interp != "cubic" && o.interp != "bilinear") {
    config_error("--interp must be cubic or bilinear");
  }
  auto model = make_model(o.v, o.lambda, o.c);
  // Rejects |V| >= c before any solve starts.
  double probe = 0.0;
  check(tg_add_velocities(o.v, o.V, o.c, &probe));

  Json config{{"subcommand", "covariance"},
              {"v", o.v},
              {"lambda", o.lambda},
              {"c", o.c},
              {"V", o.V},
              {"t_center", o.t_center},
              {"sigma0", o.sigma0},
              {"dx0", o.dx0},
              {"levels", o.levels},
              {"interp", o.interp}};

  std::vector<std::string> cdx, crp, crm, corder;
  double prev_combined = 0.0;
  for (int k = 0; k < o.levels; ++k) {
    const double dx = o.dx0 / static_cast<double>(1 << k);
    double rp = 0.0, rm = 0.0;
    check(tg_covariance_residual_level(model.get(), o.V, dx, o.sigma0,
                                       o.t_center, o.interp == "cubic" ? 1 : 0,
                                       &rp, &rm));
    const double combined = rp + rm;
    cdx.push_back(num(dx));
    crp.push_back(num(rp));
    crm.push_back(num(rm));
    corder.push_back(k == 0 ? std::string()
                            : num(std::log2(prev_combined / combined)));
    prev_combined = combined;
  }

  emit(o.common.format, o.common.out, config,
       {{"dx", cdx},
        {"residual_plus", crp},
        {"residual_minus", crm},
        {"observed_order", corder}},
       std::nullopt);
  return 0;
}

/* --------------------------------------------------------------- quantum */

struct QuantumOpts {
  double v = 1.0, lambda = 1.0, t = 1.0;
  std::string packet = "uniform";
  double a = -0.5, b = 0.5, sigma = 0.25;
  std::string method = "pde";
  std::int64_t n_paths = 100000, nx = 512;
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<double> x_min, x_max, c, probe_lo, probe_hi;
  CommonOpts common;
};

int run_quantum(const QuantumOpts& o) {
  o.common.validate();
  if (o.method != "mc" && o.method != "pde") {
    config_error("--method must be mc or pde");
  }
  if (o.probe_lo.has_value() != o.probe_hi.has_value()) {
    config_error("--probe-lo and --probe-hi must be given together");
  }
  auto model = make_model(o.v, o.lambda, o.c);

  tg_packet* wraw = nullptr;
  if (o.packet == "uniform") {
    check(tg_packet_uniform(o.a, o.b, &wraw));
  } else if (o.packet == "gauss") {
    check(tg_packet_truncated_gaussian(o.a, o.b, o.sigma, &wraw));
  } else if (o.packet == "cosine") {
    check(tg_packet_raised_cosine(o.a, o.b, &wraw));
  } else {
    config_error("--packet must be uniform, gauss or cosine");
  }
  PacketPtr packet(wraw);

  const double lo = tg_packet_support_lo(wraw);
  const double hi = tg_packet_support_hi(wraw);
  const double x_min = o.x_min.value_or(lo - o.v * o.t - 0.5);
  const double x_max = o.x_max.value_or(hi + o.v * o.t + 0.5);
  auto grid = make_grid(x_min, x_max, o.nx);

  // Default probe: a unit window starting just beyond the reachable cone.
  const double probe_lo = o.probe_lo.value_or(hi + o.v * o.t + 0.1);
  const double probe_hi = o.probe_hi.value_or(hi + o.v * o.t + 1.1);

  Json config{{"subcommand", "quantum"},
              {"v", o.v},
              {"lambda", o.lambda},
              {"t", o.t},
              {"packet", o.packet},
              {"a", o.a},
              {"b", o.b},
              {"method", o.method},
              {"x_min", x_min},
              {"x_max", x_max},
              {"nx", o.nx},
              {"probe_lo", probe_lo},
              {"probe_hi", probe_hi}};
  if (o.packet == "gauss") config["sigma"] = o.sigma;
  if (o.method == "mc") {
    config["n_paths"] = o.n_paths;
    config["seed"] = o.seed;
  }
  if (o.c.has_value()) config["c"] = *o.c;

  tg_density* draw = nullptr;
  check(tg_quantum_density(wraw, model.get(), o.t, grid.get(),
                           o.method == "mc" ? TG_METHOD_MC : TG_METHOD_PDE,
                           o.n_paths, o.seed, o.workers, &draw));
  DensityPtr density(draw);

  const std::int64_t n = tg_density_size(draw);
  const double dx = tg_density_dx(draw);
  const double* rp = tg_density_plus(draw);
  const double* rm = tg_density_minus(draw);
  std::vector<std::string> xs, ps, ms;
  double mean = 0.0, second = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = tg_density_cell_center(draw, i);
    const double rho = rp[i] + rm[i];
    mean += x * rho * dx;
    second += x * x * rho * dx;
    xs.push_back(num(x));
    ps.push_back(num(rp[i]));
    ms.push_back(num(rm[i]));
  }

  double packet_mean = 0.0, packet_var = 0.0;
  check(tg_packet_moments(wraw, &packet_mean, &packet_var));
  const double packet_second = packet_var + packet_mean * packet_mean;

  // The averaged evolution starts from a fair coin flip of the velocity
  // sign, so the closed forms are evaluated with the symmetric start.
  double mean_cf = 0.0, second_cf = 0.0, var_cf = 0.0;
  check(tg_mean_closed_form(model.get(), packet_mean, 0, o.t, &mean_cf));
  check(tg_second_moment_closed_form(model.get(), packet_mean, packet_second,
                                     0, o.t, &second_cf));
  check(tg_variance_closed_form(model.get(), packet_var, 0, o.t, &var_cf));

  double cone_lo = 0.0, cone_hi = 0.0;
  check(tg_density_cone(draw, &cone_lo, &cone_hi));
  double violation = 0.0;
  check(tg_density_lightcone_mass(draw, probe_lo, probe_hi, &violation));

  Json summary;
  summary["packet"] = {{"mean", packet_mean},
                       {"variance", packet_var},
                       {"support_lo", lo},
                       {"support_hi", hi}};
  summary["observables"] = {{"mean", mean},
                            {"second_moment", second},
                            {"stdev", std::sqrt(second - mean * mean)}};
  summary["closed_form"] = {{"mean", mean_cf},
                            {"second_moment", second_cf},
                            {"stdev", std::sqrt(var_cf)}};
  summary["cone"] = {{"lo", cone_lo}, {"hi", cone_hi}};
  summary["lightcone"] = {{"probe_lo", probe_lo},
                          {"probe_hi", probe_hi},
                          {"violation_mass", violation}};
  summary["total_mass"] = tg_density_mass(draw);
  if (o.method == "mc") summary["n_paths"] = tg_density_n_paths(draw);

  emit(o.common.format, o.common.out, config,
       {{"x", xs}, {"rho_plus", ps}, {"rho_minus", ms}}, summary);
  return 0;
}

/* ----------------------------------------------------------------- limit */

struct LimitOpts {
  double sigma = 1.0, t = 1.0;
  std::vector<double> lambdas = {10.0, 100.0, 1000.0};
  std::optional<double> half_width;
  double dx = 1.0 / 64.0;
  CommonOpts common;
};

int run_limit(const LimitOpts& o) {
  o.common.validate();
  if (o.lambdas.empty()) {
    config_error("--lambdas needs at least one entry");
  }
  // Six Gaussian standard deviations holds all but ~2e-9 of the limit mass.
  const double half_width =
      o.half_width.value_or(6.0 * std::sqrt(o.sigma * o.t));
  auto grid = make_centered_grid(half_width, o.dx);

  std::vector<double> v_out(o.lambdas.size()), l1_out(o.lambdas.size());
  check(tg_diffusive_limit(o.sigma, o.lambdas.data(), o.lambdas.size(), o.t,
                           grid.get(), v_out.data(), l1_out.data()));

  bool decreasing = true;
  for (std::size_t i = 1; i < l1_out.size(); ++i) {
    decreasing = decreasing && l1_out[i] < l1_out[i - 1];
  }

  Json config{{"subcommand", "limit"},
              {"sigma", o.sigma},
              {"t", o.t},
              {"lambdas", o.lambdas},
              {"half_width", half_width},
              {"dx", o.dx},
              {"strictly_decreasing", decreasing}};

  std::vector<std::string> cl, cv, cd;
  for (std::size_t i = 0; i < o.lambdas.size(); ++i) {
    cl.push_back(num(o.lambdas[i]));
    cv.push_back(num(v_out[i]));
    cd.push_back(num(l1_out[i]));
  }
  emit(o.common.format, o.common.out, config,
       {{"lambda", cl}, {"v", cv}, {"l1_distance", cd}}, std::nullopt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"telegraph-process toolkit: Monte Carlo, PDE and closed-form "
               "studies of the velocity-switching process"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand(
      "simulate", "Monte Carlo histogram of the process law at time t");
  c_sim->add_option("--v", sim.v, "Speed v > 0");
  c_sim->add_option("--lambda", sim.lambda, "Switching rate >= 0");
  c_sim->add_option("--c", sim.c, "Light speed (optional, enforces v < c)");
  c_sim->add_option("--t", sim.t, "Evolution time");
  c_sim->add_option("--x0", sim.x0, "Start position");
  c_sim->add_option("--start", sim.start, "Start sign: -1, 0 (coin flip), 1");
  c_sim->add_option("--x-min", sim.x_min, "Histogram left edge");
  c_sim->add_option("--x-max", sim.x_max, "Histogram right edge");
  c_sim->add_option("--nx", sim.nx, "Histogram cell count");
  c_sim->add_option("--n-paths", sim.n_paths, "Ensemble size");
  c_sim->add_option("--seed", sim.seed, "RNG seed");
  c_sim->add_option("--workers", sim.workers, "Worker threads");
  sim.common.attach(c_sim);

  SolveOpts sol;
  auto* c_sol = app.add_subcommand(
      "solve", "March the forward or backward transport system");
  c_sol->add_option("--v", sol.v, "Speed v > 0");
  c_sol->add_option("--lambda", sol.lambda, "Switching rate >= 0");
  c_sol->add_option("--c", sol.c, "Light speed (optional)");
  c_sol->add_option("--direction", sol.direction, "forward or backward");
  c_sol->add_option("--init", sol.init,
                    "Initial data: point, gauss or linear (payoff F(x) = x)");
  c_sol->add_option("--x0", sol.x0, "Center of point/gauss data");
  c_sol->add_option("--sigma", sol.sigma, "Width of gauss data");
  c_sol->add_option("--start", sol.start, "Component split: -1, 0, 1");
  c_sol->add_option("--x-min", sol.x_min, "Grid left edge");
  c_sol->add_option("--x-max", sol.x_max, "Grid right edge");
  c_sol->add_option("--nx", sol.nx, "Grid cell count");
  c_sol->add_option("--times", sol.times, "Output times (snapped to steps)");
  sol.common.attach(c_sol);

  CovarianceOpts cov;
  auto* c_cov = app.add_subcommand(
      "covariance",
      "Residual of the boosted transport system on a refinement ladder");
  c_cov->add_option("--v", cov.v, "Speed v in the lab frame (< c)");
  c_cov->add_option("--lambda", cov.lambda, "Rest-frame switching rate");
  c_cov->add_option("--c", cov.c, "Light speed");
  c_cov->add_option("--V", cov.V, "Frame velocity, |V| < c")->required();
  c_cov->add_option("--t-center", cov.t_center, "Frame time of the residual");
  c_cov->add_option("--sigma0", cov.sigma0, "Initial Gaussian width");
  c_cov->add_option("--dx0", cov.dx0, "Coarsest grid spacing");
  c_cov->add_option("--levels", cov.levels, "Refinement levels (halving dx)");
  c_cov->add_option("--interp", cov.interp, "cubic or bilinear pull-back");
  cov.common.attach(c_cov);

  QuantumOpts qua;
  auto* c_qua = app.add_subcommand(
      "quantum", "Path-averaged packet density with light-cone report");
  c_qua->add_option("--v", qua.v, "Speed v > 0");
  c_qua->add_option("--lambda", qua.lambda, "Switching rate >= 0");
  c_qua->add_option("--c", qua.c, "Light speed (optional)");
  c_qua->add_option("--t", qua.t, "Evolution time");
  c_qua->add_option("--packet", qua.packet, "uniform, gauss or cosine");
  c_qua->add_option("--a", qua.a, "Packet support left edge");
  c_qua->add_option("--b", qua.b, "Packet support right edge");
  c_qua->add_option("--sigma", qua.sigma, "Width parameter for gauss");
  c_qua->add_option("--method", qua.method, "mc or pde");
  c_qua->add_option("--x-min", qua.x_min, "Grid left edge");
  c_qua->add_option("--x-max", qua.x_max, "Grid right edge");
  c_qua->add_option("--nx", qua.nx, "Grid cell count");
  c_qua->add_option("--n-paths", qua.n_paths, "Ensemble size (mc)");
  c_qua->add_option("--seed", qua.seed, "RNG seed (mc)");
  c_qua->add_option("--workers", qua.workers, "Worker threads (mc)");
  c_qua->add_option("--probe-lo", qua.probe_lo, "Probe window left edge");
  c_qua->add_option("--probe-hi", qua.probe_hi, "Probe window right edge");
  qua.common.attach(c_qua);

  LimitOpts lim;
  auto* c_lim = app.add_subcommand(
      "limit", "L1 distance to the Gaussian limit at fixed sigma = v^2/lambda");
  c_lim->add_option("--sigma", lim.sigma, "Diffusivity v^2 / lambda");
  c_lim->add_option("--t", lim.t, "Evolution time");
  c_lim->add_option("--lambdas", lim.lambdas, "Switching-rate ladder");
  c_lim->add_option("--half-width", lim.half_width, "Evaluation half width");
  c_lim->add_option("--dx", lim.dx, "Evaluation spacing");
  lim.common.attach(c_lim);

  try {
    app.parse(argc, argv);
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_sol->parsed()) return run_solve(sol);
    if (c_cov->parsed()) return run_covariance(cov);
    if (c_qua->parsed()) return run_quantum(qua);
    if (c_lim->parsed()) return run_limit(lim);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s [%s]\n", e.message.c_str(),
                 tg_status_name(e.status));
    return exit_for(e.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
