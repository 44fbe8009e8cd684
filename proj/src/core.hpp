#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Shared vocabulary for the velocity-switching (telegraph) process code:
// model parameters, 1d cell-centered grids, two-component fields, events,
// and the per-path random number streams used by the Monte Carlo layer.
//
// All types here are plain values; once constructed they are never mutated
// by the library, so they can be shared freely across threads.

namespace telegraph {

enum class ErrorCode {
  InvalidArgument,
  NonPositiveSpeed,
  NegativeRate,
  SuperluminalSpeed,
  TimeOutOfRange,
  GridTooSmall,
  NonUnitCFL,
  InsufficientSnapshots,
  DomainNotCovered,
  Unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

// Initial velocity sign: a fixed sign, or an unbiased coin flip per path.
enum class Start { Plus, Minus, Symmetric };

inline int start_sign(Start s) { return s == Start::Minus ? -1 : +1; }

// Speed v, switching rate lambda, and (optionally) a light speed c for the
// relativistic pieces. c is absent for plain Galilean runs; when present
// the model must satisfy 0 < v < c.
struct ModelParams {
  double v = 1.0;
  double lambda = 1.0;
  std::optional<double> c;
};

// Throws Error on bad parameters; valid params pass unchanged (idempotent).
// v >= c is rejected whenever c is supplied; `relativistic` additionally
// requires that c is supplied at all.
void validate_params(const ModelParams& p, bool relativistic = false);

struct SpacetimeEvent {
  double t = 0.0;
  double x = 0.0;
};

// Uniform cell-centered grid on [x_min, x_max]: cell i covers
// [x_min + i*dx, x_min + (i+1)*dx] and is represented by its center.
struct Grid1D {
  Grid1D(double x_min, double x_max, std::int64_t nx);

  // Grid with an odd cell count whose middle cell center is exactly 0;
  // covers at least [-half_width, half_width]. Density comparisons against
  // the closed-form kernel use this so the never-switched atoms land on
  // cell centers.
  static Grid1D centered(double half_width, double dx);

  double x_min, x_max, dx;
  std::int64_t nx;

  double cell_center(std::int64_t i) const { return x_min + (i + 0.5) * dx; }
  std::int64_t cell_index(double x) const;  // clamped to [0, nx-1]
  bool covers(double lo, double hi) const { return x_min <= lo && hi <= x_max; }
};

// f_plus / f_minus sampled on the cells of a common grid, in 1/length units.
struct FieldPair {
  explicit FieldPair(const Grid1D& g)
      : grid(g),
        f_plus(static_cast<std::size_t>(g.nx), 0.0),
        f_minus(static_cast<std::size_t>(g.nx), 0.0) {}

  Grid1D grid;
  std::vector<double> f_plus;
  std::vector<double> f_minus;

  double mass() const;  // dx * sum of both components
  double min_value() const;
};

// Counter-style deterministic RNG: the stream for (seed, path_index) is a
// pure function of both, so ensembles can be sharded across any number of
// workers and still reproduce bit-identical results. Implementation is
// xoshiro256++ with per-path state derived from a splitmix64 walk.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path_index);

  std::uint64_t next_u64();
  double next_uniform();          // in [0, 1)
  double next_exponential(double rate);  // mean 1/rate; rate > 0
  int next_sign();                // +1 or -1, unbiased

 private:
  std::uint64_t s_[4];
};

}  // namespace telegraph
