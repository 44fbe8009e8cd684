#include "core.hpp"

#include <algorithm>
#include <cmath>

namespace telegraph {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::SuperluminalSpeed: return "SuperluminalSpeed";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::NonUnitCFL: return "NonUnitCFL";
    case ErrorCode::InsufficientSnapshots: return "InsufficientSnapshots";
    case ErrorCode::DomainNotCovered: return "DomainNotCovered";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

void validate_params(const ModelParams& p, bool relativistic) {
  if (!std::isfinite(p.v) || p.v <= 0.0)
    throw Error(ErrorCode::NonPositiveSpeed,
                "speed v must be positive and finite, got " + std::to_string(p.v));
  if (!std::isfinite(p.lambda) || p.lambda < 0.0)
    throw Error(ErrorCode::NegativeRate,
                "switching rate lambda must be >= 0, got " + std::to_string(p.lambda));
  if (relativistic && !p.c)
    throw Error(ErrorCode::InvalidArgument,
                "relativistic run requires a light speed c");
  if (p.c) {
    if (!std::isfinite(*p.c) || *p.c <= 0.0)
      throw Error(ErrorCode::InvalidArgument,
                  "light speed c must be positive and finite");
    if (p.v >= *p.c)
      throw Error(ErrorCode::SuperluminalSpeed,
                  "speed v must satisfy v < c, got v=" + std::to_string(p.v) +
                      " c=" + std::to_string(*p.c));
  }
}

Grid1D::Grid1D(double x_min_, double x_max_, std::int64_t nx_)
    : x_min(x_min_), x_max(x_max_), nx(nx_) {
  if (!(x_min < x_max) || nx < 2)
    throw Error(ErrorCode::InvalidArgument,
                "grid requires x_min < x_max and nx >= 2");
  dx = (x_max - x_min) / static_cast<double>(nx);
}

Grid1D Grid1D::centered(double half_width, double dx) {
  if (!(half_width > 0.0) || !(dx > 0.0))
    throw Error(ErrorCode::InvalidArgument, "centered grid needs positive extents");
  std::int64_t half_cells = static_cast<std::int64_t>(std::ceil(half_width / dx));
  std::int64_t nx = 2 * half_cells + 1;
  double x_min = -(static_cast<double>(half_cells) + 0.5) * dx;
  return Grid1D(x_min, x_min + static_cast<double>(nx) * dx, nx);
}

std::int64_t Grid1D::cell_index(double x) const {
  auto i = static_cast<std::int64_t>(std::floor((x - x_min) / dx));
  return std::clamp<std::int64_t>(i, 0, nx - 1);
}

double FieldPair::mass() const {
  double s = 0.0;
  for (double v : f_plus) s += v;
  for (double v : f_minus) s += v;
  return s * grid.dx;
}

double FieldPair::min_value() const {
  double m = f_plus.empty() ? 0.0 : f_plus.front();
  for (double v : f_plus) m = std::min(m, v);
  for (double v : f_minus) m = std::min(m, v);
  return m;
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t path_index) {
  // Distinct splitmix64 window per path: paths i and j start from states
  // 4*i and 4*j apart in the same splitmix walk, then the avalanche mixer
  // decorrelates the four xoshiro words.
  std::uint64_t sm = seed + path_index * 4 * 0x9E3779B97F4A7C15ULL;
  for (auto& w : s_) w = splitmix64(sm);
}

std::uint64_t PathRng::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double PathRng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double PathRng::next_exponential(double rate) {
  // -log(1-u) with u in [0,1) never sees log(0).
  return -std::log1p(-next_uniform()) / rate;
}

int PathRng::next_sign() { return (next_u64() >> 63) ? -1 : +1; }

}  // namespace telegraph
