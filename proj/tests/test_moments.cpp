#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "core.hpp"
#include "moments.hpp"

using namespace telegraph;

namespace {

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

ModelParams params(double v, double lambda) {
  ModelParams p;
  p.v = v;
  p.lambda = lambda;
  return p;
}

}  // namespace

TEST_CASE("closed forms agree with the moment ODE system everywhere") {
  // The oracle integrates the first-moment hierarchy directly; it shares no
  // algebra with the closed forms under test.
  const InitialMoments w0{0.3, 0.2};
  for (double v : {0.5, 1.0, 2.0}) {
    for (double lambda : {0.1, 1.0, 10.0}) {
      for (int s : {-1, 0, +1}) {
        const ModelParams p = params(v, lambda);
        const std::vector<double> times{0.1, 1.0, 5.0};
        const auto pts = moment_ode_oracle(p, w0, s, times);
        REQUIRE(pts.size() == times.size());
        for (const auto& pt : pts) {
          CAPTURE(v);
          CAPTURE(lambda);
          CAPTURE(s);
          CAPTURE(pt.t);
          CHECK(mean_closed_form(p, w0.m1, s, pt.t) ==
                doctest::Approx(pt.mean).epsilon(1e-8));
          CHECK(second_moment_closed_form(p, w0, s, pt.t) ==
                doctest::Approx(pt.second_moment).epsilon(1e-8));
          // <nu>(t) = s v e^{-2 lambda t} is the one component with a
          // trivial closed form; pin it to 1e-10.
          CHECK(pt.mean_velocity ==
                doctest::Approx(s * v * std::exp(-2.0 * lambda * pt.t))
                    .epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("the oracle pins down the inhomogeneous constant of the second "
          "moment") {
  // The m2 equation integrates q' = v^2 - 2 lambda q from q(0) = s v m1_0.
  // Plausible-looking alternatives (flipped sign, dropped factor) shift the
  // solution by Delta q0 (1 - e^{-2 lambda t}) / lambda, which the oracle
  // resolves by many orders of magnitude.
  const ModelParams p = params(1.0, 1.0);
  const InitialMoments w0{0.3, 0.2};
  const int s = +1;
  const double t = 1.0;
  const auto pts = moment_ode_oracle(p, w0, s, {t});
  const double d = 1.0 - std::exp(-2.0 * p.lambda * t);

  const double implemented = second_moment_closed_form(p, w0, s, t);
  CHECK(std::abs(implemented - pts[0].second_moment) < 1e-9);

  const double q0 = s * p.v * w0.m1;
  for (double q0_wrong : {-q0, 0.5 * q0, 0.0}) {
    const double variant =
        implemented + (q0_wrong - q0) * d / p.lambda;
    CHECK(std::abs(variant - pts[0].second_moment) > 0.05);
  }
}

TEST_CASE("time zero returns the initial moments unchanged") {
  const ModelParams p = params(1.3, 0.7);
  const InitialMoments w0{-0.2, 0.5};
  for (int s : {-1, 0, +1}) {
    CHECK(mean_closed_form(p, w0.m1, s, 0.0) == w0.m1);
    CHECK(second_moment_closed_form(p, w0, s, 0.0) == w0.m2);
    CHECK(variance_closed_form(p, 0.31, s, 0.0) == 0.31);
  }
}

TEST_CASE("zero rate reduces to ballistic motion") {
  const ModelParams p = params(2.0, 0.0);
  const InitialMoments w0{0.3, 0.2};
  const double t = 1.5;
  for (int s : {-1, +1}) {
    CHECK(mean_closed_form(p, w0.m1, s, t) ==
          doctest::Approx(0.3 + s * 2.0 * 1.5).epsilon(1e-15));
    CHECK(second_moment_closed_form(p, w0, s, t) ==
          doctest::Approx(0.2 + 2.0 * s * 2.0 * 0.3 * 1.5 + 4.0 * 2.25)
              .epsilon(1e-15));
    // A rigid translate keeps its variance.
    CHECK(variance_closed_form(p, 0.11, s, t) == 0.11);
  }
  // The symmetric start splits into two translates +-vt apart.
  CHECK(variance_closed_form(p, 0.11, 0, t) ==
        doctest::Approx(0.11 + 4.0 * 2.25).epsilon(1e-15));
}

TEST_CASE("variance identities") {
  SUBCASE("signed and symmetric differ by the squared mean drift") {
    for (double v : {0.5, 1.0, 3.0}) {
      for (double lambda : {0.2, 1.0, 5.0}) {
        for (double t : {0.1, 1.0, 4.0}) {
          const ModelParams p = params(v, lambda);
          const double gap = variance_closed_form(p, 0.0, 0, t) -
                             variance_closed_form(p, 0.0, +1, t);
          const double drift = v / (2.0 * lambda) *
                               (1.0 - std::exp(-2.0 * lambda * t));
          CHECK(gap == doctest::Approx(drift * drift).epsilon(1e-12));
        }
      }
    }
  }

  SUBCASE("sign of the start does not matter") {
    const ModelParams p = params(1.0, 0.8);
    for (double t : {0.3, 2.0}) {
      CHECK(variance_closed_form(p, 0.2, +1, t) ==
            variance_closed_form(p, 0.2, -1, t));
    }
  }

  SUBCASE("variance never decreases in time") {
    const ModelParams p = params(1.0, 1.0);
    for (int s : {0, +1}) {
      double prev = variance_closed_form(p, 0.05, s, 0.0);
      for (double t = 0.05; t <= 5.0; t += 0.05) {
        const double cur = variance_closed_form(p, 0.05, s, t);
        CHECK(cur >= prev);
        prev = cur;
      }
    }
  }

  SUBCASE("consistent with mean and second moment") {
    // Var = m2 - m1^2 for a signed start from a deterministic point
    // (var0 = 0, m1_0 = x0).
    const ModelParams p = params(1.2, 0.9);
    const double x0 = 0.4, t = 1.7;
    for (int s : {-1, +1}) {
      const InitialMoments w0{x0, x0 * x0};
      const double m1 = mean_closed_form(p, x0, s, t);
      const double m2 = second_moment_closed_form(p, w0, s, t);
      CHECK(variance_closed_form(p, 0.0, s, t) ==
            doctest::Approx(m2 - m1 * m1).epsilon(1e-12));
    }
  }
}

TEST_CASE("stdev curve decomposition") {
  const ModelParams p = params(1.0, 2.0);
  const double var0 = 0.01;
  const std::vector<double> times{0.1, 0.5, 1.0, 3.0, 10.0};
  const auto curve = stdev_curve(p, var0, times);
  REQUIRE(curve.size() == times.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& pt = curve[i];
    CHECK(pt.t == times[i]);
    // stdev^2 is the exact signed-start variance.
    CHECK(pt.stdev * pt.stdev ==
          doctest::Approx(variance_closed_form(p, var0, +1, pt.t))
              .epsilon(1e-13));
    // leading_form^2 is the quoted approximation.
    const double d = 1.0 - std::exp(-2.0 * p.lambda * pt.t);
    CHECK(pt.leading_form * pt.leading_form ==
          doctest::Approx(var0 + p.v * p.v * pt.t / p.lambda * d)
              .epsilon(1e-13));
    // remainder is their gap, by definition of the decomposition.
    CHECK(pt.remainder ==
          doctest::Approx(pt.stdev * pt.stdev -
                          pt.leading_form * pt.leading_form)
              .epsilon(1e-10));
  }
}

TEST_CASE("stdev remainder is O(1/lambda^2) at fixed speed") {
  // lambda^2 |remainder| = v^2 |lambda t e^{-2 lambda t} - (1-E)(3-E)/4|
  // stays below v^2 for all t and tends to 3 v^2 / 4; the quoted leading
  // form is therefore accurate to O(lambda^-2) uniformly in time.
  const double v = 1.0;
  for (double lambda : {1.0, 10.0, 100.0}) {
    const ModelParams p = params(v, lambda);
    std::vector<double> times;
    for (double t = 0.1; t <= 10.0; t += 0.1) times.push_back(t);
    const auto curve = stdev_curve(p, 0.01, times);
    for (const auto& pt : curve) {
      CHECK(lambda * lambda * std::abs(pt.remainder) <= v * v);
    }
    // Long-time plateau: remainder -> -3 v^2 / (4 lambda^2).
    const double tail = curve.back().remainder;
    CHECK(lambda * lambda * tail ==
          doctest::Approx(-0.75 * v * v).epsilon(1e-3));
  }
}

TEST_CASE("diffusive limit distance shrinks as the rate grows") {
  const Grid1D grid = Grid1D::centered(6.0, 1.0 / 64.0);
  const auto rows = diffusive_limit_study(1.0, {10.0, 100.0, 1000.0}, 1.0, grid);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].lambda == doctest::Approx(std::pow(10.0, i + 1.0)));
    CHECK(rows[i].v == doctest::Approx(std::sqrt(rows[i].lambda)).epsilon(1e-14));
    CHECK(rows[i].l1 > 0.0);
    if (i > 0) CHECK(rows[i].l1 < rows[i - 1].l1);
  }
  CHECK(rows.back().l1 < 0.05);
}

TEST_CASE("input validation") {
  const ModelParams p = params(1.0, 1.0);

  CHECK(code_of([&] { mean_closed_form(p, 0.0, 2, 1.0); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { mean_closed_form(p, 0.0, +1, -0.5); }) ==
        ErrorCode::TimeOutOfRange);
  CHECK(code_of([&] {
          second_moment_closed_form(p, {1.0, 0.5}, +1, 1.0);  // m2 < m1^2
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { variance_closed_form(p, -0.1, +1, 1.0); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] {
          moment_ode_oracle(p, {0.0, 0.0}, +1, {1.0, 1.0});
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] {
          moment_ode_oracle(p, {0.0, 0.0}, +1, {-1.0, 1.0});
        }) == ErrorCode::TimeOutOfRange);
  CHECK(moment_ode_oracle(p, {0.0, 0.0}, +1, {}).empty());

  const Grid1D grid = Grid1D::centered(6.0, 1.0 / 8.0);
  CHECK(code_of([&] { diffusive_limit_study(-1.0, {10.0}, 1.0, grid); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { diffusive_limit_study(1.0, {10.0}, 0.0, grid); }) ==
        ErrorCode::TimeOutOfRange);
  CHECK(code_of([&] { diffusive_limit_study(1.0, {0.0}, 1.0, grid); }) ==
        ErrorCode::NegativeRate);
}

TEST_CASE("oracle reports the initial state when asked for time zero") {
  const ModelParams p = params(1.0, 3.0);
  const InitialMoments w0{0.25, 0.5};
  const auto pts = moment_ode_oracle(p, w0, -1, {0.0, 0.5});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].t == 0.0);
  CHECK(pts[0].mean == w0.m1);
  CHECK(pts[0].second_moment == w0.m2);
  CHECK(pts[0].mean_velocity == -p.v);
}
