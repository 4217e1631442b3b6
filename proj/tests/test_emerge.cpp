#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "negdep/emerge.hpp"
#include "negdep/rng.hpp"
#include "support/oracles.hpp"

using namespace negdep;
using negdep::test_oracles::ustat_enumerated;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("product_e basics") {
  const EVector e({2.0, 0.5});
  CHECK(product_e(e, {1, 2}) == doctest::Approx(1.0));
  CHECK(product_e(e, {}) == 1.0);
  CHECK(product_e(EVector({3.0, 1.0, 0.0}), {1, 2, 3}) == 0.0);
  CHECK_THROWS_AS(product_e(e, {3}), std::out_of_range);
  CHECK_THROWS_AS(product_e(e, {0}), std::out_of_range);
  // infinity propagates
  CHECK(product_e(EVector({kInf, 2.0}), {1, 2}) == kInf);
}

TEST_CASE("lambda_product identities and hand value") {
  const EVector e({2.0, 0.5});
  CHECK(lambda_product(e, {0.0, 0.0}) == 1.0);
  CHECK(lambda_product(e, {1.0, 1.0}) == product_e(e, {1, 2}));
  CHECK(lambda_product(e, {0.5, 0.5}) == doctest::Approx(1.125));
  CHECK_THROWS_AS(lambda_product(e, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(lambda_product(e, {0.5, 1.5}), std::domain_error);
  CHECK_THROWS_AS(lambda_product(e, {-0.1, 0.5}), std::domain_error);
}

TEST_CASE("u_statistic hand values and edge orders") {
  const EVector e({2.0, 0.5, 1.0});
  CHECK(u_statistic(e, 1) == doctest::Approx((2.0 + 0.5 + 1.0) / 3.0));
  CHECK(u_statistic(e, 2) == doctest::Approx(3.5 / 3.0).epsilon(1e-14));
  CHECK(u_statistic(e, 3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(u_statistic(e, 0), std::domain_error);
  CHECK_THROWS_AS(u_statistic(e, 4), std::domain_error);
}

TEST_CASE("u_statistic equals subset enumeration for K <= 12") {
  Rng rng(41, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const int K = 1 + static_cast<int>(rng.below(12));
    std::vector<double> vals(static_cast<std::size_t>(K));
    for (auto& v : vals) {
      const double u = rng.uniform01();
      v = u < 0.1 ? 0.0 : std::exp(4.0 * (rng.uniform01() - 0.5));  // zeros and spread
    }
    const EVector e(vals);
    for (int k = 1; k <= K; ++k) {
      const double dp = u_statistic(e, k);
      const double brute = ustat_enumerated(vals, k);
      CHECK(dp == doctest::Approx(brute).epsilon(1e-12));
    }
  }
}

TEST_CASE("u_statistic is permutation invariant") {
  Rng rng(42, 0);
  const std::vector<double> vals = {0.3, 2.0, 1.7, 0.0, 5.5, 1.0};
  std::vector<double> shuffled = vals;
  for (int trial = 0; trial < 50; ++trial) {
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    }
    for (int k = 1; k <= 6; ++k) {
      CHECK(u_statistic(EVector(shuffled), k) ==
            doctest::Approx(u_statistic(EVector(vals), k)).epsilon(1e-13));
    }
  }
}

TEST_CASE("convex_combo hand values and weight validation") {
  CHECK(convex_combo(EVector({4.0}), {{{}, 1.0}}) == 1.0);
  CHECK(convex_combo(EVector({4.0}), {{{1}, 0.5}, {{}, 0.5}}) == doctest::Approx(2.5));
  const EVector e({2.0, 0.5, 1.0});
  // uniform weights over all size-2 subsets reproduce the U-statistic
  const double w = 1.0 / 3.0;
  CHECK(convex_combo(e, {{{1, 2}, w}, {{1, 3}, w}, {{2, 3}, w}}) ==
        doctest::Approx(u_statistic(e, 2)).epsilon(1e-14));
  CHECK_THROWS_AS(convex_combo(e, {{{1}, 0.5}}), std::domain_error);
  CHECK_THROWS_AS(convex_combo(e, {{{1}, -0.5}, {{2}, 1.5}}), std::domain_error);
}

TEST_CASE("calibrate power family") {
  const CalibratorSpec spec(0.5);
  const EVector e = calibrate(PVector({1.0, 0.25, 0.01}), spec);
  CHECK(e[0] == doctest::Approx(0.5));
  CHECK(e[1] == doctest::Approx(1.0));
  CHECK(e[2] == doctest::Approx(5.0));
  CHECK(calibrate(PVector({0.0}), spec)[0] == kInf);
  CHECK_THROWS_AS(CalibratorSpec(0.0), std::domain_error);
  CHECK_THROWS_AS(CalibratorSpec(1.0), std::domain_error);
}

TEST_CASE("calibrator integrates to one over [0,1]") {
  // Composite Simpson on a dyadic mesh toward 0: the integrand t^(kappa-1)
  // is smooth on each cell [2^-(j+1), 2^-j] and the truncated tail mass is
  // 2^(-J kappa), negligible for J = 200.
  for (double kappa : {0.3, 0.5, 0.7, 0.9}) {
    auto phi = [kappa](double t) { return kappa * std::pow(t, kappa - 1.0); };
    auto simpson = [&](double a, double b) {
      const int n = 64;  // even subinterval count per cell
      const double h = (b - a) / n;
      double s = phi(a) + phi(b);
      for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * phi(a + i * h);
      return s * h / 3.0;
    };
    double total = 0.0;
    double hi = 1.0;
    for (int j = 0; j < 200; ++j) {
      total += simpson(hi / 2.0, hi);
      hi /= 2.0;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("calibrate is decreasing in p") {
  const CalibratorSpec spec(0.7);
  const EVector e = calibrate(PVector({0.1, 0.2, 0.5, 0.9}), spec);
  CHECK(e[0] > e[1]);
  CHECK(e[1] > e[2]);
  CHECK(e[2] > e[3]);
}

TEST_CASE("chernoff_e closed forms") {
  SubPsiSpec unit;  // subGaussian, v=1, mu=0
  CHECK(chernoff_e({0.0}, {unit}, {0.7}) == doctest::Approx(std::exp(-0.245)));
  CHECK(chernoff_e({1.3, -0.2}, {unit, unit}, {0.0, 0.0}) == 1.0);
  CHECK(chernoff_e({1.0, 1.0}, {unit, unit}, {0.5, 0.5}) == doctest::Approx(std::exp(0.75)));
  // homogeneous case matches the pooled form exp(n l (xbar - mu) - n v l^2/2)
  const std::vector<double> xs = {0.4, -1.0, 2.2};
  const double lambda = 0.31;
  double xbar = 0.0;
  for (double x : xs) xbar += x / 3.0;
  CHECK(chernoff_e(xs, {unit, unit, unit}, {lambda, lambda, lambda}) ==
        doctest::Approx(std::exp(3.0 * lambda * xbar - 3.0 * lambda * lambda / 2.0)));
  CHECK_THROWS_AS(chernoff_e({0.0}, {unit}, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("average_e") {
  CHECK(average_e(EVector({1.0, 1.0, 1.0})) == 1.0);
  CHECK(average_e(EVector({0.0, 2.0})) == 1.0);
  CHECK(average_e(EVector({2.0, 0.5, 1.0})) == doctest::Approx(7.0 / 6.0).epsilon(1e-14));
}
