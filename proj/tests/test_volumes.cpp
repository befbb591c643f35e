#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nslru/volumes.hpp"

using namespace nslru;

namespace {

// Independent oracle for the Pareto MGF at integer beta and v_min=1:
// E[e^{-sV}] = beta * E_{beta+1}(s), via the generalized exponential
// integral recurrence E_{n+1}(z) = (e^{-z} - z E_n(z)) / n starting from
// E_1(z) = -Ei(-z).
double expint_En(int n, double z) {
  double e = -std::expint(-z);  // E_1(z)
  for (int k = 1; k < n; ++k) e = (std::exp(-z) - z * e) / k;
  return e;
}

}  // namespace

TEST_CASE("moments") {
  const auto p31 = VolumeDistribution::pareto(1.0, 3.0);
  CHECK(p31.moments().mean == Catch::Approx(1.5));
  CHECK(p31.moments().second_moment == Catch::Approx(3.0));

  const auto det = VolumeDistribution::deterministic(1.5);
  CHECK(det.moments().mean == Catch::Approx(1.5));
  CHECK(det.moments().second_moment == Catch::Approx(2.25));

  const auto p2 = VolumeDistribution::pareto(1.0, 2.0);
  CHECK(p2.moments().mean == Catch::Approx(2.0));
  CHECK(std::isinf(p2.moments().second_moment));
  CHECK_FALSE(p2.finite_second_moment());
}

TEST_CASE("mgf against the exponential-integral oracle") {
  const auto p31 = VolumeDistribution::pareto(1.0, 3.0);
  CHECK(p31.mgf(0.0) == 1.0);
  CHECK(p31.mgf(-1.0) == Catch::Approx(3.0 * expint_En(4, 1.0)).epsilon(1e-9));
  CHECK(p31.mgf(-1.0) == Catch::Approx(0.25819).epsilon(1e-4));
  for (double s : {0.1, 0.5, 2.0, 5.0}) {
    CAPTURE(s);
    CHECK(p31.mgf(-s) ==
          Catch::Approx(3.0 * std::pow(s, 0.0) * expint_En(4, s)).epsilon(1e-9));
    CHECK(p31.mgf_complement(-s) ==
          Catch::Approx(1.0 - 3.0 * expint_En(4, s)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(p31.mgf(0.1), std::domain_error);
}

TEST_CASE("mgf of a point mass") {
  const auto det = VolumeDistribution::deterministic(2.0);
  CHECK(det.mgf(-1.0) == Catch::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(det.mgf_deriv(-1.0) == Catch::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(det.mgf(0.0) == 1.0);
}

TEST_CASE("mgf derivative against the oracle") {
  const auto p31 = VolumeDistribution::pareto(1.0, 3.0);
  CHECK(p31.mgf_deriv(0.0) == Catch::Approx(1.5));
  CHECK(p31.mgf_deriv(-1.0) ==
        Catch::Approx(3.0 * expint_En(3, 1.0)).epsilon(1e-9));
  CHECK(p31.mgf_deriv(-1.0) == Catch::Approx(0.32908).epsilon(1e-4));
  CHECK_THROWS_AS(p31.mgf_deriv(1e-3), std::domain_error);
}

TEST_CASE("mgf convexity and monotonicity on x <= 0") {
  for (const auto& d : {VolumeDistribution::pareto(1.0, 3.0),
                        VolumeDistribution::pareto(0.5, 2.2),
                        VolumeDistribution::pareto(2.0, 1.5),
                        VolumeDistribution::deterministic(1.5)}) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-5.0, 0.0);
    for (int i = 0; i < 50; ++i) {
      double x1 = unif(rng), x2 = unif(rng);
      if (x1 > x2) std::swap(x1, x2);
      CHECK(d.mgf(0.5 * (x1 + x2)) <=
            0.5 * (d.mgf(x1) + d.mgf(x2)) + 1e-12);
      CHECK(d.mgf(x1) <= d.mgf(x2) + 1e-12);
      const double dv = d.mgf_deriv(x1);
      CHECK(dv > 0.0);
      CHECK(dv <= d.mean() + 1e-12);
    }
  }
}

TEST_CASE("mgf derivative matches finite differences") {
  const double h = 1e-5;
  for (const auto& d : {VolumeDistribution::pareto(1.0, 3.0),
                        VolumeDistribution::pareto(1.0, 2.2),
                        VolumeDistribution::deterministic(2.0)}) {
    for (double x = -5.0; x <= -h; x += 0.25) {
      const double fd = (d.mgf(x + h) - d.mgf(x - h)) / (2.0 * h);
      CHECK(std::abs(fd - d.mgf_deriv(x)) <= 1e-6);
    }
  }
}

TEST_CASE("complements are exact counterparts") {
  for (const auto& d : {VolumeDistribution::pareto(1.0, 3.0),
                        VolumeDistribution::pareto(1.0, 1.7)}) {
    for (double x : {-1e-8, -1e-3, -0.5, -1.0, -3.0}) {
      CHECK(d.mgf_complement(x) ==
            Catch::Approx(1.0 - d.mgf(x)).margin(1e-12));
      CHECK(d.mgf_deriv_complement(x) ==
            Catch::Approx(d.mean() - d.mgf_deriv(x)).margin(1e-9));
      CHECK(d.mgf_complement(x) >= 0.0);
      CHECK(d.mgf_deriv_complement(x) >= 0.0);
    }
    // tiny arguments keep full relative precision
    const double x = -1e-12;
    CHECK(d.mgf_complement(x) ==
          Catch::Approx(-x * d.mean()).epsilon(1e-3));
  }
}

TEST_CASE("inverse-CDF sampling") {
  const auto p31 = VolumeDistribution::pareto(1.0, 3.0);
  CHECK(p31.sample(0.0) == Catch::Approx(1.0));
  CHECK(p31.sample(0.875) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(p31.cdf(2.0) == Catch::Approx(0.875).epsilon(1e-12));
  CHECK(VolumeDistribution::deterministic(2.0).sample(0.37) == 2.0);
  CHECK_THROWS_AS(p31.sample(1.0), std::domain_error);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = p31.sample(unif(rng));
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::abs(mean - p31.mean()) <= 3.0 * sd);
}

TEST_CASE("rank-volume law has Zipf exponent 1/beta at sample level") {
  const double beta = 3.0;
  const auto d = VolumeDistribution::pareto(1.0, beta);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 100000;
  std::vector<double> v(n);
  for (auto& x : v) x = d.sample(unif(rng));
  std::sort(v.begin(), v.end(), std::greater<>());
  // least-squares slope of log v_(r) against log r over the bulk
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int r = 10; r < n / 10; ++r) {
    const double x = std::log(static_cast<double>(r + 1));
    const double y = std::log(v[r]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(slope == Catch::Approx(-1.0 / beta).margin(0.05));
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(VolumeDistribution::pareto(0.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(VolumeDistribution::pareto(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(VolumeDistribution::deterministic(0.0),
                  std::invalid_argument);
}
