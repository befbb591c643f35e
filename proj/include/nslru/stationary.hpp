#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "nslru/numerics.hpp"

namespace nslru {

/// Static Zipf catalogue for the classical (stationary) Che
/// approximation: content m is requested at rate total_rate * H / m^alpha.
///
/// Sums over the catalogue are evaluated exactly up to kExactTerms and by
/// an Euler-Maclaurin integral correction beyond, so catalogues of 1e7
/// contents stay cheap inside the root finder.
class ZipfCatalog {
public:
  ZipfCatalog(uint64_t catalog_size_M, double alpha, double total_rate)
      : M_(catalog_size_M), alpha_(alpha), rate_(total_rate) {
    if (M_ == 0) throw std::invalid_argument("catalog must be nonempty");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (!(total_rate > 0.0))
      throw std::invalid_argument("total_rate must be > 0");
    H_ = 1.0 / harmonic_sum();
  }

  uint64_t size() const { return M_; }
  double alpha() const { return alpha_; }
  double total_rate() const { return rate_; }
  double normalization_H() const { return H_; }

  /// Request probability of the m-th most popular content.
  double popularity(uint64_t m) const {
    return H_ * std::pow(static_cast<double>(m), -alpha_);
  }

  /// Expected number of distinct contents requested within a window tc:
  /// sum_m (1 - e^{-lambda_m tc}).
  double occupancy(double tc) const {
    if (tc < 0.0) throw std::domain_error("occupancy: tc < 0");
    if (std::isinf(tc)) return static_cast<double>(M_);
    const double a = rate_ * H_ * tc;
    return catalogue_sum([&](double m) {
      return -std::expm1(-a * std::pow(m, -alpha_));
    });
  }

  double hit_probability(double tc) const {
    if (tc < 0.0) throw std::domain_error("hit_probability: tc < 0");
    if (std::isinf(tc)) return 1.0;
    const double a = rate_ * H_ * tc;
    return H_ * catalogue_sum([&](double m) {
      return std::pow(m, -alpha_) * -std::expm1(-a * std::pow(m, -alpha_));
    });
  }

  /// Root of occupancy(tc) = C.  C = M means the whole catalogue is
  /// cached; the eviction time is then unbounded.
  double solve_eviction_time(double C) const {
    if (!(C > 0.0)) throw std::domain_error("solve: C <= 0");
    if (C > static_cast<double>(M_))
      throw std::domain_error("solve: C exceeds catalogue size");
    if (C == static_cast<double>(M_))
      return std::numeric_limits<double>::infinity();
    double lo = 0.0;
    double hi = 1.0 / (rate_ * H_);  // tc at which the top content saturates
    while (occupancy(hi) < C) hi *= 2.0;
    auto f = [&](double tc) { return occupancy(tc) - C; };
    return find_root(f, lo, hi, std::max(1e-9 * C, 1e-12));
  }

private:
  static constexpr uint64_t kExactTerms = 100000;

  template <typename F>
  double catalogue_sum(const F& f) const {
    const uint64_t n0 = std::min(M_, kExactTerms);
    double s = 0.0;
    for (uint64_t m = 1; m <= n0; ++m) s += f(static_cast<double>(m));
    if (n0 == M_) return s;
    // Euler-Maclaurin for sum_{m=n0+1}^{M}: integral + endpoint terms.
    const double a = static_cast<double>(n0);
    const double b = static_cast<double>(M_);
    std::vector<double> pts{a};
    for (double x = 2.0 * a; x < b; x *= 2.0) pts.push_back(x);
    pts.push_back(b);
    const double integral = integrate(f, pts, 1e-14, 1e-10).value;
    const double h = 1e-3 * a;
    const double dfa = (f(a + h) - f(a - h)) / (2.0 * h);
    const double dfb = (f(b) - f(b - h)) / h;
    return s + integral - 0.5 * f(a) + 0.5 * f(b) + (dfb - dfa) / 12.0;
  }

  double harmonic_sum() const {
    return catalogue_sum(
        [&](double m) { return std::pow(m, -alpha_); });
  }

  uint64_t M_;
  double alpha_;
  double rate_;
  double H_;
};

}  // namespace nslru
