#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "nslru/numerics.hpp"

namespace nslru {

/// Raised when an operation needs a finite second moment (small-cache
/// approximations, occupancy lower bound) and the law has beta <= 2.
class regime_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

enum class VolumeKind { Pareto, Deterministic };

inline const char* to_string(VolumeKind k) {
  return k == VolumeKind::Pareto ? "pareto" : "deterministic";
}

struct Moments {
  double mean;
  double second_moment;  // +inf for Pareto with beta <= 2
};

/// Law of the per-content expected request volume V.  The model only ever
/// evaluates the MGF phi_V and its derivative at non-positive arguments.
///
/// Pareto MGF values are computed by adaptive quadrature of the
/// inverse-CDF representation E[g(V)] = int_0^1 g(v_min t^{-1/beta}) dt,
/// after a power substitution that removes the algebraic singularity at
/// t=0 for the derivative.  The exponential-integral recurrence serves as
/// an independent oracle in the test suite.
class VolumeDistribution {
public:
  static VolumeDistribution pareto(double v_min, double beta) {
    if (!(v_min > 0.0)) throw std::invalid_argument("pareto requires v_min > 0");
    if (!(beta > 1.0)) throw std::invalid_argument("pareto requires beta > 1");
    VolumeDistribution d;
    d.kind_ = VolumeKind::Pareto;
    d.v_min_ = v_min;
    d.beta_ = beta;
    return d;
  }
  static VolumeDistribution deterministic(double value) {
    if (!(value > 0.0))
      throw std::invalid_argument("deterministic requires value > 0");
    VolumeDistribution d;
    d.kind_ = VolumeKind::Deterministic;
    d.value_ = value;
    return d;
  }

  VolumeKind kind() const { return kind_; }
  double v_min() const { return v_min_; }
  double beta() const { return beta_; }
  double value() const { return value_; }

  Moments moments() const {
    if (kind_ == VolumeKind::Deterministic)
      return {value_, value_ * value_};
    const double mean = beta_ * v_min_ / (beta_ - 1.0);
    const double m2 = beta_ > 2.0
                          ? beta_ * v_min_ * v_min_ / (beta_ - 2.0)
                          : std::numeric_limits<double>::infinity();
    return {mean, m2};
  }

  double mean() const { return moments().mean; }
  bool finite_second_moment() const {
    return kind_ == VolumeKind::Deterministic || beta_ > 2.0;
  }

  /// phi_V(x) = E[e^{xV}], x <= 0.
  double mgf(double x) const {
    check_arg(x);
    if (x == 0.0) return 1.0;
    if (kind_ == VolumeKind::Deterministic) return std::exp(x * value_);
    const double inv = 1.0 / beta_;
    auto g = [&](double t) { return std::exp(x * v_min_ * std::pow(t, -inv)); };
    return integrate(g, grid(), 1e-300, 1e-10).value;
  }

  /// 1 - phi_V(x), computed without cancellation for x near 0.
  double mgf_complement(double x) const {
    check_arg(x);
    if (x == 0.0) return 0.0;
    if (kind_ == VolumeKind::Deterministic) return -std::expm1(x * value_);
    const double inv = 1.0 / beta_;
    auto g = [&](double t) { return -std::expm1(x * v_min_ * std::pow(t, -inv)); };
    return integrate(g, grid(), 1e-300, 1e-10).value;
  }

  /// phi'_V(x) = E[V e^{xV}], x <= 0.
  double mgf_deriv(double x) const {
    check_arg(x);
    const double m = mean();
    if (x == 0.0) return m;
    if (kind_ == VolumeKind::Deterministic)
      return value_ * std::exp(x * value_);
    const double inv = 1.0 / (beta_ - 1.0);
    auto g = [&](double z) { return std::exp(x * v_min_ * std::pow(z, -inv)); };
    return m * integrate(g, grid(), 1e-300, 1e-10).value;
  }

  /// E[V] - phi'_V(x) = E[V (1 - e^{xV})]; the hit-probability integrand.
  double mgf_deriv_complement(double x) const {
    check_arg(x);
    if (x == 0.0) return 0.0;
    if (kind_ == VolumeKind::Deterministic)
      return -value_ * std::expm1(x * value_);
    const double inv = 1.0 / (beta_ - 1.0);
    auto g = [&](double z) { return -std::expm1(x * v_min_ * std::pow(z, -inv)); };
    return mean() * integrate(g, grid(), 1e-300, 1e-10).value;
  }

  /// Inverse-CDF draw.
  double sample(double u) const {
    if (!(u >= 0.0 && u < 1.0))
      throw std::domain_error("sample: u must be in [0,1)");
    if (kind_ == VolumeKind::Deterministic) return value_;
    return v_min_ * std::pow(1.0 - u, -1.0 / beta_);
  }

  double cdf(double v) const {
    if (kind_ == VolumeKind::Deterministic) return v >= value_ ? 1.0 : 0.0;
    if (v <= v_min_) return 0.0;
    return 1.0 - std::pow(v_min_ / v, beta_);
  }

  bool operator==(const VolumeDistribution& o) const {
    return kind_ == o.kind_ && v_min_ == o.v_min_ && beta_ == o.beta_ &&
           value_ == o.value_;
  }

private:
  VolumeDistribution() = default;

  static void check_arg(double x) {
    if (x > 0.0)
      throw std::domain_error("MGF evaluated at positive argument");
    if (!std::isfinite(x) && x != -std::numeric_limits<double>::infinity())
      throw std::domain_error("MGF argument is NaN");
  }

  // Geometric panel edges; the integrand has a boundary layer near 0
  // whose width depends on |x|, and this seeds the adaptive scheme well
  // across the whole range of arguments.
  static std::vector<double> grid() {
    return {0.0, 1e-12, 1e-9, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0};
  }

  VolumeKind kind_ = VolumeKind::Deterministic;
  double v_min_ = 0.0;
  double beta_ = 0.0;
  double value_ = 0.0;
};

}  // namespace nslru
