#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nslru {

enum class ProfileKind { Exponential, PowerLaw, Uniform, Triangular };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Exponential: return "exponential";
    case ProfileKind::PowerLaw: return "powerlaw";
    case ProfileKind::Uniform: return "uniform";
    case ProfileKind::Triangular: return "triangular";
  }
  return "?";
}

/// Normalized temporal popularity shape lambda(t) of a content, together
/// with its closed-form primitive, quantile and squared integral.
///
/// Units: t in days, density in 1/day.  L is the profile scale in days;
/// for the exponential, uniform and triangular shapes it equals the mean
/// lifetime, for the power law the mean is L/(zeta-2) (finite for zeta>2).
class PopularityProfile {
public:
  static PopularityProfile exponential(double L) {
    return PopularityProfile(ProfileKind::Exponential, L, 0.0);
  }
  static PopularityProfile power_law(double L, double zeta) {
    if (!(zeta > 1.0))
      throw std::invalid_argument("power-law profile requires zeta > 1");
    return PopularityProfile(ProfileKind::PowerLaw, L, zeta);
  }
  static PopularityProfile uniform(double L) {
    return PopularityProfile(ProfileKind::Uniform, L, 0.0);
  }
  static PopularityProfile triangular(double L) {
    return PopularityProfile(ProfileKind::Triangular, L, 0.0);
  }
  static PopularityProfile make(ProfileKind kind, double L, double zeta = 0.0) {
    switch (kind) {
      case ProfileKind::Exponential: return exponential(L);
      case ProfileKind::PowerLaw: return power_law(L, zeta);
      case ProfileKind::Uniform: return uniform(L);
      case ProfileKind::Triangular: return triangular(L);
    }
    throw std::invalid_argument("unknown profile kind");
  }

  ProfileKind kind() const { return kind_; }
  double scale_L() const { return L_; }
  double zeta() const { return zeta_; }

  /// Mean content lifetime, integral of t*lambda(t).  Infinite for the
  /// power law with zeta <= 2.
  double mean_lifetime() const {
    switch (kind_) {
      case ProfileKind::Exponential:
      case ProfileKind::Uniform:
      case ProfileKind::Triangular:
        return L_;
      case ProfileKind::PowerLaw:
        return zeta_ > 2.0 ? L_ / (zeta_ - 2.0)
                           : std::numeric_limits<double>::infinity();
    }
    return L_;
  }

  double density(double t) const {
    if (t < 0.0) return 0.0;
    switch (kind_) {
      case ProfileKind::Exponential:
        return std::exp(-t / L_) / L_;
      case ProfileKind::PowerLaw:
        return (zeta_ - 1.0) / L_ * std::pow(t / L_ + 1.0, -zeta_);
      case ProfileKind::Uniform:
        return t <= 2.0 * L_ ? 0.5 / L_ : 0.0;
      case ProfileKind::Triangular:
        if (t <= L_) return t / (L_ * L_);
        if (t <= 2.0 * L_) return (2.0 * L_ - t) / (L_ * L_);
        return 0.0;
    }
    return 0.0;
  }

  double cdf(double t) const {
    if (t <= 0.0) return 0.0;
    switch (kind_) {
      case ProfileKind::Exponential:
        return -std::expm1(-t / L_);
      case ProfileKind::PowerLaw:
        return 1.0 - std::pow(t / L_ + 1.0, 1.0 - zeta_);
      case ProfileKind::Uniform:
        return t >= 2.0 * L_ ? 1.0 : 0.5 * t / L_;
      case ProfileKind::Triangular:
        if (t >= 2.0 * L_) return 1.0;
        if (t <= L_) return 0.5 * (t / L_) * (t / L_);
        {
          const double r = (2.0 * L_ - t) / L_;
          return 1.0 - 0.5 * r * r;
        }
    }
    return 0.0;
  }

  /// Complementary cdf; computed directly to stay accurate in the tail.
  double tail(double t) const {
    if (t <= 0.0) return 1.0;
    switch (kind_) {
      case ProfileKind::Exponential:
        return std::exp(-t / L_);
      case ProfileKind::PowerLaw:
        return std::pow(t / L_ + 1.0, 1.0 - zeta_);
      case ProfileKind::Uniform:
      case ProfileKind::Triangular:
        return 1.0 - cdf(t);
    }
    return 0.0;
  }

  double quantile(double u) const {
    if (!(u >= 0.0 && u < 1.0))
      throw std::domain_error("quantile: u must be in [0,1)");
    switch (kind_) {
      case ProfileKind::Exponential:
        return -L_ * std::log1p(-u);
      case ProfileKind::PowerLaw:
        return L_ * (std::pow(1.0 - u, -1.0 / (zeta_ - 1.0)) - 1.0);
      case ProfileKind::Uniform:
        return 2.0 * L_ * u;
      case ProfileKind::Triangular:
        if (u <= 0.5) return L_ * std::sqrt(2.0 * u);
        return 2.0 * L_ - L_ * std::sqrt(2.0 * (1.0 - u));
    }
    return 0.0;
  }

  /// Integral of lambda^2 over [0, inf); the key small-cache parameter.
  double sq_integral() const {
    switch (kind_) {
      case ProfileKind::Exponential:
        return 0.5 / L_;
      case ProfileKind::PowerLaw:
        return (zeta_ - 1.0) * (zeta_ - 1.0) / (L_ * (2.0 * zeta_ - 1.0));
      case ProfileKind::Uniform:
        return 0.5 / L_;
      case ProfileKind::Triangular:
        return 2.0 / (3.0 * L_);
    }
    return 0.0;
  }

  /// Mass of lambda on [tau - width, tau]; the inner integral of the
  /// hit-probability and occupancy formulas.
  double window_mass(double tau, double width) const {
    if (width < 0.0) throw std::domain_error("window_mass: width < 0");
    return cdf(tau) - cdf(tau - width);
  }

  /// Finite support edge (2L for uniform/triangular), +inf otherwise.
  double support_end() const {
    if (kind_ == ProfileKind::Uniform || kind_ == ProfileKind::Triangular)
      return 2.0 * L_;
    return std::numeric_limits<double>::infinity();
  }

  /// Horizon beyond which the remaining mass is negligible for improper
  /// outer integrals.  The heavy power-law tail gets a looser quantile;
  /// the residual mass is reported separately by truncation_tail_mass().
  double truncation_horizon() const {
    switch (kind_) {
      case ProfileKind::Exponential:
        return quantile(1.0 - 1e-9);
      case ProfileKind::PowerLaw:
        return quantile(1.0 - 1e-6);
      case ProfileKind::Uniform:
      case ProfileKind::Triangular:
        return 2.0 * L_;
    }
    return 0.0;
  }

  double truncation_tail_mass() const {
    return kind_ == ProfileKind::PowerLaw ? 1e-6
         : kind_ == ProfileKind::Exponential ? 1e-9 : 0.0;
  }

  /// Points where the density is only piecewise smooth; quadrature panels
  /// must not straddle them.
  std::vector<double> kink_points() const {
    switch (kind_) {
      case ProfileKind::Exponential:
      case ProfileKind::PowerLaw:
        return {0.0};
      case ProfileKind::Uniform:
        return {0.0, 2.0 * L_};
      case ProfileKind::Triangular:
        return {0.0, L_, 2.0 * L_};
    }
    return {};
  }

  bool operator==(const PopularityProfile& o) const {
    return kind_ == o.kind_ && L_ == o.L_ && zeta_ == o.zeta_;
  }

private:
  PopularityProfile(ProfileKind kind, double L, double zeta)
      : kind_(kind), L_(L), zeta_(zeta) {
    if (!(L > 0.0)) throw std::invalid_argument("profile requires L > 0");
  }

  ProfileKind kind_;
  double L_;
  double zeta_;
};

}  // namespace nslru
