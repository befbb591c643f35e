#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nslru/numerics.hpp"
#include "nslru/profiles.hpp"
#include "nslru/volumes.hpp"

namespace nslru {

/// One content class: a fraction of the catalogue sharing a popularity
/// profile and a request-volume law.
struct ContentClass {
  double weight;  // fraction of contents, in (0,1]
  PopularityProfile profile;
  VolumeDistribution volumes;
};

/// Full Cox-process traffic description: content arrival rate gamma
/// (contents/day) plus weighted classes.  The single-class model is the
/// K=1 special case.
class TrafficMix {
public:
  TrafficMix(double gamma, std::vector<ContentClass> classes)
      : gamma_(gamma), classes_(std::move(classes)) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (classes_.empty()) throw std::invalid_argument("mix needs >= 1 class");
    double sum = 0.0;
    for (const auto& c : classes_) {
      if (!(c.weight > 0.0))
        throw std::invalid_argument("class weights must be > 0");
      sum += c.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("class weights must sum to 1");
  }

  static TrafficMix single(double gamma, PopularityProfile profile,
                           VolumeDistribution volumes) {
    return TrafficMix(gamma, {{1.0, std::move(profile), std::move(volumes)}});
  }

  double gamma() const { return gamma_; }
  const std::vector<ContentClass>& classes() const { return classes_; }

  /// Mean request volume per content, sum_k w_k E[V_k].
  double mean_volume() const {
    double s = 0.0;
    for (const auto& c : classes_) s += c.weight * c.volumes.mean();
    return s;
  }

  double max_scale() const {
    double m = 0.0;
    for (const auto& c : classes_) m = std::max(m, c.profile.scale_L());
    return m;
  }

  bool finite_second_moments() const {
    for (const auto& c : classes_)
      if (!c.volumes.finite_second_moment()) return false;
    return true;
  }

private:
  double gamma_;
  std::vector<ContentClass> classes_;
};

/// Solved model state for one cache size.
struct ModelSolution {
  double cache_size_C = 0.0;
  double eviction_time_Tc = 0.0;  // days; +inf when the whole catalogue fits
  double p_hit = 0.0;
  double p_hit_asymptote = 0.0;
  double tc_lower_bound = 0.0;            // C/(gamma E[V]), days
  std::optional<double> small_cache_estimate;  // absent when E[V^2] infinite
  bool small_cache_in_regime = false;     // estimate <= 0.1
  double tail_gap_bound = 0.0;
  double quadrature_error_estimate = 0.0;
  double occupancy_upper = 0.0;           // gamma E[V] Tc
  std::optional<double> occupancy_lower;  // absent when E[V^2] infinite
  bool bounds_ok = false;
  bool large_cache_regime = false;
  bool ok = true;
  std::string error;
};

namespace detail {

inline double class_horizon(const PopularityProfile& p) {
  // Tighter than the generic truncation horizon: the occupancy root is
  // located to 1e-6 relative, so the truncated tail must sit well below
  // that.  The residual mass is folded into the error estimate.
  switch (p.kind()) {
    case ProfileKind::PowerLaw: return p.quantile(1.0 - 1e-10);
    case ProfileKind::Exponential: return p.quantile(1.0 - 1e-12);
    default: return p.support_end();
  }
}

inline double class_horizon_tail_mass(const PopularityProfile& p) {
  switch (p.kind()) {
    case ProfileKind::PowerLaw: return 1e-10;
    case ProfileKind::Exponential: return 1e-12;
    default: return 0.0;
  }
}

// Panel edges for integrals of f(window_mass(tau, tc)) against tau:
// window_mass is only piecewise smooth at the profile kinks and at the
// kinks shifted by tc, and the integration range can span many decades,
// so a geometric ladder seeds the adaptive scheme.
inline std::vector<double> outer_breakpoints(const PopularityProfile& p,
                                             double tc, double T) {
  std::vector<double> pts{0.0, T};
  auto add = [&](double x) {
    if (x > 0.0 && x < T) pts.push_back(x);
  };
  if (std::isfinite(tc)) add(tc);
  for (double k : p.kink_points()) {
    add(k);
    if (std::isfinite(tc)) add(k + tc);
  }
  double step = p.scale_L() / 8.0;
  if (std::isfinite(tc) && tc > 0.0) step = std::min(step, tc);
  for (double x = step; x < T; x *= 2.0) add(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

/// Right-hand side of the eviction-time fixed point: the expected number
/// of distinct contents requested within a window of length tc, i.e.
/// gamma * int [1 - sum_k w_k phi_{V_k}(-window_mass_k(tau, tc))] dtau.
/// Strictly increasing in tc, 0 at tc = 0.
inline IntegralResult cache_occupancy_with_error(const TrafficMix& mix,
                                                 double tc) {
  if (tc < 0.0) throw std::domain_error("cache_occupancy: tc < 0");
  if (tc == 0.0) return {0.0, 0.0};
  double total = 0.0;
  double err = 0.0;
  for (const auto& c : mix.classes()) {
    const double T = detail::class_horizon(c.profile) + tc;
    auto integrand = [&](double tau) {
      return c.volumes.mgf_complement(-c.profile.window_mass(tau, tc));
    };
    auto r = integrate(integrand, detail::outer_breakpoints(c.profile, tc, T),
                       1e-9 / mix.gamma(), 1e-7);
    total += c.weight * r.value;
    // Truncated-tail bound: beyond T the integrand is at most
    // E[V] * window_mass <= E[V] * tc * tail density mass.
    err += c.weight *
           (r.error_estimate +
            c.volumes.mean() * tc * detail::class_horizon_tail_mass(c.profile));
  }
  return {mix.gamma() * total, mix.gamma() * err};
}

inline double cache_occupancy(const TrafficMix& mix, double tc) {
  return cache_occupancy_with_error(mix, tc).value;
}

/// Large-cache hit probability limit (depends on the volume laws only).
/// Classes are combined by their share of total request volume.
inline double asymptote(const TrafficMix& mix) {
  const double S = mix.mean_volume();
  double miss = 0.0;
  for (const auto& c : mix.classes())
    miss += c.weight * c.volumes.mgf_complement(-1.0);
  return 1.0 - miss / S;
}

/// Hit probability at a given eviction time (Eq. of the extended Che
/// approximation, class terms combined by request-volume share).
inline IntegralResult hit_probability_with_error(const TrafficMix& mix,
                                                 double tc) {
  if (!(tc > 0.0)) throw std::domain_error("hit_probability: tc must be > 0");
  if (std::isinf(tc)) return {asymptote(mix), 0.0};
  const double S = mix.mean_volume();
  double total = 0.0;
  double err = 0.0;
  for (const auto& c : mix.classes()) {
    const double T = detail::class_horizon(c.profile) + tc;
    auto integrand = [&](double tau) {
      return c.profile.density(tau) *
             c.volumes.mgf_deriv_complement(-c.profile.window_mass(tau, tc));
    };
    auto r = integrate(integrand, detail::outer_breakpoints(c.profile, tc, T),
                       1e-12, 1e-7);
    total += c.weight * r.value;
    err += c.weight * (r.error_estimate +
                       c.volumes.mean() *
                           detail::class_horizon_tail_mass(c.profile));
  }
  return {total / S, err / S};
}

inline double hit_probability(const TrafficMix& mix, double tc) {
  return hit_probability_with_error(mix, tc).value;
}

/// Corollary-1 sandwich on the occupancy at a given eviction time.
/// Returns {upper, lower}; lower is absent when any class has an infinite
/// second moment.
struct OccupancyBounds {
  double upper;
  std::optional<double> lower;
};

inline OccupancyBounds occupancy_bounds(const TrafficMix& mix, double tc) {
  if (tc < 0.0) throw std::domain_error("occupancy_bounds: tc < 0");
  const double upper = mix.gamma() * mix.mean_volume() * tc;
  if (!mix.finite_second_moments() || tc == 0.0)
    return {upper, mix.finite_second_moments()
                       ? std::optional<double>(0.0)
                       : std::nullopt};
  double correction = 0.0;
  for (const auto& c : mix.classes()) {
    const double T = detail::class_horizon(c.profile) + tc;
    auto integrand = [&](double tau) {
      const double w = c.profile.window_mass(tau, tc);
      return w * w;
    };
    auto r = integrate(integrand, detail::outer_breakpoints(c.profile, tc, T),
                       1e-14, 1e-8);
    correction += c.weight * 0.5 * c.volumes.moments().second_moment * r.value;
  }
  return {upper, upper - mix.gamma() * correction};
}

/// Corollary-3 bound on asymptote - p_hit: request-volume-weighted
/// profile tail mass beyond tc.
inline double tail_gap_bound(const TrafficMix& mix, double tc) {
  if (!(tc > 0.0)) throw std::domain_error("tail_gap_bound: tc must be > 0");
  if (std::isinf(tc)) return 0.0;
  const double S = mix.mean_volume();
  double g = 0.0;
  for (const auto& c : mix.classes())
    g += c.weight * c.volumes.mean() * c.profile.tail(tc);
  return g / S;
}

/// Small-cache closed form (quadratic MGF expansion + C ~ gamma E[V] Tc).
/// Requires finite second moments; values above 0.1 are outside the
/// regime the expansion is valid in.
inline double small_cache_estimate(const TrafficMix& mix, double C) {
  if (!(C > 0.0)) throw std::domain_error("small_cache_estimate: C <= 0");
  if (!mix.finite_second_moments())
    throw regime_error(
        "small-cache estimate needs finite E[V^2] (beta > 2) in every class");
  const double S = mix.mean_volume();
  double num = 0.0;
  for (const auto& c : mix.classes())
    num += c.weight * c.volumes.moments().second_moment *
           c.profile.sq_integral();
  return (C / mix.gamma()) * num / (S * S);
}

struct EvictionTime {
  double tc;
  double quadrature_error;
  bool large_cache_regime;
};

/// Solves the occupancy fixed point for Tc.  The bracket starts at the
/// Corollary-1 lower end C/(gamma E[V]) and doubles upward; occupancy is
/// strictly increasing so the root is unique.
inline EvictionTime solve_eviction_time_full(const TrafficMix& mix, double C) {
  if (!(C > 0.0)) throw std::domain_error("solve_eviction_time: C <= 0");
  const double S = mix.mean_volume();
  const double f_tol = std::max(1e-6 * C, 1e-9);
  double lo = C / (mix.gamma() * S);
  double hi = lo;
  double quad_err = 0.0;
  auto f = [&](double tc) {
    auto r = cache_occupancy_with_error(mix, tc);
    quad_err = std::max(quad_err, r.error_estimate);
    return r.value - C;
  };
  double fhi = f(hi);
  const double cap = 1e9 * std::max(mix.max_scale(), lo);
  while (fhi < 0.0) {
    hi *= 2.0;
    if (hi > cap)
      return {std::numeric_limits<double>::infinity(), quad_err, true};
    fhi = f(hi);
  }
  double tc = hi;
  if (fhi > f_tol) tc = find_root(f, lo, hi, f_tol);
  // Beyond ~50 content lifetimes the profile tails pin p_hit to its
  // asymptote; flag so callers can report the regime.
  const bool large = tc > 50.0 * mix.max_scale() ||
                     tail_gap_bound(mix, tc) < 1e-9;
  return {tc, quad_err, large};
}

inline double solve_eviction_time(const TrafficMix& mix, double C) {
  return solve_eviction_time_full(mix, C).tc;
}

/// Full per-cache-size solution with bounds and regime diagnostics.
inline ModelSolution solve_point(const TrafficMix& mix, double C) {
  ModelSolution s;
  s.cache_size_C = C;
  try {
    const double S = mix.mean_volume();
    auto et = solve_eviction_time_full(mix, C);
    s.eviction_time_Tc = et.tc;
    s.large_cache_regime = et.large_cache_regime;
    s.tc_lower_bound = C / (mix.gamma() * S);
    s.p_hit_asymptote = asymptote(mix);
    auto hp = hit_probability_with_error(mix, et.tc);
    s.p_hit = hp.value;
    s.tail_gap_bound = tail_gap_bound(mix, et.tc);
    s.quadrature_error_estimate = et.quadrature_error + hp.error_estimate;
    if (mix.finite_second_moments()) {
      const double est = small_cache_estimate(mix, C);
      s.small_cache_estimate = est;
      s.small_cache_in_regime = est <= 0.1;
    }
    if (std::isfinite(et.tc)) {
      auto b = occupancy_bounds(mix, et.tc);
      s.occupancy_upper = b.upper;
      s.occupancy_lower = b.lower;
      const double slack = std::max(1e-6 * C, 1e-9) + s.quadrature_error_estimate;
      s.bounds_ok = C <= b.upper + slack &&
                    (!b.lower || C >= *b.lower - slack);
    } else {
      s.occupancy_upper = std::numeric_limits<double>::infinity();
      s.bounds_ok = true;
    }
    if (s.p_hit > s.p_hit_asymptote + 1e-9 ||
        s.p_hit_asymptote - s.p_hit > s.tail_gap_bound + 1e-9)
      s.bounds_ok = false;
  } catch (const std::exception& e) {
    s.ok = false;
    s.error = e.what();
  }
  return s;
}

/// Sweep over ascending cache sizes; per-point failures are recorded in
/// the row and the sweep continues.
inline std::vector<ModelSolution> solve_curve(const TrafficMix& mix,
                                              const std::vector<double>& sizes) {
  for (size_t i = 0; i + 1 < sizes.size(); ++i)
    if (!(sizes[i] < sizes[i + 1]))
      throw std::invalid_argument("cache sizes must be strictly ascending");
  std::vector<ModelSolution> out;
  out.reserve(sizes.size());
  for (double C : sizes) out.push_back(solve_point(mix, C));
  return out;
}

}  // namespace nslru
