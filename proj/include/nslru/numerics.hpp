#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace nslru {

/// Raised when an adaptive scheme cannot reach the requested tolerance.
/// Carries the best estimate obtained so far.
class numeric_error : public std::runtime_error {
public:
  numeric_error(const std::string& what, double partial)
      : std::runtime_error(what), partial_estimate(partial) {}
  double partial_estimate;
};

namespace detail {

// 15-point Gauss-Kronrod rule on [-1,1]; the embedded 7-point Gauss rule
// supplies the error estimate.
inline constexpr double kronrod_nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};

inline constexpr double kronrod_weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};

inline constexpr double gauss_weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelResult {
  double integral;
  double error;
};

template <typename F>
PanelResult gk15(const F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kron = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double y = f(mid + half * kronrod_nodes[i]);
    kron += kronrod_weights[i] * y;
    if (i % 2 == 1) gauss += gauss_weights[i / 2] * y;
  }
  kron *= half;
  gauss *= half;
  const double diff = std::abs(kron - gauss);
  // Standard QUADPACK-style sharpened error estimate.
  const double err = diff > 0.0 ? std::min(diff, 200.0 * diff * std::sqrt(diff)) : 0.0;
  return {kron, err};
}

struct Panel {
  double a, b, integral, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f over the union of
/// [pts[0],pts[1]], [pts[1],pts[2]], ... with the given breakpoints kept
/// as hard panel boundaries.  Stops when the accumulated error estimate
/// satisfies err <= max(abs_tol, rel_tol*|I|).
template <typename F>
IntegralResult integrate(const F& f, const std::vector<double>& breakpoints,
                         double abs_tol = 1e-12, double rel_tol = 1e-10,
                         int max_panels = 4000) {
  std::priority_queue<detail::Panel> heap;
  double total = 0.0;
  double err = 0.0;
  int panels = 0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double a = breakpoints[i], b = breakpoints[i + 1];
    if (!(b > a)) continue;
    auto r = detail::gk15(f, a, b);
    heap.push({a, b, r.integral, r.error});
    total += r.integral;
    err += r.error;
    ++panels;
  }
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && !heap.empty()) {
    if (panels >= max_panels)
      throw numeric_error("quadrature failed to converge", total);
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    err += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.integral, left.error});
    heap.push({mid, worst.b, right.integral, right.error});
    ++panels;
  }
  return {total, err};
}

template <typename F>
IntegralResult integrate(const F& f, double a, double b,
                         double abs_tol = 1e-12, double rel_tol = 1e-10,
                         int max_panels = 4000) {
  return integrate(f, std::vector<double>{a, b}, abs_tol, rel_tol, max_panels);
}

/// Root of a continuous monotone function on a bracket [lo, hi] with
/// f(lo) <= 0 <= f(hi).  Bisection with secant acceleration once the
/// bracket is narrow; terminates on |f| <= f_tol or bracket width <= x_tol.
template <typename F>
double find_root(const F& f, double lo, double hi, double f_tol,
                 double x_tol = 0.0, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw std::invalid_argument("find_root: bracket does not contain a root");
  if (std::abs(flo) <= f_tol) return lo;
  if (std::abs(fhi) <= f_tol) return hi;
  double x = lo, fx = flo;
  for (int it = 0; it < max_iter; ++it) {
    // Secant candidate; fall back to bisection when it leaves the bracket
    // or fails to shrink it meaningfully.
    double xs = hi - fhi * (hi - lo) / (fhi - flo);
    double mid = 0.5 * (lo + hi);
    x = (xs > lo && xs < hi && it % 2 == 0) ? xs : mid;
    fx = f(x);
    if (std::abs(fx) <= f_tol) return x;
    if (fx < 0.0) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= x_tol + 1e-15 * std::abs(hi)) break;
  }
  return 0.5 * (lo + hi);
}

/// splitmix64: used to derive independent per-replication seeds from
/// (base_seed, replication_index).
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Two-sided 97.5% Student-t quantile for the given degrees of freedom,
/// for 95% confidence intervals over simulation replications.
inline double student_t_975(int df) {
  static constexpr double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw std::invalid_argument("student_t_975: df < 1");
  if (df <= 30) return table[df - 1];
  if (df <= 40) return 2.021;
  if (df <= 60) return 2.000;
  if (df <= 120) return 1.980;
  return 1.960;
}

}  // namespace nslru
