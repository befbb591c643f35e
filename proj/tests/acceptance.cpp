// Acceptance suite: one pass/fail line per criterion, tolerances pinned
// below.  Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nslru/analytic.hpp"
#include "nslru/experiments.hpp"
#include "nslru/simulator.hpp"
#include "nslru/stationary.hpp"

using namespace nslru;

namespace {

int g_failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, what,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

const VolumeDistribution kPareto31 = VolumeDistribution::pareto(1.0, 3.0);

// 1. Large-cache asymptote: closed value 0.5055 +/- 1e-3, confirmed by a
//    huge-capacity simulation whose 95% CI must contain it.
void criterion1() {
  const auto mix =
      TrafficMix::single(100.0, PopularityProfile::exponential(1.0), kPareto31);
  const double a = asymptote(mix);
  bool ok = std::abs(a - 0.5055) <= 1e-3;

  SimConfig cfg{mix};
  cfg.cache_capacity = 1u << 30;
  cfg.horizon = 200.0;
  cfg.warmup = 20.0;
  cfg.lookback = default_lookback(mix);
  cfg.replications = 20;
  cfg.base_seed = 11;
  const auto out = estimate_hit_probability(cfg);
  ok = ok && out.contains(a);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "asymptote=%.6f sim=%.6f+/-%.6f", a, out.hit_ratio_mean,
                out.ci95_halfwidth);
  report(1, "large-cache asymptote", ok, buf);
}

// 2. Model-vs-simulation agreement across the cache-size sweep: for each
//    profile family (exponential, power law zeta=3) with L in {1, 10},
//    gamma=100/day, C in {1,10,100,1000}, the analytic hit probability
//    falls inside the simulated 95% CI for at least 7 of the 8 points.
void criterion2() {
  bool all_ok = true;
  std::string detail;
  for (int family = 0; family < 2; ++family) {
    int inside = 0, total = 0;
    for (double L : {1.0, 10.0}) {
      const auto prof = family == 0 ? PopularityProfile::exponential(L)
                                    : PopularityProfile::power_law(L, 3.0);
      const auto mix = TrafficMix::single(100.0, prof, kPareto31);
      for (double C : {1.0, 10.0, 100.0, 1000.0}) {
        const double p = hit_probability(mix, solve_eviction_time(mix, C));
        SimConfig cfg{mix};
        cfg.cache_capacity = static_cast<uint64_t>(C);
        cfg.horizon = std::max(200.0, 40.0 * L);
        cfg.warmup = std::max(20.0, 10.0 * L);
        cfg.lookback = default_lookback(mix);
        cfg.replications = 20;
        cfg.base_seed = 20 + static_cast<uint64_t>(C);
        const auto out = estimate_hit_probability(cfg);
        ++total;
        if (out.contains(p)) ++inside;
      }
    }
    const bool ok = inside >= 7;
    all_ok = all_ok && ok;
    detail += (family == 0 ? "exp " : "powerlaw ") + std::to_string(inside) +
              "/" + std::to_string(total) + " in CI  ";
  }
  report(2, "analytic curve within simulation CI", all_ok, detail);
}

// 3. Popularity-shape sensitivity at gamma=1e4/day, C=100, L=10d:
//    p_hit(zeta=4) in [0.0022, 0.0042] and p_hit(zeta=2.2) in
//    [0.0007, 0.0013].
void criterion3() {
  auto solve_p = [&](double zeta) {
    const auto mix = TrafficMix::single(
        1e4, PopularityProfile::power_law(10.0, zeta), kPareto31);
    return hit_probability(mix, solve_eviction_time(mix, 100.0));
  };
  const double p4 = solve_p(4.0);
  const double p22 = solve_p(2.2);
  const bool ok =
      p4 >= 0.0022 && p4 <= 0.0042 && p22 >= 0.0007 && p22 <= 0.0013;
  char buf[120];
  std::snprintf(buf, sizeof buf, "p(zeta=4)=%.6f p(zeta=2.2)=%.6f", p4, p22);
  report(3, "power-law shape readouts at C=100", ok, buf);
}

// 4. Small-cache closed form: within 10% of the full model for
//    C in {100, 300, 1000} at gamma=1e4/day, exponential L=10d, and the
//    C=1000 estimate equals 0.006667 +/- 1e-6.
void criterion4() {
  const auto mix =
      TrafficMix::single(1e4, PopularityProfile::exponential(10.0), kPareto31);
  bool ok = true;
  std::string detail;
  for (double C : {100.0, 300.0, 1000.0}) {
    const double est = small_cache_estimate(mix, C);
    const double p = hit_probability(mix, solve_eviction_time(mix, C));
    const double rel = std::abs(est - p) / p;
    if (rel > 0.10) ok = false;
    char buf[80];
    std::snprintf(buf, sizeof buf, "C=%g rel=%.3f ", C, rel);
    detail += buf;
  }
  const double est1000 = small_cache_estimate(mix, 1000.0);
  if (std::abs(est1000 - 0.006667) > 1e-6) ok = false;
  detail += "est(1000)=" + detail::fmt10(est1000);
  report(4, "small-cache estimate accuracy", ok, detail);
}

// 5. Bound battery: 50 randomized configurations; the occupancy bounds
//    must sandwich the exact occupancy, the hit probability must respect
//    the asymptote and the tail-gap bound, and occupancy(solve(C)) must
//    return C.  Zero violations allowed.
void criterion5() {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n_classes = 1 + static_cast<int>(unif(rng) * 3.0);
    std::vector<ContentClass> classes;
    std::vector<double> w(n_classes);
    double wsum = 0.0;
    for (auto& x : w) wsum += (x = 0.1 + unif(rng));
    for (int k = 0; k < n_classes; ++k) {
      const double L = 0.5 + 30.0 * unif(rng);
      PopularityProfile prof = PopularityProfile::exponential(L);
      switch (static_cast<int>(unif(rng) * 4.0)) {
        case 1: prof = PopularityProfile::power_law(L, 2.1 + 2.0 * unif(rng)); break;
        case 2: prof = PopularityProfile::uniform(L); break;
        case 3: prof = PopularityProfile::triangular(L); break;
        default: break;
      }
      const auto vol =
          unif(rng) < 0.8
              ? VolumeDistribution::pareto(0.5 + unif(rng), 1.5 + 2.0 * unif(rng))
              : VolumeDistribution::deterministic(0.5 + 2.0 * unif(rng));
      classes.push_back({w[k] / wsum, prof, vol});
    }
    // renormalize the last weight to absorb rounding
    double acc = 0.0;
    for (int k = 0; k + 1 < n_classes; ++k) acc += classes[k].weight;
    classes.back().weight = 1.0 - acc;
    const TrafficMix mix(std::pow(10.0, 1.0 + 3.0 * unif(rng)), classes);

    const double S = mix.gamma() * mix.mean_volume();
    const double C = S * std::pow(10.0, -3.0 + 4.0 * unif(rng));
    const auto sol = solve_point(mix, C);
    if (!sol.ok) { ++violations; continue; }
    if (!sol.bounds_ok) ++violations;
    if (std::isfinite(sol.eviction_time_Tc)) {
      const double occ = cache_occupancy(mix, sol.eviction_time_Tc);
      if (std::abs(occ - C) > 1e-5 * C) ++violations;
      const auto b = occupancy_bounds(mix, sol.eviction_time_Tc);
      if (C > b.upper * (1.0 + 1e-9)) ++violations;
      if (b.lower && C < *b.lower * (1.0 - 1e-9)) ++violations;
      if (sol.p_hit > sol.p_hit_asymptote + 1e-9) ++violations;
      const double gap = tail_gap_bound(mix, sol.eviction_time_Tc);
      if (sol.p_hit_asymptote - sol.p_hit > gap + 1e-9) ++violations;
    }
  }
  report(5, "bound battery over 50 random configurations", violations == 0,
         std::to_string(violations) + " violations");
}

// 6. Multi-class mixes: two four-class exponential setups at gamma=100/day
//    (content fractions 40/10/10/40% and 5/45/45/5% over L = 1/10/50/300d);
//    the analytic value must fall inside the simulated 95% CI at each of
//    C in {10, 100, 1000}.
void criterion6() {
  const std::vector<double> L{1.0, 10.0, 50.0, 300.0};
  const std::vector<std::vector<double>> setups{{0.40, 0.10, 0.10, 0.40},
                                                {0.05, 0.45, 0.45, 0.05}};
  bool ok = true;
  std::string detail;
  for (size_t s = 0; s < setups.size(); ++s) {
    std::vector<ContentClass> classes;
    for (size_t k = 0; k < L.size(); ++k)
      classes.push_back(
          {setups[s][k], PopularityProfile::exponential(L[k]), kPareto31});
    const TrafficMix mix(100.0, classes);
    for (double C : {10.0, 100.0, 1000.0}) {
      const double p = hit_probability(mix, solve_eviction_time(mix, C));
      SimConfig cfg{mix};
      cfg.cache_capacity = static_cast<uint64_t>(C);
      // measured window sized so the CI (a few 1e-4) stays above the
      // desk-scale approximation error (~1e-4), keeping the per-point
      // containment test meaningful
      cfg.horizon = 700.0;
      cfg.warmup = 300.0;
      // the default lookback (residual mass 1e-3) biases the tight small-C
      // estimates here; cover all but 1e-5 of the slowest class instead
      cfg.lookback = 0.0;
      for (const auto& c : mix.classes())
        cfg.lookback = std::max(cfg.lookback, c.profile.quantile(1.0 - 1e-5));
      cfg.replications = 12;
      cfg.base_seed = 60 + static_cast<uint64_t>(C);
      const auto out = estimate_hit_probability(cfg);
      const bool in = out.contains(p);
      ok = ok && in;
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s C=%g %s ", s == 0 ? "S1" : "S5", C,
                    in ? "in" : "OUT");
      detail += buf;
    }
  }
  report(6, "multi-class mixes within simulation CI", ok, detail);
}

// 7. Stationary catalogue: the fixed-point hit probability matches IRM
//    simulation CIs for M=1e4 at alpha in {0.8, 1.2}, C in {10,100,1000},
//    and the two-content closed form is reproduced to 1e-9.
void criterion7() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.8, 1.2}) {
    const ZipfCatalog cat(10000, alpha, 100.0);
    for (double C : {10.0, 100.0, 1000.0}) {
      const double p = cat.hit_probability(cat.solve_eviction_time(C));
      const auto out = simulate_irm(cat, static_cast<size_t>(C), 400000,
                                    100000, 15, 70 + static_cast<uint64_t>(C));
      const bool in = out.contains(p);
      ok = ok && in;
      char buf[96];
      std::snprintf(buf, sizeof buf, "a=%.1f C=%g %s ", alpha, C,
                    in ? "in" : "OUT");
      detail += buf;
    }
  }
  const ZipfCatalog two(2, 1.0, 3.0);
  const double x = (std::sqrt(5.0) - 1.0) / 2.0;  // e^{-T_C} at C=1
  const double tc = two.solve_eviction_time(1.0);
  const double p_closed = (2.0 / 3.0) * (1.0 - x * x) + (1.0 / 3.0) * (1.0 - x);
  if (std::abs(tc + std::log(x)) > 1e-9) ok = false;
  if (std::abs(two.hit_probability(tc) - p_closed) > 1e-9) ok = false;
  report(7, "stationary fixed point vs IRM simulation", ok, detail);
}

// 8. Reproducibility and scale invariance: identical seeds give
//    byte-identical CSV output, and scaling (gamma, C) by 10 moves the hit
//    probability by less than 1e-6.
void criterion8() {
  ExperimentSpec spec;
  spec.name = "repro";
  spec.mix =
      TrafficMix::single(100.0, PopularityProfile::exponential(5.0), kPareto31);
  spec.cache_sizes = {10, 100};
  SimSection sim;
  sim.horizon = 100.0;
  sim.warmup = 25.0;
  sim.replications = 5;
  sim.base_seed = 8;
  spec.sim = sim;
  const bool repro = to_csv(run_experiment(spec)) == to_csv(run_experiment(spec));

  bool invariant = true;
  for (double C : {10.0, 1000.0}) {
    const auto base = TrafficMix::single(
        100.0, PopularityProfile::power_law(10.0, 3.0), kPareto31);
    const auto scaled = TrafficMix::single(
        1000.0, PopularityProfile::power_law(10.0, 3.0), kPareto31);
    const double p1 = hit_probability(base, solve_eviction_time(base, C));
    const double p2 =
        hit_probability(scaled, solve_eviction_time(scaled, 10.0 * C));
    if (std::abs(p1 - p2) > 1e-6) invariant = false;
  }
  report(8, "byte-identical CSV and (gamma, C) scale invariance",
         repro && invariant,
         std::string(repro ? "csv stable" : "csv UNSTABLE") +
             (invariant ? ", invariant" : ", NOT invariant"));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("%d/8 criteria passed\n", 8 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
