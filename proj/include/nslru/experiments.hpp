#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nslru/config.hpp"
#include "nslru/simulator.hpp"
#include "nslru/stationary.hpp"

namespace nslru {

/// One table row of an experiment run (one cache size).
struct ResultRow {
  double cache_size = 0.0;
  double eviction_time_tc = 0.0;
  double p_hit_model = 0.0;
  std::optional<double> p_hit_asymptote;
  std::optional<double> small_cache_estimate;  // only when in regime
  std::optional<double> p_hit_sim_mean;
  std::optional<double> sim_ci95_lo;
  std::optional<double> sim_ci95_hi;
  std::optional<double> rel_err_model_vs_sim;
  bool bounds_ok = false;
  std::string error;  // nonempty when the point failed
};

struct RunOptions {
  bool run_model = true;
  bool run_sim = true;
  std::optional<uint64_t> seed_override;
  std::optional<uint32_t> reps_override;
  unsigned threads = 1;
};

namespace detail {

inline std::string fmt10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string opt10(const std::optional<double>& v) {
  return v ? fmt10(*v) : std::string();
}

}  // namespace detail

/// Resolved simulation parameters for one cache size.
inline SimConfig resolve_sim(const TrafficMix& mix, const SimSection& section,
                             double cache_size, double analytic_tc,
                             const RunOptions& opt) {
  SimConfig cfg{mix};
  cfg.cache_capacity = static_cast<uint64_t>(std::llround(cache_size));
  cfg.horizon = section.horizon;
  cfg.lookback = section.lookback.value_or(default_lookback(mix));
  double warmup = section.warmup.value_or(
      std::max(5.0 * mix.max_scale(),
               std::isfinite(analytic_tc) ? 3.0 * analytic_tc : 0.0));
  // A derived warmup must still leave a measurement window.
  if (!section.warmup && warmup >= section.horizon)
    warmup = 0.5 * section.horizon;
  cfg.warmup = warmup;
  cfg.replications = opt.reps_override.value_or(section.replications);
  cfg.base_seed = opt.seed_override.value_or(section.base_seed);
  cfg.threads = opt.threads;
  return cfg;
}

inline std::vector<ResultRow> run_experiment(const ExperimentSpec& spec,
                                             const RunOptions& opt = {}) {
  std::vector<ResultRow> rows;
  if (spec.stationary) {
    const auto& st = *spec.stationary;
    ZipfCatalog cat(st.catalog_size_M, st.alpha, st.total_rate);
    for (double C : spec.cache_sizes) {
      ResultRow row;
      row.cache_size = C;
      try {
        const double tc = cat.solve_eviction_time(C);
        row.eviction_time_tc = tc;
        row.p_hit_model = cat.hit_probability(tc);
        row.bounds_ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(row);
    }
    return rows;
  }

  const TrafficMix& mix = *spec.mix;
  for (double C : spec.cache_sizes) {
    ResultRow row;
    row.cache_size = C;
    ModelSolution sol = solve_point(mix, C);
    if (!sol.ok) {
      row.error = sol.error;
      rows.push_back(row);
      continue;
    }
    if (opt.run_model) {
      row.eviction_time_tc = sol.eviction_time_Tc;
      row.p_hit_model = sol.p_hit;
      row.p_hit_asymptote = sol.p_hit_asymptote;
      if (sol.small_cache_estimate && sol.small_cache_in_regime)
        row.small_cache_estimate = sol.small_cache_estimate;
      row.bounds_ok = sol.bounds_ok;
    }
    if (opt.run_sim && spec.sim) {
      try {
        SimConfig sim =
            resolve_sim(mix, *spec.sim, C, sol.eviction_time_Tc, opt);
        SimOutcome out = estimate_hit_probability(sim);
        row.p_hit_sim_mean = out.hit_ratio_mean;
        row.sim_ci95_lo = out.hit_ratio_mean - out.ci95_halfwidth;
        row.sim_ci95_hi = out.hit_ratio_mean + out.ci95_halfwidth;
        if (opt.run_model && out.hit_ratio_mean > 0.0)
          row.rel_err_model_vs_sim =
              (row.p_hit_model - out.hit_ratio_mean) / out.hit_ratio_mean;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
    rows.push_back(row);
  }
  return rows;
}

/// CSV emission: comma-separated, header row, '.' decimal, 10 significant
/// digits, empty fields for absent values.  Byte-stable for identical
/// inputs.
inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << "C,T_C,p_hit_model,p_hit_asymptote,small_cache_estimate,"
        "p_hit_sim_mean,sim_ci95_lo,sim_ci95_hi,rel_err_model_vs_sim,"
        "bounds_ok,error\n";
  for (const auto& r : rows) {
    os << detail::fmt10(r.cache_size) << ',';
    if (r.error.empty()) {
      os << detail::fmt10(r.eviction_time_tc) << ','
         << detail::fmt10(r.p_hit_model) << ','
         << detail::opt10(r.p_hit_asymptote) << ','
         << detail::opt10(r.small_cache_estimate) << ','
         << detail::opt10(r.p_hit_sim_mean) << ','
         << detail::opt10(r.sim_ci95_lo) << ','
         << detail::opt10(r.sim_ci95_hi) << ','
         << detail::opt10(r.rel_err_model_vs_sim) << ','
         << (r.bounds_ok ? "true" : "false") << ',';
    } else {
      os << ",,,,,,,," << ',' << r.error;
    }
    os << '\n';
  }
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(rows, os);
  return os.str();
}

namespace detail {

inline ExperimentSpec single_mix_experiment(std::string name, double gamma,
                                            PopularityProfile profile,
                                            VolumeDistribution volumes,
                                            std::vector<double> sizes) {
  ExperimentSpec s;
  s.name = std::move(name);
  s.mix = TrafficMix::single(gamma, std::move(profile), std::move(volumes));
  s.cache_sizes = std::move(sizes);
  return s;
}

inline SimSection desk_sim(double horizon, double warmup) {
  SimSection sim;
  sim.horizon = horizon;
  sim.warmup = warmup;
  sim.replications = 20;
  sim.base_seed = 1;
  return sim;
}

inline std::vector<double> full_sizes() { return {1e2, 1e3, 1e4, 1e5, 1e6}; }
inline std::vector<double> desk_sizes() { return {1, 10, 100, 1000, 10000}; }

}  // namespace detail

/// The shipped experiment catalogue: the paper-scale parameterizations
/// (gamma = 10k contents/day) plus desk-scale variants with gamma = 100
/// per day and cache sizes scaled down 100x, which leave T_C and p_hit
/// unchanged by the joint (gamma, C) scale invariance of the model.
inline std::vector<ExperimentSpec> builtin_experiments() {
  using detail::single_mix_experiment;
  std::vector<ExperimentSpec> out;
  const auto pareto31 = VolumeDistribution::pareto(1.0, 3.0);
  const std::vector<double> lifetimes{1.0, 10.0, 50.0, 300.0};

  auto add_profile_family = [&](const std::string& fig, bool powerlaw) {
    for (double L : lifetimes) {
      auto prof = powerlaw ? PopularityProfile::power_law(L, 3.0)
                           : PopularityProfile::exponential(L);
      const std::string tag = "-L" + std::to_string(static_cast<int>(L));
      out.push_back(single_mix_experiment(fig + tag, 1e4, prof, pareto31,
                                          detail::full_sizes()));
      auto desk = single_mix_experiment(fig + tag + "-desk", 100.0, prof,
                                        pareto31, detail::desk_sizes());
      desk.sim = detail::desk_sim(400.0, 10.0 * L);
      if (*desk.sim->warmup >= 200.0) desk.sim->horizon = 4.0 * *desk.sim->warmup;
      out.push_back(desk);
    }
  };
  add_profile_family("fig1", false);
  add_profile_family("fig2", true);

  // fig3: mean volume sweep at beta=3 via v_min = E[V](beta-1)/beta.
  for (double mean_v : {1.5, 3.0, 6.0, 12.0}) {
    const auto vol = VolumeDistribution::pareto(mean_v * 2.0 / 3.0, 3.0);
    const auto prof = PopularityProfile::exponential(10.0);
    const std::string tag = "fig3-EV" + detail::fmt10(mean_v);
    out.push_back(
        single_mix_experiment(tag, 1e4, prof, vol, detail::full_sizes()));
    auto desk = single_mix_experiment(tag + "-desk", 100.0, prof, vol,
                                      detail::desk_sizes());
    desk.sim = detail::desk_sim(400.0, 100.0);
    out.push_back(desk);
  }

  // fig4: volume-shape sweep, E[V]=1.5 held fixed via v_min=E[V](beta-1)/beta.
  for (double beta : {1.5, 2.0, 2.5, 3.0}) {
    const auto vol = VolumeDistribution::pareto(1.5 * (beta - 1.0) / beta, beta);
    const auto prof = PopularityProfile::exponential(10.0);
    const std::string tag = "fig4-beta" + detail::fmt10(beta);
    out.push_back(
        single_mix_experiment(tag, 1e4, prof, vol, detail::full_sizes()));
    auto desk = single_mix_experiment(tag + "-desk", 100.0, prof, vol,
                                      detail::desk_sizes());
    desk.sim = detail::desk_sim(400.0, 100.0);
    out.push_back(desk);
  }

  // fig5: popularity-shape sweep at fixed scale L=10d.
  for (double zeta : {2.2, 3.0, 4.0}) {
    const auto prof = PopularityProfile::power_law(10.0, zeta);
    const std::string tag = "fig5-zeta" + detail::fmt10(zeta);
    out.push_back(
        single_mix_experiment(tag, 1e4, prof, pareto31, detail::full_sizes()));
    auto desk = single_mix_experiment(tag + "-desk", 100.0, prof, pareto31,
                                      detail::desk_sizes());
    desk.sim = detail::desk_sim(400.0, 100.0);
    out.push_back(desk);
  }

  // fig6: four exponential classes (L = 1/10/50/300 days), content
  // fractions per setups S1..S5.
  const std::vector<std::vector<double>> setups{{0.40, 0.10, 0.10, 0.40},
                                                {0.30, 0.20, 0.20, 0.30},
                                                {0.20, 0.30, 0.30, 0.20},
                                                {0.10, 0.40, 0.40, 0.10},
                                                {0.05, 0.45, 0.45, 0.05}};
  for (size_t s = 0; s < setups.size(); ++s) {
    std::vector<ContentClass> classes;
    for (size_t k = 0; k < lifetimes.size(); ++k)
      classes.push_back({setups[s][k],
                         PopularityProfile::exponential(lifetimes[k]),
                         pareto31});
    const std::string tag = "fig6-S" + std::to_string(s + 1);
    ExperimentSpec full;
    full.name = tag;
    full.mix = TrafficMix(1e4, classes);
    full.cache_sizes = detail::full_sizes();
    out.push_back(full);
    ExperimentSpec desk;
    desk.name = tag + "-desk";
    desk.mix = TrafficMix(100.0, classes);
    desk.cache_sizes = detail::desk_sizes();
    desk.sim = detail::desk_sim(3000.0, 1000.0);
    out.push_back(desk);
  }

  // fig7: stationary Zipf appendix.
  for (double alpha : {0.8, 1.0, 1.2}) {
    ExperimentSpec full;
    full.name = "fig7-alpha" + detail::fmt10(alpha);
    full.stationary = StationarySpec{10000000, alpha, 1e4};
    full.cache_sizes = detail::full_sizes();
    out.push_back(full);
    ExperimentSpec desk;
    desk.name = full.name + "-desk";
    desk.stationary = StationarySpec{10000, alpha, 100.0};
    desk.cache_sizes = {10, 100, 1000};
    out.push_back(desk);
  }
  return out;
}

}  // namespace nslru
