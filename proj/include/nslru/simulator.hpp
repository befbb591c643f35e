#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <list>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <vector>

#include "nslru/analytic.hpp"
#include "nslru/numerics.hpp"
#include "nslru/stationary.hpp"

namespace nslru {

struct Request {
  double time;  // days
  uint64_t content_id;
  uint32_t class_index;
};

/// Exact LRU cache over integer content ids, counted in distinct
/// contents.  access() returns true on a hit; on a miss the content is
/// inserted, evicting the least recently used entry when at capacity.
class LruCache {
public:
  explicit LruCache(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("capacity must be >= 1");
    index_.reserve(std::min<size_t>(capacity + 1, 1 << 22));
  }

  bool access(uint64_t id) {
    auto it = index_.find(id);
    if (it != index_.end()) {
      recency_.splice(recency_.begin(), recency_, it->second);
      return true;
    }
    if (index_.size() >= capacity_) {
      index_.erase(recency_.back());
      recency_.pop_back();
    }
    recency_.push_front(id);
    index_[id] = recency_.begin();
    return false;
  }

  size_t size() const { return index_.size(); }

private:
  size_t capacity_;
  std::list<uint64_t> recency_;
  std::unordered_map<uint64_t, std::list<uint64_t>::iterator> index_;
};

inline std::pair<uint64_t, uint64_t> run_lru(const std::vector<Request>& stream,
                                             size_t capacity) {
  LruCache cache(capacity);
  uint64_t hits = 0, misses = 0;
  for (const auto& r : stream) (cache.access(r.content_id) ? hits : misses)++;
  return {hits, misses};
}

struct WorkloadStats {
  uint64_t contents_generated = 0;
  uint64_t requests_generated = 0;
};

/// Generates the Cox-process workload on [0, horizon]: content births are
/// Poisson(gamma) on [-lookback, horizon]; each content draws a class,
/// a volume V, a request count N ~ Poisson(V) and N i.i.d. request times
/// from its class profile (equivalent to the inhomogeneous Poisson
/// process with intensity V*lambda(t - birth) since the profile has unit
/// mass).  Requests outside [0, horizon] are discarded.
inline std::vector<Request> generate_workload(const TrafficMix& mix,
                                              double horizon, double lookback,
                                              std::mt19937_64& rng,
                                              WorkloadStats* stats = nullptr) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (lookback < 0.0) throw std::invalid_argument("lookback must be >= 0");
  const double span = horizon + lookback;
  std::poisson_distribution<uint64_t> n_contents(mix.gamma() * span);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> cum_weights;
  {
    double acc = 0.0;
    for (const auto& c : mix.classes()) cum_weights.push_back(acc += c.weight);
    cum_weights.back() = 1.0;
  }

  const uint64_t n = n_contents(rng);
  std::vector<Request> stream;
  stream.reserve(static_cast<size_t>(mix.gamma() * horizon *
                                     mix.mean_volume() * 1.2) + 16);
  uint64_t requests = 0;
  for (uint64_t m = 0; m < n; ++m) {
    const double birth = -lookback + span * unif(rng);
    const uint32_t k = static_cast<uint32_t>(
        std::lower_bound(cum_weights.begin(), cum_weights.end(), unif(rng)) -
        cum_weights.begin());
    const auto& cls = mix.classes()[k];
    const double volume = cls.volumes.sample(unif(rng));
    std::poisson_distribution<uint64_t> n_requests(volume);
    const uint64_t reqs = n_requests(rng);
    for (uint64_t i = 0; i < reqs; ++i) {
      const double t = birth + cls.profile.quantile(unif(rng));
      ++requests;
      if (t >= 0.0 && t <= horizon) stream.push_back({t, m, k});
    }
  }
  std::sort(stream.begin(), stream.end(), [](const Request& a, const Request& b) {
    return a.time != b.time ? a.time < b.time : a.content_id < b.content_id;
  });
  if (stats) {
    stats->contents_generated = n;
    stats->requests_generated = requests;
  }
  return stream;
}

/// Lookback covering all but 1e-3 of every class profile's request mass;
/// heavy power-law tails are capped at 100 L.
inline double default_lookback(const TrafficMix& mix) {
  double lb = 0.0;
  for (const auto& c : mix.classes()) {
    double q = c.profile.quantile(0.999);
    if (c.profile.kind() == ProfileKind::PowerLaw)
      q = std::min(q, 100.0 * c.profile.scale_L());
    lb = std::max(lb, q);
  }
  return lb;
}

/// Residual request mass injected before the chosen lookback window (the
/// bias bound reported alongside capped-lookback runs).
inline double lookback_residual_mass(const TrafficMix& mix, double lookback) {
  double worst = 0.0;
  for (const auto& c : mix.classes())
    worst = std::max(worst, c.profile.tail(lookback));
  return worst;
}

struct SimConfig {
  TrafficMix mix;
  uint64_t cache_capacity = 1;
  double horizon = 0.0;   // days
  double warmup = 0.0;    // days, < horizon; requests before it are not measured
  double lookback = 0.0;  // days
  uint32_t replications = 20;
  uint64_t base_seed = 0;
  unsigned threads = 1;

  void validate() const {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
    if (!(warmup >= 0.0 && warmup < horizon))
      throw std::invalid_argument("warmup must be in [0, horizon)");
    if (lookback < 0.0) throw std::invalid_argument("lookback must be >= 0");
    if (replications == 0)
      throw std::invalid_argument("replications must be >= 1");
    if (cache_capacity == 0)
      throw std::invalid_argument("cache capacity must be >= 1");
  }
};

struct Replication {
  uint64_t hits = 0;
  uint64_t misses = 0;
  double ratio() const {
    return static_cast<double>(hits) / static_cast<double>(hits + misses);
  }
};

struct SimOutcome {
  uint64_t hits = 0;
  uint64_t misses = 0;
  double hit_ratio_mean = 0.0;
  double ci95_halfwidth = 0.0;
  std::vector<Replication> per_replication;
  uint64_t contents_generated = 0;
  uint64_t requests_generated = 0;

  bool contains(double p) const {
    return p >= hit_ratio_mean - ci95_halfwidth &&
           p <= hit_ratio_mean + ci95_halfwidth;
  }
};

inline std::mt19937_64 replication_rng(uint64_t base_seed, uint32_t rep) {
  // Hash the base seed before mixing in the replication index: xor-ing or
  // adding rep directly would make nearby base seeds share replication
  // streams (e.g. seeds 42 and 43 permuting the same set of streams).
  return std::mt19937_64(splitmix64(splitmix64(base_seed) + rep));
}

/// Monte Carlo estimate of the hit probability: independent replications
/// (stream r seeded from (base_seed, r)), LRU run over the full stream,
/// hits/misses counted for requests at t >= warmup only.  Deterministic
/// given base_seed, regardless of thread count.
inline SimOutcome estimate_hit_probability(const SimConfig& cfg) {
  cfg.validate();
  const uint32_t R = cfg.replications;
  std::vector<Replication> reps(R);
  std::vector<WorkloadStats> stats(R);

  auto run_one = [&](uint32_t r) {
    auto rng = replication_rng(cfg.base_seed, r);
    auto stream = generate_workload(cfg.mix, cfg.horizon, cfg.lookback, rng,
                                    &stats[r]);
    LruCache cache(cfg.cache_capacity);
    for (const auto& req : stream) {
      const bool hit = cache.access(req.content_id);
      if (req.time >= cfg.warmup) (hit ? reps[r].hits : reps[r].misses)++;
    }
  };

  const unsigned T = std::max(1u, std::min<unsigned>(cfg.threads, R));
  if (T == 1) {
    for (uint32_t r = 0; r < R; ++r) run_one(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<uint32_t> next{0};
    for (unsigned t = 0; t < T; ++t)
      pool.emplace_back([&] {
        for (uint32_t r; (r = next.fetch_add(1)) < R;) run_one(r);
      });
    for (auto& th : pool) th.join();
  }

  SimOutcome out;
  out.per_replication = reps;
  double sum = 0.0;
  for (uint32_t r = 0; r < R; ++r) {
    if (reps[r].hits + reps[r].misses == 0)
      throw std::runtime_error(
          "degenerate simulation: no measured requests in a replication");
    out.hits += reps[r].hits;
    out.misses += reps[r].misses;
    out.contents_generated += stats[r].contents_generated;
    out.requests_generated += stats[r].requests_generated;
    sum += reps[r].ratio();
  }
  out.hit_ratio_mean = sum / R;
  if (R > 1) {
    double ss = 0.0;
    for (const auto& rep : reps) {
      const double d = rep.ratio() - out.hit_ratio_mean;
      ss += d * d;
    }
    const double stderr_mean = std::sqrt(ss / (R - 1) / R);
    out.ci95_halfwidth = student_t_975(static_cast<int>(R) - 1) * stderr_mean;
  }
  return out;
}

/// IRM validation workload for the stationary module: i.i.d. Zipf draws
/// through the same LRU engine.
inline SimOutcome simulate_irm(const ZipfCatalog& cat, size_t capacity,
                               uint64_t requests_per_rep,
                               uint64_t warmup_requests, uint32_t replications,
                               uint64_t base_seed) {
  if (warmup_requests >= requests_per_rep)
    throw std::invalid_argument("warmup_requests must be < requests_per_rep");
  std::vector<double> cum(cat.size());
  double acc = 0.0;
  for (uint64_t m = 1; m <= cat.size(); ++m)
    cum[m - 1] = (acc += cat.popularity(m));
  cum.back() = 1.0;

  SimOutcome out;
  out.per_replication.resize(replications);
  double sum = 0.0;
  for (uint32_t r = 0; r < replications; ++r) {
    auto rng = replication_rng(base_seed, r);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    LruCache cache(capacity);
    auto& rep = out.per_replication[r];
    for (uint64_t i = 0; i < requests_per_rep; ++i) {
      const uint64_t id = static_cast<uint64_t>(
          std::lower_bound(cum.begin(), cum.end(), unif(rng)) - cum.begin());
      const bool hit = cache.access(id);
      if (i >= warmup_requests) (hit ? rep.hits : rep.misses)++;
    }
    out.hits += rep.hits;
    out.misses += rep.misses;
    out.requests_generated += requests_per_rep;
    sum += rep.ratio();
  }
  out.contents_generated = cat.size() * replications;
  out.hit_ratio_mean = sum / replications;
  if (replications > 1) {
    double ss = 0.0;
    for (const auto& rep : out.per_replication) {
      const double d = rep.ratio() - out.hit_ratio_mean;
      ss += d * d;
    }
    out.ci95_halfwidth = student_t_975(static_cast<int>(replications) - 1) *
                         std::sqrt(ss / (replications - 1) / replications);
  }
  return out;
}

}  // namespace nslru
