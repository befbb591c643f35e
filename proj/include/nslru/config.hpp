#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nslru/analytic.hpp"
#include "nslru/simulator.hpp"

namespace nslru {

using nlohmann::json;

/// Schema violation; the message carries the config path and reason.
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace cfg {

inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw config_error(path + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) throw config_error(path + ": unknown key '" + it.key() + "'");
  }
}

inline const json& require(const json& j, const std::string& path,
                           const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw config_error(path + ": missing key '" + key + "'");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw config_error(path + ": expected a number");
  return j.get<double>();
}

// Rate and time fields carry explicit units.  A bare number is accepted
// as the canonical unit (per_day / days).
inline double rate_per_day(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  check_keys(j, path, {"value", "unit"});
  const double v = number(require(j, path, "value"), path + ".value");
  const std::string u = require(j, path, "unit").get<std::string>();
  if (u == "per_day") return v;
  if (u == "per_hour") return v * 24.0;
  throw config_error(path + ".unit: expected 'per_day' or 'per_hour'");
}

inline double time_days(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  check_keys(j, path, {"value", "unit"});
  const double v = number(require(j, path, "value"), path + ".value");
  const std::string u = require(j, path, "unit").get<std::string>();
  if (u == "days") return v;
  if (u == "hours") return v / 24.0;
  throw config_error(path + ".unit: expected 'days' or 'hours'");
}

inline PopularityProfile profile(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "L", "zeta"});
  const std::string kind = require(j, path, "kind").get<std::string>();
  const double L = time_days(require(j, path, "L"), path + ".L");
  try {
    if (kind == "exponential") return PopularityProfile::exponential(L);
    if (kind == "uniform") return PopularityProfile::uniform(L);
    if (kind == "triangular") return PopularityProfile::triangular(L);
    if (kind == "powerlaw")
      return PopularityProfile::power_law(
          L, number(require(j, path, "zeta"), path + ".zeta"));
  } catch (const std::invalid_argument& e) {
    throw config_error(path + ": " + e.what());
  }
  throw config_error(path + ".kind: unknown profile kind '" + kind + "'");
}

inline VolumeDistribution volumes(const json& j, const std::string& path) {
  const std::string kind =
      require(j, path, "kind").get<std::string>();
  try {
    if (kind == "pareto") {
      check_keys(j, path, {"kind", "v_min", "beta"});
      return VolumeDistribution::pareto(
          number(require(j, path, "v_min"), path + ".v_min"),
          number(require(j, path, "beta"), path + ".beta"));
    }
    if (kind == "deterministic") {
      check_keys(j, path, {"kind", "value"});
      return VolumeDistribution::deterministic(
          number(require(j, path, "value"), path + ".value"));
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(path + ": " + e.what());
  }
  throw config_error(path + ".kind: unknown volume kind '" + kind + "'");
}

inline TrafficMix mix(const json& j, const std::string& path) {
  check_keys(j, path, {"gamma", "classes"});
  const double gamma = rate_per_day(require(j, path, "gamma"), path + ".gamma");
  const json& jc = require(j, path, "classes");
  if (!jc.is_array() || jc.empty())
    throw config_error(path + ".classes: expected a nonempty array");
  std::vector<ContentClass> classes;
  for (size_t i = 0; i < jc.size(); ++i) {
    const std::string p = path + ".classes[" + std::to_string(i) + "]";
    check_keys(jc[i], p, {"weight", "profile", "volumes"});
    classes.push_back(
        {number(require(jc[i], p, "weight"), p + ".weight"),
         profile(require(jc[i], p, "profile"), p + ".profile"),
         volumes(require(jc[i], p, "volumes"), p + ".volumes")});
  }
  try {
    return TrafficMix(gamma, std::move(classes));
  } catch (const std::invalid_argument& e) {
    throw config_error(path + ": " + e.what());
  }
}

inline json to_json(const PopularityProfile& p) {
  json j{{"kind", to_string(p.kind())},
         {"L", {{"value", p.scale_L()}, {"unit", "days"}}}};
  if (p.kind() == ProfileKind::PowerLaw) j["zeta"] = p.zeta();
  return j;
}

inline json to_json(const VolumeDistribution& d) {
  if (d.kind() == VolumeKind::Pareto)
    return {{"kind", "pareto"}, {"v_min", d.v_min()}, {"beta", d.beta()}};
  return {{"kind", "deterministic"}, {"value", d.value()}};
}

inline json to_json(const TrafficMix& m) {
  json classes = json::array();
  for (const auto& c : m.classes())
    classes.push_back({{"weight", c.weight},
                       {"profile", to_json(c.profile)},
                       {"volumes", to_json(c.volumes)}});
  return {{"gamma", {{"value", m.gamma()}, {"unit", "per_day"}}},
          {"classes", classes}};
}

}  // namespace cfg

/// Stationary (Appendix) catalogue description.
struct StationarySpec {
  uint64_t catalog_size_M = 0;
  double alpha = 0.0;
  double total_rate = 0.0;  // per day

  bool operator==(const StationarySpec&) const = default;
};

/// Simulation section of an experiment; warmup/lookback are derived from
/// the mix and the analytic solution when left unset.
struct SimSection {
  double horizon = 0.0;
  std::optional<double> warmup;
  std::optional<double> lookback;
  uint32_t replications = 20;
  uint64_t base_seed = 1;

  bool operator==(const SimSection&) const = default;
};

enum class OutputKind { Csv, Summary };

struct ExperimentSpec {
  std::string name;
  std::optional<TrafficMix> mix;            // exactly one of mix /
  std::optional<StationarySpec> stationary; // stationary is set
  std::vector<double> cache_sizes;
  std::optional<SimSection> sim;
  std::vector<OutputKind> outputs{OutputKind::Csv, OutputKind::Summary};

  bool operator==(const ExperimentSpec& o) const {
    auto mix_eq = [&] {
      if (mix.has_value() != o.mix.has_value()) return false;
      if (!mix) return true;
      if (mix->gamma() != o.mix->gamma()) return false;
      if (mix->classes().size() != o.mix->classes().size()) return false;
      for (size_t i = 0; i < mix->classes().size(); ++i) {
        const auto& a = mix->classes()[i];
        const auto& b = o.mix->classes()[i];
        if (a.weight != b.weight || !(a.profile == b.profile) ||
            !(a.volumes == b.volumes))
          return false;
      }
      return true;
    };
    return name == o.name && mix_eq() && stationary == o.stationary &&
           cache_sizes == o.cache_sizes && sim == o.sim &&
           outputs == o.outputs;
  }
};

inline ExperimentSpec parse_experiment(const json& j,
                                       const std::string& path = "$") {
  cfg::check_keys(j, path,
                  {"name", "mix", "stationary", "cache_sizes", "sim",
                   "outputs"});
  ExperimentSpec spec;
  spec.name = cfg::require(j, path, "name").get<std::string>();

  const bool has_mix = j.contains("mix");
  const bool has_stat = j.contains("stationary");
  if (has_mix == has_stat)
    throw config_error(path + ": exactly one of 'mix' or 'stationary' required");
  if (has_mix) spec.mix = cfg::mix(j["mix"], path + ".mix");
  if (has_stat) {
    const json& js = j["stationary"];
    const std::string p = path + ".stationary";
    cfg::check_keys(js, p, {"M", "alpha", "total_rate"});
    StationarySpec st;
    st.catalog_size_M = cfg::require(js, p, "M").get<uint64_t>();
    st.alpha = cfg::number(cfg::require(js, p, "alpha"), p + ".alpha");
    st.total_rate =
        cfg::rate_per_day(cfg::require(js, p, "total_rate"), p + ".total_rate");
    spec.stationary = st;
  }

  const json& sizes = cfg::require(j, path, "cache_sizes");
  if (!sizes.is_array() || sizes.empty())
    throw config_error(path + ".cache_sizes: expected a nonempty array");
  for (size_t i = 0; i < sizes.size(); ++i) {
    const double c =
        cfg::number(sizes[i], path + ".cache_sizes[" + std::to_string(i) + "]");
    if (!(c > 0.0))
      throw config_error(path + ".cache_sizes: sizes must be positive");
    spec.cache_sizes.push_back(c);
  }
  for (size_t i = 0; i + 1 < spec.cache_sizes.size(); ++i)
    if (!(spec.cache_sizes[i] < spec.cache_sizes[i + 1]))
      throw config_error(path + ".cache_sizes: must be strictly ascending");

  if (j.contains("sim")) {
    const json& js = j["sim"];
    const std::string p = path + ".sim";
    cfg::check_keys(js, p,
                    {"horizon", "warmup", "lookback", "replications",
                     "base_seed"});
    SimSection s;
    s.horizon = cfg::time_days(cfg::require(js, p, "horizon"), p + ".horizon");
    if (js.contains("warmup"))
      s.warmup = cfg::time_days(js["warmup"], p + ".warmup");
    if (js.contains("lookback"))
      s.lookback = cfg::time_days(js["lookback"], p + ".lookback");
    if (js.contains("replications"))
      s.replications = js["replications"].get<uint32_t>();
    if (js.contains("base_seed"))
      s.base_seed = js["base_seed"].get<uint64_t>();
    if (!(s.horizon > 0.0))
      throw config_error(p + ".horizon: must be > 0");
    if (s.warmup && !(*s.warmup >= 0.0 && *s.warmup < s.horizon))
      throw config_error(p + ".warmup: must be in [0, horizon)");
    if (s.replications == 0)
      throw config_error(p + ".replications: must be >= 1");
    spec.sim = s;
  }

  if (j.contains("outputs")) {
    spec.outputs.clear();
    for (const auto& o : j["outputs"]) {
      const std::string s = o.get<std::string>();
      if (s == "csv") spec.outputs.push_back(OutputKind::Csv);
      else if (s == "summary") spec.outputs.push_back(OutputKind::Summary);
      else throw config_error(path + ".outputs: unknown output '" + s + "'");
    }
  }
  return spec;
}

inline json to_json(const ExperimentSpec& spec) {
  json j{{"name", spec.name}, {"cache_sizes", spec.cache_sizes}};
  if (spec.mix) j["mix"] = cfg::to_json(*spec.mix);
  if (spec.stationary)
    j["stationary"] = {{"M", spec.stationary->catalog_size_M},
                       {"alpha", spec.stationary->alpha},
                       {"total_rate",
                        {{"value", spec.stationary->total_rate},
                         {"unit", "per_day"}}}};
  if (spec.sim) {
    json js{{"horizon", {{"value", spec.sim->horizon}, {"unit", "days"}}},
            {"replications", spec.sim->replications},
            {"base_seed", spec.sim->base_seed}};
    if (spec.sim->warmup)
      js["warmup"] = {{"value", *spec.sim->warmup}, {"unit", "days"}};
    if (spec.sim->lookback)
      js["lookback"] = {{"value", *spec.sim->lookback}, {"unit", "days"}};
    j["sim"] = js;
  }
  json outs = json::array();
  for (auto o : spec.outputs)
    outs.push_back(o == OutputKind::Csv ? "csv" : "summary");
  j["outputs"] = outs;
  return j;
}

}  // namespace nslru
