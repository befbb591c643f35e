// Experiment runner for the non-stationary LRU cache model: analytic
// solves, Monte Carlo validation, and the stationary Zipf baseline.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nslru/config.hpp"
#include "nslru/experiments.hpp"

namespace {

using namespace nslru;

unsigned default_threads() {
  if (const char* env = std::getenv("NONSTAT_LRU_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error(path + ": invalid JSON: " + e.what());
  }
  return parse_experiment(j);
}

void print_summary(const ExperimentSpec& spec,
                   const std::vector<ResultRow>& rows) {
  std::cout << "# " << spec.name << "\n";
  std::cout << "      C          T_C        p_hit    asymptote      sim_mean\n";
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      std::printf("%9.4g  ERROR: %s\n", r.cache_size, r.error.c_str());
      continue;
    }
    // model columns are all-zero in simulate-only runs; show them blank
    const bool modeled = r.eviction_time_tc != 0.0 || r.p_hit_model != 0.0;
    auto col = [&](bool present, double v) {
      char buf[24];
      if (present) std::snprintf(buf, sizeof buf, "%12.6g", v);
      else std::snprintf(buf, sizeof buf, "%12s", "-");
      return std::string(buf);
    };
    std::printf("%9.4g %s %s %s %12s\n", r.cache_size,
                col(modeled, r.eviction_time_tc).c_str(),
                col(modeled, r.p_hit_model).c_str(),
                col(r.p_hit_asymptote.has_value(),
                    r.p_hit_asymptote.value_or(0.0)).c_str(),
                r.p_hit_sim_mean ? detail::fmt10(*r.p_hit_sim_mean).c_str()
                                 : "-");
  }
}

int emit(const ExperimentSpec& spec, const std::vector<ResultRow>& rows,
         const std::string& out_dir) {
  for (auto kind : spec.outputs) {
    if (kind == OutputKind::Summary) print_summary(spec, rows);
    if (kind == OutputKind::Csv) {
      std::filesystem::create_directories(out_dir);
      const auto path = std::filesystem::path(out_dir) / (spec.name + ".csv");
      std::ofstream os(path);
      write_csv(rows, os);
      std::cout << "wrote " << path.string() << "\n";
    }
  }
  for (const auto& r : rows)
    if (!r.error.empty()) return 2;
  return 0;
}

void dump_workload(const ExperimentSpec& spec, const RunOptions& opt,
                   const std::string& path) {
  if (!spec.mix || !spec.sim) return;
  SimConfig sim = resolve_sim(*spec.mix, *spec.sim, spec.cache_sizes.front(),
                              std::numeric_limits<double>::infinity(), opt);
  auto rng = replication_rng(sim.base_seed, 0);
  auto stream = generate_workload(sim.mix, sim.horizon, sim.lookback, rng);
  std::ofstream os(path);
  for (const auto& req : stream)
    os << detail::fmt10(req.time) << ' ' << req.content_id << ' '
       << req.class_index << '\n';
  std::cout << "wrote " << path << " (" << stream.size() << " requests)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LRU cache performance under non-stationary content popularity"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  unsigned threads = default_threads();
  uint64_t seed = 0;
  bool seed_set = false;
  uint32_t reps = 0;
  app.add_option("--out-dir", out_dir, "Directory for CSV output");
  app.add_option("--threads", threads, "Parallelism cap");
  app.add_option("--seed", seed, "Override simulation base seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--reps", reps, "Override replication count");

  std::string config_path, dump_path, run_name;

  auto* solve = app.add_subcommand("solve", "Analytic model only");
  solve->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo only");
  simulate->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  simulate->add_option("--dump-workload", dump_path,
                       "Also export one generated workload (rep 0) as "
                       "'time_days content_id class_index' lines");
  auto* compare = app.add_subcommand("compare", "Model and simulation");
  compare->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  auto* stationary =
      app.add_subcommand("stationary", "Stationary Zipf baseline");
  stationary->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  auto* list = app.add_subcommand("list-experiments",
                                  "List built-in experiment names");
  auto* run = app.add_subcommand("run", "Run a built-in experiment");
  run->add_option("name", run_name,
                  "Built-in experiment name (or prefix for a family)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  RunOptions opt;
  opt.threads = threads;
  if (seed_set) opt.seed_override = seed;
  if (reps > 0) opt.reps_override = reps;

  try {
    if (list->parsed()) {
      for (const auto& spec : builtin_experiments())
        std::cout << spec.name << "\n";
      return 0;
    }
    if (run->parsed()) {
      int rc = 0;
      bool found = false;
      for (const auto& spec : builtin_experiments()) {
        if (spec.name != run_name &&
            spec.name.rfind(run_name + "-", 0) != 0)
          continue;
        found = true;
        rc = std::max(rc, emit(spec, run_experiment(spec, opt), out_dir));
      }
      if (!found) {
        std::cerr << "no built-in experiment matches '" << run_name << "'\n";
        return 1;
      }
      return rc;
    }

    ExperimentSpec spec = load_spec(config_path);
    if (solve->parsed() || stationary->parsed()) opt.run_sim = false;
    if (simulate->parsed()) {
      opt.run_model = false;
      if (spec.mix && !spec.sim)
        throw config_error("simulate: config has no 'sim' section");
      if (!dump_path.empty()) dump_workload(spec, opt, dump_path);
    }
    if (stationary->parsed() && !spec.stationary)
      throw config_error("stationary: config has no 'stationary' section");
    return emit(spec, run_experiment(spec, opt), out_dir);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
