// percx: command-line driver for the percolation experiments.
//
//   percx <experiment> [--config file.json] [--seed S] [--trials T] [--out DIR]
//                      [--threads K] [--proof-geometry]
//   percx verify [--trials T] [--threads K] [--config file.json] [--out DIR]
//
// Exit codes: 0 success, 1 failed verification or runtime error, 2 config
// error, 3 generator failed the everywhere-percolating proxy.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "perc/experiments.hpp"
#include "perc/invariants.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitProxy = 3;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  bool proof_geometry = false;
};

perc::ExperimentConfig load_config(const Flags& f, perc::ExperimentKind kind) {
  perc::ExperimentConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw perc::ConfigError("cannot open config '" + f.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw perc::ConfigError("config '" + f.config + "' is not valid JSON: " + e.what());
    }
    cfg = perc::config_from_json(j);
    if (j.contains("experiment") && cfg.kind != kind) {
      throw perc::ConfigError("config is for '" + perc::to_string(cfg.kind) + "' but subcommand is '" +
                              perc::to_string(kind) + "'");
    }
  }
  cfg.kind = kind;
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.out) cfg.out_dir = *f.out;
  if (f.threads) cfg.threads = *f.threads;
  if (f.proof_geometry) cfg.proof_geometry = true;
  if (cfg.threads == 0) cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  cfg.validate();
  return cfg;
}

int run_experiment_command(const Flags& f, perc::ExperimentKind kind) {
  const perc::ExperimentConfig cfg = load_config(f, kind);
  const perc::ExperimentResult res = perc::run_experiment(cfg);
  perc::write_outputs(cfg, res, cfg.out_dir);
  perc::write_results_csv(std::cout, res.rows);
  std::cerr << "wrote " << cfg.out_dir << "/results.csv and report.json (config " << perc::config_hash(cfg) << ")\n";
  return 0;
}

int run_verify(const Flags& f) {
  const unsigned threads = f.threads && *f.threads > 0 ? *f.threads : std::max(1u, std::thread::hardware_concurrency());
  if (!f.config.empty()) {
    // Proxy check for the configured generator on Lambda_{2 n_max}.
    const perc::ExperimentConfig cfg = load_config(f, perc::ExperimentKind::uniqueness);
    const perc::Subgraph x = [&] {
      try {
        return perc::subgraph_from_json(cfg.generator, cfg.d);
      } catch (const std::exception& e) {
        throw perc::ConfigError(std::string("generator: ") + e.what());
      }
    }();
    const perc::Box box(cfg.d, 2 * cfg.n_values.back());
    if (!perc::verify_everywhere_percolating_proxy(x, box)) {
      throw perc::ProxyFailure("generator " + x.name() + " fails the everywhere-percolating proxy on Lambda_" +
                               std::to_string(box.r));
    }
    std::printf("[PASS] proxy: %s on Lambda_%d\n", x.name().c_str(), box.r);
  }

  std::vector<perc::CheckResult> results;
  auto run = [&](perc::CheckResult r) {
    std::printf("[%s] %s (%.1fs): %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    results.push_back(std::move(r));
  };
  run(perc::check_oracle_equivalence(f.trials.value_or(100000), threads));
  run(perc::check_component_bound(threads));
  run(perc::check_min_cut(100));
  run(perc::check_labeling(500));
  run(perc::check_structure(5));
  run(perc::check_three_dependence());

  bool ok = true;
  nlohmann::json report{{"version", perc::kArtifactVersion}, {"checks", nlohmann::json::array()}};
  for (const auto& r : results) {
    ok = ok && r.passed;
    report["checks"].push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
  }
  if (f.out) {
    std::filesystem::create_directories(*f.out);
    std::ofstream(std::filesystem::path(*f.out) / "verify.json") << report.dump(2) << '\n';
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Percolation experiments: sprinkled everywhere-percolating subgraphs of Z^d"};
  app.set_version_flag("--version", perc::kArtifactVersion);
  app.require_subcommand(1);

  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "Master seed");
    sub->add_option("--trials", flags.trials, "Trials per point")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
  };

  struct Entry {
    const char* name;
    perc::ExperimentKind kind;
    const char* help;
  };
  const Entry entries[] = {
      {"uniqueness", perc::ExperimentKind::uniqueness, "P[Lambda_n connected inside Lambda_2n] vs n"},
      {"shrink", perc::ExperimentKind::shrink, "Component-shrink events on bundled multigraphs"},
      {"renorm", perc::ExperimentKind::renorm, "Worst coarse-edge marginal of the renormalized process"},
      {"pc", perc::ExperimentKind::pc, "Uniqueness curves of q-thinned Y over a q grid"},
      {"slab", perc::ExperimentKind::slab, "Coarse crossings of half-space and slab windows"},
  };
  std::vector<std::pair<CLI::App*, perc::ExperimentKind>> experiments;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    if (e.kind == perc::ExperimentKind::uniqueness)
      sub->add_flag("--proof-geometry", flags.proof_geometry, "Annulus recursion on Lambda_{8dn}");
    experiments.emplace_back(sub, e.kind);
  }
  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suites (and the proxy for --config)");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (verify->parsed()) return run_verify(flags);
    for (const auto& [sub, kind] : experiments)
      if (sub->parsed()) return run_experiment_command(flags, kind);
  } catch (const perc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const perc::ProxyFailure& e) {
    std::cerr << "proxy verification failed: " << e.what() << '\n';
    return kExitProxy;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
