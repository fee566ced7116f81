#pragma once

// Experiment drivers behind the CLI. Every trial t of a point uses sprinkle
// stream t under a seed derived from (config seed, point), so results are
// identical for any thread count.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "perc/contraction.hpp"
#include "perc/renormalize.hpp"
#include "perc/stats.hpp"
#include "perc/subgraph.hpp"

namespace perc {

inline constexpr const char* kArtifactVersion = "perc 1.0.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProxyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { uniqueness, shrink, renorm, pc, slab };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::uniqueness;
  int d = 2;
  // 0 runs X alone (control arm).
  double epsilon = 0.1;
  nlohmann::json generator = {{"kind", "axis_foliation"}, {"params", {{"axis", 1}}}};
  std::vector<int> n_values{8, 16, 32, 64};
  std::uint64_t trials = 400;
  std::uint64_t seed = 1;
  double confidence = 0.95;
  unsigned threads = 1;
  std::string out_dir = "out";
  bool proof_geometry = false;
  bool plot = false;

  // renorm
  std::optional<int> block_radius;
  int coarse_radius = 2;
  double p_prime = 0.98;
  double p_double_prime = 0.99;
  std::vector<double> thin_q;

  // pc
  std::vector<double> q_grid{0.0, 0.5, 0.8, 0.9, 1.0};

  // slab
  std::string slab_arm = "half_space";
  std::vector<int> window_sizes{1, 2, 4, 8};
  int slab_thickness = 1;

  // shrink
  std::vector<int> connectivity_values{1, 2, 4, 6, 8, 12, 16};

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
// Canonical form: everything that affects results (threads and paths excluded).
nlohmann::json to_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

struct ResultRow {
  std::string experiment;
  std::string param;
  long n = 0;
  EstimateReport estimate;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<ResultRow> rows;
  nlohmann::json extras = nlohmann::json::object();
};

// Seed of the point identified by `point`, shared by every experiment so that
// arms with equal points see equal sprinkles.
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t point);

struct UniquenessPoint {
  int n = 0;
  EstimateReport estimate;
};

struct UniquenessCurve {
  std::vector<UniquenessPoint> points;
  // log(1 - p_hat) on sqrt(n) over points with p_hat < 1.
  LinearFit fit;
};

// P[all of Lambda_n connected inside Lambda_{2n}] for Y = X u omega, thinned at
// rate q.
UniquenessCurve uniqueness_curve(const Subgraph& x, double eps, const std::vector<int>& n_values,
                                 std::uint64_t trials, std::uint64_t seed, double confidence, unsigned threads,
                                 double q = 1.0);
LinearFit stretched_exponential_fit(const std::vector<UniquenessPoint>& points);

struct ProofGeometryTrial {
  std::vector<std::uint64_t> u_counts;  // U_{0,m(i)}(X u omega_i), i = 0..2d
  bool recursion_holds = false;         // every step shrinks by sqrt(n) or reaches 1
  bool final_unique = false;            // U_{0,4dn}(X u omega_{2d}) == 1
};

// One trial of the annulus recursion m(i) = (8d - 2i) n on Lambda_{8dn}.
ProofGeometryTrial proof_geometry_trial(const Subgraph& x, double eps, int n, std::uint64_t seed, std::uint64_t trial);

struct ShrinkRow {
  std::string graph_id;
  std::uint64_t connectivity = 0;
  EstimateReport empirical;
  std::optional<double> exact;
};

struct BundledMultigraph {
  std::string id;
  Multigraph graph;
  std::uint64_t connectivity = 0;
};

// Parallel pairs, multi-triangles, multi-K4 and multi-6-cycles of given edge
// connectivity.
std::vector<BundledMultigraph> bundled_multigraphs(const std::vector<int>& connectivity_values);

std::vector<ShrinkRow> shrink_study(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
// results.csv, report.json and (cfg.plot) plot.gp.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace perc
