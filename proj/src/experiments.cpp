#include "perc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "perc/connectivity.hpp"
#include "perc/oracle.hpp"
#include "perc/percolation.hpp"
#include "perc/rng.hpp"

namespace perc {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

Subgraph make_generator(const ExperimentConfig& cfg) {
  try {
    return subgraph_from_json(cfg.generator, cfg.d);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
}

void require_proxy(const Subgraph& x, const Box& box) {
  if (!verify_everywhere_percolating_proxy(x, box)) {
    throw ProxyFailure("generator " + x.name() + " fails the everywhere-percolating proxy on Lambda_" +
                       std::to_string(box.r) + " (some cluster misses the box boundary)");
  }
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::uniqueness: return "uniqueness";
    case ExperimentKind::shrink: return "shrink";
    case ExperimentKind::renorm: return "renorm";
    case ExperimentKind::pc: return "pc";
    case ExperimentKind::slab: return "slab";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::uniqueness, ExperimentKind::shrink, ExperimentKind::renorm, ExperimentKind::pc,
                 ExperimentKind::slab}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown experiment '" + s + "'");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (d < 2 || d > kMaxDim) fail("d must be in [2, 4]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must be in [0, 1]");
  if (n_values.empty()) fail("n_values must not be empty");
  if (!std::is_sorted(n_values.begin(), n_values.end())) fail("n_values must be sorted ascending");
  if (n_values.front() < 1) fail("n_values must be positive");
  if (trials < 1) fail("trials must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) fail("confidence must be in (0, 1)");
  if (block_radius && *block_radius < n_values.back()) fail("block_radius must be at least every n");
  if (coarse_radius < 1) fail("coarse_radius must be >= 1");
  if (!(0.0 < p_prime && p_prime < p_double_prime && p_double_prime < 1.0)) fail("need 0 < p_prime < p_double_prime < 1");
  for (double q : q_grid)
    if (!(q >= 0.0 && q <= 1.0)) fail("q_grid values must be in [0, 1]");
  for (double q : thin_q)
    if (!(q > 0.0 && q <= 1.0)) fail("thin_q values must be in (0, 1]");
  if (slab_arm != "half_space" && slab_arm != "slab") fail("slab_arm must be half_space or slab");
  if (kind == ExperimentKind::slab && slab_arm == "slab" && d < 3) fail("slab arm needs d >= 3");
  for (int w : window_sizes)
    if (w < 1) fail("window_sizes must be >= 1");
  if (slab_thickness < 0) fail("slab_thickness must be >= 0");
  for (int c : connectivity_values)
    if (c < 1) fail("connectivity_values must be >= 1");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{
      "experiment", "d",          "epsilon",        "generator",   "n_values",      "trials",
      "seed",       "confidence", "threads",        "out",         "proof_geometry", "plot",
      "block_radius", "coarse_radius", "p_prime",   "p_double_prime", "thin_q",     "q_grid",
      "slab_arm",   "window_sizes", "slab_thickness", "connectivity_values"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig c;
  try {
    if (j.contains("experiment")) c.kind = experiment_kind_from_string(j.at("experiment").get<std::string>());
    c.d = j.value("d", c.d);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("generator")) c.generator = j.at("generator");
    c.n_values = j.value("n_values", c.n_values);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.confidence = j.value("confidence", c.confidence);
    c.threads = j.value("threads", c.threads);
    c.out_dir = j.value("out", c.out_dir);
    c.proof_geometry = j.value("proof_geometry", c.proof_geometry);
    c.plot = j.value("plot", c.plot);
    if (j.contains("block_radius") && !j.at("block_radius").is_null()) c.block_radius = j.at("block_radius").get<int>();
    c.coarse_radius = j.value("coarse_radius", c.coarse_radius);
    c.p_prime = j.value("p_prime", c.p_prime);
    c.p_double_prime = j.value("p_double_prime", c.p_double_prime);
    c.thin_q = j.value("thin_q", c.thin_q);
    c.q_grid = j.value("q_grid", c.q_grid);
    c.slab_arm = j.value("slab_arm", c.slab_arm);
    c.window_sizes = j.value("window_sizes", c.window_sizes);
    c.slab_thickness = j.value("slab_thickness", c.slab_thickness);
    c.connectivity_values = j.value("connectivity_values", c.connectivity_values);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{{"experiment", to_string(c.kind)},
                   {"d", c.d},
                   {"epsilon", c.epsilon},
                   {"generator", c.generator},
                   {"n_values", c.n_values},
                   {"trials", c.trials},
                   {"seed", c.seed},
                   {"confidence", c.confidence}};
  switch (c.kind) {
    case ExperimentKind::uniqueness:
      j["proof_geometry"] = c.proof_geometry;
      break;
    case ExperimentKind::shrink:
      j["connectivity_values"] = c.connectivity_values;
      break;
    case ExperimentKind::renorm:
      j["block_radius"] = c.block_radius ? nlohmann::json(*c.block_radius) : nlohmann::json(nullptr);
      j["coarse_radius"] = c.coarse_radius;
      j["p_prime"] = c.p_prime;
      j["p_double_prime"] = c.p_double_prime;
      j["thin_q"] = c.thin_q;
      break;
    case ExperimentKind::pc:
      j["q_grid"] = c.q_grid;
      break;
    case ExperimentKind::slab:
      j["block_radius"] = c.block_radius ? nlohmann::json(*c.block_radius) : nlohmann::json(nullptr);
      j["slab_arm"] = c.slab_arm;
      j["window_sizes"] = c.window_sizes;
      j["slab_thickness"] = c.slab_thickness;
      break;
  }
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::uint64_t h = fnv1a(to_json(cfg).dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t point) { return rng::combine(rng::mix64(seed), point); }

LinearFit stretched_exponential_fit(const std::vector<UniquenessPoint>& points) {
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    if (p.estimate.p_hat >= 1.0) continue;
    xs.push_back(std::sqrt(static_cast<double>(p.n)));
    ys.push_back(std::log(1.0 - p.estimate.p_hat));
  }
  return ols_fit(xs, ys);
}

UniquenessCurve uniqueness_curve(const Subgraph& x, double eps, const std::vector<int>& n_values,
                                 std::uint64_t trials, std::uint64_t seed, double confidence, unsigned threads,
                                 double q) {
  UniquenessCurve curve;
  for (int n : n_values) {
    const std::uint64_t s = point_seed(seed, static_cast<std::uint64_t>(n));
    const Box region(x.dim(), 2 * n);
    const std::uint64_t hits = count_successes(trials, threads, [&](std::uint64_t t) {
      return all_pairs_connected_event(sample_y(x, eps, region, s, t, q), n);
    });
    curve.points.push_back({n, EstimateReport::from_counts(hits, trials, confidence)});
  }
  curve.fit = stretched_exponential_fit(curve.points);
  return curve;
}

ProofGeometryTrial proof_geometry_trial(const Subgraph& x, double eps, int n, std::uint64_t seed,
                                        std::uint64_t trial) {
  const int d = x.dim();
  const int big = 8 * d * n;
  const Box region(d, big);
  const EdgeSet xe = x.edges_in_region(region);
  const EdgeSet omega = eps > 0.0 ? sample_sprinkle(SprinkleConfig(eps, seed, trial), region) : EdgeSet(region);

  ProofGeometryTrial out;
  for (int i = 0; i <= 2 * d; ++i) {
    const int m = (8 * d - 2 * i) * n;
    EdgeSet y = xe;
    if (i > 0) y |= restrict_to_annulus(omega, Annulus(d, m, big));
    out.u_counts.push_back(count_U(label_clusters(y), 0, m));
  }
  out.recursion_holds = true;
  for (int i = 0; i < 2 * d; ++i) {
    if (shrink_exceeds(out.u_counts[i + 1], out.u_counts[i], static_cast<std::uint64_t>(n))) out.recursion_holds = false;
  }
  out.final_unique = out.u_counts.back() == 1;
  return out;
}

std::vector<BundledMultigraph> bundled_multigraphs(const std::vector<int>& connectivity_values) {
  std::vector<BundledMultigraph> out;
  for (int c : connectivity_values) {
    const auto N = static_cast<std::uint32_t>(c);
    {
      Multigraph g(2);
      g.add_edge(0, 1, N);
      out.push_back({"pair_N" + std::to_string(c), std::move(g), N});
    }
    if (c % 2 == 0) {
      Multigraph g(3);
      for (std::uint32_t u = 0; u < 3; ++u) g.add_edge(u, (u + 1) % 3, N / 2);
      out.push_back({"triangle_N" + std::to_string(c), std::move(g), N});
    }
    if (c % 3 == 0) {
      Multigraph g(4);
      for (std::uint32_t u = 0; u < 4; ++u)
        for (std::uint32_t v = u + 1; v < 4; ++v) g.add_edge(u, v, N / 3);
      out.push_back({"k4_N" + std::to_string(c), std::move(g), N});
    }
    if (c % 2 == 0) {
      Multigraph g(6);
      for (std::uint32_t u = 0; u < 6; ++u) g.add_edge(u, (u + 1) % 6, N / 2);
      out.push_back({"cycle6_N" + std::to_string(c), std::move(g), N});
    }
  }
  return out;
}

std::vector<ShrinkRow> shrink_study(const ExperimentConfig& cfg) {
  const double rate = cfg.epsilon / (4.0 * cfg.d);
  std::vector<ShrinkRow> rows;
  for (const auto& bg : bundled_multigraphs(cfg.connectivity_values)) {
    const Multigraph& g = bg.graph;
    for (bool connected_base : {false, true}) {
      const EdgeMask base(g.edge_count(), connected_base ? 1 : 0);
      const std::uint64_t s = point_seed(cfg.seed, rng::combine(fnv1a(bg.id), connected_base));
      const std::uint64_t hits = count_successes(cfg.trials, cfg.threads, [&](std::uint64_t t) {
        return shrink_event(g, base, rate, bg.connectivity, s, t);
      });
      ShrinkRow row{bg.id + (connected_base ? "/connected_base" : ""), bg.connectivity,
                    EstimateReport::from_counts(hits, cfg.trials, cfg.confidence), std::nullopt};
      if (g.edge_count() <= static_cast<std::size_t>(oracle::kMaxRandomEdges)) {
        const std::uint32_t k_base = component_count(g, base);
        oracle::ExactEventQuery<double> q;
        q.vertex_count = g.vertex_count();
        q.edges = g.edges();
        q.probabilities.assign(g.edge_count(), rate);
        if (connected_base) q.base_edges = g.edges();
        q.predicate = [&](const oracle::Outcome& o) { return shrink_exceeds(o.components, k_base, bg.connectivity); };
        row.exact = oracle::exact_probability(q);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

ExperimentResult run_uniqueness(const ExperimentConfig& cfg) {
  const Subgraph x = make_generator(cfg);
  ExperimentResult res{"uniqueness", {}, nlohmann::json::object()};
  if (!cfg.proof_geometry) {
    require_proxy(x, Box(cfg.d, 2 * cfg.n_values.back()));
    const UniquenessCurve curve =
        uniqueness_curve(x, cfg.epsilon, cfg.n_values, cfg.trials, cfg.seed, cfg.confidence, cfg.threads);
    for (const auto& p : curve.points) res.rows.push_back({"uniqueness", "lambda_n_in_lambda_2n", p.n, p.estimate});
    res.extras["fit"] = {{"points", curve.fit.points},
                         {"slope", std::isnan(curve.fit.slope) ? nlohmann::json(nullptr) : nlohmann::json(curve.fit.slope)},
                         {"slope_stderr", std::isnan(curve.fit.slope_stderr) ? nlohmann::json(nullptr)
                                                                             : nlohmann::json(curve.fit.slope_stderr)}};
    return res;
  }
  require_proxy(x, Box(cfg.d, 8 * cfg.d * cfg.n_values.back()));
  res.experiment = "uniqueness_proof";
  for (int n : cfg.n_values) {
    const std::uint64_t s = point_seed(cfg.seed, static_cast<std::uint64_t>(n));
    const auto counts = count_successes_multi(cfg.trials, cfg.threads, 3, [&](std::uint64_t t, std::span<std::uint8_t> out) {
      const ProofGeometryTrial tr = proof_geometry_trial(x, cfg.epsilon, n, s, t);
      out[0] = tr.recursion_holds;
      out[1] = tr.final_unique;
      const Box region(cfg.d, 2 * n);
      out[2] = all_pairs_connected_event(sample_y(x, cfg.epsilon, region, s, t), n);
    });
    res.rows.push_back({"uniqueness_proof", "annulus_recursion", n, EstimateReport::from_counts(counts[0], cfg.trials, cfg.confidence)});
    res.rows.push_back({"uniqueness_proof", "u_0_4dn_is_1", n, EstimateReport::from_counts(counts[1], cfg.trials, cfg.confidence)});
    res.rows.push_back({"uniqueness_proof", "lambda_n_in_lambda_2n", n, EstimateReport::from_counts(counts[2], cfg.trials, cfg.confidence)});
  }
  return res;
}

ExperimentResult run_shrink(const ExperimentConfig& cfg) {
  ExperimentResult res{"shrink", {}, nlohmann::json::array()};
  for (const auto& row : shrink_study(cfg)) {
    res.rows.push_back({"shrink", row.graph_id, static_cast<long>(row.connectivity), row.empirical});
    res.extras.push_back({{"graph", row.graph_id},
                          {"N", row.connectivity},
                          {"empirical", row.empirical.p_hat},
                          {"exact", row.exact ? nlohmann::json(*row.exact) : nlohmann::json(nullptr)}});
  }
  return res;
}

ExperimentResult run_renorm(const ExperimentConfig& cfg) {
  const Subgraph x = make_generator(cfg);
  const DominationConfig dom{cfg.p_prime, cfg.p_double_prime};
  MarginalOptions opt;
  opt.d = cfg.d;
  opt.coarse_radius = cfg.coarse_radius;
  opt.block_radius = cfg.block_radius;
  opt.confidence = cfg.confidence;
  opt.threads = cfg.threads;
  ExperimentResult res{"renorm", {}, nlohmann::json::array()};
  for (int n : cfg.n_values) {
    const std::uint64_t s = point_seed(cfg.seed, static_cast<std::uint64_t>(n));
    const MarginalReport m = estimate_marginal(x, cfg.epsilon, n, cfg.trials, s, opt);
    res.rows.push_back({"renorm", "worst_edge", n, m.worst});
    const auto& we = m.edges[m.worst_edge];
    nlohmann::json info{{"n", n},
                        {"worst_edge", {{"x", to_string(we.x())}, {"y", to_string(we.y())}}},
                        {"marginal", to_json(m.worst)},
                        {"p_prime", cfg.p_prime},
                        {"domination_condition", check_domination_condition(m.worst, dom)}};
    for (double q : cfg.thin_q) {
      const ThinningGapReport g = thinned_marginal_gap(x, cfg.epsilon, n, q, cfg.trials, s, opt);
      res.rows.push_back({"renorm", "thinned_q=" + fmt_double(q), n, g.y_q.worst});
      info["thinning"].push_back({{"q", q},
                                  {"gap", g.gap},
                                  {"all_open_exact", g.all_open_exact},
                                  {"all_open", to_json(g.all_open)},
                                  {"marginal_y", to_json(g.y.worst)},
                                  {"marginal_y_q", to_json(g.y_q.worst)},
                                  {"holds", g.holds}});
    }
    res.extras.push_back(info);
  }
  return res;
}

ExperimentResult run_pc(const ExperimentConfig& cfg) {
  const Subgraph x = make_generator(cfg);
  require_proxy(x, Box(cfg.d, 2 * cfg.n_values.back()));
  ExperimentResult res{"pc", {}, nlohmann::json::object()};
  std::optional<double> smallest;
  for (double q : cfg.q_grid) {
    const UniquenessCurve curve =
        uniqueness_curve(x, cfg.epsilon, cfg.n_values, cfg.trials, cfg.seed, cfg.confidence, cfg.threads, q);
    bool monotone = true;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      if (curve.points[i].estimate.p_hat < curve.points[i - 1].estimate.p_hat) monotone = false;
    const bool supercritical = monotone && curve.points.back().estimate.p_hat > 0.99;
    if (supercritical && (!smallest || q < *smallest)) smallest = q;
    for (const auto& p : curve.points) res.rows.push_back({"pc", "q=" + fmt_double(q), p.n, p.estimate});
  }
  res.extras["smallest_supercritical_q"] = smallest ? nlohmann::json(*smallest) : nlohmann::json(nullptr);
  return res;
}

ExperimentResult run_slab(const ExperimentConfig& cfg) {
  const Subgraph x = make_generator(cfg);
  const int n = cfg.n_values.front();
  const bool slab = cfg.slab_arm == "slab";
  const std::string name = slab ? "slab" : "half_space";
  ExperimentResult res{"slab", {}, nlohmann::json::object()};
  for (int size : cfg.window_sizes) {
    const CoarseWindow w = slab ? slab_window(cfg.d, size, size, cfg.slab_thickness) : half_space_window(cfg.d, size, size);
    const std::uint64_t s = point_seed(cfg.seed, rng::combine(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(size)));
    const std::uint64_t hits = count_successes(cfg.trials, cfg.threads, [&](std::uint64_t t) {
      return crosses(sample_coarse_field(x, cfg.epsilon, n, w, s, t, cfg.block_radius));
    });
    res.rows.push_back({"slab", name + "_n=" + std::to_string(n), size, EstimateReport::from_counts(hits, cfg.trials, cfg.confidence)});
  }
  return res;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case ExperimentKind::uniqueness: return run_uniqueness(cfg);
    case ExperimentKind::shrink: return run_shrink(cfg);
    case ExperimentKind::renorm: return run_renorm(cfg);
    case ExperimentKind::pc: return run_pc(cfg);
    case ExperimentKind::slab: return run_slab(cfg);
  }
  throw ConfigError("unhandled experiment kind");
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "experiment,param,n,trials,successes,p_hat,ci_low,ci_high\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.param << ',' << r.n << ',' << r.estimate.trials << ',' << r.estimate.successes << ','
       << fmt_double(r.estimate.p_hat) << ',' << fmt_double(r.estimate.ci_low) << ',' << fmt_double(r.estimate.ci_high)
       << '\n';
  }
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "results.csv", std::ios::binary);
    write_results_csv(csv, result.rows);
  }
  nlohmann::json report{{"version", kArtifactVersion},
                        {"experiment", result.experiment},
                        {"config", to_json(cfg)},
                        {"config_hash", config_hash(cfg)},
                        {"seed", cfg.seed},
                        {"results", nlohmann::json::array()},
                        {"details", result.extras}};
  for (const auto& r : result.rows) {
    nlohmann::json row = to_json(r.estimate);
    row["experiment"] = r.experiment;
    row["param"] = r.param;
    row["n"] = r.n;
    report["results"].push_back(row);
  }
  {
    std::ofstream js(dir / "report.json", std::ios::binary);
    js << report.dump(2) << '\n';
  }
  if (cfg.plot) {
    std::ofstream gp(dir / "plot.gp", std::ios::binary);
    gp << "# " << kArtifactVersion << " config " << config_hash(cfg) << "\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'n'\nset ylabel 'p_hat'\nset yrange [0:1.05]\n"
       << "set terminal pngcairo size 900,600\nset output 'results.png'\n"
       << "plot 'results.csv' using 3:6:7:8 with yerrorlines title '" << result.experiment << "'\n";
  }
}

}  // namespace perc
