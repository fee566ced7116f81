#include "perc/invariants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "perc/connectivity.hpp"
#include "perc/contraction.hpp"
#include "perc/experiments.hpp"
#include "perc/oracle.hpp"
#include "perc/percolation.hpp"
#include "perc/reference.hpp"
#include "perc/rng.hpp"
#include "perc/renormalize.hpp"
#include "perc/stats.hpp"
#include "perc/subgraph.hpp"

namespace perc {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct McCase {
  std::string name;
  double exact = 0.0;
  std::function<bool(std::uint64_t seed, std::uint64_t trial)> trial;
};

std::uint32_t vertex_of(const Box& box, const Point& p) { return static_cast<std::uint32_t>(box.index(p)); }

double lattice_exact(const EdgeSet& fixed, const EdgeSet& random, double p,
                     const std::function<bool(const oracle::Outcome&)>& pred) {
  const auto lg = oracle::lattice_graph(fixed, random);
  oracle::ExactEventQuery<double> q{lg.vertex_count, lg.random_edges, lg.base_edges,
                                    std::vector<double>(lg.random_edges.size(), p), pred};
  return oracle::exact_probability(q);
}

std::vector<McCase> oracle_cases() {
  std::vector<McCase> cases;

  // Full Lambda_1 percolation.
  {
    const Box box(2, 1);
    const EdgeSet none(box), all = EdgeSet::full(box);
    for (double p : {0.3, 0.5, 0.7}) {
      cases.push_back({"lambda1_connected_p" + std::to_string(p), lattice_exact(none, all, p, oracle::connected()),
                       [box, p](std::uint64_t s, std::uint64_t t) {
                         return label_clusters(sample_sprinkle(SprinkleConfig(p, s, t), box)).cluster_count() == 1;
                       }});
    }
    const Point corner{1, 1};
    for (double p : {0.4, 0.6}) {
      cases.push_back({"lambda1_origin_to_corner_p" + std::to_string(p),
                       lattice_exact(none, all, p, oracle::all_connected({vertex_of(box, Point{0, 0}), vertex_of(box, corner)})),
                       [box, p, corner](std::uint64_t s, std::uint64_t t) {
                         return is_connected_within(sample_sprinkle(SprinkleConfig(p, s, t), box), Point{0, 0}, corner, box);
                       }});
    }
    // Thinned sprinkle is a p*q sprinkle.
    for (auto [p, q] : {std::pair{0.8, 0.5}, std::pair{0.9, 0.7}}) {
      cases.push_back({"lambda1_thinned", lattice_exact(none, all, p * q, oracle::connected()),
                       [box, p, q](std::uint64_t s, std::uint64_t t) {
                         const EdgeSet w = thin(sample_sprinkle(SprinkleConfig(p, s, t), box), q, s, t);
                         return label_clusters(w).cluster_count() == 1;
                       }});
    }
  }

  // Rows of X fixed, vertical edges random on Lambda_2.
  for (int axis : {1, 2}) {
    const Box box(2, 2);
    const Subgraph x = Subgraph::axis_foliation(2, axis);
    const EdgeSet xe = x.edges_in_region(box);
    const EdgeSet all = EdgeSet::full(box);
    for (double eps : axis == 1 ? std::vector<double>{0.1, 0.2, 0.3} : std::vector<double>{0.15, 0.4}) {
      cases.push_back({"lambda2_foliation" + std::to_string(axis) + "_connected",
                       lattice_exact(xe, all, eps, oracle::connected()),
                       [box, xe, eps](std::uint64_t s, std::uint64_t t) {
                         return label_clusters(superpose(xe, sample_sprinkle(SprinkleConfig(eps, s, t), box))).cluster_count() == 1;
                       }});
    }
    // Uniqueness event at n = 1.
    std::vector<std::uint32_t> inner;
    for_each_box_vertex(Box(2, 1), [&](std::uint64_t, const Point& p) { inner.push_back(vertex_of(box, p)); });
    for (double eps : {0.1, 0.3, 0.5}) {
      if (axis == 2 && eps == 0.3) continue;
      cases.push_back({"uniqueness_n1_foliation" + std::to_string(axis),
                       lattice_exact(xe, all, eps, oracle::all_connected(inner)),
                       [box, x, eps](std::uint64_t s, std::uint64_t t) {
                         return all_pairs_connected_event(sample_y(x, eps, box, s, t), 1);
                       }});
    }
  }

  // d = 3: xy-planes fixed, 18 z-edges random.
  {
    const Box box(3, 1);
    EdgeSet planes(box);
    for_each_box_edge(box, [&](EdgeId id, const Point&, int axis) {
      if (axis < 2) planes.insert(id);
    });
    const EdgeSet all = EdgeSet::full(box);
    for (double p : {0.05, 0.1}) {
      const double closed = std::pow(1 - p, 9);
      const double exact = lattice_exact(planes, all, p, oracle::connected());
      if (std::abs(exact - (1 - closed) * (1 - closed)) > 1e-12) throw std::logic_error("layer formula mismatch");
      cases.push_back({"lambda1_d3_layers", exact, [box, planes, p](std::uint64_t s, std::uint64_t t) {
                         return label_clusters(superpose(planes, sample_sprinkle(SprinkleConfig(p, s, t), box)))
                                    .cluster_count() == 1;
                       }});
    }
  }

  // Bundled multigraphs: P[connected].
  auto bundled = bundled_multigraphs({1, 2, 3, 4, 6});
  for (const auto& bg : bundled) {
    static const std::vector<std::string> keep{"pair_N1", "pair_N4", "triangle_N2", "triangle_N6",
                                               "k4_N3",   "k4_N6",   "cycle6_N2",   "cycle6_N4"};
    if (std::find(keep.begin(), keep.end(), bg.id) == keep.end()) continue;
    const Multigraph g = bg.graph;
    const double eps = 0.3;
    cases.push_back({bg.id + "_connected", oracle::exact_component_distribution<double>(g, eps)[1],
                     [g, eps](std::uint64_t s, std::uint64_t t) { return sprinkle_multigraph_trial(g, eps, s, t) == 1; }});
  }
  // Shrink events from an empty base at rate 0.8 / 8.
  for (const auto& bg : bundled) {
    if (bg.id != "triangle_N4" && bg.id != "k4_N6" && bg.id != "cycle6_N4") continue;
    const Multigraph g = bg.graph;
    const double rate = 0.1;
    const std::uint64_t N = bg.connectivity;
    const std::uint32_t k_base = g.vertex_count();
    oracle::ExactEventQuery<double> q{g.vertex_count(), g.edges(), {}, std::vector<double>(g.edge_count(), rate),
                                      [=](const oracle::Outcome& o) { return shrink_exceeds(o.components, k_base, N); }};
    cases.push_back({bg.id + "_shrink", oracle::exact_probability(q), [g, rate, N](std::uint64_t s, std::uint64_t t) {
                       return shrink_event(g, EdgeMask(g.edge_count(), 0), rate, N, s, t);
                     }});
  }
  // Random multigraphs: P[K == 2].
  std::mt19937_64 rng(99);
  for (int i = 0; i < 6; ++i) {
    const auto v = static_cast<std::uint32_t>(3 + i % 4);
    Multigraph g(v);
    const int m = 8 + static_cast<int>(rng() % 11);
    for (int e = 0; e < m; ++e) g.add_edge(static_cast<std::uint32_t>(rng() % v), static_cast<std::uint32_t>(rng() % v));
    const double eps = 0.35;
    const auto dist = oracle::exact_component_distribution<double>(g, eps);
    const double exact = dist.count(2) ? dist.at(2) : 0.0;
    cases.push_back({"random_multigraph_" + std::to_string(i), exact,
                     [g, eps](std::uint64_t s, std::uint64_t t) { return sprinkle_multigraph_trial(g, eps, s, t) == 2; }});
  }
  return cases;
}

}  // namespace

CheckResult check_oracle_equivalence(std::uint64_t trials, unsigned threads, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult res{"oracle_equivalence", true, "", 0.0};
  const auto cases = oracle_cases();
  double worst_z = 0.0;
  std::string worst_name;
  int failures = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const std::uint64_t s = rng::combine(seed, i);
    const std::uint64_t hits = count_successes(trials, threads, [&](std::uint64_t t) { return c.trial(s, t); });
    const double p_hat = static_cast<double>(hits) / static_cast<double>(trials);
    const double sigma = std::sqrt(c.exact * (1 - c.exact) / static_cast<double>(trials));
    const double diff = std::abs(p_hat - c.exact);
    const bool ok = diff <= 3 * sigma + 1e-12;
    const double z = sigma > 0 ? diff / sigma : (diff > 1e-12 ? INFINITY : 0.0);
    if (z > worst_z) {
      worst_z = z;
      worst_name = c.name;
    }
    if (!ok) {
      ++failures;
      res.passed = false;
    }
  }
  std::ostringstream os;
  os << cases.size() << " configs, " << trials << " trials each, " << failures << " outside 3 sigma, max |z| = "
     << worst_z << " (" << worst_name << ")";
  res.detail = os.str();
  res.seconds = since(t0);
  return res;
}

CheckResult check_component_bound(unsigned threads) {
  using oracle::Rational;
  const auto t0 = Clock::now();
  CheckResult res{"component_bound", true, "", 0.0};
  std::uint64_t checked = 0, graphs = 0;
  Rational tightest_ratio = 0;
  for (const auto& bg : bundled_multigraphs({1, 2, 4, 6, 8, 12, 16})) {
    const Multigraph g = bg.graph.without_loops();
    const std::uint32_t v = g.vertex_count();
    if (v > 6 || g.edge_count() > static_cast<std::size_t>(oracle::kMaxRandomEdges)) continue;
    ++graphs;
    const std::size_t subsets = (std::size_t{1} << v) - 2;  // slot = mask - 1
    const auto table = oracle::open_count_table(
        v, g.edges(), {}, subsets,
        [v](const oracle::Outcome& o, std::span<std::uint8_t> hit) {
          std::uint32_t comp[32] = {};
          for (std::uint32_t x = 0; x < v; ++x) comp[o.root[x]] |= 1u << x;
          for (std::uint32_t x = 0; x < v; ++x) {
            const std::uint32_t mask = comp[x];
            if (mask != 0 && mask != (1u << v) - 1) hit[mask - 1] = 1;
          }
        },
        threads);
    for (int d : {2, 3}) {
      for (const Rational& eps : {Rational(1, 10), Rational(1, 2), Rational(1)}) {
        const Rational rate = eps / (4 * d);
        for (std::uint32_t mask = 1; mask + 1 < (1u << v); ++mask) {
          std::vector<char> in(v);
          for (std::uint32_t x = 0; x < v; ++x) in[x] = (mask >> x) & 1u;
          const std::uint64_t cut = reference::cut_size(g, in);
          Rational bound = 1;
          for (std::uint64_t i = 0; i < cut; ++i) bound *= 1 - rate;
          const Rational p = oracle::probability_from_counts(table[mask - 1], rate);
          ++checked;
          if (p > bound) res.passed = false;
          const Rational ratio = p / bound;
          if (ratio > tightest_ratio) tightest_ratio = ratio;
        }
      }
    }
  }
  std::ostringstream os;
  os << graphs << " multigraphs, " << checked << " (S, d, eps) inequalities, max P/bound = "
     << static_cast<double>(tightest_ratio);
  res.detail = os.str();
  res.seconds = since(t0);
  return res;
}

CheckResult check_min_cut(int graphs, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult res{"min_cut", true, "", 0.0};
  std::mt19937_64 rng(seed);
  int mismatches = 0;
  for (int i = 0; i < graphs; ++i) {
    const auto v = static_cast<std::uint32_t>(2 + rng() % 5);
    Multigraph g(v);
    int budget = static_cast<int>(rng() % 13);
    while (budget > 0) {
      const auto a = static_cast<std::uint32_t>(rng() % v);
      const auto b = static_cast<std::uint32_t>(rng() % v);
      const int mult = 1 + static_cast<int>(rng() % std::min(budget, 3));
      g.add_edge(a, b, static_cast<std::uint32_t>(mult));
      budget -= mult;
    }
    if (edge_connectivity(g) != reference::brute_force_min_cut(g)) ++mismatches;
  }
  res.passed = mismatches == 0;
  res.detail = std::to_string(graphs) + " random multigraphs (<= 6 vertices, <= 12 edges), " +
               std::to_string(mismatches) + " mismatches";
  res.seconds = since(t0);
  return res;
}

CheckResult check_labeling(int configs, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult res{"labeling", true, "", 0.0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.02, 0.9);
  int mismatches = 0;
  for (int i = 0; i < configs; ++i) {
    const int r = 1 + static_cast<int>(rng() % 16);
    const Box box(2, r);
    EdgeSet y(box);
    switch (i % 5) {
      case 0: y = Subgraph::axis_foliation(2, 1 + static_cast<int>(rng() % 2)).edges_in_region(box); break;
      case 1: y = Subgraph::comb(2, 1 + static_cast<int>(rng() % 2)).edges_in_region(box); break;
      case 2: y = Subgraph::shifted_lines(2, 1, {0, 3, -5, 7, -2}, rng()).edges_in_region(box); break;
      case 3: y = Subgraph::random_forest(2, rng()).edges_in_region(box); break;
      default: break;  // omega alone
    }
    y |= sample_sprinkle(SprinkleConfig(unif(rng), rng(), i), box);
    if (label_clusters(y).clusters() != reference::bfs_partition(y)) ++mismatches;
  }
  res.passed = mismatches == 0;
  res.detail = std::to_string(configs) + " configurations, " + std::to_string(mismatches) + " mismatches";
  res.seconds = since(t0);
  return res;
}

CheckResult check_structure(int consecutive) {
  const auto t0 = Clock::now();
  CheckResult res{"structure", true, "", 0.0};
  std::ostringstream os;
  const int d = 2;
  const int n0 = static_cast<int>(min_n0(d));
  std::uint64_t bound_checks = 0, telescoping_checks = 0, crossing_checks = 0, crossing_skipped = 0;
  std::uint64_t max_clusters = 0;

  auto telescoping = [&](const ClusterLabeling& lab, int n, int m) {
    const double s = std::sqrt(static_cast<double>(n));
    std::uint64_t lhs = count_U(lab, 0, m);
    for (int i = 0; i < static_cast<int>(std::floor(s)); ++i) lhs += count_U_real(lab, m + 2 * i * s, m + 2 * (i + 1) * s);
    ++telescoping_checks;
    return lhs <= count_U(lab, 0, m + 2 * n);
  };

  // Cluster-count bound and telescoping at n0 .. n0 + consecutive - 1.
  for (int n = n0; n < n0 + consecutive; ++n) {
    const Box big(d, 8 * d * n);
    const std::uint64_t cap = static_cast<std::uint64_t>(n) * n;
    for (const auto& g : bundled_generators(d)) {
      const ClusterLabeling lab = label_clusters(g.edges_in_region(big));
      ++bound_checks;
      max_clusters = std::max<std::uint64_t>(max_clusters, lab.cluster_count());
      if (lab.cluster_count() > cap) {
        res.passed = false;
        os << "[bound fails: " << g.name() << " n=" << n << "] ";
      }
      for (int m : {n, 2 * n, 4 * n, 8 * n, 14 * n}) {
        if (!telescoping(lab, n, m)) {
          res.passed = false;
          os << "[telescoping fails: " << g.name() << " n=" << n << " m=" << m << "] ";
        }
      }
    }
  }

  // Crossing bound on bulk/boundary graphs.
  auto crossing = [&](int dim, int n, const std::vector<int>& ms) {
    const Box big(dim, 8 * dim * n);
    for (const auto& g : bundled_generators(dim)) {
      const ClusterLabeling lab = label_clusters(g.edges_in_region(big));
      for (int m : ms) {
        if (m < n || radius_plus_sqrt(m, 2, n) > big.r) continue;
        const BulkBoundaryGraph bb = build_bulk_boundary_graph(lab, n, m);
        if (bb.graph.vertex_count() < 2) {
          ++crossing_skipped;
          continue;
        }
        ++crossing_checks;
        const auto need = static_cast<std::uint64_t>(std::floor(std::sqrt(static_cast<double>(n))));
        if (edge_connectivity(bb.graph) < need) {
          res.passed = false;
          os << "[crossing fails: " << g.name() << " d=" << dim << " n=" << n << " m=" << m << "] ";
        }
      }
    }
  };
  for (int n = 1; n <= 12; ++n) crossing(2, n, {n, 2 * n, 4 * n, 8 * n, 14 * n});
  for (int n = 1; n <= 3; ++n) crossing(3, n, {n, 2 * n});

  os << "n0(2)=" << n0 << ", " << bound_checks << " cluster-bound checks (max clusters " << max_clusters
     << " <= n^2), " << telescoping_checks << " telescoping checks, " << crossing_checks << " crossing checks ("
     << crossing_skipped << " single-vertex graphs skipped)";
  res.detail = os.str();
  res.seconds = since(t0);
  return res;
}

CheckResult check_three_dependence() {
  const auto t0 = Clock::now();
  CheckResult res{"three_dependence", true, "", 0.0};
  std::uint64_t far_pairs = 0, shared_far = 0, shared_at_2 = 0;
  auto run = [&](int d, int coarse_radius, int n) {
    const auto edges = coarse_edges_in_box(d, coarse_radius, n);
    const Box frame = covering_box(edges);
    std::vector<std::pair<EdgeId, std::uint32_t>> owners;
    for (std::uint32_t i = 0; i < edges.size(); ++i)
      for (EdgeId id : coarse_edge_support(edges[i], frame)) owners.emplace_back(id, i);
    std::sort(owners.begin(), owners.end());
    // Pairs sharing at least one fine edge.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sharing;
    for (std::size_t a = 0; a < owners.size();) {
      std::size_t b = a;
      while (b < owners.size() && owners[b].first == owners[a].first) ++b;
      for (std::size_t i = a; i < b; ++i)
        for (std::size_t j = i + 1; j < b; ++j) sharing.emplace_back(owners[i].second, owners[j].second);
      a = b;
    }
    std::sort(sharing.begin(), sharing.end());
    sharing.erase(std::unique(sharing.begin(), sharing.end()), sharing.end());
    for (const auto& [i, j] : sharing) {
      const int dist = coarse_distance(edges[i], edges[j]);
      if (dist >= 3) ++shared_far;
      if (dist == 2) ++shared_at_2;
    }
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j)
        if (coarse_distance(edges[i], edges[j]) >= 3) ++far_pairs;
  };
  for (int n : {1, 2, 3}) run(2, 3, n);
  for (int n : {1, 2}) run(3, 2, n);
  res.passed = shared_far == 0;
  res.detail = std::to_string(far_pairs) + " pairs at coarse distance >= 3 (7^2 box n=1..3, 5^3 box n=1..2), " +
               std::to_string(shared_far) + " share a fine edge; " + std::to_string(shared_at_2) +
               " pairs at distance 2 do share one";
  res.seconds = since(t0);
  return res;
}

}  // namespace perc
