#include "perc/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "perc/rng.hpp"

namespace perc {

Multigraph::Multigraph(std::uint32_t vertex_count) : vertex_count_(vertex_count) {}

std::uint32_t Multigraph::add_edge(std::uint32_t u, std::uint32_t v, std::uint32_t multiplicity) {
  if (u >= vertex_count_ || v >= vertex_count_) throw std::out_of_range("multigraph edge endpoint out of range");
  const auto first = static_cast<std::uint32_t>(edges_.size());
  for (std::uint32_t i = 0; i < multiplicity; ++i) edges_.push_back({std::min(u, v), std::max(u, v)});
  return first;
}

std::optional<std::uint32_t> Multigraph::vertex_of_cluster(std::uint32_t cluster) const {
  if (cluster >= cluster_vertex_.size() || cluster_vertex_[cluster] == std::numeric_limits<std::uint32_t>::max()) {
    return std::nullopt;
  }
  return cluster_vertex_[cluster];
}

std::size_t Multigraph::loop_count() const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [](const MultiEdge& e) { return e.is_loop(); }));
}

std::optional<std::uint32_t> Multigraph::image_of(EdgeId lattice_edge) const {
  auto it = std::lower_bound(origin_.begin(), origin_.end(), lattice_edge,
                             [](const auto& entry, EdgeId id) { return entry.first < id; });
  if (it == origin_.end() || it->first != lattice_edge) return std::nullopt;
  return it->second;
}

EdgeMask Multigraph::mask_of(const EdgeSet& lattice_edges) const {
  if (!origin_.empty() && !(lattice_edges.region() == origin_region_))
    throw std::invalid_argument("mask_of: edge set must live on the contracted region");
  EdgeMask mask(edges_.size(), 0);
  for (const auto& [id, e] : origin_)
    if (lattice_edges.contains(id)) mask[e] = 1;
  return mask;
}

Multigraph Multigraph::without_loops() const {
  Multigraph g(vertex_count_);
  for (const auto& e : edges_)
    if (!e.is_loop()) g.edges_.push_back(e);
  return g;
}

std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>> Multigraph::multiplicities() const {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> agg;
  for (const auto& e : edges_)
    if (!e.is_loop()) ++agg[{e.u, e.v}];
  return {agg.begin(), agg.end()};
}

std::uint32_t component_count(const Multigraph& g, const EdgeMask& open) {
  if (open.size() != g.edge_count()) throw std::invalid_argument("edge mask size differs from edge count");
  UnionFind uf(g.vertex_count());
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (open[i]) uf.unite(edges[i].u, edges[i].v);
  return static_cast<std::uint32_t>(uf.components());
}

std::uint32_t component_count(const Multigraph& g) { return component_count(g, EdgeMask(g.edge_count(), 1)); }

std::uint64_t edge_connectivity(const Multigraph& g) {
  const std::uint32_t n = g.vertex_count();
  if (n < 2) throw std::invalid_argument("edge connectivity needs at least two vertices");
  if (component_count(g) > 1) return 0;

  // Stoer-Wagner on aggregated weights with sparse adjacency.
  std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> adj(n);
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    ++adj[e.u][e.v];
    ++adj[e.v][e.u];
  }
  std::vector<char> alive(n, 1);
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> key(n);
  std::vector<char> added(n);

  for (std::uint32_t phase = 0; phase + 1 < n; ++phase) {
    std::fill(key.begin(), key.end(), 0);
    std::fill(added.begin(), added.end(), 0);
    using Entry = std::pair<std::uint64_t, std::uint32_t>;
    std::priority_queue<Entry> heap;
    std::uint32_t start = 0;
    while (!alive[start]) ++start;
    heap.push({0, start});
    std::uint32_t prev = start, last = start;
    const std::uint32_t remaining = n - phase;
    for (std::uint32_t step = 0; step < remaining; ++step) {
      std::uint32_t v;
      for (;;) {
        if (heap.empty()) {
          // Unreachable for connected graphs; guard anyway.
          v = 0;
          while (!alive[v] || added[v]) ++v;
          break;
        }
        auto [k, cand] = heap.top();
        heap.pop();
        if (!added[cand] && k == key[cand]) {
          v = cand;
          break;
        }
      }
      added[v] = 1;
      prev = last;
      last = v;
      for (const auto& [w, wt] : adj[v]) {
        if (!alive[w] || added[w]) continue;
        key[w] += wt;
        heap.push({key[w], w});
      }
    }
    best = std::min(best, key[last]);
    // Merge `last` into `prev`.
    for (const auto& [w, wt] : adj[last]) {
      if (w == prev) continue;
      adj[prev][w] += wt;
      adj[w][prev] += wt;
      adj[w].erase(last);
    }
    adj[prev].erase(last);
    adj[last].clear();
    alive[last] = 0;
  }
  return best;
}

Multigraph contract_clusters(const Box& region, const ClusterLabeling& lab,
                             const std::vector<std::vector<std::uint32_t>>& merge_groups) {
  const Box& lab_box = lab.region();
  if (!lab_box.contains(region)) throw std::invalid_argument("contraction region not inside labeled region");

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  // cluster -> group representative (cluster id of the group's first member).
  std::vector<std::uint32_t> group(lab.cluster_count());
  for (std::uint32_t c = 0; c < group.size(); ++c) group[c] = c;
  std::vector<char> grouped(lab.cluster_count(), 0);
  for (const auto& members : merge_groups) {
    if (members.empty()) continue;
    for (std::uint32_t c : members) {
      if (c >= lab.cluster_count()) throw std::invalid_argument("merge group names unknown cluster " + std::to_string(c));
      if (grouped[c]) throw std::invalid_argument("merge groups are not disjoint");
      grouped[c] = 1;
      group[c] = members.front();
    }
  }

  std::vector<std::uint32_t> vertex_of_group(lab.cluster_count(), kNone);
  std::vector<std::uint32_t> vertex_of(region.vertex_count());
  std::uint32_t next = 0;
  const bool same_box = lab_box == region;
  for_each_box_vertex(region, [&](std::uint64_t v, const Point& p) {
    const std::uint32_t c = group[same_box ? lab.cluster_of(v) : lab.cluster_of(p)];
    if (vertex_of_group[c] == kNone) vertex_of_group[c] = next++;
    vertex_of[v] = vertex_of_group[c];
  });

  Multigraph g(next);
  g.cluster_vertex_.assign(lab.cluster_count(), kNone);
  for (std::uint32_t c = 0; c < group.size(); ++c) g.cluster_vertex_[c] = vertex_of_group[group[c]];
  g.edges_.reserve(region.edge_count());
  g.origin_region_ = region;
  g.origin_.reserve(region.edge_count());
  for_each_box_edge(region, [&](EdgeId id, const Point&, int axis) {
    const std::uint64_t v = id / region.d;
    const std::uint32_t a = vertex_of[v];
    const std::uint32_t b = vertex_of[v + region.stride(axis)];
    g.origin_.emplace_back(id, static_cast<std::uint32_t>(g.edges_.size()));
    g.edges_.push_back({std::min(a, b), std::max(a, b)});
  });
  return g;
}

int radius_plus_sqrt(int m, int k, int n) {
  if (n < 0 || k < 0) throw std::invalid_argument("radius_plus_sqrt needs non-negative arguments");
  // floor(k sqrt n) = floor(sqrt(k^2 n)), exact integer square root.
  const std::uint64_t target = static_cast<std::uint64_t>(k) * k * static_cast<std::uint64_t>(n);
  auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(target)));
  while (s * s > target) --s;
  while ((s + 1) * (s + 1) <= target) ++s;
  return m + static_cast<int>(s);
}

BulkBoundaryGraph build_bulk_boundary_graph(const EdgeSet& x_edges, int n, int m) {
  return build_bulk_boundary_graph(label_clusters(x_edges), n, m);
}

BulkBoundaryGraph build_bulk_boundary_graph(const ClusterLabeling& lab, int n, int m) {
  const Box& big = lab.region();
  const int d = big.d;
  if (!(big == Box(d, 8 * d * n))) throw std::invalid_argument("labeling must live on Lambda_{8dn}");
  const int r1 = radius_plus_sqrt(m, 1, n);
  const int r2 = radius_plus_sqrt(m, 2, n);
  if (!(1 <= n && n <= m && r1 <= 8 * d * n)) {
    throw std::invalid_argument("need 1 <= n <= m <= m + sqrt(n) <= 8dn");
  }

  BulkBoundaryGraph out;
  const bool first_case = count_U(lab, m, r1) == 0;
  if (!first_case && r2 > 8 * d * n) {
    throw std::invalid_argument("m + 2 sqrt(n) exceeds Lambda_{8dn} while boundary clusters are present");
  }
  if (first_case) {
    out.region = Box(d, r1);
    out.graph = contract_clusters(out.region, lab);
    out.bulk_clusters = count_U(lab, 0, m);
    return out;
  }

  out.region = Box(d, r2);
  out.merged_boundary = true;
  std::vector<std::uint32_t> boundary;
  for (std::uint32_t c = 0; c < lab.cluster_count(); ++c) {
    const int dist = lab.cluster_min_dist(c);
    if (dist <= m) {
      ++out.bulk_clusters;
    } else if (dist <= r2) {
      boundary.push_back(c);
    }
  }
  out.boundary_clusters = boundary.size();
  out.graph = contract_clusters(out.region, lab, {boundary});
  out.boundary_vertex = out.graph.vertex_of_cluster(boundary.front());
  return out;
}

EdgeMask sample_multigraph_edges(const Multigraph& g, double eps, std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t key = rng::combine(rng::stream_key(seed, stream), rng::kMultigraphTag);
  EdgeMask mask(g.edge_count());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = rng::uniform(key, i) < eps ? 1 : 0;
  return mask;
}

std::uint32_t sprinkle_multigraph_trial(const Multigraph& g, double eps, std::uint64_t seed, std::uint64_t stream) {
  return component_count(g, sample_multigraph_edges(g, eps, seed, stream));
}

bool shrink_exceeds(std::uint64_t k_after, std::uint64_t k_base, std::uint64_t n_conn) {
  if (k_after <= 1) return false;
  using u128 = unsigned __int128;
  return static_cast<u128>(k_after) * k_after * n_conn > static_cast<u128>(k_base) * k_base;
}

bool shrink_event(const Multigraph& g, const EdgeMask& base, double eps4d, std::uint64_t n_conn,
                  std::uint64_t seed, std::uint64_t stream) {
  if (n_conn < 1) throw std::invalid_argument("shrink_event needs N >= 1");
  const std::uint32_t k_base = component_count(g, base);
  EdgeMask open = sample_multigraph_edges(g, eps4d, seed, stream);
  for (std::size_t i = 0; i < open.size(); ++i) open[i] |= base[i];
  return shrink_exceeds(component_count(g, open), k_base, n_conn);
}

std::vector<std::uint32_t> iterated_sprinkle(const Multigraph& g, const EdgeMask& base, double rate, int rounds,
                                             std::uint64_t seed, std::uint64_t stream) {
  EdgeMask open = base;
  std::vector<std::uint32_t> ks{component_count(g, open)};
  for (int k = 1; k <= rounds; ++k) {
    const EdgeMask omega = sample_multigraph_edges(g, rate, rng::combine(seed, static_cast<std::uint64_t>(k)), stream);
    for (std::size_t i = 0; i < open.size(); ++i) open[i] |= omega[i];
    ks.push_back(component_count(g, open));
  }
  return ks;
}

void write_multigraph(std::ostream& os, const Multigraph& g) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> agg;
  for (const auto& e : g.edges()) ++agg[{e.u, e.v}];
  os << "p mg " << g.vertex_count() << ' ' << agg.size() << '\n';
  for (const auto& [uv, mult] : agg) os << uv.first << ' ' << uv.second << ' ' << mult << '\n';
}

Multigraph read_multigraph(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != 'c') return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("multigraph: missing header");
  std::istringstream hs(line);
  std::string p, mg;
  std::uint64_t nv = 0, ne = 0;
  if (!(hs >> p >> mg >> nv >> ne) || p != "p" || mg != "mg") throw std::runtime_error("multigraph: bad header");
  Multigraph g(static_cast<std::uint32_t>(nv));
  for (std::uint64_t i = 0; i < ne; ++i) {
    if (!next_line()) throw std::runtime_error("multigraph: expected " + std::to_string(ne) + " edge lines");
    std::istringstream ls(line);
    std::uint64_t u = 0, v = 0, mult = 0;
    if (!(ls >> u >> v >> mult)) throw std::runtime_error("multigraph: bad edge line '" + line + "'");
    if (u >= nv || v >= nv) throw std::runtime_error("multigraph: endpoint out of range");
    g.add_edge(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(mult));
  }
  return g;
}

}  // namespace perc
