#pragma once

// Multigraphs built by contracting lattice clusters, and the sprinkling
// machinery that runs on them.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "perc/connectivity.hpp"
#include "perc/edge_set.hpp"
#include "perc/lattice.hpp"

namespace perc {

struct MultiEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  bool is_loop() const { return u == v; }
};

// Open-edge subsets are byte masks indexed like Multigraph::edges().
using EdgeMask = std::vector<std::uint8_t>;

class Multigraph {
 public:
  Multigraph() = default;
  explicit Multigraph(std::uint32_t vertex_count);

  std::uint32_t add_edge(std::uint32_t u, std::uint32_t v, std::uint32_t multiplicity = 1);

  std::uint32_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<MultiEdge>& edges() const { return edges_; }
  std::size_t loop_count() const;

  // Lattice edge -> multigraph edge, sorted by lattice id.
  const std::vector<std::pair<EdgeId, std::uint32_t>>& origin_map() const { return origin_; }
  std::optional<std::uint32_t> image_of(EdgeId lattice_edge) const;
  // Multigraph vertex holding a contracted cluster, if it meets the region.
  std::optional<std::uint32_t> vertex_of_cluster(std::uint32_t cluster) const;
  // Mask of the images of a lattice edge set on the contracted region.
  EdgeMask mask_of(const EdgeSet& lattice_edges) const;

  // Copy with loops dropped (origin map cleared).
  Multigraph without_loops() const;
  // Aggregated (u < v, multiplicity) lists, loops excluded.
  std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>> multiplicities() const;

 private:
  friend Multigraph contract_clusters(const Box&, const ClusterLabeling&,
                                      const std::vector<std::vector<std::uint32_t>>&);

  std::uint32_t vertex_count_ = 0;
  std::vector<MultiEdge> edges_;
  std::vector<std::pair<EdgeId, std::uint32_t>> origin_;
  Box origin_region_;
  std::vector<std::uint32_t> cluster_vertex_;
};

// K(open): components of (V, open edges).
std::uint32_t component_count(const Multigraph& g, const EdgeMask& open);
std::uint32_t component_count(const Multigraph& g);

// Global minimum edge cut counting multiplicity (Stoer-Wagner); 0 when g is
// disconnected. Requires at least two vertices.
std::uint64_t edge_connectivity(const Multigraph& g);

// Contracts the region's lattice graph: vertices in the same cluster of `lab`,
// or in clusters of the same merge group, become one vertex. Vertex ids are
// assigned in order of first appearance along the region's vertex order.
Multigraph contract_clusters(const Box& region, const ClusterLabeling& lab,
                             const std::vector<std::vector<std::uint32_t>>& merge_groups = {});

struct BulkBoundaryGraph {
  Multigraph graph;
  Box region;
  // U_{m, m + sqrt n}(X) > 0: boundary clusters merged into one vertex.
  bool merged_boundary = false;
  std::optional<std::uint32_t> boundary_vertex;
  std::uint64_t bulk_clusters = 0;
  std::uint64_t boundary_clusters = 0;
};

// x_edges lives on Lambda_{8dn}. With U_{m,m+sqrt n}(X) = 0, contracts the
// clusters of X on Lambda_{m + sqrt n}; otherwise works on Lambda_{m + 2 sqrt n},
// contracting each bulk cluster (meeting Lambda_m) and the union of all
// boundary clusters into single vertices. Radii m + k sqrt n are floored.
BulkBoundaryGraph build_bulk_boundary_graph(const EdgeSet& x_edges, int n, int m);
// Same, from a labeling already computed on Lambda_{8dn}.
BulkBoundaryGraph build_bulk_boundary_graph(const ClusterLabeling& x_lab, int n, int m);

// floor(m + k sqrt n) computed exactly.
int radius_plus_sqrt(int m, int k, int n);

// Opens each multigraph edge independently with probability eps.
EdgeMask sample_multigraph_edges(const Multigraph& g, double eps, std::uint64_t seed, std::uint64_t stream = 0);
std::uint32_t sprinkle_multigraph_trial(const Multigraph& g, double eps, std::uint64_t seed, std::uint64_t stream = 0);

// K > max(1, K_base / sqrt N), compared exactly as K > 1 and K^2 N > K_base^2.
bool shrink_exceeds(std::uint64_t k_after, std::uint64_t k_base, std::uint64_t n_conn);

// Samples omega_1 at rate eps4d and tests K(base u omega_1) > max(1, K(base)/sqrt N).
bool shrink_event(const Multigraph& g, const EdgeMask& base, double eps4d, std::uint64_t n_conn,
                  std::uint64_t seed, std::uint64_t stream = 0);

// The rounds eta_1 .. eta_rounds of independent rate-`rate` sprinkles;
// returns K(eta_0 = base), K(eta_1), ..., K(eta_rounds).
std::vector<std::uint32_t> iterated_sprinkle(const Multigraph& g, const EdgeMask& base, double rate, int rounds,
                                             std::uint64_t seed, std::uint64_t stream = 0);

// Text format: header "p mg <vertices> <edge-lines>", then "u v multiplicity".
void write_multigraph(std::ostream& os, const Multigraph& g);
Multigraph read_multigraph(std::istream& is);

}  // namespace perc
