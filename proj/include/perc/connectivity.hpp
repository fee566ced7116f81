#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "perc/edge_set.hpp"
#include "perc/lattice.hpp"

namespace perc {

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Returns false when already joined.
  bool unite(std::uint32_t a, std::uint32_t b);
  std::size_t components() const { return components_; }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t components_;
};

// Clusters of an edge set inside its region. Cluster ids are dense and
// numbered in order of their lowest vertex index, so two labelings of the same
// partition are identical.
class ClusterLabeling {
 public:
  const Box& region() const { return region_; }
  std::uint32_t cluster_of(std::uint64_t vertex) const { return cluster_[vertex]; }
  std::uint32_t cluster_of(const Point& p) const { return cluster_[region_.index(p)]; }
  std::uint32_t cluster_count() const { return static_cast<std::uint32_t>(min_dist_.size()); }
  // min over v in C of ||v||_inf (distance from the origin, not the region center).
  int cluster_min_dist(std::uint32_t c) const { return min_dist_[c]; }
  const std::vector<std::uint32_t>& clusters() const { return cluster_; }

  // Number of clusters with lo < d(0,C) <= hi; lo may be negative.
  std::uint64_t count_dist_range(long lo, long hi) const;

 private:
  friend ClusterLabeling label_clusters(const EdgeSet& edges);

  Box region_;
  std::vector<std::uint32_t> cluster_;
  std::vector<int> min_dist_;
  // dist_cumulative_[k] = #clusters with d(0,C) <= k.
  std::vector<std::uint64_t> dist_cumulative_;
};

ClusterLabeling label_clusters(const EdgeSet& edges);

// U_{a,b}: a > 0 counts clusters with a < d(0,C) <= b; a = 0 counts d(0,C) <= b.
std::uint64_t count_U(const ClusterLabeling& lab, long a, long b);
// Same with real radii (e.g. m + 2i sqrt(n)); a == 0.0 selects the a = 0 form.
std::uint64_t count_U_real(const ClusterLabeling& lab, double a, double b);

// x and y joined by a path of edges whose vertices all lie in `region`;
// `region` must be inside edges.region().
bool is_connected_within(const EdgeSet& edges, const Point& x, const Point& y, const Box& region);

// Every vertex of Lambda_n is connected to every other inside Lambda_{2n}.
// y_edges must live on a region containing Lambda_{2n}.
bool all_pairs_connected_event(const EdgeSet& y_edges, int n);

// CSV "x1,..,xd,cluster_id" for debugging.
void write_labeling_csv(std::ostream& os, const ClusterLabeling& lab);

}  // namespace perc
