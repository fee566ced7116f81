#include "perc/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace perc {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("union-find too large");
  std::iota(parent_.begin(), parent_.end(), 0u);
}

bool UnionFind::unite(std::uint32_t a, std::uint32_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  --components_;
  return true;
}

ClusterLabeling label_clusters(const EdgeSet& edges) {
  const Box& box = edges.region();
  const std::uint64_t nv = box.vertex_count();
  UnionFind uf(nv);
  std::vector<std::uint64_t> stride(box.d);
  for (int i = 0; i < box.d; ++i) stride[i] = box.stride(i);
  edges.for_each([&](EdgeId id) {
    const std::uint64_t v = id / box.d;
    const int axis = static_cast<int>(id % box.d);
    uf.unite(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(v + stride[axis]));
  });

  ClusterLabeling lab;
  lab.region_ = box;
  lab.cluster_.assign(nv, 0);
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> root_id(nv, kUnset);
  for_each_box_vertex(box, [&](std::uint64_t v, const Point& p) {
    const std::uint32_t root = uf.find(static_cast<std::uint32_t>(v));
    std::uint32_t& id = root_id[root];
    const int dist = p.norm_inf();
    if (id == kUnset) {
      id = static_cast<std::uint32_t>(lab.min_dist_.size());
      lab.min_dist_.push_back(dist);
    } else {
      lab.min_dist_[id] = std::min(lab.min_dist_[id], dist);
    }
    lab.cluster_[v] = id;
  });

  const int max_dist = lab.min_dist_.empty() ? 0 : *std::max_element(lab.min_dist_.begin(), lab.min_dist_.end());
  lab.dist_cumulative_.assign(static_cast<std::size_t>(max_dist) + 1, 0);
  for (int dist : lab.min_dist_) ++lab.dist_cumulative_[dist];
  for (std::size_t k = 1; k < lab.dist_cumulative_.size(); ++k)
    lab.dist_cumulative_[k] += lab.dist_cumulative_[k - 1];
  return lab;
}

std::uint64_t ClusterLabeling::count_dist_range(long lo, long hi) const {
  const auto upto = [&](long k) -> std::uint64_t {
    if (k < 0 || dist_cumulative_.empty()) return 0;
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(k), dist_cumulative_.size() - 1);
    return dist_cumulative_[idx];
  };
  if (hi <= lo) return 0;
  return upto(hi) - upto(lo);
}

std::uint64_t count_U(const ClusterLabeling& lab, long a, long b) {
  if (a < 0 || a > b) throw std::invalid_argument("count_U needs 0 <= a <= b");
  if (b > lab.region().r) throw std::invalid_argument("count_U radius exceeds labeled region");
  return lab.count_dist_range(a == 0 ? -1 : a, b);
}

std::uint64_t count_U_real(const ClusterLabeling& lab, double a, double b) {
  if (a < 0 || a > b) throw std::invalid_argument("count_U needs 0 <= a <= b");
  // d(0,C) is an integer: a < d <=> floor(a) < d and d <= b <=> d <= floor(b).
  const long lo = a == 0.0 ? -1 : static_cast<long>(std::floor(a));
  const long hi = static_cast<long>(std::floor(b));
  if (hi > lab.region().r) throw std::invalid_argument("count_U radius exceeds labeled region");
  return lab.count_dist_range(lo, hi);
}

bool is_connected_within(const EdgeSet& edges, const Point& x, const Point& y, const Box& region) {
  const Box& outer = edges.region();
  if (!outer.contains(region)) throw std::invalid_argument("query region not inside edge-set region");
  if (!region.contains(x) || !region.contains(y)) throw std::invalid_argument("query point outside region");
  if (x == y) return true;

  const int d = region.d;
  std::vector<char> seen(region.vertex_count(), 0);
  std::vector<Point> stack{x};
  seen[region.index(x)] = 1;
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    const std::uint64_t op = outer.index(p);
    for (int axis = 0; axis < d; ++axis) {
      for (int dir : {1, -1}) {
        const Point q = p.shifted(axis, dir);
        if (!region.contains(q)) continue;
        const EdgeId e = dir > 0 ? op * d + axis : (op - outer.stride(axis)) * d + axis;
        if (!edges.contains(e)) continue;
        char& s = seen[region.index(q)];
        if (s) continue;
        if (q == y) return true;
        s = 1;
        stack.push_back(q);
      }
    }
  }
  return false;
}

bool all_pairs_connected_event(const EdgeSet& y_edges, int n) {
  const int d = y_edges.region().d;
  const Box outer(d, 2 * n);
  const Box inner(d, n);
  const EdgeSet& src = y_edges;
  const ClusterLabeling lab = src.region() == outer ? label_clusters(src) : label_clusters(restrict_to_box(src, outer));
  const std::uint32_t c0 = lab.cluster_of(inner.center);
  bool all = true;
  for_each_box_vertex(inner, [&](std::uint64_t, const Point& p) {
    if (all && lab.cluster_of(p) != c0) all = false;
  });
  return all;
}

void write_labeling_csv(std::ostream& os, const ClusterLabeling& lab) {
  const Box& box = lab.region();
  for (int i = 0; i < box.d; ++i) os << 'x' << (i + 1) << ',';
  os << "cluster_id\n";
  for_each_box_vertex(box, [&](std::uint64_t v, const Point& p) {
    for (int i = 0; i < box.d; ++i) os << p[i] << ',';
    os << lab.cluster_of(v) << '\n';
  });
}

}  // namespace perc
