#include "perc/reference.hpp"

#include <deque>
#include <limits>
#include <stdexcept>

namespace perc::reference {

std::vector<std::uint32_t> bfs_partition(const EdgeSet& edges) {
  const Box& box = edges.region();
  const std::uint64_t nv = box.vertex_count();
  std::vector<std::vector<std::uint64_t>> adj(nv);
  for (EdgeId id : edges.to_vector()) {
    const auto [a, b] = box.endpoints(id);
    adj[box.index(a)].push_back(box.index(b));
    adj[box.index(b)].push_back(box.index(a));
  }
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> comp(nv, kUnseen);
  std::uint32_t next = 0;
  for (std::uint64_t s = 0; s < nv; ++s) {
    if (comp[s] != kUnseen) continue;
    std::deque<std::uint64_t> queue{s};
    comp[s] = next;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (auto w : adj[v]) {
        if (comp[w] == kUnseen) {
          comp[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::uint64_t cut_size(const Multigraph& g, const std::vector<char>& in_set) {
  std::uint64_t c = 0;
  for (const auto& e : g.edges())
    if (!e.is_loop() && in_set[e.u] != in_set[e.v]) ++c;
  return c;
}

std::uint64_t brute_force_min_cut(const Multigraph& g) {
  const std::uint32_t n = g.vertex_count();
  if (n < 2) throw std::invalid_argument("min cut needs at least two vertices");
  if (n > 24) throw std::invalid_argument("brute-force min cut limited to 24 vertices");
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::vector<char> in_set(n);
  // Vertex n-1 always outside S; every other subset is a candidate S.
  const std::uint64_t limit = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    for (std::uint32_t v = 0; v < n; ++v) in_set[v] = v + 1 < n && ((mask >> v) & 1u);
    best = std::min(best, cut_size(g, in_set));
  }
  return best;
}

}  // namespace perc::reference
