#include "perc/oracle.hpp"

namespace perc::oracle {

LatticeOracleGraph lattice_graph(const EdgeSet& fixed, const EdgeSet& random) {
  const Box& box = fixed.region();
  if (!(random.region() == box)) throw std::invalid_argument("oracle lattice graph: region mismatch");
  LatticeOracleGraph g;
  g.vertex_count = static_cast<std::uint32_t>(box.vertex_count());
  auto as_edge = [&](EdgeId id) {
    const auto v = static_cast<std::uint32_t>(id / box.d);
    const auto w = static_cast<std::uint32_t>(v + box.stride(static_cast<int>(id % box.d)));
    return MultiEdge{v, w};
  };
  fixed.for_each([&](EdgeId id) { g.base_edges.push_back(as_edge(id)); });
  random.for_each([&](EdgeId id) {
    if (fixed.contains(id)) return;
    g.random_edges.push_back(as_edge(id));
    g.random_ids.push_back(id);
  });
  if (g.random_edges.size() > static_cast<std::size_t>(kMaxRandomEdges)) {
    throw std::invalid_argument("oracle limited to 24 random edges");
  }
  return g;
}

}  // namespace perc::oracle
