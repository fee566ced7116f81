#pragma once

// Slow, obviously-correct reference implementations used to cross-check the
// fast paths. They share no code with the union-find or min-cut routines.

#include <cstdint>
#include <vector>

#include "perc/contraction.hpp"
#include "perc/edge_set.hpp"

namespace perc::reference {

// Component id per vertex by breadth-first search over decoded endpoints,
// ids numbered by lowest vertex index.
std::vector<std::uint32_t> bfs_partition(const EdgeSet& edges);

// min over nonempty proper S of the number of non-loop edges crossing S.
std::uint64_t brute_force_min_cut(const Multigraph& g);

// Edges crossing the vertex set S (flags), loops ignored.
std::uint64_t cut_size(const Multigraph& g, const std::vector<char>& in_set);

}  // namespace perc::reference
