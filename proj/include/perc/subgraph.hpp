#pragma once

// Everywhere-percolating subgraphs X of Z^d.
//
// Descriptors use 1-based coordinate axes ("axis 1" is the first coordinate);
// lattice code elsewhere is 0-based.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "perc/edge_set.hpp"
#include "perc/lattice.hpp"

namespace perc {

// All lines parallel to `axis`.
struct AxisFoliation {
  int axis = 1;
};

// Spanning tree of Z^d: an edge along the k-th axis of the order
// (spine_axis, remaining axes ascending) is present iff every coordinate
// later in that order vanishes. In d = 2 with spine_axis = 1 this is the
// horizontal axis plus every vertical line.
struct Comb {
  int spine_axis = 1;
};

// Lines parallel to `axis`, each cut once: the line through transverse
// position h loses the edge starting at coordinate offset(h), leaving two
// infinite half-lines. offset(h) is drawn from `offsets` by a hash of h, so
// the family is not translation invariant.
struct ShiftedLines {
  int axis = 1;
  std::vector<int> offsets{0};
  std::uint64_t salt = 0;
};

// Every vertex v links to one neighbour of strictly larger L-inf norm, chosen
// by a seeded hash of v. Parents are unique, so there are no cycles, and every
// component contains an outward ray.
struct RandomForest {
  std::uint64_t seed = 0;
};

// Explicit X restricted to a box; edges outside the box are absent.
struct ExplicitEdges {
  std::shared_ptr<const EdgeSet> edges;
};

class Subgraph {
 public:
  using Kind = std::variant<AxisFoliation, Comb, ShiftedLines, RandomForest, ExplicitEdges>;

  Subgraph(int d, Kind kind);

  static Subgraph axis_foliation(int d, int axis);
  static Subgraph comb(int d, int spine_axis);
  static Subgraph shifted_lines(int d, int axis, std::vector<int> offsets, std::uint64_t salt = 0);
  static Subgraph random_forest(int d, std::uint64_t seed);
  static Subgraph explicit_edges(EdgeSet edges);

  int dim() const { return d_; }
  const Kind& kind() const { return kind_; }
  std::string name() const;
  // Box outside of which the generator is undefined; nullopt means all of Z^d.
  std::optional<Box> support() const;

  // Edge {a, a + e_axis}, axis 0-based.
  bool contains(const Point& a, int axis) const;
  bool contains_edge(const Box& box, EdgeId e) const;

  EdgeSet edges_in_region(const Box& box) const;

 private:
  int d_;
  Kind kind_;
};

// Every X-cluster of the box touches the box boundary layer.
bool verify_everywhere_percolating_proxy(const Subgraph& g, const Box& box);

// Descriptor JSON {kind, params, seed?}.
nlohmann::json to_json(const Subgraph& g);
Subgraph subgraph_from_json(const nlohmann::json& j, int d);

// One edge per line, "x1 .. xd : y1 .. yd"; '#' starts a comment.
EdgeSet read_edge_list(std::istream& is, const Box& region);
void write_edge_list(std::ostream& os, const EdgeSet& edges);

// The generators used by the experiment and verification suites.
std::vector<Subgraph> bundled_generators(int d);

}  // namespace perc
