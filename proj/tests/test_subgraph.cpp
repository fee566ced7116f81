#include <doctest.h>

#include <sstream>

#include "perc/connectivity.hpp"
#include "perc/subgraph.hpp"

using namespace perc;

namespace {

bool has(const Subgraph& g, Point a, Point b) {
  const Box box(a.d, 16);
  return g.contains_edge(box, box.edge_between(a, b));
}

// Test double: axis_foliation with the two edges at the origin removed.
Subgraph isolated_origin(const Box& box) {
  EdgeSet e = Subgraph::axis_foliation(2, 1).edges_in_region(box);
  e.erase(box.edge_between(Point{0, 0}, Point{1, 0}));
  e.erase(box.edge_between(Point{-1, 0}, Point{0, 0}));
  return Subgraph::explicit_edges(std::move(e));
}

}  // namespace

TEST_CASE("contains_edge examples") {
  const auto fol = Subgraph::axis_foliation(2, 1);
  CHECK(has(fol, {0, 0}, {1, 0}));
  CHECK_FALSE(has(fol, {0, 0}, {0, 1}));

  const auto comb = Subgraph::comb(2, 1);
  CHECK(has(comb, {5, 0}, {6, 0}));
  CHECK(has(comb, {5, 3}, {5, 4}));
  CHECK_FALSE(has(comb, {5, 3}, {6, 3}));
}

TEST_CASE("edges_in_region examples") {
  CHECK(Subgraph::axis_foliation(2, 1).edges_in_region(Box(2, 1)).size() == 6);

  // Comb rule on the 3x3 grid: horizontal edges only on y = 0, all vertical.
  const Box box(2, 1);
  std::uint64_t expected = 0;
  for (EdgeId id : enumerate_box_edges(box)) {
    const auto [a, b] = box.endpoints(id);
    const bool horizontal = a[1] == b[1];
    if (!horizontal || a[1] == 0) ++expected;
  }
  CHECK(expected == 8);
  CHECK(Subgraph::comb(2, 1).edges_in_region(box).size() == expected);

  const auto forest = Subgraph::random_forest(2, 99);
  const Box big(2, 12);
  CHECK(forest.edges_in_region(big) == forest.edges_in_region(big));
  CHECK_FALSE(Subgraph::random_forest(2, 100).edges_in_region(big) == forest.edges_in_region(big));
}

TEST_CASE("generator contains() agrees with edges_in_region on shifted boxes") {
  for (const auto& g : bundled_generators(3)) {
    const Box box(3, 3, Point{2, -1, 5});
    const EdgeSet e = g.edges_in_region(box);
    for (EdgeId id : enumerate_box_edges(box)) REQUIRE(e.contains(id) == g.contains_edge(box, id));
  }
}

TEST_CASE("deterministic generators give every vertex an incident edge") {
  for (int d : {2, 3}) {
    for (const auto& g : bundled_generators(d)) {
      const Box box(d, d == 2 ? 10 : 4);
      const EdgeSet e = g.edges_in_region(Box(d, box.r + 1));
      std::vector<int> degree(box.vertex_count(), 0);
      const Box wide(d, box.r + 1);
      e.for_each([&](EdgeId id) {
        const auto [a, b] = wide.endpoints(id);
        if (box.contains(a)) ++degree[box.index(a)];
        if (box.contains(b)) ++degree[box.index(b)];
      });
      for (int deg : degree) REQUIRE(deg >= 1);
    }
  }
}

TEST_CASE("random forest has no cycles") {
  for (int d : {2, 3}) {
    const Box box(d, d == 2 ? 20 : 6);
    const EdgeSet e = Subgraph::random_forest(d, 5).edges_in_region(box);
    const auto lab = label_clusters(e);
    CHECK(e.size() == box.vertex_count() - lab.cluster_count());
  }
}

TEST_CASE("everywhere-percolating proxy") {
  CHECK(verify_everywhere_percolating_proxy(Subgraph::axis_foliation(2, 1), Box(2, 7)));
  CHECK(verify_everywhere_percolating_proxy(Subgraph::axis_foliation(3, 2), Box(3, 4)));
  CHECK_FALSE(verify_everywhere_percolating_proxy(isolated_origin(Box(2, 5)), Box(2, 5)));
  for (int r = 0; r <= 16; ++r) REQUIRE(verify_everywhere_percolating_proxy(Subgraph::comb(2, 1), Box(2, r)));
}

TEST_CASE("bundled generators pass the proxy for every r <= 32 in d = 2") {
  for (const auto& g : bundled_generators(2))
    for (int r = 0; r <= 32; ++r) REQUIRE(verify_everywhere_percolating_proxy(g, Box(2, r)));
}

TEST_CASE("shifted lines with adversarial offsets pass the proxy") {
  const std::vector<std::vector<int>> patterns{{0}, {0, 1}, {-1, 0, 1}, {1000}, {3, -3, 0, 2, -2, 1, -1}};
  for (const auto& offsets : patterns) {
    for (std::uint64_t salt : {0ull, 1ull, 77ull}) {
      const auto g = Subgraph::shifted_lines(2, 1, offsets, salt);
      for (int r : {0, 1, 2, 5, 16}) REQUIRE(verify_everywhere_percolating_proxy(g, Box(2, r)));
      REQUIRE(verify_everywhere_percolating_proxy(Subgraph::shifted_lines(3, 2, offsets, salt), Box(3, 4)));
    }
  }
  // Cuts make it non-translation-invariant.
  const auto g = Subgraph::shifted_lines(2, 1, {0, 3, -5}, 11);
  const Box box(2, 10);
  CHECK(g.edges_in_region(box).size() < Subgraph::axis_foliation(2, 1).edges_in_region(box).size());
}

TEST_CASE("edge list file format") {
  const Box box(2, 2);
  std::istringstream in("# custom X\n0 0 : 1 0\n1 0 : 1 1   # vertical\n\n-2 -2 : -2 -1\n");
  const EdgeSet e = read_edge_list(in, box);
  CHECK(e.size() == 3);
  CHECK(e.contains_between(Point{1, 1}, Point{1, 0}));
  std::ostringstream out;
  write_edge_list(out, e);
  std::istringstream again(out.str());
  CHECK(read_edge_list(again, box) == e);

  std::istringstream bad("0 0 : 2 0\n");
  CHECK_THROWS(read_edge_list(bad, box));
  std::istringstream outside("2 2 : 3 2\n");
  CHECK_THROWS(read_edge_list(outside, box));
  std::istringstream short_line("0 : 1 0\n");
  CHECK_THROWS(read_edge_list(short_line, box));

  const auto x = Subgraph::explicit_edges(e);
  CHECK(x.support().has_value());
  CHECK(x.contains(Point{0, 0}, 0));
  CHECK_FALSE(x.contains(Point{5, 0}, 0));
}

TEST_CASE("descriptor json") {
  for (const auto& g : bundled_generators(2)) {
    const auto j = to_json(g);
    const auto back = subgraph_from_json(j, 2);
    CHECK(back.name() == g.name());
    CHECK(back.edges_in_region(Box(2, 6)) == g.edges_in_region(Box(2, 6)));
  }
  CHECK_THROWS(subgraph_from_json(nlohmann::json{{"kind", "spiral"}}, 2));
  CHECK_THROWS(subgraph_from_json(nlohmann::json{{"kind", "axis_foliation"}, {"params", {{"axis", 3}}}}, 2));
}
