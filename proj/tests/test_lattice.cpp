#include <doctest.h>

#include <random>
#include <set>

#include "perc/lattice.hpp"

using namespace perc;

TEST_CASE("box point count and membership") {
  for (int d : {2, 3}) {
    for (int r : {0, 1, 3}) {
      const Box box(d, r);
      std::uint64_t expected = 1;
      for (int i = 0; i < d; ++i) expected *= 2 * r + 1;
      CHECK(box.vertex_count() == expected);
    }
  }
  const Box shifted(2, 2, Point{5, -1});
  CHECK(shifted.contains(Point{7, 1}));
  CHECK_FALSE(shifted.contains(Point{8, 1}));
  CHECK(shifted.on_boundary(Point{3, 0}));
  CHECK_FALSE(shifted.on_boundary(Point{5, 0}));
}

TEST_CASE("enumerate_box_edges examples") {
  CHECK(enumerate_box_edges(Box(2, 0)).empty());
  CHECK(enumerate_box_edges(Box(2, 1)).size() == 12);

  // Brute-force adjacency over the 27 points of the 3x3x3 cube.
  const Box cube(3, 1);
  std::vector<Point> pts;
  for (std::uint64_t v = 0; v < cube.vertex_count(); ++v) pts.push_back(cube.point(v));
  std::size_t adjacent = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      int l1 = 0;
      for (int k = 0; k < 3; ++k) l1 += std::abs(pts[i][k] - pts[j][k]);
      if (l1 == 1) ++adjacent;
    }
  CHECK(adjacent == 54);
  CHECK(enumerate_box_edges(cube).size() == adjacent);

  CHECK_THROWS_AS(Box(1, 3), std::invalid_argument);
}

TEST_CASE("edge count matches closed form, codec round-trips exhaustively") {
  for (int d : {2, 3}) {
    for (int r = 0; r <= 8; ++r) {
      const Box box(d, r);
      const auto edges = enumerate_box_edges(box);
      std::uint64_t closed = static_cast<std::uint64_t>(d) * 2 * r;
      for (int i = 0; i < d - 1; ++i) closed *= 2 * r + 1;
      REQUIRE(edges.size() == closed);
      std::set<std::pair<Point, Point>> seen;
      for (EdgeId id : edges) {
        const auto [a, b] = box.endpoints(id);
        REQUIRE(linf_distance(a, b) == 1);
        int differing = 0;
        for (int i = 0; i < d; ++i) differing += a[i] != b[i];
        REQUIRE(differing == 1);
        REQUIRE(box.edge_between(a, b) == id);
        REQUIRE(box.edge_between(b, a) == id);
        REQUIRE(seen.insert({a, b}).second);
      }
    }
  }
}

TEST_CASE("vertex index round-trips on an off-center box") {
  const Box box(3, 2, Point{1, -4, 7});
  for (std::uint64_t v = 0; v < box.vertex_count(); ++v) REQUIRE(box.index(box.point(v)) == v);
  CHECK_THROWS_AS(box.index(Point{10, 0, 0}), std::out_of_range);
}

TEST_CASE("in_annulus examples") {
  const Annulus a(2, 1, 3);
  CHECK(in_annulus(Point{2, 0}, a));
  CHECK_FALSE(in_annulus(Point{1, 1}, a));
  CHECK(in_annulus(Point{3, 3}, a));
  CHECK_FALSE(in_annulus(Point{4, 0}, a));
  CHECK_THROWS_AS(Annulus(2, 3, 3), std::invalid_argument);
}

TEST_CASE("box and annulus membership agree with coordinate comparison") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> coord(-12, 12);
  std::uniform_int_distribution<int> rad(0, 8);
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = trial % 2 ? 3 : 2;
    Point p(d), c(d);
    for (int i = 0; i < d; ++i) p[i] = coord(gen), c[i] = coord(gen);
    const int r = rad(gen);
    bool inside = true;
    for (int i = 0; i < d; ++i) inside = inside && std::abs(p[i] - c[i]) <= r;
    REQUIRE(Box(d, r, c).contains(p) == inside);

    int m = 0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(p[i]));
    const Annulus a(d, r, r + 1 + rad(gen));
    REQUIRE(a.contains(p) == (m > a.inner && m <= a.outer));
  }
}

TEST_CASE("annulus equals box difference") {
  for (int d : {2, 3}) {
    const Annulus a(d, 1, 3);
    const Box outer(d, 3), inner(d, 1);
    for (std::uint64_t v = 0; v < outer.vertex_count(); ++v) {
      const Point p = outer.point(v);
      REQUIRE(a.contains(p) == !inner.contains(p));
    }
  }
}

TEST_CASE("min_n0") {
  // (32n+1)^2 - (32n-1)^2 = 128n < n^2 from n = 129 on.
  CHECK(min_n0(2) == 129);
  // (48n+1)^3 - (48n-1)^3 = 13824 n^2 + 2 < n^3 from n = 13825 on.
  CHECK(min_n0(3) == 13825);
  for (int d : {2, 3}) {
    const int n0 = min_n0(d);
    std::uint64_t pw = 1, pw_prev = 1;
    for (int i = 0; i < d; ++i) pw *= n0, pw_prev *= (n0 - 1);
    CHECK(boundary_size(d, 8 * d * n0) < pw);
    CHECK(boundary_size(d, 8 * d * (n0 - 1)) >= pw_prev);
  }
  CHECK(boundary_size(2, 0) == 1);
  CHECK(boundary_size(2, 1) == 8);
}

TEST_CASE("box json round trip") {
  const Box box(3, 4, Point{1, 2, 3});
  CHECK(box_from_json(to_json(box)) == box);
  CHECK(box_from_json(nlohmann::json{{"d", 2}, {"r", 5}}) == Box(2, 5));
}
