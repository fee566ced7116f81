#pragma once

// Geometry of the hypercubic lattice Z^d restricted to finite boxes.
//
// A Box is the L-infinity ball Lambda_r(center). Vertices inside a box are
// indexed in mixed radix (coordinate 0 fastest). An EdgeId encodes the edge
// from vertex v in the +axis direction as v * d + axis; ids whose far
// endpoint leaves the box are not edges of the box.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace perc {

inline constexpr int kMaxDim = 4;

using EdgeId = std::uint64_t;

struct Point {
  int d = 0;
  std::array<int, kMaxDim> x{};

  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<int> coords);

  int& operator[](int i) { return x[i]; }
  int operator[](int i) const { return x[i]; }

  int norm_inf() const;
  Point shifted(int axis, int delta) const;

  friend bool operator==(const Point& a, const Point& b);
  friend bool operator<(const Point& a, const Point& b);
  friend Point operator+(const Point& a, const Point& b);
  friend Point operator*(int k, const Point& a);
};

int linf_distance(const Point& a, const Point& b);
std::string to_string(const Point& p);

struct Box {
  int d = 2;
  int r = 0;
  Point center;

  Box() = default;
  // Centered at the origin.
  Box(int dim, int radius);
  Box(int dim, int radius, Point c);

  int side() const { return 2 * r + 1; }
  std::uint64_t vertex_count() const;
  // Number of ids in the edge codec (including non-edges at the far faces).
  std::uint64_t edge_capacity() const { return vertex_count() * static_cast<std::uint64_t>(d); }
  std::uint64_t edge_count() const;

  bool contains(const Point& p) const;
  bool contains(const Box& inner) const;
  // On the inner boundary layer Lambda_r(c) \ Lambda_{r-1}(c).
  bool on_boundary(const Point& p) const;

  std::uint64_t index(const Point& p) const;
  Point point(std::uint64_t index) const;
  std::uint64_t stride(int axis) const;

  bool is_edge(EdgeId id) const;
  EdgeId edge_id(const Point& a, int axis) const;
  // Edge between two adjacent points in either order.
  EdgeId edge_between(const Point& a, const Point& b) const;
  std::pair<Point, Point> endpoints(EdgeId id) const;

  friend bool operator==(const Box& a, const Box& b);
};

struct Annulus {
  int d = 2;
  int inner = 0;
  int outer = 1;

  Annulus(int dim, int r, int R);
  bool contains(const Point& p) const;
};

// Every edge with both endpoints in the box, ascending EdgeId.
std::vector<EdgeId> enumerate_box_edges(const Box& box);
bool in_annulus(const Point& p, const Annulus& a);

// |Lambda_r \ Lambda_{r-1}| = (2r+1)^d - (2r-1)^d.
std::uint64_t boundary_size(int d, int r);
// Smallest n0 with |boundary of Lambda_{8dm}| < m^d for every m >= n0.
int min_n0(int d);

// Visits every edge of the box as (id, lower endpoint, axis); the point is
// updated incrementally, so this is the fast path for whole-box sweeps.
template <class F>
void for_each_box_edge(const Box& box, F&& f) {
  Point p(box.d);
  for (int i = 0; i < box.d; ++i) p[i] = box.center[i] - box.r;
  const std::uint64_t nv = box.vertex_count();
  for (std::uint64_t v = 0; v < nv; ++v) {
    for (int axis = 0; axis < box.d; ++axis) {
      if (p[axis] < box.center[axis] + box.r) f(v * box.d + axis, static_cast<const Point&>(p), axis);
    }
    for (int i = 0; i < box.d; ++i) {
      if (++p[i] <= box.center[i] + box.r) break;
      p[i] = box.center[i] - box.r;
    }
  }
}

// Visits every vertex as (index, point), same incremental walk.
template <class F>
void for_each_box_vertex(const Box& box, F&& f) {
  Point p(box.d);
  for (int i = 0; i < box.d; ++i) p[i] = box.center[i] - box.r;
  const std::uint64_t nv = box.vertex_count();
  for (std::uint64_t v = 0; v < nv; ++v) {
    f(v, static_cast<const Point&>(p));
    for (int i = 0; i < box.d; ++i) {
      if (++p[i] <= box.center[i] + box.r) break;
      p[i] = box.center[i] - box.r;
    }
  }
}

nlohmann::json to_json(const Box& box);
Box box_from_json(const nlohmann::json& j);

}  // namespace perc
