#include "perc/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace perc {

namespace {

void check_dim(int d) {
  if (d < 2 || d > kMaxDim) {
    throw std::invalid_argument("lattice dimension must be in [2, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(d));
  }
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

Point::Point(int dim) : d(dim) {}

Point::Point(std::initializer_list<int> coords) : d(static_cast<int>(coords.size())) {
  if (d > kMaxDim) throw std::invalid_argument("too many coordinates");
  std::copy(coords.begin(), coords.end(), x.begin());
}

int Point::norm_inf() const {
  int m = 0;
  for (int i = 0; i < d; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

Point Point::shifted(int axis, int delta) const {
  Point q = *this;
  q.x[axis] += delta;
  return q;
}

bool operator==(const Point& a, const Point& b) {
  if (a.d != b.d) return false;
  for (int i = 0; i < a.d; ++i)
    if (a.x[i] != b.x[i]) return false;
  return true;
}

bool operator<(const Point& a, const Point& b) {
  if (a.d != b.d) return a.d < b.d;
  for (int i = 0; i < a.d; ++i)
    if (a.x[i] != b.x[i]) return a.x[i] < b.x[i];
  return false;
}

Point operator+(const Point& a, const Point& b) {
  Point c(a.d);
  for (int i = 0; i < a.d; ++i) c.x[i] = a.x[i] + b.x[i];
  return c;
}

Point operator*(int k, const Point& a) {
  Point c(a.d);
  for (int i = 0; i < a.d; ++i) c.x[i] = k * a.x[i];
  return c;
}

int linf_distance(const Point& a, const Point& b) {
  int m = 0;
  for (int i = 0; i < a.d; ++i) m = std::max(m, std::abs(a.x[i] - b.x[i]));
  return m;
}

std::string to_string(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < p.d; ++i) {
    if (i) s += ",";
    s += std::to_string(p.x[i]);
  }
  return s + ")";
}

Box::Box(int dim, int radius) : Box(dim, radius, Point(dim)) {}

Box::Box(int dim, int radius, Point c) : d(dim), r(radius), center(c) {
  check_dim(d);
  if (r < 0) throw std::invalid_argument("box radius must be non-negative");
  if (center.d != d) throw std::invalid_argument("box center has wrong dimension");
}

std::uint64_t Box::vertex_count() const { return ipow(static_cast<std::uint64_t>(side()), d); }

std::uint64_t Box::edge_count() const {
  return static_cast<std::uint64_t>(d) * 2 * static_cast<std::uint64_t>(r) *
         ipow(static_cast<std::uint64_t>(side()), d - 1);
}

bool Box::contains(const Point& p) const {
  if (p.d != d) return false;
  for (int i = 0; i < d; ++i)
    if (std::abs(p.x[i] - center.x[i]) > r) return false;
  return true;
}

bool Box::contains(const Box& inner) const {
  if (inner.d != d) return false;
  for (int i = 0; i < d; ++i) {
    if (inner.center.x[i] - inner.r < center.x[i] - r) return false;
    if (inner.center.x[i] + inner.r > center.x[i] + r) return false;
  }
  return true;
}

bool Box::on_boundary(const Point& p) const {
  return contains(p) && linf_distance(p, center) == r;
}

std::uint64_t Box::stride(int axis) const { return ipow(static_cast<std::uint64_t>(side()), axis); }

std::uint64_t Box::index(const Point& p) const {
  if (!contains(p)) throw std::out_of_range("point " + to_string(p) + " outside box");
  std::uint64_t idx = 0;
  const std::uint64_t s = side();
  for (int i = d - 1; i >= 0; --i) idx = idx * s + static_cast<std::uint64_t>(p.x[i] - center.x[i] + r);
  return idx;
}

Point Box::point(std::uint64_t index) const {
  if (index >= vertex_count()) throw std::out_of_range("vertex index outside box");
  Point p(d);
  const std::uint64_t s = side();
  for (int i = 0; i < d; ++i) {
    p.x[i] = static_cast<int>(index % s) - r + center.x[i];
    index /= s;
  }
  return p;
}

bool Box::is_edge(EdgeId id) const {
  if (id >= edge_capacity()) return false;
  const int axis = static_cast<int>(id % d);
  const std::uint64_t v = id / d;
  const std::uint64_t coord = (v / stride(axis)) % static_cast<std::uint64_t>(side());
  return coord + 1 < static_cast<std::uint64_t>(side());
}

EdgeId Box::edge_id(const Point& a, int axis) const {
  if (axis < 0 || axis >= d) throw std::invalid_argument("edge axis out of range");
  if (!contains(a) || !contains(a.shifted(axis, 1))) {
    throw std::out_of_range("edge from " + to_string(a) + " leaves box");
  }
  return index(a) * d + static_cast<EdgeId>(axis);
}

EdgeId Box::edge_between(const Point& a, const Point& b) const {
  if (a.d != d || b.d != d) throw std::invalid_argument("edge endpoints have wrong dimension");
  int axis = -1;
  for (int i = 0; i < d; ++i) {
    const int diff = b.x[i] - a.x[i];
    if (diff == 0) continue;
    if (axis >= 0 || std::abs(diff) != 1) throw std::invalid_argument("points are not adjacent");
    axis = i;
  }
  if (axis < 0) throw std::invalid_argument("points are not adjacent");
  return b.x[axis] > a.x[axis] ? edge_id(a, axis) : edge_id(b, axis);
}

std::pair<Point, Point> Box::endpoints(EdgeId id) const {
  if (!is_edge(id)) throw std::out_of_range("edge id " + std::to_string(id) + " not in box");
  const int axis = static_cast<int>(id % d);
  Point a = point(id / d);
  return {a, a.shifted(axis, 1)};
}

bool operator==(const Box& a, const Box& b) { return a.d == b.d && a.r == b.r && a.center == b.center; }

Annulus::Annulus(int dim, int r, int R) : d(dim), inner(r), outer(R) {
  check_dim(d);
  if (r < 0 || r >= R) throw std::invalid_argument("annulus needs 0 <= inner < outer");
}

bool Annulus::contains(const Point& p) const {
  const int n = p.norm_inf();
  return inner < n && n <= outer;
}

std::vector<EdgeId> enumerate_box_edges(const Box& box) {
  check_dim(box.d);
  std::vector<EdgeId> out;
  out.reserve(box.edge_count());
  for_each_box_edge(box, [&](EdgeId id, const Point&, int) { out.push_back(id); });
  return out;
}

bool in_annulus(const Point& p, const Annulus& a) { return a.contains(p); }

std::uint64_t boundary_size(int d, int r) {
  if (r == 0) return 1;
  return ipow(2 * static_cast<std::uint64_t>(r) + 1, d) - ipow(2 * static_cast<std::uint64_t>(r) - 1, d);
}

int min_n0(int d) {
  check_dim(d);
  // boundary(8dm) ~ 2d (16dm)^{d-1} grows one power slower than m^d, so the
  // inequality fails on a bounded initial set; scan past its last failure.
  using u128 = unsigned __int128;
  const auto pow128 = [](u128 b, int e) {
    u128 out = 1;
    for (int i = 0; i < e; ++i) out *= b;
    return out;
  };
  const auto holds = [&](std::uint64_t m) {
    const u128 R = 8 * static_cast<u128>(d) * m;
    return pow128(2 * R + 1, d) - pow128(2 * R - 1, d) < pow128(m, d);
  };
  std::uint64_t last_fail = 0;
  const std::uint64_t limit = 4 * ipow(16 * static_cast<std::uint64_t>(d), d - 1) * 2 * d + 16;
  for (std::uint64_t m = 1; m <= limit; ++m) {
    if (!holds(m)) last_fail = m;
  }
  return static_cast<int>(last_fail + 1);
}

nlohmann::json to_json(const Box& box) {
  std::vector<int> c(box.center.x.begin(), box.center.x.begin() + box.d);
  return {{"d", box.d}, {"r", box.r}, {"center", c}};
}

Box box_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int r = j.at("r").get<int>();
  Point c(d);
  if (j.contains("center")) {
    const auto coords = j.at("center").get<std::vector<int>>();
    if (static_cast<int>(coords.size()) != d) throw std::invalid_argument("center has wrong dimension");
    for (int i = 0; i < d; ++i) c[i] = coords[i];
  }
  return Box(d, r, c);
}

}  // namespace perc
