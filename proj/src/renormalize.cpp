#include "perc/renormalize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

#include "perc/connectivity.hpp"
#include "perc/percolation.hpp"

namespace perc {

CoarseEdgeSpec::CoarseEdgeSpec(Point x, int axis, int n, std::optional<int> block_radius)
    : x_(x), axis_(axis), n_(n), block_radius_(block_radius.value_or(2 * n)) {
  if (x_.d < 2 || x_.d > kMaxDim) throw std::invalid_argument("coarse edge dimension out of range");
  if (axis < 0 || axis >= x_.d) throw std::invalid_argument("coarse edge axis out of range");
  if (n < 1) throw std::invalid_argument("block scale n must be >= 1");
  // 2nx and 2ny sit at distance n from the block center.
  if (block_radius_ < n) throw std::invalid_argument("block radius must be at least n");
}

int coarse_distance(const CoarseEdgeSpec& a, const CoarseEdgeSpec& b) {
  const Point pa[2] = {a.x(), a.y()};
  const Point pb[2] = {b.x(), b.y()};
  int best = linf_distance(pa[0], pb[0]);
  for (const auto& p : pa)
    for (const auto& q : pb) best = std::min(best, linf_distance(p, q));
  return best;
}

std::vector<CoarseEdgeSpec> coarse_edges_in_box(int d, int coarse_radius, int n, std::optional<int> block_radius) {
  std::vector<CoarseEdgeSpec> out;
  for_each_box_edge(Box(d, coarse_radius), [&](EdgeId, const Point& a, int axis) {
    out.emplace_back(a, axis, n, block_radius);
  });
  return out;
}

Box covering_box(const std::vector<CoarseEdgeSpec>& edges) {
  if (edges.empty()) throw std::invalid_argument("covering_box of no coarse edges");
  const int d = edges.front().dim();
  int r = 0;
  for (const auto& e : edges) {
    const Point c = e.block_center();
    for (int i = 0; i < d; ++i) r = std::max(r, std::abs(c[i]) + e.block_radius());
  }
  return Box(d, r);
}

bool renorm_edge_state(const EdgeSet& y_edges, const CoarseEdgeSpec& spec) {
  const Box block = spec.fine_region();
  if (!y_edges.region().contains(block)) throw std::invalid_argument("Y does not cover the coarse edge's block");
  return is_connected_within(y_edges, spec.fine_x(), spec.fine_y(), block);
}

std::vector<EdgeId> coarse_edge_support(const CoarseEdgeSpec& spec) {
  return coarse_edge_support(spec, spec.fine_region());
}

std::vector<EdgeId> coarse_edge_support(const CoarseEdgeSpec& spec, const Box& frame) {
  const Box block = spec.fine_region();
  if (!frame.contains(block)) throw std::invalid_argument("support frame does not contain the block");
  std::vector<EdgeId> out;
  out.reserve(block.edge_count());
  for_each_box_edge(block, [&](EdgeId, const Point& a, int axis) { out.push_back(frame.edge_id(a, axis)); });
  std::sort(out.begin(), out.end());
  return out;
}

void DominationConfig::validate() const {
  if (!(0.0 < p_prime && p_prime < p_double_prime && p_double_prime < 1.0)) {
    throw std::invalid_argument("domination config needs 0 < p' < p'' < 1");
  }
}

EdgeSet sample_y(const Subgraph& x, double eps, const Box& region, std::uint64_t seed, std::uint64_t trial,
                 double q) {
  EdgeSet y = x.edges_in_region(region);
  if (eps > 0.0) y |= sample_sprinkle(SprinkleConfig(eps, seed, trial), region);
  if (q < 1.0) y = thin(y, q, seed, trial);
  return y;
}

namespace {

MarginalReport summarize(std::vector<CoarseEdgeSpec> edges, const std::vector<std::uint64_t>& counts,
                         std::uint64_t trials, double confidence) {
  MarginalReport rep;
  rep.edges = std::move(edges);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    rep.per_edge.push_back(EstimateReport::from_counts(counts[i], trials, confidence));
    if (counts[i] < counts[rep.worst_edge]) rep.worst_edge = i;
  }
  rep.worst = rep.per_edge[rep.worst_edge];
  return rep;
}

}  // namespace

MarginalReport estimate_marginal(const Subgraph& x, double eps, int n, std::uint64_t trials, std::uint64_t seed,
                                 const MarginalOptions& opt, double q) {
  if (trials < 1) throw std::invalid_argument("estimate_marginal needs trials >= 1");
  auto edges = coarse_edges_in_box(opt.d, opt.coarse_radius, n, opt.block_radius);
  const Box region = covering_box(edges);
  const auto counts = count_successes_multi(trials, opt.threads, edges.size(),
                                            [&](std::uint64_t t, std::span<std::uint8_t> out) {
                                              const EdgeSet y = sample_y(x, eps, region, seed, t, q);
                                              for (std::size_t i = 0; i < edges.size(); ++i)
                                                out[i] = renorm_edge_state(y, edges[i]);
                                            });
  return summarize(std::move(edges), counts, trials, opt.confidence);
}

bool check_domination_condition(const EstimateReport& report, const DominationConfig& cfg) {
  return report.ci_low > cfg.p_prime;
}

double thinning_gap(int d, int block_radius, double q) {
  const auto e = static_cast<double>(Box(d, block_radius).edge_count());
  return 1.0 - std::pow(q, e);
}

ThinningGapReport thinned_marginal_gap(const Subgraph& x, double eps, int n, double q, std::uint64_t trials,
                                       std::uint64_t seed, const MarginalOptions& opt) {
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("thinning q must be in (0, 1]");
  if (trials < 1) throw std::invalid_argument("thinned_marginal_gap needs trials >= 1");
  auto edges = coarse_edges_in_box(opt.d, opt.coarse_radius, n, opt.block_radius);
  const Box region = covering_box(edges);
  const int b = edges.front().block_radius();
  const Box block(opt.d, b);
  const EdgeSet full_block = EdgeSet::full(block);
  const std::size_t k = edges.size();

  // Slots: [0, k) Y marginals, [k, 2k) Y_q marginals, 2k all-open indicator.
  const auto counts = count_successes_multi(trials, opt.threads, 2 * k + 1,
                                            [&](std::uint64_t t, std::span<std::uint8_t> out) {
                                              const EdgeSet y = sample_y(x, eps, region, seed, t);
                                              const EdgeSet yq = q < 1.0 ? thin(y, q, seed, t) : y;
                                              for (std::size_t i = 0; i < k; ++i) {
                                                out[i] = renorm_edge_state(y, edges[i]);
                                                out[k + i] = renorm_edge_state(yq, edges[i]);
                                              }
                                              out[2 * k] = thin(full_block, q, seed, t) == full_block;
                                            });
  ThinningGapReport rep;
  rep.y = summarize(edges, {counts.begin(), counts.begin() + k}, trials, opt.confidence);
  rep.y_q = summarize(edges, {counts.begin() + k, counts.begin() + 2 * k}, trials, opt.confidence);
  rep.all_open = EstimateReport::from_counts(counts[2 * k], trials, opt.confidence);
  rep.gap = thinning_gap(opt.d, b, q);
  rep.all_open_exact = 1.0 - rep.gap;
  rep.holds = rep.y_q.worst.ci_high >= rep.y.worst.ci_low - rep.gap;
  return rep;
}

std::uint64_t CoarseWindow::point_count() const {
  std::uint64_t c = 1;
  for (int i = 0; i < d; ++i) c *= static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
  return c;
}

bool CoarseWindow::contains(const Point& p) const {
  for (int i = 0; i < d; ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

std::uint64_t CoarseWindow::index(const Point& p) const {
  std::uint64_t idx = 0;
  for (int i = d - 1; i >= 0; --i) idx = idx * static_cast<std::uint64_t>(hi[i] - lo[i] + 1) + (p[i] - lo[i]);
  return idx;
}

Point CoarseWindow::point(std::uint64_t idx) const {
  Point p(d);
  for (int i = 0; i < d; ++i) {
    const auto w = static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
    p[i] = lo[i] + static_cast<int>(idx % w);
    idx /= w;
  }
  return p;
}

CoarseWindow half_space_window(int d, int length, int half_width) {
  if (length < 1 || half_width < 0) throw std::invalid_argument("half-space window needs length >= 1, width >= 0");
  CoarseWindow w{d, Point(d), Point(d)};
  w.lo[0] = 2;
  w.hi[0] = 2 + length;
  w.lo[1] = -half_width;
  w.hi[1] = half_width;
  return w;
}

CoarseWindow slab_window(int d, int length, int half_width, int thickness) {
  if (d < 3) throw std::invalid_argument("slab window needs d >= 3");
  if (length < 1 || half_width < 0 || thickness < 0) throw std::invalid_argument("bad slab window size");
  CoarseWindow w{d, Point(d), Point(d)};
  w.hi[0] = length;
  w.lo[1] = -half_width;
  w.hi[1] = half_width;
  for (int i = 2; i < d; ++i) w.hi[i] = thickness;
  return w;
}

CoarseField::CoarseField(CoarseWindow window) : window_(window), state_(window_.point_count() * window_.d, 0) {}

bool CoarseField::has_edge(const Point& x, int axis) const {
  return window_.contains(x) && window_.contains(x.shifted(axis, 1));
}

bool CoarseField::open(const Point& x, int axis) const {
  if (!has_edge(x, axis)) return false;
  return state_[window_.index(x) * window_.d + axis] != 0;
}

void CoarseField::set(const Point& x, int axis, bool state) {
  if (!has_edge(x, axis)) throw std::out_of_range("coarse edge outside window");
  state_[window_.index(x) * window_.d + axis] = state ? 1 : 0;
}

void CoarseField::fill(bool state) {
  for (std::uint64_t v = 0; v < window_.point_count(); ++v) {
    const Point p = window_.point(v);
    for (int axis = 0; axis < window_.d; ++axis)
      if (has_edge(p, axis)) set(p, axis, state);
  }
}

std::vector<CoarseEdgeSpec> CoarseField::edge_specs(int n, std::optional<int> block_radius) const {
  std::vector<CoarseEdgeSpec> out;
  for (std::uint64_t v = 0; v < window_.point_count(); ++v) {
    const Point p = window_.point(v);
    for (int axis = 0; axis < window_.d; ++axis)
      if (has_edge(p, axis)) out.emplace_back(p, axis, n, block_radius);
  }
  return out;
}

CoarseField sample_coarse_field(const Subgraph& x, double eps, int n, const CoarseWindow& window, std::uint64_t seed,
                                std::uint64_t trial, std::optional<int> block_radius) {
  CoarseField field(window);
  const auto specs = field.edge_specs(n, block_radius);
  if (specs.empty()) return field;
  const EdgeSet y = sample_y(x, eps, covering_box(specs), seed, trial);
  for (const auto& s : specs) field.set(s.x(), s.axis(), renorm_edge_state(y, s));
  return field;
}

bool crosses(const CoarseField& field) {
  const CoarseWindow& w = field.window();
  const std::uint64_t np = w.point_count();
  UnionFind uf(np + 2);
  const auto left = static_cast<std::uint32_t>(np);
  const auto right = static_cast<std::uint32_t>(np + 1);
  for (std::uint64_t v = 0; v < np; ++v) {
    const Point p = w.point(v);
    if (p[0] == w.lo[0]) uf.unite(static_cast<std::uint32_t>(v), left);
    if (p[0] == w.hi[0]) uf.unite(static_cast<std::uint32_t>(v), right);
    for (int axis = 0; axis < w.d; ++axis) {
      if (field.open(p, axis)) uf.unite(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(w.index(p.shifted(axis, 1))));
    }
  }
  return uf.find(left) == uf.find(right);
}

void write_coarse_field_csv(std::ostream& os, const CoarseField& field) {
  const CoarseWindow& w = field.window();
  auto coords = [&](const Point& p) {
    for (int i = 0; i < w.d; ++i) os << (i ? " " : "") << p[i];
  };
  os << "x,y,state\n";
  for (std::uint64_t v = 0; v < w.point_count(); ++v) {
    const Point p = w.point(v);
    for (int axis = 0; axis < w.d; ++axis) {
      if (!field.has_edge(p, axis)) continue;
      coords(p);
      os << ',';
      coords(p.shifted(axis, 1));
      os << ',' << (field.open(p, axis) ? 1 : 0) << '\n';
    }
  }
}

}  // namespace perc
