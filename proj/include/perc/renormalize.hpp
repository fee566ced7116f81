#pragma once

// The block-renormalized process: a coarse edge {x, y} is open iff the fine
// points 2nx and 2ny are Y-connected inside n(x+y) + Lambda_{b}, b = 2n by
// default.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "perc/edge_set.hpp"
#include "perc/lattice.hpp"
#include "perc/stats.hpp"
#include "perc/subgraph.hpp"

namespace perc {

class CoarseEdgeSpec {
 public:
  // Coarse edge {x, x + e_axis} (axis 0-based) at block scale n.
  CoarseEdgeSpec(Point x, int axis, int n, std::optional<int> block_radius = std::nullopt);

  int dim() const { return x_.d; }
  int n() const { return n_; }
  int axis() const { return axis_; }
  int block_radius() const { return block_radius_; }
  const Point& x() const { return x_; }
  Point y() const { return x_.shifted(axis_, 1); }
  Point fine_x() const { return (2 * n_) * x_; }
  Point fine_y() const { return (2 * n_) * y(); }
  Point block_center() const { return n_ * (x_ + y()); }
  Box fine_region() const { return Box(dim(), block_radius_, block_center()); }

 private:
  Point x_;
  int axis_;
  int n_;
  int block_radius_;
};

// min L-inf distance between the endpoints of two coarse edges.
int coarse_distance(const CoarseEdgeSpec& a, const CoarseEdgeSpec& b);

// Coarse edges with both endpoints in the coarse box Lambda_radius.
std::vector<CoarseEdgeSpec> coarse_edges_in_box(int d, int coarse_radius, int n,
                                                std::optional<int> block_radius = std::nullopt);

// Smallest origin-centered fine box containing every block of `edges`.
Box covering_box(const std::vector<CoarseEdgeSpec>& edges);

bool renorm_edge_state(const EdgeSet& y_edges, const CoarseEdgeSpec& spec);

// Fine edges renorm_edge_state may read, as ids of `frame` (default: the
// block itself).
std::vector<EdgeId> coarse_edge_support(const CoarseEdgeSpec& spec);
std::vector<EdgeId> coarse_edge_support(const CoarseEdgeSpec& spec, const Box& frame);

struct DominationConfig {
  double p_prime = 0.98;
  double p_double_prime = 0.99;

  void validate() const;
};

struct MarginalOptions {
  int d = 2;
  int coarse_radius = 2;
  std::optional<int> block_radius;
  double confidence = 0.95;
  unsigned threads = 1;
};

struct MarginalReport {
  EstimateReport worst;
  std::size_t worst_edge = 0;
  std::vector<CoarseEdgeSpec> edges;
  std::vector<EstimateReport> per_edge;
};

// Y = X u omega on the covering box for trial t uses sprinkle stream t;
// eps == 0 means X alone. q < 1 thins Y with stream t.
EdgeSet sample_y(const Subgraph& x, double eps, const Box& region, std::uint64_t seed, std::uint64_t trial,
                 double q = 1.0);

// Worst-case coarse-edge marginal over the coarse box.
MarginalReport estimate_marginal(const Subgraph& x, double eps, int n, std::uint64_t trials, std::uint64_t seed,
                                 const MarginalOptions& opt = {}, double q = 1.0);

// Lower confidence bound strictly above p'.
bool check_domination_condition(const EstimateReport& report, const DominationConfig& cfg);

struct ThinningGapReport {
  EstimateReport all_open;  // empirical P[every edge of Lambda_{2n} kept]
  double all_open_exact = 0.0;
  double gap = 0.0;  // 1 - q^{|edges(Lambda_{2n})|}
  MarginalReport y;
  MarginalReport y_q;
  // Upper bound of the Y_q marginal reaches the lower bound of the Y
  // marginal minus the gap.
  bool holds = false;
};

// 1 - q^{|edges(Lambda_b)|} for the block radius b.
double thinning_gap(int d, int block_radius, double q);

ThinningGapReport thinned_marginal_gap(const Subgraph& x, double eps, int n, double q, std::uint64_t trials,
                                       std::uint64_t seed, const MarginalOptions& opt = {});

// Axis-aligned window of coarse points lo..hi (inclusive).
struct CoarseWindow {
  int d = 2;
  Point lo;
  Point hi;

  std::uint64_t point_count() const;
  bool contains(const Point& p) const;
  std::uint64_t index(const Point& p) const;
  Point point(std::uint64_t idx) const;
};

// {2, .., 2 + length} x {-half_width, .., half_width} x {0}^{d-2}.
CoarseWindow half_space_window(int d, int length, int half_width);
// {0, .., length} x {-half_width, .., half_width} x {0, .., thickness}^{d-2}; d >= 3.
CoarseWindow slab_window(int d, int length, int half_width, int thickness);

class CoarseField {
 public:
  explicit CoarseField(CoarseWindow window);

  const CoarseWindow& window() const { return window_; }
  bool has_edge(const Point& x, int axis) const;
  bool open(const Point& x, int axis) const;
  void set(const Point& x, int axis, bool state);
  void fill(bool state);
  std::vector<CoarseEdgeSpec> edge_specs(int n, std::optional<int> block_radius = std::nullopt) const;

 private:
  CoarseWindow window_;
  std::vector<std::uint8_t> state_;
};

CoarseField sample_coarse_field(const Subgraph& x, double eps, int n, const CoarseWindow& window, std::uint64_t seed,
                                std::uint64_t trial, std::optional<int> block_radius = std::nullopt);

// Open coarse path from the face lo[0] to the face hi[0] inside the window.
bool crosses(const CoarseField& field);

// CSV "x,y,state" with points written as space-separated coordinates.
void write_coarse_field_csv(std::ostream& os, const CoarseField& field);

}  // namespace perc
