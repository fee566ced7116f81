#pragma once

#include <cstdint>
#include <span>

#include "perc/edge_set.hpp"
#include "perc/lattice.hpp"

namespace perc {

// An epsilon-percolation stream. Edge decisions are keyed by the lattice
// position of the edge, so the same (seed, stream_id) yields the same sprinkle
// on every region that contains the edge, and epsilon < epsilon' gives nested
// samples.
class SprinkleConfig {
 public:
  SprinkleConfig(double epsilon, std::uint64_t seed, std::uint64_t stream_id = 0);

  double epsilon() const { return epsilon_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // The coupling variate of the edge {a, a + e_axis}; the edge is open iff
  // uniform < epsilon.
  double uniform(const Point& a, int axis) const;

 private:
  double epsilon_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
};

EdgeSet sample_sprinkle(const SprinkleConfig& cfg, const Box& region, std::span<const EdgeId> edges);
// Every edge of the region.
EdgeSet sample_sprinkle(const SprinkleConfig& cfg, const Box& region);
// Coupled variant: the same variates thresholded at an arbitrary rate.
EdgeSet sample_sprinkle_at(const SprinkleConfig& cfg, const Box& region, double rate);

EdgeSet superpose(const EdgeSet& x, const EdgeSet& w);

// Edges with both endpoints in the annulus.
EdgeSet restrict_to_annulus(const EdgeSet& w, const Annulus& a);

// Keeps each edge of y independently with probability q (the q-thinning of
// y). Variates are keyed like sprinkles but on a separate domain.
EdgeSet thin(const EdgeSet& y, double q, std::uint64_t seed, std::uint64_t stream_id = 0);

// Inclusion probability of the union of k independent rate-r sprinkles.
double union_inclusion_probability(double rate, int k);

}  // namespace perc
