#include "perc/percolation.hpp"

#include <cmath>
#include <stdexcept>

#include "perc/rng.hpp"

namespace perc {

SprinkleConfig::SprinkleConfig(double epsilon, std::uint64_t seed, std::uint64_t stream_id)
    : epsilon_(epsilon),
      seed_(seed),
      stream_id_(stream_id),
      key_(rng::combine(rng::stream_key(seed, stream_id), rng::kSprinkleTag)) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("sprinkle epsilon must be in (0, 1]");
}

double SprinkleConfig::uniform(const Point& a, int axis) const {
  return rng::uniform(key_, rng::lattice_edge_key(a, axis));
}

EdgeSet sample_sprinkle(const SprinkleConfig& cfg, const Box& region, std::span<const EdgeId> edges) {
  EdgeSet out(region);
  for (EdgeId id : edges) {
    const auto [a, b] = region.endpoints(id);
    if (cfg.uniform(a, static_cast<int>(id % region.d)) < cfg.epsilon()) out.insert(id);
  }
  return out;
}

EdgeSet sample_sprinkle(const SprinkleConfig& cfg, const Box& region) {
  return sample_sprinkle_at(cfg, region, cfg.epsilon());
}

EdgeSet sample_sprinkle_at(const SprinkleConfig& cfg, const Box& region, double rate) {
  EdgeSet out(region);
  for_each_box_edge(region, [&](EdgeId id, const Point& a, int axis) {
    if (cfg.uniform(a, axis) < rate) out.insert(id);
  });
  return out;
}

EdgeSet superpose(const EdgeSet& x, const EdgeSet& w) {
  if (!(x.region() == w.region())) throw std::invalid_argument("superpose: edge sets on different regions");
  EdgeSet y = x;
  y |= w;
  return y;
}

EdgeSet restrict_to_annulus(const EdgeSet& w, const Annulus& a) {
  const Box& box = w.region();
  EdgeSet out(box);
  w.for_each([&](EdgeId id) {
    const auto [p, q] = box.endpoints(id);
    if (a.contains(p) && a.contains(q)) out.insert(id);
  });
  return out;
}

EdgeSet thin(const EdgeSet& y, double q, std::uint64_t seed, std::uint64_t stream_id) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("thinning probability must be in [0, 1]");
  const Box& box = y.region();
  const std::uint64_t key = rng::combine(rng::stream_key(seed, stream_id), rng::kThinTag);
  EdgeSet out(box);
  y.for_each([&](EdgeId id) {
    const Point a = box.point(id / box.d);
    if (rng::uniform(key, rng::lattice_edge_key(a, static_cast<int>(id % box.d))) < q) out.insert(id);
  });
  return out;
}

double union_inclusion_probability(double rate, int k) { return 1.0 - std::pow(1.0 - rate, k); }

}  // namespace perc
