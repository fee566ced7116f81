#pragma once

// Exact probabilities by enumerating every open/closed outcome of up to 24
// random edges. Templated on the scalar: double (compensated summation) or
// Rational for inequality checks that must hold with zero tolerance.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "perc/contraction.hpp"

namespace perc::oracle {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxRandomEdges = 24;

// One enumerated outcome: which random edges are open and the resulting
// components (root[v] is a canonical representative).
struct Outcome {
  std::uint32_t open_mask = 0;
  std::span<const std::uint32_t> root;
  std::uint32_t components = 0;

  bool same_component(std::uint32_t a, std::uint32_t b) const { return root[a] == root[b]; }
};

template <class Real>
struct ExactEventQuery {
  std::uint32_t vertex_count = 0;
  std::vector<MultiEdge> edges;       // random
  std::vector<MultiEdge> base_edges;  // always open
  std::vector<Real> probabilities;    // per random edge
  std::function<bool(const Outcome&)> predicate;
};

namespace detail {

template <class Real>
struct Accumulator {
  Real sum{0};
  Real carry{0};
  void add(const Real& x) {
    if constexpr (std::is_floating_point_v<Real>) {
      // Neumaier.
      const Real t = sum + x;
      if (std::abs(sum) >= std::abs(x)) {
        carry += (sum - t) + x;
      } else {
        carry += (x - t) + sum;
      }
      sum = t;
    } else {
      sum += x;
    }
  }
  Real value() const { return sum + carry; }
};

inline std::uint32_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace detail

// Sums outcome weights into `buckets` bins chosen by `bucket(outcome)`.
// Enumeration is split on the high mask bits and merged in a fixed order, so
// the result does not depend on `threads`.
template <class Real, class BucketFn>
std::vector<Real> exact_distribution(std::uint32_t vertex_count, const std::vector<MultiEdge>& edges,
                                     const std::vector<MultiEdge>& base_edges, const std::vector<Real>& probs,
                                     std::size_t buckets, BucketFn&& bucket, unsigned threads = 1) {
  const int m = static_cast<int>(edges.size());
  if (m > kMaxRandomEdges) throw std::invalid_argument("oracle limited to 24 random edges");
  if (probs.size() != edges.size()) throw std::invalid_argument("one probability per random edge required");
  for (const auto& p : probs)
    if (p < Real(0) || p > Real(1)) throw std::invalid_argument("edge probability outside [0, 1]");
  for (const auto& e : edges)
    if (e.u >= vertex_count || e.v >= vertex_count) throw std::invalid_argument("oracle edge endpoint out of range");
  for (const auto& e : base_edges)
    if (e.u >= vertex_count || e.v >= vertex_count) throw std::invalid_argument("oracle edge endpoint out of range");

  // weight(mask) = lo_table[mask & lo_bits] * hi_table[mask >> lo_count].
  const int lo_count = m / 2;
  const int hi_count = m - lo_count;
  auto build_table = [&](int offset, int count) {
    std::vector<Real> table(std::size_t{1} << count);
    for (std::size_t mask = 0; mask < table.size(); ++mask) {
      Real w{1};
      for (int i = 0; i < count; ++i) {
        const Real& p = probs[offset + i];
        w *= ((mask >> i) & 1u) ? p : Real(1) - p;
      }
      table[mask] = w;
    }
    return table;
  };
  const std::vector<Real> lo_table = build_table(0, lo_count);
  const std::vector<Real> hi_table = build_table(lo_count, hi_count);

  std::vector<std::uint32_t> base_parent(vertex_count);
  std::iota(base_parent.begin(), base_parent.end(), 0u);
  for (const auto& e : base_edges) {
    const auto a = detail::find_root(base_parent, e.u);
    const auto b = detail::find_root(base_parent, e.v);
    if (a != b) base_parent[std::max(a, b)] = std::min(a, b);
  }

  // One chunk per value of the high half.
  const std::size_t chunks = hi_table.size();
  std::vector<std::vector<detail::Accumulator<Real>>> partial(chunks, std::vector<detail::Accumulator<Real>>(buckets));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<std::uint32_t> parent(vertex_count), root(vertex_count);
    for (std::size_t hi = next++; hi < chunks; hi = next++) {
      auto& acc = partial[hi];
      for (std::size_t lo = 0; lo < lo_table.size(); ++lo) {
        const auto mask = static_cast<std::uint32_t>((hi << lo_count) | lo);
        parent = base_parent;
        std::uint32_t comps = vertex_count;
        for (std::uint32_t v = 0; v < vertex_count; ++v)
          if (parent[v] != v) --comps;
        for (int i = 0; i < m; ++i) {
          if (!((mask >> i) & 1u)) continue;
          const auto a = detail::find_root(parent, edges[i].u);
          const auto b = detail::find_root(parent, edges[i].v);
          if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
            --comps;
          }
        }
        for (std::uint32_t v = 0; v < vertex_count; ++v) root[v] = detail::find_root(parent, v);
        const Outcome out{mask, root, comps};
        const std::size_t b = bucket(out);
        if (b >= buckets) continue;
        acc[b].add(lo_table[lo] * hi_table[hi]);
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<Real> result(buckets, Real(0));
  for (std::size_t b = 0; b < buckets; ++b) {
    detail::Accumulator<Real> acc;
    for (std::size_t c = 0; c < chunks; ++c) acc.add(partial[c][b].value());
    result[b] = acc.value();
  }
  return result;
}

template <class Real>
Real exact_probability(const ExactEventQuery<Real>& q, unsigned threads = 1) {
  if (!q.predicate) throw std::invalid_argument("exact_probability needs a predicate");
  const auto dist = exact_distribution<Real>(
      q.vertex_count, q.edges, q.base_edges, q.probabilities, 1,
      [&](const Outcome& o) -> std::size_t { return q.predicate(o) ? 0 : 1; }, threads);
  return dist[0];
}

// Law of K over an eps-percolation of every non-loop edge of g.
template <class Real = double>
std::map<std::uint32_t, Real> exact_component_distribution(const Multigraph& g, const Real& eps, unsigned threads = 1) {
  const Multigraph h = g.without_loops();
  const std::vector<Real> probs(h.edge_count(), eps);
  const auto dist = exact_distribution<Real>(
      h.vertex_count(), h.edges(), {}, probs, h.vertex_count() + 1,
      [](const Outcome& o) -> std::size_t { return o.components; }, threads);
  std::map<std::uint32_t, Real> out;
  for (std::uint32_t k = 1; k < dist.size(); ++k)
    if (dist[k] != Real(0)) out[k] = dist[k];
  return out;
}

// Outcome counts split by the number of open random edges, for graphs whose
// random edges share one probability p: counts[b][k] is the number of masks
// with k open edges that `hits` flags for slot b. probability_from_counts
// turns a row into the exact probability at any p. `hits(outcome, flags)`
// may flag several slots per outcome.
template <class HitFn>
std::vector<std::vector<std::uint64_t>> open_count_table(std::uint32_t vertex_count, const std::vector<MultiEdge>& edges,
                                                         const std::vector<MultiEdge>& base_edges, std::size_t slots,
                                                         HitFn&& hits, unsigned threads = 1) {
  const int m = static_cast<int>(edges.size());
  if (m > kMaxRandomEdges) throw std::invalid_argument("oracle limited to 24 random edges");
  for (const auto& e : edges)
    if (e.u >= vertex_count || e.v >= vertex_count) throw std::invalid_argument("oracle edge endpoint out of range");
  for (const auto& e : base_edges)
    if (e.u >= vertex_count || e.v >= vertex_count) throw std::invalid_argument("oracle edge endpoint out of range");

  std::vector<std::uint32_t> base_parent(vertex_count);
  std::iota(base_parent.begin(), base_parent.end(), 0u);
  for (const auto& e : base_edges) {
    const auto a = detail::find_root(base_parent, e.u);
    const auto b = detail::find_root(base_parent, e.v);
    if (a != b) base_parent[std::max(a, b)] = std::min(a, b);
  }
  std::uint32_t base_comps = 0;
  for (std::uint32_t v = 0; v < vertex_count; ++v)
    if (base_parent[v] == v) ++base_comps;

  const int hi_bits = std::min(m, 8);
  const int lo_bits = m - hi_bits;
  const std::size_t chunks = std::size_t{1} << hi_bits;
  using Table = std::vector<std::vector<std::uint64_t>>;
  std::vector<Table> partial(chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<std::uint32_t> parent(vertex_count), root(vertex_count);
    std::vector<std::uint8_t> flags(slots);
    for (std::size_t hi = next++; hi < chunks; hi = next++) {
      Table& table = partial[hi];
      table.assign(slots, std::vector<std::uint64_t>(m + 1, 0));
      for (std::size_t lo = 0; lo < (std::size_t{1} << lo_bits); ++lo) {
        const auto mask = static_cast<std::uint32_t>((hi << lo_bits) | lo);
        parent = base_parent;
        std::uint32_t comps = base_comps;
        for (int i = 0; i < m; ++i) {
          if (!((mask >> i) & 1u)) continue;
          const auto a = detail::find_root(parent, edges[i].u);
          const auto b = detail::find_root(parent, edges[i].v);
          if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
            --comps;
          }
        }
        for (std::uint32_t v = 0; v < vertex_count; ++v) root[v] = detail::find_root(parent, v);
        std::fill(flags.begin(), flags.end(), 0);
        hits(Outcome{mask, root, comps}, std::span<std::uint8_t>(flags));
        const int k = std::popcount(mask);
        for (std::size_t b = 0; b < slots; ++b)
          if (flags[b]) ++table[b][k];
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  Table total(slots, std::vector<std::uint64_t>(m + 1, 0));
  for (const auto& t : partial)
    for (std::size_t b = 0; b < slots; ++b)
      for (int k = 0; k <= m; ++k) total[b][k] += t[b][k];
  return total;
}

// sum_k counts[k] p^k (1 - p)^(m - k), m = counts.size() - 1.
template <class Real>
Real probability_from_counts(const std::vector<std::uint64_t>& counts, const Real& p) {
  const int m = static_cast<int>(counts.size()) - 1;
  Real total{0};
  for (int k = 0; k <= m; ++k) {
    if (counts[k] == 0) continue;
    Real term{counts[k]};
    for (int i = 0; i < k; ++i) term *= p;
    for (int i = k; i < m; ++i) term *= Real(1) - p;
    total += term;
  }
  return total;
}

// Common predicates.
inline std::function<bool(const Outcome&)> connected() {
  return [](const Outcome& o) { return o.components == 1; };
}

inline std::function<bool(const Outcome&)> component_count_is(std::uint32_t k) {
  return [k](const Outcome& o) { return o.components == k; };
}

inline std::function<bool(const Outcome&)> edge_open(int i) {
  return [i](const Outcome& o) { return ((o.open_mask >> i) & 1u) != 0; };
}

// S (by membership flags) is exactly one connected component.
inline std::function<bool(const Outcome&)> set_is_component(std::vector<char> in_set) {
  return [s = std::move(in_set)](const Outcome& o) {
    std::uint32_t rep = UINT32_MAX;
    for (std::uint32_t v = 0; v < s.size(); ++v) {
      if (!s[v]) continue;
      if (rep == UINT32_MAX) rep = o.root[v];
      if (o.root[v] != rep) return false;
    }
    if (rep == UINT32_MAX) return false;
    for (std::uint32_t v = 0; v < s.size(); ++v)
      if (!s[v] && o.root[v] == rep) return false;
    return true;
  };
}

inline std::function<bool(const Outcome&)> all_connected(std::vector<std::uint32_t> vertices) {
  return [vs = std::move(vertices)](const Outcome& o) {
    for (auto v : vs)
      if (o.root[v] != o.root[vs.front()]) return false;
    return true;
  };
}

// Lattice region as an oracle graph: vertices by box index; edges in `fixed`
// are base edges, the others of `random` are random.
struct LatticeOracleGraph {
  std::uint32_t vertex_count = 0;
  std::vector<MultiEdge> random_edges;
  std::vector<MultiEdge> base_edges;
  std::vector<EdgeId> random_ids;
};

LatticeOracleGraph lattice_graph(const EdgeSet& fixed, const EdgeSet& random);

}  // namespace perc::oracle
