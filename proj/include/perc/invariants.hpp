#pragma once

// Self-checks shared by the acceptance binary and `percx verify`: oracle
// equivalence, exact component bounds, min-cut and labeling cross-checks,
// deterministic cluster-count structure and coarse-edge independence.

#include <cstdint>
#include <string>
#include <vector>

namespace perc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Monte Carlo vs exact probability on small lattice regions and multigraphs
// (at most 24 random edges each), |p_hat - p| <= 3 sigma.
CheckResult check_oracle_equivalence(std::uint64_t trials, unsigned threads, std::uint64_t seed = 2024);

// For every bundled multigraph and every nonempty proper vertex set S,
// P[S is a component of omega] <= (1 - eps/4d)^cut(S), in exact rationals.
CheckResult check_component_bound(unsigned threads);

// Stoer-Wagner vs brute-force bipartitions on random small multigraphs.
CheckResult check_min_cut(int graphs, std::uint64_t seed = 7);

// Union-find labeling vs BFS on random X u omega, d = 2, r <= 16.
CheckResult check_labeling(int configs, std::uint64_t seed = 11);

// Cluster-count bound on Lambda_{8dn} for n >= min_n0(2), the telescoping U
// inequality, and the sqrt(n) crossing bound on bulk/boundary graphs.
// `consecutive` is the number of n values starting at min_n0(2).
CheckResult check_structure(int consecutive = 5);

// Coarse-edge supports at coarse distance >= 3 are disjoint (7^2 and 5^3
// coarse boxes).
CheckResult check_three_dependence();

}  // namespace perc
