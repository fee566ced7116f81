#include <doctest.h>

#include <cmath>

#include "perc/oracle.hpp"
#include "perc/subgraph.hpp"

using namespace perc;
using oracle::Rational;

TEST_CASE("two parallel edges at one half") {
  Multigraph g(2);
  g.add_edge(0, 1, 2);
  const auto dist = oracle::exact_component_distribution<Rational>(g, Rational(1, 2));
  CHECK(dist.at(1) == Rational(3, 4));
  CHECK(dist.at(2) == Rational(1, 4));
}

TEST_CASE("triangle connectivity polynomial") {
  Multigraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  for (int k = 1; k < 10; ++k) {
    const Rational e(k, 10);
    const auto dist = oracle::exact_component_distribution<Rational>(g, e);
    REQUIRE(dist.at(1) == 3 * e * e * (1 - e) + e * e * e);
    REQUIRE(dist.at(3) == (1 - e) * (1 - e) * (1 - e));
  }
}

TEST_CASE("loops are ignored") {
  Multigraph g(2);
  g.add_edge(0, 0, 5);
  g.add_edge(0, 1);
  const auto dist = oracle::exact_component_distribution<double>(g, 0.3);
  CHECK(dist.at(1) == doctest::Approx(0.3));
  CHECK(dist.size() == 2);
}

TEST_CASE("probabilities sum to one and threads do not change the result") {
  Multigraph g(6);
  for (std::uint32_t a = 0; a < 6; ++a)
    for (std::uint32_t b = a + 1; b < 6; ++b) g.add_edge(a, b);
  // 15 edges of K6 plus 3 doubled.
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  g.add_edge(4, 5);
  const auto one = oracle::exact_component_distribution<double>(g, 0.37, 1);
  const auto many = oracle::exact_component_distribution<double>(g, 0.37, 7);
  CHECK(one == many);
  double total = 0;
  for (const auto& [k, p] : one) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

  const auto exact = oracle::exact_component_distribution<Rational>(g, Rational(37, 100), 3);
  for (const auto& [k, p] : exact) REQUIRE(std::abs(static_cast<double>(p) - one.at(k)) < 1e-13);
}

TEST_CASE("predicates") {
  oracle::ExactEventQuery<Rational> q;
  q.vertex_count = 3;
  q.edges = {{0, 1}, {1, 2}};
  q.base_edges = {};
  q.probabilities = {Rational(1, 3), Rational(1, 5)};
  q.predicate = oracle::edge_open(1);
  CHECK(oracle::exact_probability(q) == Rational(1, 5));
  q.predicate = oracle::connected();
  CHECK(oracle::exact_probability(q) == Rational(1, 15));
  q.predicate = oracle::all_connected({0, 1});
  CHECK(oracle::exact_probability(q) == Rational(1, 3));
  q.predicate = oracle::set_is_component({1, 1, 0});
  CHECK(oracle::exact_probability(q) == Rational(1, 3) * Rational(4, 5));
  q.predicate = oracle::component_count_is(2);
  CHECK(oracle::exact_probability(q) == Rational(1, 3) * Rational(4, 5) + Rational(2, 3) * Rational(1, 5));

  q.base_edges = {{0, 2}};
  q.predicate = oracle::connected();
  CHECK(oracle::exact_probability(q) == 1 - Rational(2, 3) * Rational(4, 5));
}

TEST_CASE("lattice graph: rows fixed, rungs random") {
  const Box box(2, 1);
  const EdgeSet rows = Subgraph::axis_foliation(2, 1).edges_in_region(box);
  const EdgeSet all = EdgeSet::full(box);
  const auto lg = oracle::lattice_graph(rows, all);
  CHECK(lg.base_edges.size() == 6);
  CHECK(lg.random_edges.size() == 6);
  for (double p : {0.1, 0.5, 0.8}) {
    oracle::ExactEventQuery<double> q{lg.vertex_count, lg.random_edges, lg.base_edges,
                                      std::vector<double>(6, p), oracle::connected()};
    const double closed3 = std::pow(1 - p, 3);
    REQUIRE(oracle::exact_probability(q) == doctest::Approx((1 - closed3) * (1 - closed3)).epsilon(1e-14));
  }
  CHECK_THROWS(oracle::lattice_graph(EdgeSet(Box(2, 2)), EdgeSet::full(Box(2, 2))));
}

TEST_CASE("input validation") {
  Multigraph big(2);
  big.add_edge(0, 1, 25);
  CHECK_THROWS(oracle::exact_component_distribution<double>(big, 0.5));
  oracle::ExactEventQuery<double> q{2, {{0, 1}}, {}, {1.5}, oracle::connected()};
  CHECK_THROWS(oracle::exact_probability(q));
  q.probabilities = {0.5};
  q.edges = {{0, 4}};
  CHECK_THROWS(oracle::exact_probability(q));
}

TEST_CASE("open-count tables give the same probabilities") {
  Multigraph g(4);
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t b = a + 1; b < 4; ++b) g.add_edge(a, b, 2);
  const auto table = oracle::open_count_table(
      g.vertex_count(), g.edges(), {}, 2,
      [](const oracle::Outcome& o, std::span<std::uint8_t> hit) {
        hit[0] = o.components == 1;
        hit[1] = o.same_component(0, 3);
      },
      3);
  const Rational p(2, 7);
  oracle::ExactEventQuery<Rational> q{g.vertex_count(), g.edges(), {}, std::vector<Rational>(g.edge_count(), p),
                                      oracle::connected()};
  CHECK(oracle::probability_from_counts(table[0], p) == oracle::exact_probability(q));
  q.predicate = oracle::all_connected({0, 3});
  CHECK(oracle::probability_from_counts(table[1], p) == oracle::exact_probability(q));
  std::uint64_t total = 0;
  for (auto c : table[0]) total += c;
  CHECK(total < (1u << 12));
}
