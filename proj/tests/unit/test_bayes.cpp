#include <doctest.h>

#include <cmath>

#include "mids/bayes/enumerate.hpp"
#include "mids/bayes/graph.hpp"
#include "mids/bayes/network.hpp"
#include "mids/bayes/network_io.hpp"
#include "oracles.hpp"
#include "random_nets.hpp"

using namespace mids;
using namespace mids::bayes;

TEST_CASE("validate_network") {
  SUBCASE("normalized two-node net is valid") {
    CHECK(validate_network(testing::two_node_net()).ok());
  }
  SUBCASE("two-cycle is reported") {
    BayesNet net;
    const auto a = net.add_binary("A");
    const auto b = net.add_binary("B");
    net.set_cpt(a, {b}, {0.5, 0.5, 0.5, 0.5});
    net.set_cpt(b, {a}, {0.5, 0.5, 0.5, 0.5});
    const auto report = validate_network(net);
    CHECK(report.has(ErrorCode::CyclicGraph));
    CHECK_THROWS_AS(topological_order(net), Error);
  }
  SUBCASE("unnormalized row is reported with its sum") {
    BayesNet net;
    const auto a = net.add_binary("A");
    net.set_cpt(a, {}, {0.5, 0.4});
    const auto report = validate_network(net);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].code == ErrorCode::CptRowNotNormalized);
    CHECK(report.violations[0].message.find("0.9") != std::string::npos);
  }
  SUBCASE("table size mismatch and unary arity are reported") {
    BayesNet net;
    const auto a = net.add_variable("A", {"only"});
    const auto b = net.add_binary("B");
    net.set_cpt(a, {}, {1.0});
    net.set_cpt(b, {a}, {0.5, 0.5, 0.5, 0.5});
    const auto report = validate_network(net);
    CHECK(report.has(ErrorCode::ArityMismatch));
    CHECK(report.violations.size() == 2);
  }
}

TEST_CASE("joint_probability") {
  const auto net = testing::two_node_net();
  CHECK(joint_probability(net, Evidence{{0, 1}, {1, 1}}) == doctest::Approx(0.27).epsilon(1e-15));

  BayesNet single;
  const auto a = single.add_binary("A");
  single.set_cpt(a, {}, {0.4, 0.6});
  CHECK(joint_probability(single, Evidence{{0, 0}}) == 0.4);

  CHECK_THROWS_WITH_AS(joint_probability(net, Evidence{{0, 1}}), doctest::Contains("IncompleteAssignment"), Error);
}

TEST_CASE("joint over all assignments sums to one") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    testing::RandomNetOptions opt;
    opt.variables = 5 + rng.uniform(12);  // up to 16 binary variables
    const auto net = testing::random_net(rng, opt);
    double total = 0.0;
    const std::size_t n = net.size();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      Evidence full;
      for (VarId v = 0; v < n; ++v) full.set(v, (bits >> v) & 1);
      total += joint_probability(net, full);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("brute_force_posterior") {
  const auto net = testing::two_node_net();
  const auto pb = brute_force_posterior(net, 1, {});
  CHECK(pb.probabilities[0] == doctest::Approx(0.59).epsilon(1e-12));
  CHECK(pb.probabilities[1] == doctest::Approx(0.41).epsilon(1e-12));

  const auto pa = brute_force_posterior(net, 0, Evidence{{0, 1}});
  CHECK(pa.probabilities == std::vector<double>{0.0, 1.0});

  BayesNet det;
  const auto a = det.add_binary("A");
  const auto b = det.add_binary("B");
  det.set_cpt(a, {}, {1.0, 0.0});
  det.set_cpt(b, {a}, {1.0, 0.0, 0.0, 1.0});
  CHECK_THROWS_WITH_AS(brute_force_posterior(det, 1, Evidence{{0, 1}}),
                       doctest::Contains("ZeroProbabilityEvidence"), Error);

  Rng rng(3);
  testing::RandomNetOptions opt;
  opt.variables = 10;
  const auto big = testing::random_net(rng, opt);
  CHECK_THROWS_WITH_AS(brute_force_posterior(big, 0, {}, 512), doctest::Contains("StateSpaceTooLarge"), Error);
}

TEST_CASE("moralize") {
  SUBCASE("v-structure marries the parents") {
    BayesNet net;
    const auto a = net.add_binary("A");
    const auto b = net.add_binary("B");
    const auto c = net.add_binary("C");
    net.set_cpt(a, {}, {0.5, 0.5});
    net.set_cpt(b, {}, {0.5, 0.5});
    net.set_cpt(c, {a, b}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    CHECK(moralize(net).edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  }
  SUBCASE("chain has no marriage edge") {
    BayesNet net;
    const auto a = net.add_binary("A");
    const auto b = net.add_binary("B");
    const auto c = net.add_binary("C");
    net.set_cpt(a, {}, {0.5, 0.5});
    net.set_cpt(b, {a}, {0.5, 0.5, 0.5, 0.5});
    net.set_cpt(c, {b}, {0.5, 0.5, 0.5, 0.5});
    CHECK(moralize(net).edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  }
  SUBCASE("edgeless net") {
    BayesNet net;
    net.set_cpt(net.add_binary("A"), {}, {0.5, 0.5});
    net.set_cpt(net.add_binary("B"), {}, {0.5, 0.5});
    const auto g = moralize(net);
    CHECK(g.edge_count() == 0);
    CHECK(g.vertex_count() == 2);
  }
}

TEST_CASE("triangulate") {
  SUBCASE("4-cycle gets exactly one chord, from the lowest-id vertex") {
    UndirectedGraph g;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 0);
    const auto t = triangulate(g);
    CHECK(t.fill_edges == std::vector<Edge>{{1, 3}});
    CHECK(t.elimination_order.front() == 0);
    CHECK(testing::is_chordal_mcs(t.chordal));
    CHECK_FALSE(testing::is_chordal_mcs(g));
  }
  SUBCASE("triangle needs no fill") {
    UndirectedGraph g;
    g.complete({0, 1, 2});
    CHECK(triangulate(g).fill_edges.empty());
  }
  SUBCASE("random graphs come out chordal") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      UndirectedGraph g;
      for (VarId v = 0; v < 10; ++v) g.add_vertex(v);
      for (VarId a = 0; a < 10; ++a) {
        for (VarId b = a + 1; b < 10; ++b) {
          if (rng.bernoulli(0.3)) g.add_edge(a, b);
        }
      }
      const auto t = triangulate(g);
      CHECK(testing::is_chordal_mcs(t.chordal));
      CHECK(t.chordal.edge_count() == g.edge_count() + t.fill_edges.size());
      CHECK(triangulate(g).elimination_order == t.elimination_order);
    }
  }
}

TEST_CASE("network file round trip") {
  const std::string canonical =
      "variables\n"
      "0 A no yes\n"
      "1 B low mid high\n"
      "edges\n"
      "1: 0\n"
      "cpts\n"
      "0 0 0.7 0.3\n"
      "1 0 0.2 0.3 0.5\n"
      "1 1 0.1 0.1 0.8\n";
  const auto net = parse_network(canonical);
  CHECK(net.size() == 2);
  CHECK(net.variable(1).states[2] == "high");
  CHECK(serialize_network(net) == canonical);

  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    testing::RandomNetOptions opt;
    opt.variables = 7;
    opt.max_arity = 4;
    const auto r = testing::random_net(rng, opt);
    const auto text = serialize_network(r);
    CHECK(parse_network(text) == r);
    CHECK(serialize_network(parse_network(text)) == text);
  }
}

TEST_CASE("network file errors") {
  CHECK_THROWS_AS(parse_network("0 A a b\n"), Error);
  CHECK_THROWS_AS(parse_network("variables\n1 A a b\n"), Error);
  CHECK_THROWS_AS(parse_network("variables\n0 A a b\ncpts\n0 0 0.5\n"), Error);
  // A row missing altogether.
  CHECK_THROWS_AS(parse_network("variables\n0 A a b\n1 B a b\nedges\n1: 0\ncpts\n0 0 0.5 0.5\n1 0 0.5 0.5\n"), Error);
  // Not normalized.
  CHECK_THROWS_WITH_AS(parse_network("variables\n0 A a b\ncpts\n0 0 0.5 0.4\n"),
                       doctest::Contains("CptRowNotNormalized"), Error);
}
