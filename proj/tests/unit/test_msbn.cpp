#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mids/bayes/enumerate.hpp"
#include "mids/kernels/kernels.hpp"
#include "mids/msbn/ljf.hpp"
#include "mids/msbn/msbn.hpp"
#include "random_nets.hpp"

using namespace mids;
using namespace mids::bayes;
using namespace mids::msbn;

namespace {

// A -> B -> C -> D
BayesNet chain4() {
  BayesNet net;
  const auto a = net.add_binary("A");
  const auto b = net.add_binary("B");
  const auto c = net.add_binary("C");
  const auto d = net.add_binary("D");
  net.set_cpt(a, {}, {0.6, 0.4});
  net.set_cpt(b, {a}, {0.7, 0.3, 0.2, 0.8});
  net.set_cpt(c, {b}, {0.9, 0.1, 0.5, 0.5});
  net.set_cpt(d, {c}, {0.4, 0.6, 0.1, 0.9});
  return net;
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

// Largest gap between any subnet's local posterior and the enumerated one.
double max_gap(const LinkedJunctionForest& ljf, const Evidence& global) {
  const auto truth = brute_force_marginals(ljf.msbn().net(), global);
  double worst = 0;
  for (const auto& s : ljf.msbn().subnets()) {
    for (const auto& p : ljf.local_inference(s.id)) {
      worst = std::max(worst, linf(p.probabilities, truth[p.variable].probabilities));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("section_network accepts a sound chain split") {
  const auto net = chain4();
  const auto m = section_network(net, {{0, {0, 1, 2}, {1}}, {1, {2, 3}, {}}});
  REQUIRE(m.subnet_count() == 2);
  REQUIRE(m.dsepsets().size() == 1);
  CHECK(m.dsepsets()[0].variables == std::vector<VarId>{2});
  CHECK(m.subnet(1).neighbors == std::vector<SubnetId>{0});
  CHECK(m.cpt_owner(0) == 0);
  CHECK(m.cpt_owner(2) == 0);
  CHECK(m.cpt_owner(3) == 1);
  CHECK(m.owned_cpts(1) == std::vector<VarId>{3});
  CHECK(m.holders(2) == std::vector<SubnetId>{0, 1});
  CHECK(m.dsepset(1, 0) != nullptr);
}

TEST_CASE("section_network rejects bad sectionings") {
  const auto net = chain4();
  SUBCASE("uncovered variable") {
    CHECK_THROWS_WITH(section_network(net, {{0, {0, 1, 2}, {}}}), doctest::Contains("UncoveredVariable"));
  }
  SUBCASE("link cycle") {
    CHECK_THROWS_WITH(section_network(net, {{0, {0, 1}, {1, 2}}, {1, {1, 2}, {2}}, {2, {1, 2, 3}, {}}}),
                      doctest::Contains("NotHypertree"));
  }
  SUBCASE("disconnected links") {
    CHECK_THROWS_WITH(section_network(net, {{0, {0, 1}, {}}, {1, {1, 2, 3}, {}}}),
                      doctest::Contains("NotHypertree"));
  }
  SUBCASE("holders of a variable not connected") {
    // B sits in subnets 0 and 2 but not in 1, which lies between them.
    CHECK_THROWS_WITH(section_network(net, {{0, {0, 1}, {1}}, {1, {0, 2, 3}, {2}}, {2, {1, 2}, {}}}),
                      doctest::Contains("NotHypertree"));
  }
  SUBCASE("empty d-sepset") {
    CHECK_THROWS_WITH(section_network(net, {{0, {0, 1}, {1}}, {1, {2, 3}, {}}}),
                      doctest::Contains("NotHypertree"));
  }
  SUBCASE("family split across subnets names the variable") {
    BayesNet v;
    const auto p = v.add_binary("P");
    const auto q = v.add_binary("Q");
    const auto x = v.add_binary("X");
    v.set_cpt(p, {}, {0.5, 0.5});
    v.set_cpt(q, {}, {0.5, 0.5});
    v.set_cpt(x, {p, q}, {0.9, 0.1, 0.5, 0.5, 0.5, 0.5, 0.1, 0.9});
    try {
      section_network(v, {{0, {p, x}, {1}}, {1, {q, x}, {}}});
      FAIL("expected UnsoundDsepset");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsoundDsepset);
      CHECK(std::string(e.what()).find("'X'") != std::string::npos);
    }
  }
}

TEST_CASE("sectioning files round-trip") {
  const auto net = chain4();
  const auto m = section_network(net, {{0, {0, 1, 2}, {1}}, {1, {2, 3}, {}}});
  const auto text = serialize_sectioning(m);
  CHECK(text == "subnets\n0: A B C\n1: C D\nlinks\n0 1\n");
  const auto again = section_network(net, parse_sectioning(text, net));
  CHECK(serialize_sectioning(again) == text);
  CHECK_THROWS_WITH(parse_sectioning("subnets\n0 A B\n", net), doctest::Contains("ParseError"));
  CHECK_THROWS_WITH(parse_sectioning("subnets\n0: A Z\n", net), doctest::Contains("UnknownVariable"));
}

TEST_CASE("chain split: beliefs cross the link") {
  const auto net = chain4();
  auto ljf = compile_ljf(section_network(net, {{0, {0, 1, 2}, {1}}, {1, {2, 3}, {}}}));
  // Fresh forest: subnet 1 owns only D's CPT and sees C as uniform.
  CHECK(ljf.local_posterior(1, 2).probabilities == std::vector<double>{0.5, 0.5});
  CHECK(ljf.local_posterior(0, 2).probabilities[0] == doctest::Approx(0.7).epsilon(1e-12));
  ljf.full_communication();
  CHECK(max_gap(ljf, {}) < 1e-12);

  ljf.enter_evidence({1, Evidence{{3, 1}}});
  // Subnet 0 still holds the prior until it hears from subnet 1.
  const auto before = ljf.local_posterior(0, 0);
  CHECK(before.probabilities[0] == doctest::Approx(0.6).epsilon(1e-12));
  ljf.communicate_belief(1, 0);
  CHECK(ljf.messages_sent() == 3);
  CHECK(max_gap(ljf, Evidence{{3, 1}}) < 1e-12);
  CHECK_THROWS_WITH(ljf.communicate_belief(0, 0), doctest::Contains("NotAdjacent"));
}

TEST_CASE("local inference sends nothing and leaves the forest unchanged") {
  const auto net = chain4();
  auto ljf = compile_ljf(section_network(net, {{0, {0, 1, 2}, {1}}, {1, {2, 3}, {}}}));
  const auto before = ljf.local_inference(0);
  const auto with_b = ljf.local_inference(0, Evidence{{1, 1}});
  const auto truth = brute_force_marginals(net, Evidence{{1, 1}});
  for (const auto& p : with_b) CHECK(linf(p.probabilities, truth[p.variable].probabilities) < 1e-12);
  CHECK(ljf.messages_sent() == 0);
  const auto after = ljf.local_inference(0);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i].probabilities == after[i].probabilities);
  CHECK_THROWS_WITH(ljf.local_inference(0, Evidence{{3, 0}}), doctest::Contains("UnknownVariable"));
  CHECK_THROWS_WITH(ljf.enter_evidence({0, Evidence{{3, 0}}}), doctest::Contains("UnknownVariable"));
}

TEST_CASE("contradictory evidence across subnets leaves the forest intact") {
  const auto net = chain4();
  auto ljf = compile_ljf(section_network(net, {{0, {0, 1, 2}, {1}}, {1, {2, 3}, {}}}));
  ljf.enter_evidence({0, Evidence{{2, 0}}});
  ljf.enter_evidence({1, Evidence{{2, 1}}});
  const auto before = ljf.local_inference(1);
  CHECK_THROWS_WITH(ljf.communicate_belief(0, 1), doctest::Contains("ZeroProbabilityEvidence"));
  CHECK(ljf.messages_sent() == 0);
  const auto after = ljf.local_inference(1);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i].probabilities == after[i].probabilities);
  ljf.reset();
  CHECK(ljf.evidence(0).empty());
  ljf.full_communication();
  CHECK(max_gap(ljf, {}) < 1e-12);
}

TEST_CASE("random sound sectionings agree with enumeration after full communication") {
  Rng rng(404);
  std::size_t multi_subnet = 0;
  for (int trial = 0; trial < 60; ++trial) {
    testing::RandomNetOptions o;
    o.variables = 6 + rng.uniform(10);
    o.max_parents = 1 + rng.uniform(3);
    o.max_arity = 2 + rng.uniform(2);
    o.connected = rng.bernoulli(0.7);
    const auto net = testing::random_net(rng, o);
    const auto m = testing::random_sectioning(rng, net, 1 + rng.uniform(4));
    if (m.subnet_count() > 1) ++multi_subnet;
    auto ljf = compile_ljf(m);

    // Scatter evidence over subnets holding each observed variable.
    const auto global = testing::random_evidence(rng, net, rng.uniform(4));
    for (const auto& [v, s] : global) {
      const auto holders = m.holders(v);
      const auto at = holders[rng.uniform(holders.size())];
      ljf.enter_evidence({at, Evidence{{v, s}}});
    }
    ljf.full_communication();
    CHECK(ljf.messages_sent() == 2 * (m.subnet_count() - 1));
    CHECK(max_gap(ljf, global) <= 1e-9);

    // Both ends of every link agree on the d-sepset.
    for (const auto& d : m.dsepsets()) {
      for (VarId v : d.variables) {
        CHECK(linf(ljf.local_posterior(d.a, v).probabilities, ljf.local_posterior(d.b, v).probabilities) <= 1e-9);
      }
    }

    // A second round changes nothing.
    const auto before = ljf;
    ljf.full_communication();
    for (SubnetId s = 0; s < m.subnet_count(); ++s) {
      const auto& pa = before.local(s).potentials();
      const auto& pb = ljf.local(s).potentials();
      for (std::size_t c = 0; c < pa.size(); ++c) {
        CHECK(kernels::max_abs_diff(pa[c].values(), pb[c].values()) <= 1e-12);
      }
    }
  }
  CHECK(multi_subnet >= 50);
}

TEST_CASE("auto_section keeps a shared class variable in every subnet") {
  // Class C with features F0..F7 in a chain, each feature also a child of C.
  BayesNet net;
  const auto c = net.add_binary("C");
  net.set_cpt(c, {}, {0.7, 0.3});
  VarId prev = c;
  for (int i = 0; i < 8; ++i) {
    const auto f = net.add_binary("F" + std::to_string(i));
    if (prev == c) {
      net.set_cpt(f, {c}, {0.8, 0.2, 0.3, 0.7});
    } else {
      net.set_cpt(f, {c, prev}, {0.8, 0.2, 0.6, 0.4, 0.3, 0.7, 0.1, 0.9});
    }
    prev = f;
  }
  const auto m = auto_section(net, 4);
  CHECK(m.subnet_count() == 4);
  for (const auto& s : m.subnets()) CHECK(m.contains(s.id, c));
  auto ljf = compile_ljf(m);
  ljf.enter_evidence({3, Evidence{{8, 1}}});
  ljf.full_communication();
  CHECK(max_gap(ljf, Evidence{{8, 1}}) <= 1e-9);
  CHECK(auto_section(net, 1).subnet_count() == 1);
}

TEST_CASE("linkage clusters sit inside a local cluster on both sides") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    testing::RandomNetOptions o;
    o.variables = 12;
    o.connected = true;
    const auto net = testing::random_net(rng, o);
    const auto ljf = compile_ljf(testing::random_sectioning(rng, net, 1 + rng.uniform(3)));
    for (const auto& l : ljf.linkages()) {
      CHECK(ljf.local(l.a).find_cluster(l.vars).has_value());
      CHECK(ljf.local(l.b).find_cluster(l.vars).has_value());
    }
    for (const auto& s : ljf.msbn().subnets()) CHECK(ljf.local(s.id).variables() == s.variables);
  }
}

TEST_CASE("three subnets in a chain give two linkage trees") {
  BayesNet net = chain4();
  const auto e = net.add_binary("E");
  net.set_cpt(e, {3}, {0.5, 0.5, 0.2, 0.8});
  const auto m = section_network(net, {{0, {0, 1}, {1}}, {1, {1, 2, 3}, {2}}, {2, {3, 4}, {}}});
  const auto ljf = compile_ljf(m);
  REQUIRE(ljf.linkages().size() == 2);
  CHECK(ljf.linkage(0, 1).vars == std::vector<VarId>{1});
  CHECK(ljf.linkage(1, 2).vars == std::vector<VarId>{3});
}

TEST_CASE("communication touches only the receiver") {
  BayesNet net = chain4();
  const auto e = net.add_binary("E");
  net.set_cpt(e, {3}, {0.5, 0.5, 0.2, 0.8});
  auto ljf = compile_ljf(section_network(net, {{0, {0, 1}, {1}}, {1, {1, 2, 3}, {2}}, {2, {3, 4}, {}}}));
  ljf.enter_evidence({0, Evidence{{0, 1}}});
  const auto before = ljf;
  ljf.communicate_belief(0, 1);
  CHECK(ljf.local(0).potentials() == before.local(0).potentials());
  CHECK(ljf.local(2).potentials() == before.local(2).potentials());
  CHECK(!(ljf.local(1).potentials() == before.local(1).potentials()));
  // Subnet 1 now agrees with subnet 0 on the shared variable.
  CHECK(linf(ljf.local_posterior(0, 1).probabilities, ljf.local_posterior(1, 1).probabilities) <= 1e-12);
  // Subnet 2 has not heard anything.
  CHECK(ljf.local_posterior(2, 4).probabilities == before.local_posterior(2, 4).probabilities);
}

TEST_CASE("single-subnet forest: full communication is a no-op") {
  const auto net = chain4();
  auto ljf = compile_ljf(section_network(net, {{0, {0, 1, 2, 3}, {}}}));
  ljf.full_communication();
  CHECK(ljf.messages_sent() == 0);
  CHECK(max_gap(ljf, {}) < 1e-12);
}
