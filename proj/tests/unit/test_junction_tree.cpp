#include <doctest.h>

#include "mids/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "mids/bayes/enumerate.hpp"
#include "mids/bayes/junction_tree.hpp"
#include "oracles.hpp"
#include "random_nets.hpp"

using namespace mids;
using namespace mids::bayes;

namespace {

BayesNet chain3() {
  BayesNet net;
  const auto a = net.add_binary("A");
  const auto b = net.add_binary("B");
  const auto c = net.add_binary("C");
  net.set_cpt(a, {}, {0.6, 0.4});
  net.set_cpt(b, {a}, {0.7, 0.3, 0.2, 0.8});
  net.set_cpt(c, {b}, {0.9, 0.1, 0.5, 0.5});
  return net;
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("build_junction_tree structure") {
  SUBCASE("chain gives two clusters sharing B") {
    const auto jt = compile(chain3());
    REQUIRE(jt.clusters().size() == 2);
    CHECK(jt.clusters()[0] == std::vector<VarId>{0, 1});
    CHECK(jt.clusters()[1] == std::vector<VarId>{1, 2});
    REQUIRE(jt.separators().size() == 1);
    CHECK(jt.separators()[0].vars == std::vector<VarId>{1});
  }
  SUBCASE("v-structure gives a single cluster") {
    BayesNet net;
    const auto a = net.add_binary("A");
    const auto b = net.add_binary("B");
    const auto c = net.add_binary("C");
    net.set_cpt(a, {}, {0.5, 0.5});
    net.set_cpt(b, {}, {0.5, 0.5});
    net.set_cpt(c, {a, b}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const auto jt = compile(net);
    REQUIRE(jt.clusters().size() == 1);
    CHECK(jt.clusters()[0] == std::vector<VarId>{0, 1, 2});
  }
  SUBCASE("random nets satisfy the tree and running-intersection properties") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
      testing::RandomNetOptions opt;
      opt.variables = 8;
      const auto net = testing::random_net(rng, opt);
      const auto jt = compile(net);
      CHECK(testing::is_tree(jt.clusters().size(), jt.separators()));
      CHECK(testing::running_intersection_holds(jt.clusters(), jt.separators()));
      for (const auto& s : jt.separators()) {
        std::vector<VarId> common;
        const auto& a = jt.clusters()[s.a];
        const auto& b = jt.clusters()[s.b];
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        CHECK(common == s.vars);
      }
      CHECK(jt.cpt_assignment().size() == net.size());
    }
  }
  SUBCASE("non-chordal input is rejected") {
    UndirectedGraph g;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 0);
    BayesNet net;
    for (int i = 0; i < 4; ++i) net.set_cpt(net.add_binary("v" + std::to_string(i)), {}, {0.5, 0.5});
    CHECK_THROWS_WITH_AS(build_junction_tree(g, {0, 1, 2, 3}, net), doctest::Contains("NotChordal"), Error);
  }
}

TEST_CASE("propagate and query") {
  const auto net = testing::two_node_net();
  const auto jt = propagate(compile(net), {});
  const auto pb = query_posterior(jt, 1);
  CHECK(pb.probabilities[0] == doctest::Approx(0.59).epsilon(1e-12));
  CHECK(pb.probabilities[1] == doctest::Approx(0.41).epsilon(1e-12));

  const auto observed = propagate(compile(net), Evidence{{1, 0}});
  CHECK(query_posterior(observed, 1).probabilities == std::vector<double>{1.0, 0.0});

  CHECK_THROWS_WITH_AS(query_posterior(compile(net), 0), doctest::Contains("NotCalibrated"), Error);
  CHECK_THROWS_WITH_AS(query_posterior(jt, 7), doctest::Contains("UnknownVariable"), Error);
}

TEST_CASE("empty evidence reproduces prior marginals") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    testing::RandomNetOptions opt;
    opt.variables = 9;
    opt.max_arity = 3;
    const auto net = testing::random_net(rng, opt);
    const auto jt = propagate(compile(net), {});
    const auto truth = brute_force_marginals(net, {});
    for (VarId v = 0; v < net.size(); ++v) {
      CHECK(linf(query_posterior(jt, v).probabilities, truth[v].probabilities) <= 1e-9);
    }
  }
}

TEST_CASE("full evidence leaves one nonzero entry per cluster") {
  Rng rng(8);
  testing::RandomNetOptions opt;
  opt.variables = 7;
  const auto net = testing::random_net(rng, opt);
  const auto e = testing::random_evidence(rng, net, net.size());
  const auto jt = propagate(compile(net), e);
  for (const auto& p : jt.potentials()) {
    CHECK(std::count_if(p.values().begin(), p.values().end(), [](double x) { return x != 0.0; }) == 1);
  }
}

TEST_CASE("calibration: separators agree and repeated propagation is idempotent") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    testing::RandomNetOptions opt;
    opt.variables = 4 + rng.uniform(9);
    const auto net = testing::random_net(rng, opt);
    const auto e = testing::random_evidence(rng, net, rng.uniform(net.size() + 1));
    auto jt = propagate(compile(net), e);
    CHECK(jt.calibrated());
    CHECK(testing::max_separator_disagreement(jt) <= 1e-9);

    const auto before = jt.potentials();
    jt.propagate(e);
    double change = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
      for (std::size_t k = 0; k < before[i].size(); ++k) {
        change = std::max(change, std::fabs(before[i].values()[k] - jt.potentials()[i].values()[k]));
      }
    }
    CHECK(change <= 1e-12);
  }
}

TEST_CASE("posterior matches enumeration whichever cluster is used") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    testing::RandomNetOptions opt;
    opt.variables = 2 + rng.uniform(11);
    const auto net = testing::random_net(rng, opt);
    const auto e = testing::random_evidence(rng, net, rng.uniform(net.size()));
    const auto jt = propagate(compile(net), e);
    const auto truth = brute_force_marginals(net, e);
    for (VarId v = 0; v < net.size(); ++v) {
      CHECK(linf(query_posterior(jt, v).probabilities, truth[v].probabilities) <= 1e-9);
      for (std::size_t c = 0; c < jt.clusters().size(); ++c) {
        const auto& cl = jt.clusters()[c];
        if (!std::binary_search(cl.begin(), cl.end(), v)) continue;
        auto m = testing::direct_marginal(cl, jt.potentials()[c].arities(),
                                          {jt.potentials()[c].values().begin(), jt.potentials()[c].values().end()}, {v});
        double t = 0;
        for (double x : m) t += x;
        for (double& x : m) x /= t;
        CHECK(linf(m, truth[v].probabilities) <= 1e-9);
      }
    }
  }
}

TEST_CASE("zero-probability evidence is an error") {
  BayesNet det;
  const auto a = det.add_binary("A");
  const auto b = det.add_binary("B");
  det.set_cpt(a, {}, {1.0, 0.0});
  det.set_cpt(b, {a}, {1.0, 0.0, 0.0, 1.0});
  CHECK_THROWS_WITH_AS(propagate(compile(det), Evidence{{1, 1}}), doctest::Contains("ZeroProbabilityEvidence"), Error);
}

TEST_CASE("reset restores the compiled state") {
  const auto net = chain3();
  auto jt = compile(net);
  const auto fresh = jt.potentials();
  jt.propagate(Evidence{{2, 1}});
  jt.reset();
  CHECK(jt.potentials() == fresh);
  CHECK_FALSE(jt.calibrated());
}

TEST_CASE("results are bit-identical across kernel ISAs") {
  if (!kernels::isa_supported(kernels::Isa::Avx2)) return;
  Rng rng(99);
  testing::RandomNetOptions opt;
  opt.variables = 12;
  opt.max_arity = 3;
  const auto net = testing::random_net(rng, opt);
  const auto e = testing::random_evidence(rng, net, 4);
  const auto original = kernels::active_isa();
  kernels::set_active_isa(kernels::Isa::Scalar);
  const auto a = propagate(compile(net), e);
  kernels::set_active_isa(kernels::Isa::Avx2);
  const auto b = propagate(compile(net), e);
  kernels::set_active_isa(original);
  CHECK(a.potentials() == b.potentials());
}
