#include <doctest.h>

#include <cmath>

#include "experiments.hpp"
#include "mids/agents/knowledge.hpp"
#include "mids/agents/publish.hpp"
#include "mids/agents/runtime.hpp"
#include "mids/detect/learn.hpp"
#include "mids/detect/synthetic.hpp"

using namespace mids;
using namespace mids::agents;

namespace {

std::vector<bayes::Posterior> one_belief(const AgentId&) { return {{1, {0.25, 0.75}}}; }

}  // namespace

TEST_CASE("registry") {
  Registry r;
  r.register_agent({"sm1", 0, 0, AgentKind::SystemMonitoring, {1, 2}});
  r.register_agent({"im1", 1, 0, AgentKind::IntrusionMonitoring, {2, 3}});
  r.register_agent({"reg", 2, 0, AgentKind::Registry, {}});
  CHECK(r.lookup(2) == std::vector<AgentLocation>{{"sm1", 0}, {"im1", 1}});
  CHECK(r.lookup(3) == std::vector<AgentLocation>{{"im1", 1}});
  CHECK(r.lookup(9).empty());
  CHECK_THROWS_WITH(r.register_agent({"sm1", 3, 0, AgentKind::SystemMonitoring, {}}),
                    doctest::Contains("DuplicateAgentId"));
  CHECK_THROWS_WITH(r.register_agent({"reg2", 3, 0, AgentKind::Registry, {1}}), doctest::Contains("InvalidArgument"));
  CHECK_THROWS_WITH(r.descriptor("nobody"), doctest::Contains("UnknownAgent"));
  CHECK(r.remove_host(1) == std::vector<AgentId>{"im1"});
  CHECK(r.lookup(3).empty());
  CHECK(r.lookup(2) == std::vector<AgentLocation>{{"sm1", 0}});
}

TEST_CASE("wire format") {
  const WireMessage m{MessageType::Belief, "sm1", "im2", 17, "v=3:0.25,0.75"};
  const auto line = format_wire(m);
  CHECK(line == "BELIEF\tsm1\tim2\t17\tv=3:0.25,0.75");
  CHECK(parse_wire(line) == m);
  CHECK_THROWS_WITH(parse_wire("BELIEF\tsm1\tim2\t17"), doctest::Contains("MalformedLine"));
  CHECK_THROWS_WITH(parse_wire("GOSSIP\ta\tb\t1\tx"), doctest::Contains("MalformedLine"));
  CHECK_THROWS_WITH(parse_wire("ALERT\ta\tb\tsoon\tx"), doctest::Contains("MalformedLine"));
  CHECK_THROWS_WITH(format_wire({MessageType::Alert, "a b", "c", 0, ""}), doctest::Contains("InvalidArgument"));

  const std::vector<bayes::Posterior> posts = {{3, {0.1, 0.9}}, {7, {0.2, 0.3, 0.5}}};
  const auto back = decode_posteriors(encode_posteriors(posts));
  REQUIRE(back.size() == 2);
  CHECK(back[1].variable == 7);
  CHECK(back[1].probabilities == posts[1].probabilities);

  bayes::Potential p({2, 5}, {2, 3}, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) p.values()[i] = 0.1 * static_cast<double>(i + 1) / 3.0;
  const auto q = decode_potential(payload_fields(encode_potential(p)));
  CHECK(q.vars() == p.vars());
  CHECK(q.arities() == p.arities());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(q.values()[i] == p.values()[i]);
}

TEST_CASE("belief publication cadence") {
  Registry r;
  r.register_agent({"sm", 0, 0, AgentKind::SystemMonitoring, {1}});
  r.register_agent({"near", 1, 0, AgentKind::IntrusionMonitoring, {1}});
  r.register_agent({"far", 2, 1, AgentKind::IntrusionMonitoring, {1}});
  DetectionPolicy policy;
  Bus bus({3, 1, 1, 1000});

  SUBCASE("no subscriptions, no messages") {
    Subscriptions subs(r);
    bus.run_until(100, [](const auto&) {}, [&](Tick t) { subs.publish_beliefs("sm", t, policy, bus, one_belief); });
    CHECK(bus.trace().count(simnet::EventKind::Send) == 0);
  }
  SUBCASE("one message per tick locally, one per ten ticks across subdomains") {
    Subscriptions subs(r);
    subs.subscribe("near", "sm", {1});
    subs.subscribe("far", "sm", {1});
    std::size_t delivered_to_far = 0;
    // One extra tick lets the last remote message land.
    bus.run_until(
        101, [&](const simnet::Envelope<WireMessage>& e) { delivered_to_far += e.payload.recipient == "far"; },
        [&](Tick t) {
          if (t <= 100) subs.publish_beliefs("sm", t, policy, bus, one_belief);
        });
    CHECK(bus.sent_between(0, 1) == 100);
    CHECK(bus.sent_between(0, 2) == 10);
    CHECK(delivered_to_far == 10);
  }
  SUBCASE("isolated subscribers are skipped") {
    Subscriptions subs(r);
    subs.subscribe("near", "sm", {1});
    bus.isolate(1);
    CHECK(subs.publish_beliefs("sm", 1, policy, bus, one_belief) == 0);
  }
  CHECK_THROWS_WITH(Subscriptions(r).subscribe("ghost", "sm", {}), doctest::Contains("UnknownAgent"));
  CHECK_THROWS_WITH((DetectionPolicy{0.5, 10, 10}.validate()), doctest::Contains("InvalidArgument"));
}

TEST_CASE("local deliberation raises the right alert") {
  const auto g = detect::novelty_generator(4);
  const auto train = g.sample_classes({0, 1, 2}, 300, 5);
  const auto net = detect::fit_cpts(detect::learn_structure(train), train);
  auto ljf = msbn::compile_ljf(msbn::auto_section(net, 1));
  const auto evidence = [](std::uint16_t state) {
    bayes::Evidence e;
    for (std::size_t f = 0; f < 4; ++f) e.set(detect::feature_var(f), state);
    return e;
  };
  SUBCASE("known attack") {
    const auto d = deliberate(ljf, 0, evidence(2), 0.5, "im0", 3);
    REQUIRE(d.alert);
    CHECK(d.alert->kind == AlertKind::KnownAttack);
    CHECK(d.alert->class_name == "DoS");
    CHECK(d.alert->status == AlertStatus::Open);
  }
  SUBCASE("normal traffic raises nothing") {
    const auto d = deliberate(ljf, 0, evidence(0), 0.5, "im0", 3);
    CHECK(d.decision.kind == detect::DecisionKind::Normal);
    CHECK_FALSE(d.alert);
  }
  SUBCASE("unseen pattern is an anomaly") {
    const auto d = deliberate(ljf, 0, evidence(6), 0.5, "im0", 3);
    REQUIRE(d.alert);
    CHECK(d.alert->kind == AlertKind::Anomaly);
    for (double p : d.class_posterior) CHECK(p < 0.5);
  }
}

TEST_CASE("alert review") {
  Alert anomaly;
  anomaly.id = 1;
  Alert attack;
  attack.id = 2;
  attack.kind = AlertKind::KnownAttack;
  attack.class_name = "DoS";

  confirm_alert(anomaly, AdminDecision::Confirm);
  CHECK(anomaly.status == AlertStatus::ConfirmedAttack);
  CHECK(anomaly.kb_update_scheduled);
  CHECK_THROWS_WITH(confirm_alert(anomaly, AdminDecision::Reject), doctest::Contains("AlreadyResolved"));
  confirm_alert(attack, AdminDecision::Confirm);
  CHECK_FALSE(attack.kb_update_scheduled);

  std::vector<Alert> alerts(3);
  for (std::size_t i = 0; i < 3; ++i) {
    alerts[i].id = i + 1;
    alerts[i].agent = "im0p";
    alerts[i].posterior = {0.4, 0.3, 0.3};
  }
  const auto decisions = parse_decisions("1 confirm Worm\n2 reject\n# comment\n3 confirm\n");
  const auto out = review_alerts(alerts, decisions, "Unknown");
  CHECK(out.confirmed == 2);
  CHECK(out.rejected == 1);
  REQUIRE(out.new_classes.size() == 2);
  CHECK(out.new_classes[0].first == "Worm");
  CHECK(out.new_classes[1].first == "Unknown");
  CHECK(alerts[1].status == AlertStatus::Rejected);
  CHECK_THROWS_WITH(review_alerts(alerts, parse_decisions("9 reject"), "x"), doctest::Contains("UnknownAlertId"));

  const auto log = format_alert_log(alerts);
  CHECK(parse_alert_log(log) == alerts);
}

TEST_CASE("knowledgebase update") {
  const auto g = detect::novelty_generator(4);
  Knowledgebase kb;
  kb.training = g.sample_classes({0, 1, 2}, 200, 8);
  kb.net = detect::fit_cpts(detect::learn_structure(kb.training), kb.training);
  kb.msbn = msbn::auto_section(kb.net, 2);
  const auto novel = g.sample_classes({3}, 12, 9);
  std::vector<std::vector<std::uint16_t>> rows;
  for (std::size_t r = 0; r < novel.rows(); ++r) rows.emplace_back(novel.row(r), novel.row(r) + novel.width());

  CHECK_THROWS_WITH(update_knowledgebase(kb, "Novel", {rows.begin(), rows.begin() + 9}),
                    doctest::Contains("TooFewConfirmedRecords"));
  CHECK_THROWS_WITH(update_knowledgebase(kb, "Novel", {}, 0), doctest::Contains("TooFewConfirmedRecords"));
  CHECK_THROWS_WITH(update_knowledgebase(kb, "DoS", rows), doctest::Contains("InvalidArgument"));
  const auto updated = update_knowledgebase(kb, "Novel", rows);
  CHECK(updated.net.arity(detect::kClassVar) == kb.net.arity(detect::kClassVar) + 1);
  CHECK(updated.msbn.subnet_count() == kb.msbn.subnet_count());
  CHECK(updated.training.rows() == kb.training.rows() + 12);
  bayes::require_valid(updated.net);
}

TEST_CASE("confirmed anomalies teach the held-out class") {
  const auto out = testing::novelty_experiment(42);
  CHECK(out.alerts == 40);
  CHECK(out.anomaly_rate_before == doctest::Approx(1.0));
  CHECK(out.class_arity_after == out.class_arity_before + 1);
  CHECK(out.detection_after >= 0.9);
  CHECK(out.known_detection_after >= 0.8);
}

TEST_CASE("distributed runtime") {
  const auto g = detect::novelty_generator(6);
  const auto train = g.sample_classes({0, 1, 2}, 200, 3);
  const auto net = detect::fit_cpts(detect::learn_structure(train), train);
  const auto m = msbn::auto_section(net, 3);
  const auto records = g.sample_classes({0, 1, 2, 3}, 2, 4);

  SUBCASE("clean run matches centralized inference") {
    const auto report = run_distributed(m, records, {});
    REQUIRE(report.epochs.size() == records.rows());
    CHECK(report.isolations.empty());
    CHECK(report.suspicions == 0);
    detect::Classifier clf(net);
    for (std::size_t e = 0; e < records.rows(); ++e) {
      const auto want = clf.posterior(detect::row_evidence(records, e));
      for (const auto& got : report.epochs[e].class_posterior) {
        for (std::size_t c = 0; c < want.size(); ++c) CHECK(std::abs(got[c] - want[c]) <= 1e-9);
      }
    }
    // Rows of the unseen class and of known attacks raise alerts.
    CHECK(report.alerts.size() >= 4);
  }
  SUBCASE("epoch too short for the hypertree") {
    RuntimeConfig c;
    c.policy.remote_period = 2;
    CHECK_THROWS_WITH(run_distributed(m, records, c), doctest::Contains("InvalidArgument"));
  }
}

TEST_CASE("a compromised host is caught and its standby takes over") {
  const auto out = testing::compromise_experiment(42);
  CHECK(out.attacked.hosts == 10);
  REQUIRE(out.attacked.isolations.size() == 1);
  CHECK(out.attacked.isolations[0].host == 2);
  CHECK(out.clean.isolations.empty());
  CHECK(out.first_clean_epoch <= 6);
  CHECK(out.max_gap_after <= 1e-6);
  CHECK(out.attacked.epochs.back().active[2] == "im2b");
  CHECK(out.replay.trace == out.attacked.trace);
  CHECK(out.attacked.trace.find("host=2 choice=LeaderReportsSafe majority=1 verdict=Compromised") != std::string::npos);
}
