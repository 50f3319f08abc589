#include <doctest.h>

#include <string>
#include <vector>

#include "mids/simnet/network.hpp"
#include "mids/trust/dtm.hpp"

using namespace mids;
using namespace mids::simnet;

namespace {

using Net = Network<std::string>;

struct Log {
  std::vector<std::string> lines;
  void operator()(const Envelope<std::string>& e) {
    lines.push_back(std::to_string(e.deliver_tick) + ":" + std::to_string(e.sender) + "->" +
                    std::to_string(e.recipient) + ":" + e.payload);
  }
};

void idle(Tick) {}

}  // namespace

TEST_CASE("latency and ordering") {
  Net net({4, 1, 1, 100});
  Log log;
  net.schedule(0, 1, "a");
  net.schedule(2, 1, "b");
  net.schedule(3, 3, "self");
  CHECK(net.pending() == 2);
  net.run_until(1, log, idle);
  // Same-host delivery is immediate; the rest arrive one tick later in
  // scheduling order.
  REQUIRE(log.lines.size() == 3);
  CHECK(log.lines[0] == "0:3->3:self");
  CHECK(log.lines[1] == "1:0->1:a");
  CHECK(log.lines[2] == "1:2->1:b");
}

TEST_CASE("empty system leaves an empty log") {
  Net net({3, 1, 1, 100});
  Log log;
  net.run_until(10, log, idle);
  CHECK(net.trace().events().empty());
  CHECK(net.now() == 10);
}

TEST_CASE("errors") {
  Net net({3, 1, 1, 20});
  Log log;
  CHECK_THROWS_WITH(net.schedule(0, 7, "x"), doctest::Contains("UnknownHost"));
  net.isolate(1);
  CHECK_THROWS_WITH(net.schedule(1, 0, "x"), doctest::Contains("SenderIsolated"));
  CHECK_THROWS_WITH(net.run_until(21, log, idle), doctest::Contains("TickLimitExceeded"));
  CHECK_THROWS_WITH(Net({0, 1, 1, 5}), doctest::Contains("InvalidArgument"));
}

TEST_CASE("isolation refuses deliveries and every envelope is accounted for") {
  Net net({3, 1, 2, 100});
  Log log;
  net.schedule(0, 2, "before");
  net.schedule(2, 0, "from-2");
  net.run_until(1, log, [&](Tick t) {
    if (t == 1) net.isolate(2);
  });
  net.schedule(0, 2, "after");
  net.run_until(10, log, idle);
  CHECK(log.lines.empty());
  CHECK(net.delivered() == 0);
  CHECK(net.refused() == 3);
  CHECK(net.trace().count(EventKind::Send) == net.delivered() + net.refused());
  // After isolation no delivery involving host 2 appears.
  for (const auto& e : net.trace().events()) CHECK(e.kind != EventKind::Deliver);
  net.isolate(2);
  CHECK(net.trace().count(EventKind::Isolate) == 1);
}

TEST_CASE("compromise injection") {
  Net net({3, 1, 1, 50});
  Log log;
  net.inject_compromise({1, 5, trust::Behavior::silent(), false});
  net.inject_compromise({2, 80, trust::Behavior::lie(0), true});
  CHECK(net.trace().count(EventKind::Warning) == 1);
  net.run_until(4, log, idle);
  CHECK_FALSE(net.compromise(1).has_value());
  net.run_until(5, log, idle);
  REQUIRE(net.compromise(1).has_value());
  CHECK(net.compromise(1)->protocol == trust::Behavior::silent());
  CHECK_FALSE(net.compromise(2).has_value());
  CHECK(net.trace().count(EventKind::Compromise) == 1);
  CHECK_THROWS_WITH(net.inject_compromise({9, 1}), doctest::Contains("UnknownHost"));
}

TEST_CASE("replaying a run gives a byte-identical trace") {
  auto once = [] {
    Net net({5, 3, 1, 100});
    Log log;
    net.run_until(20, log, [&](Tick t) {
      for (HostId h = 0; h < 5; ++h) {
        if (!net.is_isolated(h) && (t + h) % 3 == 0) net.schedule(h, (h + t) % 5, "m" + std::to_string(t));
      }
      if (t == 10) {
        auto domain = trust::make_domain(5);
        std::vector<trust::Behavior> b(5);
        b[3] = trust::Behavior::split(trust::host_bit(1));
        trust::DtmOptions opt;
        opt.record_trace = true;
        const auto r = trust::dtm_round(domain, b, {}, opt);
        log_dtm_round(net.trace(), t, r);
        for (auto h : r.newly_isolated) net.isolate(h);
      }
    });
    return net.trace().to_text();
  };
  const auto a = once();
  CHECK(a == once());
  CHECK(a.find("verdict host=3 choice=LeaderContradictory majority=0 verdict=Compromised") != std::string::npos);
  CHECK(a.find("isolate\thost=3") != std::string::npos);
  CHECK(a.find("from=3", a.find("isolate\thost=3")) == std::string::npos);
}
