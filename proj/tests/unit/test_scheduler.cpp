#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "criteria.hpp"
#include "ontonet/error.hpp"
#include "ontonet/network.hpp"

using namespace ontonet;
using namespace ontonet::net;

namespace {

std::string config_error(std::string_view text) {
  try {
    parse_network(text, criteria::kTestData / "sched");
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "no error";
}

std::vector<LogRecord> of_kind(const std::vector<LogRecord>& log, std::string_view kind) {
  std::vector<LogRecord> out;
  for (const auto& r : log)
    if (r.kind == kind) out.push_back(r);
  return out;
}

}  // namespace

TEST_CASE("config validation names the broken entry") {
  CHECK(config_error("[nodes]\nX represents=flags.model\n[conditions]\nC checks=a in=Y hasTarget=true\n") ==
        "conditions.C.in");
  CHECK(config_error("[nodes]\nX represents=flags.model\n[procedures]\nP implements=count\n") ==
        "procedures.P.requires");
  CHECK(config_error("[nodes]\nX represents=flags.model\n[procedures]\nP implements=count requires=E\n") ==
        "procedures.P.requires");
  CHECK(config_error("[nodes]\nX represents=flags.model\nX represents=flags.model\n") == "nodes.X");
}

TEST_CASE("bootstrap of the shipped scenario") {
  const auto model = load_network(criteria::kScenario / "network.cfg");
  CHECK(model.nodes.size() == 9);
  CHECK(model.procedures.size() == 17);
  const auto net = RuntimeNetwork::bootstrap(model);
  // U and H come on top of the declared nodes and procedures.
  CHECK(net.nodes().size() == 10);
  CHECK(net.procedures().size() == 18);
  CHECK(net.conditions().size() == model.conditions.size());
  for (const auto& [name, c] : net.conditions()) CHECK_FALSE(c.outcome);

  const auto again = RuntimeNetwork::bootstrap(model);
  CHECK(again.nodes().size() == net.nodes().size());
  CHECK(std::equal(net.procedures().begin(), net.procedures().end(), again.procedures().begin(),
                   [](const auto& a, const auto& b) { return a.first == b.first; }));
}

TEST_CASE("empty network holds only the upper node and the scheduler") {
  const auto net = RuntimeNetwork::bootstrap(parse_network(""));
  CHECK(net.nodes().size() == 1);
  CHECK(net.procedures().size() == 1);
  CHECK(net.conditions().empty());
}

TEST_CASE("unreadable node model names the node") {
  try {
    RuntimeNetwork::bootstrap(parse_network("[nodes]\nQ represents=missing.model\n", criteria::kTestData));
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.where().find("Q") != std::string::npos);
  }
}

TEST_CASE("edge-triggered dispatch, conjunction within, disjunction across events") {
  const auto run = criteria::run_flags(criteria::kFlagScript);
  CHECK(run.runs == criteria::kFlagRuns);
  CHECK(criteria::scheduler().status == criteria::Status::pass);
}

TEST_CASE("logs are byte-identical across reruns and parse back") {
  const auto first = criteria::run_flags(criteria::kFlagScript);
  for (int i = 0; i < 10; ++i) CHECK(criteria::run_flags(criteria::kFlagScript).log == first.log);
  const auto parsed = parse_log(first.log);
  CHECK(format_log(parsed) == first.log);
  CHECK(of_kind(parsed, "run").size() == criteria::kFlagRuns.size());
}

TEST_CASE("fast-forward does not change outcomes") {
  const auto model = load_network(criteria::kTestData / "sched" / "network.cfg");
  std::vector<std::string> logs;
  for (bool ff : {true, false}) {
    auto net = RuntimeNetwork::bootstrap(model);
    net.set_fast_forward(ff);
    net.bind("count", [](RuntimeNetwork&, const std::string&) {});
    net.start(0);
    for (const auto& s : criteria::kFlagScript) {
      net.advance_to(s.time);
      net.store("X").assert_statement(Statement(s.flag, s.state, s.time), {"FLAG"}, AssertMode::overwrite);
    }
    net.advance_to(2000);
    logs.push_back(format_log(net.log()));
  }
  CHECK(logs[0] == logs[1]);
}

TEST_CASE("nothing due leaves the log empty and moves the clock") {
  auto net = RuntimeNetwork::bootstrap(load_network(criteria::kTestData / "sched" / "network.cfg"));
  net.start(0);
  net.advance_to(100);
  const auto size = net.log().size();
  net.advance_to(5000);
  CHECK(net.log().size() == size);
  CHECK(net.now() == 5000);
  CHECK_THROWS_AS(net.advance_to(10), DomainError);
}

TEST_CASE("unbound implementation is logged, not thrown") {
  auto net = RuntimeNetwork::bootstrap(load_network(criteria::kTestData / "sched" / "network.cfg"));
  net.start(0);
  net.advance_to(100);
  net.store("X").assert_statement(Statement("c", true, 100), {"FLAG"}, AssertMode::overwrite);
  net.advance_to(200);
  CHECK(of_kind(net.log(), "error").size() == 1);
}

TEST_CASE("sync notification dispatches in the same step, once per edge") {
  auto net = RuntimeNetwork::bootstrap(load_network(criteria::kTestData / "sched" / "network.cfg"));
  int runs = 0;
  net.bind("count", [&](RuntimeNetwork&, const std::string&) { ++runs; });
  net.start(0);
  net.advance_to(105);
  net.store("X").assert_statement(Statement("c", true, 105), {"FLAG"}, AssertMode::overwrite);
  CHECK(net.notify_sync("X", "c") == std::vector<std::string>{"E2"});
  CHECK(runs == 1);
  // Still true: no second dispatch.
  net.store("X").assert_statement(Statement("c", true, 105), {"FLAG"}, AssertMode::overwrite);
  CHECK(net.notify_sync("X", "c").empty());
  CHECK(runs == 1);
  net.advance_to(300);
  CHECK(runs == 1);
  // Already false: nothing fires.
  net.store("X").assert_statement(Statement("c", false, 300), {"FLAG"}, AssertMode::overwrite);
  CHECK(net.notify_sync("X", "c").empty());
  net.store("X").assert_statement(Statement("c", true, 300), {"FLAG"}, AssertMode::overwrite);
  CHECK(net.notify_sync("X", "c") == std::vector<std::string>{"E2"});
  CHECK(runs == 2);
}

TEST_CASE("virtual clock is monotone") {
  VirtualClock c(10, 4.0);
  c.advance_to(10);
  c.advance_to(20);
  CHECK(c.now() == 20);
  CHECK(c.speed() == 4.0);
  CHECK_THROWS_AS(c.advance_to(19), DomainError);
}
