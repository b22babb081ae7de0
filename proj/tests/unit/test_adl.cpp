#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "criteria.hpp"
#include "ontonet/adl.hpp"
#include "ontonet/error.hpp"
#include "ontonet/model_file.hpp"

using namespace ontonet;
using namespace ontonet::adl;

namespace {

const scenario::Scenario& shipped() {
  static const auto sc = scenario::load_scenario(criteria::kScenario);
  return sc;
}

ContextStore spatial() { return build_store(load_model_spec(criteria::kScenario / "spatial.model"), "L"); }

ContextStore activity_store(int a) {
  return build_store(load_model_spec(criteria::kScenario / ("activity" + std::to_string(a) + ".model")),
                     activity_node(a));
}

void put(ContextStore& t, const ContextStore& l, const std::string& sensor, bool state, TimeMs time) {
  t.assert_statement(Statement(sensor, state, time), imported_concepts(l, t, sensor), AssertMode::append);
}

// Sensors with an appended copy in `t`. Statements asserted in place (sync flag,
// activity, prepass results) keep their own id.
std::set<std::string> sources(const ContextStore& t) {
  std::set<std::string> out;
  for (const auto& [id, inst] : t.instances())
    if (!inst.source.empty() && id != inst.source) out.insert(inst.source);
  return out;
}

}  // namespace

TEST_CASE("registry") {
  REQUIRE(registry().size() == 8);
  const auto l = spatial();
  std::set<std::string> ids;
  for (const auto& s : l.instances())
    if (l.is_member(s.first, "WATERING")) ids.insert(s.first);
  CHECK(ids == std::set<std::string>{"D11", "F2", "F3", "M6", "M7", "M8", "M9", "M10", "M11", "M12", "M13", "M14"});
  CHECK(binding(4).triggers == std::vector<net::Pattern>{{"PERSON", "isNearTo", "TABLE2"}});
  CHECK(binding(7).prepass_concepts ==
        std::vector<std::pair<std::string, std::string>>{{"CLEANLIVING", "CLEANED"}, {"CLEANKITCHEN", "CLEANED"}});
  CHECK_THROWS_AS(binding(9), DomainError);
  for (const auto& b : registry())
    for (const auto& set : b.imports) CHECK(set.count(b.installed_class));
}

TEST_CASE("parameter files") {
  const auto p = parse_params("# tuned\nd2 = 45 s\nh3 = 4\n");
  CHECK(p.at("d2").resolved() == 45'000);
  CHECK(p.at("h3").resolved() == 4);
  CHECK(parse_params(format_params(p)) == p);
  CHECK_THROWS_AS(parse_params("d2 = soon\n"), ConfigError);
  CHECK_THROWS_AS(parse_params("d2 = 1 s\nd2 = 2 s\n"), ConfigError);
  const auto ast = apply_params(dsl::parse_model(model_source(2)), p);
  CHECK(ast.param("d2")->resolved() == 45'000);
  CHECK_THROWS_AS(apply_params(dsl::parse_model(model_source(2)), parse_params("d2 = 3\n")), ConfigError);
  CHECK(default_params().size() == 15);
}

TEST_CASE("replay step asserts in the spatial store and refreshes the person") {
  auto net = net::RuntimeNetwork::bootstrap(shipped().network);
  net.start(0);
  net.advance_to(1000);
  REQUIRE(replay_step(net, {1000, "M16", true, std::nullopt}));
  const auto& l = net.store(kSpatialNode);
  CHECK(l.statement("M16") == Statement("M16", true, 1000));
  CHECK(l.matches_pattern("PERSON", "isIn", "KITCHEN"));

  net.advance_to(2000);
  REQUIRE(replay_step(net, {2000, "M16", false, std::nullopt}));
  std::size_t copies = 0;
  for (const auto& [id, inst] : l.instances()) copies += id.rfind("M16", 0) == 0 ? 1 : 0;
  CHECK(copies == 1);

  const auto version = l.version();
  CHECK_FALSE(replay_step(net, {3000, "ZZ9", true, std::nullopt}));
  CHECK(l.version() == version);
  CHECK(net.log().back().kind == "warn");
}

TEST_CASE("import copies current values and suppresses repeats") {
  auto l = spatial();
  auto t1 = activity_store(1);
  for (auto id : {"D7", "I4", "I6", "I7"}) l.assert_statement(Statement(id, true, 1000), {}, AssertMode::overwrite);
  l.assert_statement(Statement("I3", true, 1000), {}, AssertMode::overwrite);

  CHECK(import_statements(l, t1, binding(1), 2000) == 4);
  CHECK(sources(t1) == std::set<std::string>{"D7", "I4", "I6", "I7"});
  CHECK(t1.statement("N") == Statement("N", true, 2000));
  t1.assert_statement(Statement("N", false, 2500), {"SYNC"}, AssertMode::overwrite);

  CHECK(import_statements(l, t1, binding(1), 3000) == 0);
  CHECK(t1.statement("N") == Statement("N", true, 3000));

  l.assert_statement(Statement("I4", false, 3500), {}, AssertMode::overwrite);
  CHECK(import_statements(l, t1, binding(1), 4000) == 1);

  auto t4 = activity_store(4);
  l.assert_statement(Statement("P1", true, 1000), {}, AssertMode::overwrite);
  CHECK(import_statements(l, t4, binding(4), 2000) == 1);
  CHECK(sources(t4) == std::set<std::string>{"P1"});
}

TEST_CASE("imported concepts stay inside the activity graph") {
  const auto l = spatial();
  const auto t3 = activity_store(3);
  CHECK(imported_concepts(l, t3, "M6") == std::set<std::string>{"MOTION", "PLANT1"});
  CHECK(imported_concepts(l, t3, "D11") == std::set<std::string>{"DOOR", "WATERING"});
}

TEST_CASE("watering recognised at the door close") {
  const auto& model = shipped().models[2];
  const auto l = spatial();
  auto t3 = activity_store(3);
  put(t3, l, "D11", true, 1000);
  put(t3, l, "F2", true, 5000);
  for (TimeMs t : {10'000, 20'000, 31'000}) put(t3, l, "M6", true, t);
  for (TimeMs t : {40'000, 50'000, 61'000}) put(t3, l, "M12", true, t);
  put(t3, l, "D11", false, 70'000);
  const auto rec = evaluate_activity(t3, model, 71'000);
  REQUIRE(rec);
  CHECK(rec->activity == 3);
  CHECK(rec->time == 70'000);
  CHECK(rec->notified_at == 71'000);
  CHECK_FALSE(rec->evidence.empty());
  // Cleared down to the activity and sync statements.
  CHECK(t3.statement("A3").has_value());
  CHECK(sources(t3).empty());
}

TEST_CASE("watering with too few visits keeps the store") {
  const auto& model = shipped().models[2];
  const auto l = spatial();
  auto t3 = activity_store(3);
  put(t3, l, "D11", true, 1000);
  put(t3, l, "F2", true, 5000);
  for (TimeMs t : {10'000, 31'000}) put(t3, l, "M6", true, t);
  for (TimeMs t : {40'000, 50'000, 61'000}) put(t3, l, "M12", true, t);
  put(t3, l, "D11", false, 70'000);
  const auto before = sources(t3);
  CHECK_FALSE(evaluate_activity(t3, model, 71'000));
  CHECK(sources(t3) == before);
  CHECK_FALSE(t3.statement("A3").has_value());
}

TEST_CASE("outfit recognised at the leave time") {
  const auto& model = shipped().models[7];
  const auto l = spatial();
  auto t8 = activity_store(8);
  put(t8, l, "D12", true, 1000);
  put(t8, l, "M22", true, 9000);
  put(t8, l, "M4", true, 15'000);
  const auto rec = evaluate_activity(t8, model, 16'000);
  REQUIRE(rec);
  CHECK(rec->time == 15'000);

  auto early = activity_store(8);
  put(early, l, "D12", true, 1000);
  put(early, l, "M22", true, 3000);
  put(early, l, "M4", true, 15'000);
  CHECK_FALSE(evaluate_activity(early, model, 16'000));
}

TEST_CASE("a recognition is not reported twice") {
  const auto& model = shipped().models[1];
  const auto l = spatial();
  auto t2 = activity_store(2);
  put(t2, l, "I3", false, 1000);
  put(t2, l, "I3", true, 40'000);
  REQUIRE(evaluate_activity(t2, model, 41'000));
  CHECK_FALSE(evaluate_activity(t2, model, 42'000));
  put(t2, l, "I3", false, 50'000);
  put(t2, l, "I3", true, 90'000);
  const auto again = evaluate_activity(t2, model, 91'000);
  REQUIRE(again);
  CHECK(again->time == 90'000);
}

TEST_CASE("golden traces") {
  const auto results = run_golden(criteria::kScenario, shipped().models, golden_cases());
  for (const auto& r : results) {
    CAPTURE(r.golden.name);
    CAPTURE(r.detail);
    CHECK(r.passed);
  }
  CHECK(criteria::golden_traces().status == criteria::Status::pass);
}

TEST_CASE("sync flag is true exactly when an import is pending") {
  const auto& sc = shipped();
  const auto traces = criteria::synthetic_study(3);
  auto net = net::RuntimeNetwork::bootstrap(sc.network);
  bool started = false;
  ProcedureOptions procs;
  procs.replayer_active = &started;
  bind_procedures(net, sc.models, procs);
  const auto& trace = traces.front();
  net.start(trace.events.front().time - 1000);
  std::size_t imports_seen = 0, evaluations_seen = 0;
  for (const auto& ev : trace.events) {
    net.advance_to(ev.time);
    replay_step(net, ev);
    // Every import is followed within the same step by an evaluation that resets N.
    for (int a = 1; a <= kActivityCount; ++a) {
      const auto n = net.store(activity_node(a)).statement(std::string(kSyncStatement));
      if (n) CHECK_FALSE(n->state());
    }
  }
  for (const auto& r : net.log()) {
    imports_seen += r.kind == "import";
    evaluations_seen += r.kind == "run" && r.name[0] == 'R';
  }
  CHECK(imports_seen > 0);
  CHECK(evaluations_seen == imports_seen);
}
