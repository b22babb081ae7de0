// Serial against OpenMP rule matching and session replay.
#include <benchmark/benchmark.h>

#include <random>

#include "ontonet/adl.hpp"
#include "ontonet/model_file.hpp"
#include "ontonet/scenario.hpp"
#include "ontonet/synthetic.hpp"

using namespace ontonet;

namespace {

const scenario::Scenario& shipped() {
  static const auto sc = scenario::load_scenario(ONTONET_SCENARIO_DIR);
  return sc;
}

/// A T1 store crowded with door and item copies, `n` of them.
StoreSnapshot crowded_medicine(int n) {
  auto store = build_store(load_model_spec(std::filesystem::path(ONTONET_SCENARIO_DIR) / "activity1.model"), "T1");
  std::mt19937_64 rng(3);
  const char* items[] = {"I4", "I6", "I7"};
  for (int i = 0; i < n; ++i) {
    const bool door = i % 5 == 0;
    const std::string id = door ? "D7" : items[rng() % 3];
    store.assert_statement(Statement(id, rng() % 2 == 0, static_cast<TimeMs>(rng() % 120) * 1000),
                           {door ? "DOOR" : "ITEM"}, AssertMode::append);
  }
  return store.snapshot();
}

void rule_matching(benchmark::State& state, rules::ExecPolicy policy) {
  const auto snap = crowded_medicine(static_cast<int>(state.range(0)));
  const auto& engine = shipped().models.front().engine;
  for (auto _ : state) benchmark::DoNotOptimize(engine.evaluate(snap, policy));
}

void session_replay(benchmark::State& state, rules::ExecPolicy policy) {
  synthetic::Options o;
  o.participants = static_cast<int>(state.range(0));
  const auto traces = synthetic::generate(o);
  scenario::RunOptions run;
  run.policy = policy;
  for (auto _ : state) benchmark::DoNotOptimize(scenario::run_sessions(shipped(), traces, run));
}

}  // namespace

BENCHMARK_CAPTURE(rule_matching, serial, rules::ExecPolicy::serial)->Arg(10)->Arg(20)->Arg(30);
BENCHMARK_CAPTURE(rule_matching, parallel, rules::ExecPolicy::parallel)->Arg(10)->Arg(20)->Arg(30);
BENCHMARK_CAPTURE(session_replay, serial, rules::ExecPolicy::serial)->Arg(19)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(session_replay, parallel, rules::ExecPolicy::parallel)->Arg(19)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
