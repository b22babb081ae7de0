#include "ontonet/adl.hpp"
#include "ontonet/error.hpp"

namespace ontonet::adl {

namespace {

GoldenStep on(std::string sensor, TimeMs t) { return {std::move(sensor), true, t}; }
GoldenStep off(std::string sensor, TimeMs t) { return {std::move(sensor), false, t}; }

const net::NodeDecl& node_decl(const net::NetworkModel& model, std::string_view name) {
  for (const auto& n : model.nodes)
    if (n.name == name) return n;
  throw ConfigError("nodes." + std::string(name), "node missing from the scenario network");
}

}  // namespace

std::vector<GoldenCase> golden_cases() {
  std::vector<GoldenCase> c;
  // 1: door open, both items out for 10 s, both back, door closed
  c.push_back({1, "satisfied", {on("D7", 1000), off("I4", 2000), off("I6", 3000), on("I4", 15000), on("I6", 16000),
                                off("D7", 20000)}, 20000});
  c.push_back({1, "door closed before returns", {on("D7", 1000), off("I4", 2000), off("I6", 3000), off("D7", 10000),
                                                 on("I4", 15000), on("I6", 16000)}, std::nullopt});
  c.push_back({1, "item back too soon", {on("D7", 1000), off("I4", 2000), off("I6", 3000), on("I4", 8000),
                                         on("I6", 16000), off("D7", 20000)}, std::nullopt});
  c.push_back({1, "second item never taken", {on("D7", 1000), off("I4", 2000), on("I6", 3000), on("I4", 15000),
                                              on("I6", 16000), off("D7", 20000)}, std::nullopt});

  c.push_back({2, "satisfied", {off("I5", 1000), on("I5", 40000)}, 40000});
  c.push_back({2, "returned too soon", {off("I5", 1000), on("I5", 20000)}, std::nullopt});
  c.push_back({2, "reversed", {on("I5", 1000), off("I5", 40000)}, std::nullopt});
  c.push_back({2, "never returned", {off("I5", 1000), off("I3", 40000)}, std::nullopt});

  c.push_back({3, "satisfied", {on("D11", 1000), on("F2", 5000), on("M6", 20000), on("M7", 30000), on("M8", 45000),
                                on("M11", 50000), on("M12", 60000), on("M13", 75000), off("D11", 90000)}, 90000});
  c.push_back({3, "two visits to the first plant", {on("D11", 1000), on("F2", 5000), on("M6", 20000), on("M8", 45000),
                                                    on("M11", 50000), on("M12", 60000), on("M13", 75000),
                                                    off("D11", 90000)}, std::nullopt});
  c.push_back({3, "first plant visits too short", {on("D11", 1000), on("F2", 5000), on("M6", 20000), on("M7", 25000),
                                                   on("M8", 30000), on("M11", 50000), on("M12", 60000),
                                                   on("M13", 75000), off("D11", 90000)}, std::nullopt});
  c.push_back({3, "door closed early", {on("D11", 1000), on("F2", 5000), on("M6", 20000), on("M7", 30000),
                                        on("M8", 45000), on("M11", 50000), on("M12", 60000), off("D11", 70000),
                                        on("M13", 75000)}, std::nullopt});
  c.push_back({3, "no water", {on("D11", 1000), off("F2", 5000), on("M6", 20000), on("M7", 30000), on("M8", 45000),
                               on("M11", 50000), on("M12", 60000), on("M13", 75000), off("D11", 90000)}, std::nullopt});

  c.push_back({4, "satisfied", {on("P1", 1000), off("P1", 30000)}, 30000});
  c.push_back({4, "hung up too soon", {on("P1", 1000), off("P1", 5000)}, std::nullopt});
  c.push_back({4, "reversed", {off("P1", 1000), on("P1", 30000)}, std::nullopt});
  c.push_back({4, "never hung up", {on("P1", 1000), on("P1", 30000)}, std::nullopt});

  c.push_back({5, "satisfied", {off("I8", 1000), off("I9", 2000), on("I8", 20000), on("I9", 25000)}, 25000});
  c.push_back({5, "one item back too soon", {off("I8", 1000), off("I9", 2000), on("I9", 5000), on("I8", 20000)},
               std::nullopt});
  c.push_back({5, "returned before taken", {on("I8", 1000), on("I9", 2000), off("I8", 20000), off("I9", 25000)},
               std::nullopt});
  c.push_back({5, "second item kept", {off("I8", 1000), off("I9", 2000), on("I8", 20000), off("I9", 25000)},
               std::nullopt});

  c.push_back({6, "satisfied", {on("D8", 1000), off("I1", 2000), off("I2", 3000), on("I1", 30000), on("I2", 35000),
                                off("D8", 40000)}, 40000});
  c.push_back({6, "item back too soon", {on("D8", 1000), off("I1", 2000), off("I2", 3000), on("I1", 10000),
                                         on("I2", 35000), off("D8", 40000)}, std::nullopt});
  c.push_back({6, "door closed before last return", {on("D8", 1000), off("I1", 2000), off("I2", 3000),
                                                     on("I1", 30000), off("D8", 32000), on("I2", 35000)},
               std::nullopt});
  c.push_back({6, "door never opened", {off("D8", 1000), off("I1", 2000), off("I2", 3000), on("I1", 30000),
                                        on("I2", 35000), off("D8", 40000)}, std::nullopt});

  c.push_back({7, "satisfied", {on("D11", 1000), on("M6", 10000), on("M7", 25000), on("M8", 45000), on("M16", 50000),
                                on("M17", 60000), on("M18", 75000), off("D11", 80000)}, 80000});
  c.push_back({7, "two kitchen visits", {on("D11", 1000), on("M6", 10000), on("M7", 25000), on("M8", 45000),
                                         on("M16", 50000), on("M18", 75000), off("D11", 80000)}, std::nullopt});
  c.push_back({7, "living room too short", {on("D11", 1000), on("M6", 10000), on("M7", 20000), on("M8", 35000),
                                            on("M16", 50000), on("M17", 60000), on("M18", 75000),
                                            off("D11", 80000)}, std::nullopt});
  c.push_back({7, "door closed early", {on("D11", 1000), on("M6", 10000), on("M7", 25000), on("M8", 45000),
                                        on("M16", 50000), on("M17", 60000), off("D11", 70000), on("M18", 75000)},
               std::nullopt});
  c.push_back({7, "door never opened", {off("D11", 1000), on("M6", 10000), on("M7", 25000), on("M8", 45000),
                                        on("M16", 50000), on("M17", 60000), on("M18", 75000), off("D11", 80000)},
               std::nullopt});

  c.push_back({8, "satisfied", {on("D12", 1000), on("M21", 10000), on("M5", 20000)}, 20000});
  c.push_back({8, "chose too soon", {on("D12", 1000), on("M21", 3000), on("M5", 20000)}, std::nullopt});
  c.push_back({8, "left before choosing", {on("D12", 1000), on("M5", 10000), on("M21", 20000)}, std::nullopt});
  c.push_back({8, "wardrobe closed", {off("D12", 1000), on("M21", 10000), on("M5", 20000)}, std::nullopt});
  return c;
}

std::vector<GoldenResult> run_golden(const std::filesystem::path& scenario_dir, std::span<const ActivityModel> models,
                                     std::span<const GoldenCase> cases) {
  const auto network = net::load_network(scenario_dir / "network.cfg");
  const auto spatial_spec = load_model_spec(network.base_dir / node_decl(network, kSpatialNode).represents);
  const ContextStore spatial = build_store(spatial_spec, std::string(kSpatialNode));

  std::vector<GoldenResult> out;
  for (const auto& gc : cases) {
    const ActivityModel* model = nullptr;
    for (const auto& m : models)
      if (m.index == gc.activity) model = &m;
    if (model == nullptr) throw DomainError("no model for activity " + std::to_string(gc.activity));

    const std::string node = activity_node(gc.activity);
    ContextStore store = build_store(load_model_spec(network.base_dir / node_decl(network, node).represents), node);
    GoldenResult r;
    r.golden = gc;
    for (const auto& step : gc.steps) {
      store.assert_statement(Statement(step.sensor, step.state, step.time),
                             imported_concepts(spatial, store, step.sensor), AssertMode::append);
      if (auto rec = evaluate_activity(store, *model, step.time)) r.recognitions.push_back(std::move(*rec));
    }
    if (gc.expected) {
      r.passed = r.recognitions.size() == 1 && r.recognitions.front().time == *gc.expected;
      if (!r.passed)
        r.detail = "expected one recognition at " + std::to_string(*gc.expected) + ", got " +
                   std::to_string(r.recognitions.size());
    } else {
      r.passed = r.recognitions.empty();
      if (!r.passed) r.detail = "unexpected recognition at " + std::to_string(r.recognitions.front().time);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ontonet::adl
