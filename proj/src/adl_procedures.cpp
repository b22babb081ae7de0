#include <algorithm>
#include <charconv>

#include "ontonet/adl.hpp"
#include "ontonet/error.hpp"

namespace ontonet::adl {

namespace {

std::uint64_t append_seq(std::string_view id) {
  auto hash = id.rfind('#');
  if (hash == std::string_view::npos) return 0;
  std::uint64_t seq = 0;
  std::from_chars(id.data() + hash + 1, id.data() + id.size(), seq);
  return seq;
}

int var_index(const std::string& name) {
  int n = 0;
  std::from_chars(name.data() + 1, name.data() + name.size(), n);
  return n;
}

const ActivityModel& model_for(std::span<const ActivityModel> models, int activity) {
  for (const auto& m : models)
    if (m.index == activity) return m;
  throw DomainError("no model for activity " + std::to_string(activity));
}

}  // namespace

ActivityModel build_activity_model(int activity, const dsl::ModelAst& ast) {
  ActivityModel m;
  m.index = activity;
  m.ast = ast;
  m.compiled = dsl::compile_model(ast, dsl::CompileOptions{{std::string(kActivityConcept)}});
  for (const auto& rule : m.compiled.rules) m.engine.register_rule(rule);
  return m;
}

std::vector<ActivityModel> build_activity_models(const ParamSet& params) {
  std::vector<ActivityModel> out;
  for (int a = 1; a <= kActivityCount; ++a)
    out.push_back(build_activity_model(a, apply_params(dsl::parse_model(model_source(a)), params)));
  return out;
}

std::optional<ChangeSummary> replay_step(net::RuntimeNetwork& net, const casas::TraceEvent& reading) {
  ContextStore& spatial = net.store(kSpatialNode);
  const StoreInstance* inst = spatial.instance(reading.sensor);
  if (inst == nullptr || inst->asserted.count("PERSON")) {
    net.record("warn", reading.sensor, "unknown sensor; reading skipped");
    return std::nullopt;
  }
  try {
    auto summary = spatial.assert_statement(Statement(reading.sensor, reading.state, reading.time), {},
                                            AssertMode::overwrite);
    spatial.infer_person_context();
    return summary;
  } catch (const ConsistencyError& e) {
    net.record("warn", reading.sensor, e.what());
  } catch (const DomainError& e) {
    net.record("warn", reading.sensor, e.what());
  }
  return std::nullopt;
}

std::set<std::string> imported_concepts(const ContextStore& spatial, const ContextStore& activity,
                                        std::string_view sensor) {
  std::set<std::string> out;
  const StoreInstance* inst = spatial.instance(sensor);
  if (inst == nullptr) return out;
  const auto& graph = activity.graph();
  for (const auto& c : inst->asserted) {
    if (!graph.contains(c)) continue;
    const bool defined = std::any_of(graph.defined_classes().begin(), graph.defined_classes().end(),
                                     [&](const DefinedClass& dc) { return dc.name == c; });
    if (!defined) out.insert(c);
  }
  return out;
}

std::size_t import_statements(const ContextStore& spatial, ContextStore& activity,
                              const ActivityBinding& binding, TimeMs now) {
  std::set<std::string> wanted;
  for (const auto& query : binding.imports)
    for (const auto& [id, concepts] : spatial.classification())
      if (std::all_of(query.begin(), query.end(), [&](const std::string& c) { return concepts.count(c) > 0; }))
        wanted.insert(id);

  struct Latest {
    std::uint64_t seq;
    Statement copy;
  };
  std::map<std::string, Latest, std::less<>> latest;
  for (const auto& [id, inst] : activity.instances()) {
    auto st = inst.as_statement();
    if (!st || !wanted.count(inst.source)) continue;
    const auto seq = append_seq(id);
    auto it = latest.find(inst.source);
    if (it == latest.end()) latest.emplace(inst.source, Latest{seq, *st});
    else if (seq > it->second.seq) it->second = Latest{seq, *st};
  }

  std::size_t imported = 0;
  for (const auto& id : wanted) {
    auto st = spatial.statement(id);
    if (!st) continue;
    if (auto it = latest.find(id);
        it != latest.end() && it->second.copy.state() == st->state() && it->second.copy.time() == st->time())
      continue;
    activity.assert_statement(*st, imported_concepts(spatial, activity, id), AssertMode::append);
    ++imported;
  }
  activity.assert_statement(Statement(std::string(kSyncStatement), true, now), {std::string(kSyncConcept)},
                            AssertMode::overwrite);
  return imported;
}

std::vector<Statement> run_prepasses(ContextStore& activity, std::span<const dsl::Prepass> prepasses) {
  std::vector<Statement> derived;
  for (const auto& pp : prepasses) {
    const StatementSet visits = activity.query_instances(pp.source_concept, pp.phi);
    if (visits.size() < pp.min_count) continue;
    const TimeMs earliest = visits.members().front().time();
    const TimeMs latest = visits.members().back().time();
    if (earliest + pp.min_span.count() > latest) continue;
    Statement s(pp.instance_id, true, latest, StatementKind::aggregated);
    if (auto existing = activity.statement(pp.instance_id); existing && existing->state() && existing->time() == latest)
      continue;
    activity.assert_statement(s, {pp.derived_concept}, AssertMode::overwrite);
    derived.push_back(s);
  }
  return derived;
}

std::optional<RecognitionRecord> evaluate_activity(ContextStore& activity, const ActivityModel& model, TimeMs now,
                                                   rules::ExecPolicy policy) {
  run_prepasses(activity, model.compiled.prepasses);
  const auto derivations = model.engine.evaluate(activity.snapshot(), policy);

  // A head no later than the last recognition was already reported.
  const auto previous = activity.statement(model.ast.name);
  const rules::Derivation* best = nullptr;
  for (const auto& d : derivations) {
    if (previous && d.time <= previous->time()) continue;
    if (best == nullptr || d.time > best->time) best = &d;
  }
  if (best == nullptr) return std::nullopt;

  RecognitionRecord rec;
  rec.activity = model.index;
  rec.time = best->time;
  rec.notified_at = now;
  rec.binding = best->binding;
  std::vector<std::pair<int, std::string>> subjects;
  for (const auto& [var, value] : best->binding)
    if (!var.empty() && var[0] == 's')
      if (const auto* id = std::get_if<std::string>(&value)) subjects.emplace_back(var_index(var), *id);
  std::sort(subjects.begin(), subjects.end());
  for (auto& [idx, id] : subjects) rec.evidence.push_back(std::move(id));

  std::set<std::string> concepts(model.compiled.result_concepts.begin(), model.compiled.result_concepts.end());
  activity.assert_statement(Statement(model.ast.name, true, rec.time, StatementKind::aggregated), concepts,
                            AssertMode::overwrite);
  if (binding(model.index).clear_on_recognition)
    activity.clear_statements({std::string(kActivityConcept), std::string(kSyncConcept)});
  return rec;
}

void bind_procedures(net::RuntimeNetwork& net, std::span<const ActivityModel> models, ProcedureOptions options) {
  bool* active = options.replayer_active;
  net.bind("replay", [active](net::RuntimeNetwork& n, const std::string& name) {
    if (active != nullptr) *active = true;
    n.record("replay", name, "started");
  });

  for (int a = 1; a <= kActivityCount; ++a) {
    const std::string node = activity_node(a);
    net.bind("import:" + std::to_string(a), [a, node](net::RuntimeNetwork& n, const std::string& name) {
      const auto count = import_statements(n.store(kSpatialNode), n.store(node), binding(a), n.now());
      n.record("import", name, std::to_string(count));
      n.notify_sync(node, std::string(kSyncStatement));
    });

    const ActivityModel& model = model_for(models, a);
    net.bind("evaluate:" + std::to_string(a),
             [&model, node, options](net::RuntimeNetwork& n, const std::string&) {
               ContextStore& store = n.store(node);
               store.assert_statement(Statement(std::string(kSyncStatement), false, n.now()),
                                      {std::string(kSyncConcept)}, AssertMode::overwrite);
               n.notify_sync(node, std::string(kSyncStatement));
               auto rec = evaluate_activity(store, model, n.now(), options.policy);
               if (!rec) return;
               std::string evidence;
               for (const auto& id : rec->evidence) evidence += (evidence.empty() ? "" : ",") + id;
               n.record("recognize", model.ast.name, "time=" + std::to_string(rec->time) + " evidence=" + evidence);
               if (options.on_recognition) options.on_recognition(*rec);
             });
  }
}

}  // namespace ontonet::adl
