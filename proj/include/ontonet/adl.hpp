#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ontonet/casas.hpp"
#include "ontonet/context_store.hpp"
#include "ontonet/fluent_dsl.hpp"
#include "ontonet/model_file.hpp"
#include "ontonet/network.hpp"
#include "ontonet/rule_engine.hpp"

namespace ontonet::adl {

inline constexpr int kActivityCount = 8;
inline constexpr std::string_view kSpatialNode = "L";
inline constexpr std::string_view kSyncStatement = "N";
inline constexpr std::string_view kActivityConcept = "ACTIVITY";
inline constexpr std::string_view kSyncConcept = "SYNC";

/// "T1".."T8"
std::string activity_node(int activity);

struct ActivityBinding {
  int index = 0;
  std::string label;
  std::string installed_class;  // INSTALLED subclass grouping the sensors
  /// Each entry is a conjunction of concepts queried in the spatial store.
  std::vector<std::set<std::string>> imports;
  /// Any one of these person-context patterns schedules the importer.
  std::vector<net::Pattern> triggers;
  /// Convolution source classes and the class they derive.
  std::vector<std::pair<std::string, std::string>> prepass_concepts;
  bool clear_on_recognition = true;
};

/// The eight activity bindings, index order.
std::span<const ActivityBinding> registry();
const ActivityBinding& binding(int activity);

/// Shipped model text for an activity, default parameters included.
std::string_view model_source(int activity);

// ── parameters ──────────────────────────────────────────────────────────

/// `NAME = NUMBER [ms|s|min]` lines, `#` comments.
using ParamSet = std::map<std::string, dsl::Param, std::less<>>;
ParamSet parse_params(std::string_view text, std::string_view source = "<params>");
ParamSet load_params(const std::filesystem::path& path);
std::string format_params(const ParamSet& params);

/// Replaces declared parameters by the ones in `params`. Throws ConfigError
/// when a replacement changes a count into a duration or back.
dsl::ModelAst apply_params(dsl::ModelAst ast, const ParamSet& params);

/// Parameters of every shipped model with their default values.
ParamSet default_params();

// ── procedures ──────────────────────────────────────────────────────────

struct RecognitionRecord {
  int activity = 0;
  TimeMs time = 0;         // head time of the firing rule
  TimeMs notified_at = 0;  // virtual time the evaluator ran
  std::vector<std::string> evidence;  // matched statement instances
  rules::Binding binding;
  std::string participant;

  friend bool operator==(const RecognitionRecord&, const RecognitionRecord&) = default;
};

/// A compiled model ready for evaluation.
struct ActivityModel {
  int index = 0;
  dsl::ModelAst ast;
  dsl::CompiledModel compiled;
  rules::RuleEngine engine;
};

ActivityModel build_activity_model(int activity, const dsl::ModelAst& ast);
/// Shipped models with `params` applied.
std::vector<ActivityModel> build_activity_models(const ParamSet& params = default_params());

/// Asserts one reading in the spatial store (overwrite) and refreshes the
/// person context. Returns nullopt, with a warning record, for a sensor the
/// store does not declare or a reading that would make it inconsistent.
std::optional<ChangeSummary> replay_step(net::RuntimeNetwork& net, const casas::TraceEvent& reading);

/// Concepts an imported statement carries in `activity`: the ones asserted
/// for it in `spatial` that the activity graph declares, defined classes excluded.
std::set<std::string> imported_concepts(const ContextStore& spatial, const ContextStore& activity,
                                        std::string_view sensor);

/// Copies the current statements of the binding's sensor classes from
/// `spatial` into `activity` (append), skipping a sensor whose latest copy
/// has the same state and time, then writes N true at `now`.
std::size_t import_statements(const ContextStore& spatial, ContextStore& activity,
                              const ActivityBinding& binding, TimeMs now);

/// Runs the prepasses on `activity`. Returns the derived statements asserted.
std::vector<Statement> run_prepasses(ContextStore& activity, std::span<const dsl::Prepass> prepasses);

/// Prepasses plus rule evaluation. On a match, asserts the activity
/// statement at the latest head time and, when the binding asks for it,
/// clears every other statement except the sync one.
std::optional<RecognitionRecord> evaluate_activity(ContextStore& activity, const ActivityModel& model,
                                                   TimeMs now,
                                                   rules::ExecPolicy policy = rules::ExecPolicy::serial);

struct ProcedureOptions {
  rules::ExecPolicy policy = rules::ExecPolicy::serial;
  std::function<void(const RecognitionRecord&)> on_recognition;
  /// Set by the replayer procedure when it starts.
  bool* replayer_active = nullptr;
};

/// Binds `replay`, `import:1..8` and `evaluate:1..8`. `models` must outlive `net`.
void bind_procedures(net::RuntimeNetwork& net, std::span<const ActivityModel> models,
                     ProcedureOptions options);

// ── golden traces ───────────────────────────────────────────────────────

struct GoldenStep {
  std::string sensor;
  bool state = false;
  TimeMs time = 0;
};

struct GoldenCase {
  int activity = 0;
  std::string name;
  std::vector<GoldenStep> steps;
  std::optional<TimeMs> expected;  // recognition time, or none
};

struct GoldenResult {
  GoldenCase golden;
  std::vector<RecognitionRecord> recognitions;
  bool passed = false;
  std::string detail;
};

/// One satisfying trace and several perturbations per activity, written
/// against default_params().
std::vector<GoldenCase> golden_cases();

/// Feeds each case, one statement at a time, into a fresh activity store
/// built from `scenario_dir`, evaluating after every statement.
std::vector<GoldenResult> run_golden(const std::filesystem::path& scenario_dir,
                                     std::span<const ActivityModel> models,
                                     std::span<const GoldenCase> cases);

}  // namespace ontonet::adl
