#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ontonet/context_store.hpp"

namespace ontonet::net {

inline constexpr std::string_view kUpperNode = "U";
inline constexpr std::string_view kScheduler = "H";
inline constexpr std::string_view kBootStatement = "BOOT";

// ── declarations ────────────────────────────────────────────────────────

struct NodeDecl {
  std::string name;
  std::string represents;  // model file, relative to the config directory
  AssertMode mode = AssertMode::overwrite;
};

struct ProcDecl {
  std::string name;
  std::string implements;
  std::vector<std::string> required_events;
};

struct EventDecl {
  std::string name;
  std::vector<std::string> observes;
};

/// Some instance of `concept_name` has `property` pointing at `target`
/// (an instance id or a concept).
struct Pattern {
  std::string concept_name;
  std::string property;
  std::string target;
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct ConditionDecl {
  std::string name;
  std::variant<std::string, Pattern> checks;  // statement id or pattern
  std::string node;
  bool target = true;
  double rate_hz = 50.0;
};

/// Plain-text network config:
///
///   [nodes]       NAME represents=FILE mode=overwrite|append
///   [procedures]  NAME implements=KEY requires=E1,E2
///   [events]      NAME observes=C1,C2
///   [conditions]  NAME checks=ID|CONCEPT.prop.TARGET in=NODE hasTarget=true|false [rate=HZ]
///
/// The upper node U and the scheduler H are implicit and never declared.
struct NetworkModel {
  std::vector<NodeDecl> nodes;
  std::vector<ProcDecl> procedures;
  std::vector<EventDecl> events;
  std::vector<ConditionDecl> conditions;
  std::filesystem::path base_dir;
};

/// Throws ConfigError with a `section.NAME.field` path on dangling
/// references, missing fields or duplicate names.
NetworkModel parse_network(std::string_view text, const std::filesystem::path& base_dir = {},
                           std::string_view source = "<network>");
NetworkModel load_network(const std::filesystem::path& path);

// ── runtime ─────────────────────────────────────────────────────────────

/// Monotone virtual time. `speed` only matters to wall-clock drivers.
class VirtualClock {
 public:
  explicit VirtualClock(TimeMs start = 0, double speed = 1.0);
  TimeMs now() const noexcept { return now_; }
  double speed() const noexcept { return speed_; }
  /// Throws DomainError when `t` lies in the past.
  void advance_to(TimeMs t);

 private:
  TimeMs now_;
  double speed_;
};

struct LogRecord {
  TimeMs time = 0;
  std::string kind;  // flip, event, run, error, recognize, warn, ...
  std::string name;
  std::string detail;
  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// `time<TAB>kind<TAB>name<TAB>detail` lines.
std::string format_log(std::span<const LogRecord> log);
std::vector<LogRecord> parse_log(std::string_view text);

struct TelemetryPoint {
  TimeMs time = 0;
  std::string node;
  std::size_t axioms = 0;
  friend bool operator==(const TelemetryPoint&, const TelemetryPoint&) = default;
};

/// Wall-clock cost of one procedure run; not deterministic.
struct TimingPoint {
  TimeMs time = 0;
  std::string procedure;
  std::int64_t nanos = 0;
};

struct ConditionState {
  ConditionDecl decl;
  bool outcome = false;
  std::optional<TimeMs> last_sample;
  std::int64_t next_tick = 0;  // grid index of the next sample
  std::uint64_t seen_version = ~std::uint64_t{0};
};

struct EventState {
  EventDecl decl;
  bool satisfied = false;
  bool consumed = false;
};

class RuntimeNetwork;
using ProcedureFn = std::function<void(RuntimeNetwork&, const std::string& procedure)>;

struct ProcedureSlot {
  ProcDecl decl;
  ProcedureFn fn;  // empty until bound
};

class RuntimeNetwork {
 public:
  /// Loads every node's model file. Throws ConfigError naming the node when
  /// a file cannot be read.
  static RuntimeNetwork bootstrap(const NetworkModel& model);

  /// Implementations are looked up by the `implements` key at dispatch time.
  void bind(const std::string& implementation, ProcedureFn fn);

  /// Aligns every sampling grid on `t0` and asserts BOOT in the upper node.
  void start(TimeMs t0);

  TimeMs now() const noexcept { return clock_.now(); }
  const VirtualClock& clock() const noexcept { return clock_; }

  /// Earliest pending sample; with fast-forward, only conditions whose node
  /// changed since their last sample count.
  std::optional<TimeMs> next_due() const;

  /// Moves to the next due sample, samples, dispatches. Returns the records
  /// this step appended.
  std::vector<LogRecord> step();

  /// Steps through every sample due strictly before `t`, then sets the clock to `t`.
  /// Throws DomainError when `t` lies in the past.
  void advance_to(TimeMs t);

  /// Samples the conditions checking `statement_id` on `node` right away and
  /// runs what they trigger. Returns the events fired.
  std::vector<std::string> notify_sync(const std::string& node, const std::string& statement_id);

  /// Skipping samples of unchanged nodes (default on) leaves outcomes and
  /// logs unchanged; turning it off samples every grid point.
  void set_fast_forward(bool on) noexcept { fast_forward_ = on; }

  ContextStore& store(std::string_view node);
  const ContextStore& store(std::string_view node) const;
  AssertMode mode(std::string_view node) const;

  const std::map<std::string, ContextStore, std::less<>>& nodes() const noexcept { return nodes_; }
  const std::map<std::string, ProcedureSlot, std::less<>>& procedures() const noexcept { return procedures_; }
  const std::map<std::string, ConditionState, std::less<>>& conditions() const noexcept { return conditions_; }
  const std::map<std::string, EventState, std::less<>>& events() const noexcept { return events_; }

  void record(std::string kind, std::string name, std::string detail);
  const std::vector<LogRecord>& log() const noexcept { return log_; }

  /// Appends a point for every node whose store changed since its last point.
  void record_telemetry();
  const std::vector<TelemetryPoint>& telemetry() const noexcept { return telemetry_; }
  const std::vector<TimingPoint>& timings() const noexcept { return timings_; }

 private:
  RuntimeNetwork() = default;

  TimeMs due_time(const ConditionState& c, std::int64_t tick) const;
  std::int64_t first_tick_at_or_after(const ConditionState& c, TimeMs t) const;
  bool dirty(const ConditionState& c) const;
  bool evaluate(const ConditionState& c) const;
  void sample(ConditionState& c);
  void drain();

  VirtualClock clock_;
  TimeMs origin_ = 0;
  bool started_ = false;
  bool fast_forward_ = true;
  bool draining_ = false;

  std::map<std::string, ContextStore, std::less<>> nodes_;
  std::map<std::string, AssertMode, std::less<>> modes_;
  std::map<std::string, ProcedureSlot, std::less<>> procedures_;
  std::map<std::string, ConditionState, std::less<>> conditions_;
  std::map<std::string, EventState, std::less<>> events_;
  std::map<std::string, ProcedureFn, std::less<>> implementations_;

  std::map<std::string, std::vector<std::string>, std::less<>> events_by_condition_;
  std::map<std::string, std::vector<std::string>, std::less<>> procedures_by_event_;

  std::deque<std::string> pending_;
  std::set<std::string> ran_this_step_;

  std::vector<LogRecord> log_;
  std::vector<TelemetryPoint> telemetry_;
  std::map<std::string, std::uint64_t, std::less<>> telemetry_versions_;
  std::vector<TimingPoint> timings_;
};

}  // namespace ontonet::net
