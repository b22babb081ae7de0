#include <algorithm>
#include <cmath>
#include <sstream>

#include "ontonet/error.hpp"
#include "ontonet/model_file.hpp"
#include "ontonet/network.hpp"

namespace ontonet::net {

VirtualClock::VirtualClock(TimeMs start, double speed) : now_(start), speed_(speed) {
  if (start < 0) throw DomainError("clock cannot start before 0");
  if (!(speed > 0)) throw DomainError("clock speed must be positive");
}

void VirtualClock::advance_to(TimeMs t) {
  if (t < now_) throw DomainError("clock cannot move backwards");
  now_ = t;
}

namespace {

std::string clean_field(std::string s) {
  std::replace(s.begin(), s.end(), '\t', ' ');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string format_log(std::span<const LogRecord> log) {
  std::string out;
  for (const auto& r : log)
    out += std::to_string(r.time) + '\t' + clean_field(r.kind) + '\t' + clean_field(r.name) + '\t' +
           clean_field(r.detail) + '\n';
  return out;
}

std::vector<LogRecord> parse_log(std::string_view text) {
  std::vector<LogRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      auto tab = line.find('\t', start);
      if (tab == std::string::npos) throw ConfigError("log:" + std::to_string(lineno), "expected 4 tab-separated fields");
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    fields.push_back(line.substr(start));
    LogRecord r;
    try {
      std::size_t used = 0;
      r.time = std::stoll(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("log:" + std::to_string(lineno), "bad time " + fields[0]);
    }
    r.kind = fields[1];
    r.name = fields[2];
    r.detail = fields[3];
    out.push_back(std::move(r));
  }
  return out;
}

RuntimeNetwork RuntimeNetwork::bootstrap(const NetworkModel& model) {
  RuntimeNetwork net;

  ConceptGraph upper;
  upper.add_concept(std::string(kBootStatement));
  net.nodes_.emplace(std::string(kUpperNode), ContextStore(std::move(upper), std::string(kUpperNode)));
  net.modes_.emplace(std::string(kUpperNode), AssertMode::overwrite);

  for (const auto& n : model.nodes) {
    try {
      auto spec = load_model_spec(model.base_dir / n.represents);
      net.nodes_.emplace(n.name, build_store(spec, n.name));
    } catch (const std::exception& e) {
      throw ConfigError("nodes." + n.name, std::string("bootstrap failed: ") + e.what());
    }
    net.modes_.emplace(n.name, n.mode);
  }

  net.procedures_.emplace(std::string(kScheduler),
                          ProcedureSlot{ProcDecl{std::string(kScheduler), "scheduler", {}}, {}});
  for (const auto& p : model.procedures) {
    net.procedures_.emplace(p.name, ProcedureSlot{p, {}});
    for (const auto& e : p.required_events) net.procedures_by_event_[e].push_back(p.name);
  }
  for (auto& [event, procs] : net.procedures_by_event_) std::sort(procs.begin(), procs.end());

  for (const auto& c : model.conditions) {
    ConditionState state;
    state.decl = c;
    net.conditions_.emplace(c.name, std::move(state));
  }
  for (const auto& e : model.events) {
    EventState state;
    state.decl = e;
    net.events_.emplace(e.name, std::move(state));
    for (const auto& c : e.observes) net.events_by_condition_[c].push_back(e.name);
  }
  for (auto& [cond, evs] : net.events_by_condition_) {
    std::sort(evs.begin(), evs.end());
    evs.erase(std::unique(evs.begin(), evs.end()), evs.end());
  }
  for (const auto& [name, store] : net.nodes_) net.telemetry_versions_[name] = ~std::uint64_t{0};
  return net;
}

void RuntimeNetwork::bind(const std::string& implementation, ProcedureFn fn) {
  implementations_[implementation] = std::move(fn);
}

void RuntimeNetwork::start(TimeMs t0) {
  clock_.advance_to(t0);
  origin_ = t0;
  for (auto& [name, c] : conditions_) c.next_tick = 0;
  store(kUpperNode).assert_statement(Statement(std::string(kBootStatement), true, t0),
                                     {std::string(kBootStatement)}, AssertMode::overwrite);
  started_ = true;
  record_telemetry();
}

TimeMs RuntimeNetwork::due_time(const ConditionState& c, std::int64_t tick) const {
  const double offset = std::ceil(static_cast<double>(tick) * 1000.0 / c.decl.rate_hz - 1e-9);
  return origin_ + static_cast<TimeMs>(offset);
}

std::int64_t RuntimeNetwork::first_tick_at_or_after(const ConditionState& c, TimeMs t) const {
  if (t <= origin_) return 0;
  auto k = static_cast<std::int64_t>(static_cast<double>(t - origin_) * c.decl.rate_hz / 1000.0);
  while (due_time(c, k) < t) ++k;
  while (k > 0 && due_time(c, k - 1) >= t) --k;
  return k;
}

bool RuntimeNetwork::dirty(const ConditionState& c) const {
  return store(c.decl.node).version() != c.seen_version;
}

bool RuntimeNetwork::evaluate(const ConditionState& c) const {
  const ContextStore& s = store(c.decl.node);
  if (const auto* id = std::get_if<std::string>(&c.decl.checks)) {
    auto st = s.statement(*id);
    return st.has_value() && st->state() == c.decl.target;
  }
  const auto& p = std::get<Pattern>(c.decl.checks);
  return s.matches_pattern(p.concept_name, p.property, p.target) == c.decl.target;
}

std::optional<TimeMs> RuntimeNetwork::next_due() const {
  if (!started_) return std::nullopt;
  std::optional<TimeMs> best;
  for (const auto& [name, c] : conditions_) {
    if (fast_forward_ && !dirty(c)) continue;
    const TimeMs due = due_time(c, std::max(c.next_tick, first_tick_at_or_after(c, now())));
    if (!best || due < *best) best = due;
  }
  return best;
}

void RuntimeNetwork::sample(ConditionState& c) {
  const bool outcome = evaluate(c);
  c.last_sample = now();
  c.seen_version = store(c.decl.node).version();
  if (outcome == c.outcome) return;
  c.outcome = outcome;
  record("flip", c.decl.name, outcome ? "true" : "false");

  auto it = events_by_condition_.find(c.decl.name);
  if (it == events_by_condition_.end()) return;
  for (const auto& ev_name : it->second) {
    EventState& ev = events_.at(ev_name);
    if (!outcome) {
      ev.satisfied = false;
      continue;
    }
    ev.consumed = false;
    ev.satisfied = std::all_of(ev.decl.observes.begin(), ev.decl.observes.end(),
                               [&](const std::string& name) { return conditions_.at(name).outcome; });
    if (!ev.satisfied) continue;
    ev.consumed = true;
    record("event", ev_name, "");
    if (auto procs = procedures_by_event_.find(ev_name); procs != procedures_by_event_.end())
      for (const auto& p : procs->second) pending_.push_back(p);
  }
}

void RuntimeNetwork::drain() {
  if (draining_) return;
  draining_ = true;
  while (!pending_.empty()) {
    const std::string name = pending_.front();
    pending_.pop_front();
    if (!ran_this_step_.insert(name).second) continue;

    const ProcedureSlot& slot = procedures_.at(name);
    auto impl = implementations_.find(slot.decl.implements);
    if (impl == implementations_.end() || !impl->second) {
      record("error", name, "no implementation bound for " + slot.decl.implements);
      continue;
    }
    record("run", name, slot.decl.implements);
    const auto began = std::chrono::steady_clock::now();
    try {
      impl->second(*this, name);
    } catch (const std::exception& e) {
      record("error", name, e.what());
    }
    const auto spent = std::chrono::steady_clock::now() - began;
    timings_.push_back(
        {now(), name, std::chrono::duration_cast<std::chrono::nanoseconds>(spent).count()});
  }
  draining_ = false;
}

std::vector<LogRecord> RuntimeNetwork::step() {
  const auto t = next_due();
  if (!t) return {};
  const std::size_t mark = log_.size();
  clock_.advance_to(*t);
  ran_this_step_.clear();
  for (auto& [name, c] : conditions_) {
    const std::int64_t tick = std::max(c.next_tick, first_tick_at_or_after(c, *t));
    if (due_time(c, tick) != *t) {
      c.next_tick = tick;
      continue;
    }
    if (!fast_forward_ || dirty(c)) sample(c);
    c.next_tick = tick + 1;
  }
  drain();
  record_telemetry();
  return {log_.begin() + static_cast<std::ptrdiff_t>(mark), log_.end()};
}

void RuntimeNetwork::advance_to(TimeMs t) {
  while (true) {
    const auto due = next_due();
    if (!due || *due >= t) break;
    step();
  }
  clock_.advance_to(t);
}

std::vector<std::string> RuntimeNetwork::notify_sync(const std::string& node,
                                                     const std::string& statement_id) {
  store(node);  // validates the node name
  if (!draining_) ran_this_step_.clear();
  std::vector<std::string> fired;
  for (auto& [name, c] : conditions_) {
    const auto* id = std::get_if<std::string>(&c.decl.checks);
    if (c.decl.node != node || id == nullptr || *id != statement_id) continue;
    const std::size_t mark = log_.size();
    sample(c);
    for (std::size_t i = mark; i < log_.size(); ++i)
      if (log_[i].kind == "event") fired.push_back(log_[i].name);
  }
  drain();
  return fired;
}

ContextStore& RuntimeNetwork::store(std::string_view node) {
  auto it = nodes_.find(node);
  if (it == nodes_.end()) throw DomainError("unknown node " + std::string(node));
  return it->second;
}

const ContextStore& RuntimeNetwork::store(std::string_view node) const {
  auto it = nodes_.find(node);
  if (it == nodes_.end()) throw DomainError("unknown node " + std::string(node));
  return it->second;
}

AssertMode RuntimeNetwork::mode(std::string_view node) const {
  auto it = modes_.find(node);
  if (it == modes_.end()) throw DomainError("unknown node " + std::string(node));
  return it->second;
}

void RuntimeNetwork::record(std::string kind, std::string name, std::string detail) {
  log_.push_back({now(), std::move(kind), std::move(name), std::move(detail)});
}

void RuntimeNetwork::record_telemetry() {
  for (const auto& [name, s] : nodes_) {
    auto& seen = telemetry_versions_[name];
    if (seen == s.version()) continue;
    seen = s.version();
    telemetry_.push_back({now(), name, s.axiom_count()});
  }
}

}  // namespace ontonet::net
