#include "ontonet/context_store.hpp"

#include <algorithm>

#include "ontonet/error.hpp"

namespace ontonet {

namespace {

constexpr std::string_view kPerson = "PERSON";
constexpr std::string_view kSensor = "SENSOR";

std::optional<Value> single(const PropertyMap& props, std::string_view property) {
  auto it = props.find(property);
  if (it == props.end()) return std::nullopt;
  return it->second;
}

void set_single(PropertyMap& props, std::string_view property, Value v) {
  props.erase(std::string(property));
  props.emplace(std::string(property), std::move(v));
}

/// Memoized ancestor closure for one classification pass.
class AncestorCache {
 public:
  explicit AncestorCache(const ConceptGraph& g) : graph_(g) {}
  const std::set<std::string>& of(const std::string& c) {
    auto it = cache_.find(c);
    if (it == cache_.end()) it = cache_.emplace(c, graph_.ancestors(c)).first;
    return it->second;
  }

 private:
  const ConceptGraph& graph_;
  std::map<std::string, std::set<std::string>> cache_;
};

}  // namespace

bool StoreInstance::is_statement() const noexcept {
  return properties.count(prop::has_state) == 1 && properties.count(prop::has_time) == 1;
}

std::optional<Statement> StoreInstance::as_statement() const {
  auto state = single(properties, prop::has_state);
  auto time = single(properties, prop::has_time);
  if (!state || !time) return std::nullopt;
  const bool* b = std::get_if<bool>(&*state);
  const auto* t = std::get_if<std::int64_t>(&*time);
  if (b == nullptr || t == nullptr) return std::nullopt;
  return Statement(id, *b, *t);
}

// ── snapshot ────────────────────────────────────────────────────────────

StoreSnapshot::StoreSnapshot(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (const auto& c : entries_[i].concepts) by_concept_[c].push_back(i);
}

const StoreSnapshot::Entry* StoreSnapshot::find(std::string_view id) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, std::string_view key) { return e.id < key; });
  return it != entries_.end() && it->id == id ? &*it : nullptr;
}

std::span<const std::size_t> StoreSnapshot::members_of(std::string_view concept_name) const noexcept {
  auto it = by_concept_.find(concept_name);
  if (it == by_concept_.end()) return {};
  return it->second;
}

// ── store ───────────────────────────────────────────────────────────────

ContextStore::ContextStore(ConceptGraph graph, std::string name)
    : name_(std::move(name)), graph_(std::move(graph)) {}

void ContextStore::require_concepts(const std::set<std::string>& concepts) const {
  for (const auto& c : concepts)
    if (!graph_.contains(c))
      throw DomainError("unknown concept " + c + (name_.empty() ? "" : " in store " + name_));
}

void ContextStore::add_individual(const std::string& id, const std::set<std::string>& concepts) {
  if (id.empty()) throw DomainError("instance id must not be empty");
  require_concepts(concepts);
  std::optional<StoreInstance> saved;
  auto it = instances_.find(id);
  if (it != instances_.end()) {
    saved = it->second;
  } else {
    it = instances_.emplace(id, StoreInstance{id, {}, {}, {}}).first;
  }
  const std::size_t before = saved ? saved->axiom_size() : 0;
  it->second.asserted.insert(concepts.begin(), concepts.end());
  instance_axioms_ += it->second.axiom_size() - before;
  commit(id, std::move(saved), std::nullopt);
}

void ContextStore::add_property(const std::string& id, const std::string& property, Value target) {
  auto it = instances_.find(id);
  if (it == instances_.end()) throw DomainError("unknown instance " + id);
  if (property.empty()) throw DomainError("property name must not be empty");
  std::optional<StoreInstance> saved = it->second;
  auto& props = it->second.properties;
  if (property == prop::has_state || property == prop::has_time) {
    set_single(props, property, std::move(target));
  } else {
    auto range = props.equal_range(property);
    const bool present = std::any_of(range.first, range.second,
                                     [&](const auto& kv) { return kv.second == target; });
    if (!present) props.emplace(property, std::move(target));
  }
  instance_axioms_ += it->second.axiom_size() - saved->axiom_size();
  commit(id, std::move(saved), std::nullopt);
}

ChangeSummary ContextStore::assert_statement(const Statement& s,
                                             const std::set<std::string>& concepts,
                                             AssertMode mode) {
  require_concepts(concepts);
  ChangeSummary summary;
  std::optional<StoreInstance> saved;
  std::string id;
  if (mode == AssertMode::overwrite) {
    id = s.id();
    auto it = instances_.find(id);
    if (it != instances_.end()) saved = it->second;
    else it = instances_.emplace(id, StoreInstance{id, {}, {}, s.id()}).first;
    it->second.asserted.insert(concepts.begin(), concepts.end());
    set_single(it->second.properties, prop::has_state, s.state());
    set_single(it->second.properties, prop::has_time, s.time());
    if (it->second.source.empty()) it->second.source = s.id();
  } else {
    id = s.id() + "#" + std::to_string(next_seq_++);
    StoreInstance inst{id, concepts, {}, s.id()};
    inst.properties.emplace(std::string(prop::has_state), s.state());
    inst.properties.emplace(std::string(prop::has_time), s.time());
    instances_.emplace(id, std::move(inst));
  }
  const auto& inst = instances_.at(id);
  const std::int64_t before = saved ? static_cast<std::int64_t>(saved->axiom_size()) : 0;
  summary.instance = id;
  summary.created = !saved.has_value();
  summary.axiom_delta = static_cast<std::int64_t>(inst.axiom_size()) - before;
  instance_axioms_ += summary.axiom_delta;
  commit(id, std::move(saved), std::nullopt);
  return summary;
}

Membership ContextStore::compute_membership() const {
  AncestorCache ancestors(graph_);
  Membership m;
  for (const auto& [id, inst] : instances_) {
    auto& set = m[id];
    for (const auto& c : inst.asserted) {
      const auto& up = ancestors.of(c);
      set.insert(up.begin(), up.end());
    }
  }

  auto count_matching = [&](const std::string& id, const Restriction& r) {
    unsigned n = 0;
    for (const Value& v : values(id, r.property)) {
      if (r.target_concept) {
        const auto* target = std::get_if<std::string>(&v);
        if (target == nullptr) continue;
        auto it = m.find(*target);
        if (it != m.end() && it->second.count(*r.target_concept)) ++n;
      } else if (r.target_value) {
        if (v == *r.target_value) ++n;
      } else {
        ++n;
      }
    }
    return n;
  };
  auto satisfied = [&](const std::string& id, const DefinedClass& dc) {
    const auto& have = m.at(id);
    for (const auto& c : dc.conjuncts)
      if (!have.count(c)) return false;
    for (const auto& r : dc.restrictions) {
      const unsigned n = count_matching(id, r);
      switch (r.bound) {
        case Cardinality::at_least: if (n < r.k) return false; break;
        case Cardinality::at_most: if (n > r.k) return false; break;
        case Cardinality::exactly: if (n != r.k) return false; break;
      }
    }
    return true;
  };

  // Memberships only grow, so the loop reaches a fixpoint.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& dc : graph_.defined_classes()) {
      for (auto& [id, set] : m) {
        if (set.count(dc.name) || !satisfied(id, dc)) continue;
        const auto& up = ancestors.of(dc.name);
        set.insert(up.begin(), up.end());
        changed = true;
      }
    }
  }
  return m;
}

Membership ContextStore::classify() const { return compute_membership(); }

void ContextStore::check_disjointness(const Membership& m) const {
  for (const auto& [id, set] : m)
    for (const auto& [a, b] : graph_.disjoint_pairs())
      if (set.count(a) && set.count(b)) throw ConsistencyError(id, a, b);
}

void ContextStore::commit(const std::string& id, std::optional<StoreInstance> saved,
                          std::optional<PropertyMap> saved_inferred) {
  Membership next = compute_membership();
  try {
    check_disjointness(next);
  } catch (const ConsistencyError&) {
    auto it = instances_.find(id);
    if (it != instances_.end()) instance_axioms_ -= it->second.axiom_size();
    if (saved) {
      instance_axioms_ += saved->axiom_size();
      instances_[id] = std::move(*saved);
    } else if (it != instances_.end()) {
      instances_.erase(it);
    }
    if (saved_inferred) inferred_[id] = std::move(*saved_inferred);
    throw;
  }
  membership_ = std::move(next);
  members_by_concept_.clear();
  for (const auto& [inst, set] : membership_)
    for (const auto& c : set) members_by_concept_[c].push_back(inst);
  ++version_;
}

bool ContextStore::is_member(std::string_view id, std::string_view concept_name) const {
  auto it = membership_.find(id);
  return it != membership_.end() && it->second.count(std::string(concept_name)) > 0;
}

StatementSet ContextStore::query_instances(std::string_view concept_name,
                                           std::optional<bool> state_filter) const {
  if (!graph_.contains(concept_name))
    throw DomainError("unknown concept " + std::string(concept_name));
  std::vector<Statement> out;
  auto it = members_by_concept_.find(concept_name);
  if (it == members_by_concept_.end()) return StatementSet{};
  for (const auto& id : it->second) {
    auto s = instances_.at(id).as_statement();
    if (!s) continue;
    if (state_filter && s->state() != *state_filter) continue;
    out.push_back(std::move(*s));
  }
  return StatementSet(std::move(out));
}

std::optional<std::string> ContextStore::person() const {
  auto it = members_by_concept_.find(kPerson);
  if (it == members_by_concept_.end() || it->second.empty()) return std::nullopt;
  if (it->second.size() > 1)
    throw DomainError("store " + name_ + " holds more than one PERSON instance");
  return it->second.front();
}

std::set<std::pair<std::string, std::string>> ContextStore::infer_person_context() {
  const auto who = person();
  if (!who) throw DomainError("store " + name_ + " has no PERSON instance");

  std::set<std::pair<std::string, std::string>> pairs;
  if (auto sensors = members_by_concept_.find(kSensor); sensors != members_by_concept_.end()) {
    for (const auto& id : sensors->second) {
      const auto& inst = instances_.at(id);
      auto state = single(inst.properties, prop::has_state);
      if (!state || *state != Value{true}) continue;
      for (auto relation : {prop::is_in, prop::is_near_to}) {
        auto range = inst.properties.equal_range(relation);
        for (auto p = range.first; p != range.second; ++p)
          if (const auto* target = std::get_if<std::string>(&p->second))
            pairs.emplace(std::string(relation), *target);
      }
    }
  }

  PropertyMap next;
  for (const auto& [relation, target] : pairs) next.emplace(relation, target);
  PropertyMap& current = inferred_[*who];
  if (current != next) {
    PropertyMap saved = current;
    current = std::move(next);
    commit(*who, instances_.at(*who), std::move(saved));
  }
  return pairs;
}

std::size_t ContextStore::recount_axioms() const {
  std::size_t n = graph_.axiom_count();
  for (const auto& [id, inst] : instances_) n += inst.axiom_size();
  return n;
}

std::size_t ContextStore::clear_statements(const std::set<std::string>& keep_concepts) {
  std::size_t removed = 0;
  for (auto it = instances_.begin(); it != instances_.end();) {
    const bool keep = std::any_of(keep_concepts.begin(), keep_concepts.end(),
                                  [&](const std::string& c) { return is_member(it->first, c); });
    if (it->second.is_statement() && !keep) {
      instance_axioms_ -= it->second.axiom_size();
      inferred_.erase(it->first);
      it = instances_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  if (removed > 0) {
    // Removing instances cannot introduce a clash.
    membership_ = compute_membership();
    members_by_concept_.clear();
    for (const auto& [inst, set] : membership_)
      for (const auto& c : set) members_by_concept_[c].push_back(inst);
    ++version_;
  }
  return removed;
}

const StoreInstance* ContextStore::instance(std::string_view id) const {
  auto it = instances_.find(id);
  return it == instances_.end() ? nullptr : &it->second;
}

std::optional<Statement> ContextStore::statement(std::string_view id) const {
  const StoreInstance* inst = instance(id);
  return inst ? inst->as_statement() : std::nullopt;
}

std::vector<Value> ContextStore::values(std::string_view id, std::string_view property) const {
  std::vector<Value> out;
  if (auto it = instances_.find(id); it != instances_.end()) {
    auto range = it->second.properties.equal_range(property);
    for (auto p = range.first; p != range.second; ++p) out.push_back(p->second);
  }
  if (auto it = inferred_.find(id); it != inferred_.end()) {
    auto range = it->second.equal_range(property);
    for (auto p = range.first; p != range.second; ++p) out.push_back(p->second);
  }
  return out;
}

bool ContextStore::matches_pattern(std::string_view concept_name, std::string_view property,
                                   std::string_view target) const {
  auto it = members_by_concept_.find(concept_name);
  if (it == members_by_concept_.end()) return false;
  for (const auto& id : it->second)
    for (const Value& v : values(id, property))
      if (const auto* s = std::get_if<std::string>(&v); s && (*s == target || is_member(*s, target)))
        return true;
  return false;
}

StoreSnapshot ContextStore::snapshot() const {
  std::vector<StoreSnapshot::Entry> entries;
  entries.reserve(instances_.size());
  for (const auto& [id, inst] : instances_) {
    StoreSnapshot::Entry e{id, membership_.at(id), inst.properties, inst.source};
    if (auto it = inferred_.find(id); it != inferred_.end())
      e.properties.insert(it->second.begin(), it->second.end());
    entries.push_back(std::move(e));
  }
  return StoreSnapshot(std::move(entries));
}

}  // namespace ontonet
