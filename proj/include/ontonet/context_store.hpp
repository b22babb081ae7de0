#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontonet/concept_graph.hpp"
#include "ontonet/statement.hpp"
#include "ontonet/value.hpp"

namespace ontonet {

enum class AssertMode { overwrite, append };

using PropertyMap = std::multimap<std::string, Value, std::less<>>;

struct StoreInstance {
  std::string id;
  std::set<std::string> asserted;
  PropertyMap properties;
  /// Sensor id a statement copy was made from; empty for prior knowledge.
  std::string source;

  std::size_t axiom_size() const noexcept { return asserted.size() + properties.size(); }
  bool is_statement() const noexcept;
  std::optional<Statement> as_statement() const;
};

struct ChangeSummary {
  std::string instance;
  bool created = false;
  std::int64_t axiom_delta = 0;
};

/// instance id -> every concept it belongs to.
using Membership = std::map<std::string, std::set<std::string>, std::less<>>;

/// Immutable, self-contained view of a store for rule evaluation.
class StoreSnapshot {
 public:
  struct Entry {
    std::string id;
    std::set<std::string> concepts;
    PropertyMap properties;  // asserted and inferred
    std::string source;
  };

  StoreSnapshot() = default;
  explicit StoreSnapshot(std::vector<Entry> entries);

  std::span<const Entry> entries() const noexcept { return entries_; }
  const Entry* find(std::string_view id) const noexcept;
  /// Indices into entries() of the members of `concept_name`, in id order.
  std::span<const std::size_t> members_of(std::string_view concept_name) const noexcept;

 private:
  std::vector<Entry> entries_;  // sorted by id
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_concept_;
};

/// One knowledge context: a concept graph plus instances, kept classified
/// under closed-world semantics after every mutation.
class ContextStore {
 public:
  explicit ContextStore(ConceptGraph graph, std::string name = {});

  const std::string& name() const noexcept { return name_; }
  const ConceptGraph& graph() const noexcept { return graph_; }

  // ── prior knowledge ──
  void add_individual(const std::string& id, const std::set<std::string>& concepts);
  void add_property(const std::string& id, const std::string& property, Value target);

  /// Overwrite keeps one instance per statement id, replacing its state and
  /// time; append creates `<id>#<seq>`. Throws ConsistencyError (store
  /// unchanged) when classification would violate a disjointness.
  ChangeSummary assert_statement(const Statement& s, const std::set<std::string>& concepts,
                                 AssertMode mode);

  /// Cached classification, refreshed after every mutation.
  const Membership& classification() const noexcept { return membership_; }
  /// Classification recomputed from scratch.
  Membership classify() const;
  bool is_member(std::string_view id, std::string_view concept_name) const;

  /// Statement instances classified under `concept_name`, optionally with a given state.
  StatementSet query_instances(std::string_view concept_name,
                               std::optional<bool> state_filter = std::nullopt) const;

  /// Locates the single PERSON from every SENSOR currently true and returns
  /// the (relation, target) pairs. Inferred facts do not count as axioms.
  std::set<std::pair<std::string, std::string>> infer_person_context();
  std::optional<std::string> person() const;

  std::size_t axiom_count() const noexcept { return graph_.axiom_count() + instance_axioms_; }
  std::size_t recount_axioms() const;

  /// Removes every statement instance not classified under one of `keep_concepts`.
  std::size_t clear_statements(const std::set<std::string>& keep_concepts);

  const StoreInstance* instance(std::string_view id) const;
  std::optional<Statement> statement(std::string_view id) const;
  const std::map<std::string, StoreInstance, std::less<>>& instances() const noexcept {
    return instances_;
  }
  /// Asserted and inferred values of `property` on `id`.
  std::vector<Value> values(std::string_view id, std::string_view property) const;

  /// True iff some instance of `concept_name` has a `property` value that is
  /// `target` itself or an instance classified under `target`.
  bool matches_pattern(std::string_view concept_name, std::string_view property,
                       std::string_view target) const;

  /// Bumped on every mutation; lets samplers skip unchanged stores.
  std::uint64_t version() const noexcept { return version_; }

  StoreSnapshot snapshot() const;

 private:
  void require_concepts(const std::set<std::string>& concepts) const;
  /// Reclassifies and checks disjointness; on failure restores `saved` for `id`.
  void commit(const std::string& id, std::optional<StoreInstance> saved,
              std::optional<PropertyMap> saved_inferred);
  Membership compute_membership() const;
  void check_disjointness(const Membership& m) const;

  std::string name_;
  ConceptGraph graph_;
  std::map<std::string, StoreInstance, std::less<>> instances_;
  std::map<std::string, PropertyMap, std::less<>> inferred_;
  Membership membership_;
  std::map<std::string, std::vector<std::string>, std::less<>> members_by_concept_;
  std::size_t instance_axioms_ = 0;
  std::uint64_t next_seq_ = 1;
  std::uint64_t version_ = 0;
};

}  // namespace ontonet
