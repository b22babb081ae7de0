#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontonet/value.hpp"

namespace ontonet {

// Property names with fixed meaning across every store.
namespace prop {
inline constexpr std::string_view has_state = "hasState";
inline constexpr std::string_view has_time = "hasTime";
inline constexpr std::string_view is_in = "isIn";
inline constexpr std::string_view is_near_to = "isNearTo";
}  // namespace prop

enum class Cardinality { at_least, at_most, exactly };

/// Closed-world count of `property` values that are either instances of
/// `target_concept`, equal to `target_value`, or anything when both are empty.
struct Restriction {
  std::string property;
  Cardinality bound = Cardinality::at_least;
  unsigned k = 1;
  std::optional<std::string> target_concept;
  std::optional<Value> target_value;

  friend bool operator==(const Restriction&, const Restriction&) = default;
};

/// Membership is implied when every conjunct concept holds and every restriction is met.
struct DefinedClass {
  std::string name;
  std::vector<std::string> conjuncts;
  std::vector<Restriction> restrictions;

  std::size_t axiom_size() const noexcept { return conjuncts.size() + restrictions.size(); }
};

/// Concept taxonomy: a subclass DAG, disjoint pairs and defined classes.
class ConceptGraph {
 public:
  void add_concept(std::string name);
  /// Throws DomainError for unknown concepts or when the edge would close a cycle.
  void add_subclass(const std::string& child, const std::string& parent);
  void add_disjoint(const std::string& a, const std::string& b);
  /// Throws DomainError when the class or a referenced concept is unknown.
  void add_defined_class(DefinedClass dc);

  bool contains(std::string_view concept_name) const;
  const std::set<std::string, std::less<>>& concepts() const noexcept { return concepts_; }
  const std::set<std::pair<std::string, std::string>>& subclass_edges() const noexcept {
    return edges_;
  }
  const std::set<std::pair<std::string, std::string>>& disjoint_pairs() const noexcept {
    return disjoint_;
  }
  const std::vector<DefinedClass>& defined_classes() const noexcept { return defined_; }

  /// The concept and all its transitive superclasses.
  std::set<std::string> ancestors(const std::string& concept_name) const;
  bool subsumes(const std::string& parent, const std::string& child) const;

  /// concepts + subclass edges + defined-class conjuncts and restrictions.
  std::size_t axiom_count() const noexcept;

 private:
  void require(std::string_view concept_name) const;

  std::set<std::string, std::less<>> concepts_;
  std::set<std::pair<std::string, std::string>> edges_;  // (child, parent)
  std::set<std::pair<std::string, std::string>> disjoint_;
  std::vector<DefinedClass> defined_;
};

}  // namespace ontonet
