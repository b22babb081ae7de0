#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ontonet/context_store.hpp"
#include "ontonet/value.hpp"

namespace ontonet::rules {

struct Var {
  std::string name;  // without the leading '?'
  friend auto operator<=>(const Var&, const Var&) = default;
};

using Term = std::variant<Var, Value>;

enum class CompareOp { le, ge, lt, gt, eq, ne };

struct ClassAtom {
  std::string concept_name;
  Var subject;
  friend bool operator==(const ClassAtom&, const ClassAtom&) = default;
};
struct PropertyAtom {
  std::string property;
  Var subject;
  Term object;
  friend bool operator==(const PropertyAtom&, const PropertyAtom&) = default;
};
struct Compare {
  CompareOp op;
  Term lhs, rhs;
  friend bool operator==(const Compare&, const Compare&) = default;
};
/// target <- lhs + rhs
struct Assign {
  Var target;
  Term lhs, rhs;
  friend bool operator==(const Assign&, const Assign&) = default;
};

using Atom = std::variant<ClassAtom, PropertyAtom, Compare, Assign>;

/// Asserts `result_id` with the given state and time, as a member of `concepts`.
struct Head {
  std::string result_id;
  bool state = true;
  Term time;
  std::vector<std::string> concepts;
  friend bool operator==(const Head&, const Head&) = default;
};

struct Rule {
  std::string name;
  std::vector<Atom> body;
  Head head;
};

/// variable name -> value
using Binding = std::map<std::string, Value>;

struct Derivation {
  std::string rule;
  std::string result_id;
  bool state = true;
  TimeMs time = 0;
  std::vector<std::string> concepts;
  /// Smallest binding (by map order) among those producing this head.
  Binding binding;

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

enum class ExecPolicy { serial, parallel };

enum class Builtin { le, ge, lt, gt, eq, ne, sum };
using BuiltinResult = std::variant<bool, Value>;

/// Comparisons yield a Boolean (ordering ones require numbers; equality works
/// on any value); `sum` yields the numeric sum. Throws DomainError on a type mismatch.
BuiltinResult eval_builtin(Builtin op, const Value& lhs, const Value& rhs);

std::string to_string(const Atom& atom);
std::string to_string(const Rule& rule);

/// Rule store with single-pass, all-bindings conjunctive evaluation.
class RuleEngine {
 public:
  /// Throws ValidationError for an empty body, a duplicate name, or a
  /// variable used by a builtin or the head that no atom binds.
  std::size_t register_rule(Rule rule);

  std::span<const Rule> rules() const noexcept { return rules_; }

  /// Every distinct head derivable from `snapshot`, ordered by rule
  /// registration, then time, then result id. Identical for both policies.
  std::vector<Derivation> evaluate(const StoreSnapshot& snapshot,
                                   ExecPolicy policy = ExecPolicy::serial) const;

  /// When set, evaluate() writes every matched binding to this stream.
  void set_debug_stream(std::ostream* out) noexcept { debug_ = out; }

 private:
  struct Plan {
    std::vector<std::size_t> order;  // body indices in execution order
  };

  std::vector<Rule> rules_;
  std::vector<Plan> plans_;
  std::ostream* debug_ = nullptr;
};

}  // namespace ontonet::rules
