#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ontonet/concept_graph.hpp"
#include "ontonet/rule_engine.hpp"
#include "ontonet/statement.hpp"

namespace ontonet::dsl {

// Surface syntax, one model per `.fluent` file:
//
//   NAME := expr
//   where
//     PARAM = NUMBER [ms|s|min]
//
//   expr    := prec
//   prec    := or ("<=" or)*
//   or      := and ("|" and)*
//   and     := term ("&" term)*
//   term    := primary ["^" ("+"|"-")]
//   primary := atom ["+" PARAM] | "(" expr ")"
//            | "conv" "(" atom "," PARAM "," PARAM ["," CLASS] ")"
//   atom    := CLASS ":" ("+"|"-")
//
// All binary operators are left-associative. `#` starts a comment.

enum class NodeKind { atom, conj, disj, precedence, shift, mask, conv };

/// One expression node. Binary kinds hold two children, shift and mask one.
struct Node {
  NodeKind kind = NodeKind::atom;
  std::string concept_name;  // atom, conv: sensor class
  bool state = true;         // atom, conv: required state; mask: phi
  std::string param;         // shift: delay; conv: count threshold
  std::string window;        // conv: duration
  std::string derived;       // conv: optional derived class name
  std::vector<Node> children;

  friend bool operator==(const Node&, const Node&) = default;
};

enum class Unit { count, ms, s, min };

struct Param {
  std::string name;
  std::int64_t amount = 0;
  Unit unit = Unit::count;

  /// Milliseconds for time units, the bare amount for counts.
  std::int64_t resolved() const noexcept;
  friend bool operator==(const Param&, const Param&) = default;
};

struct ModelAst {
  std::string name;
  Node root;
  std::vector<Param> params;  // declaration order

  const Param* param(std::string_view name) const noexcept;
  friend bool operator==(const ModelAst&, const ModelAst&) = default;
};

class ModelError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_parameter, bad_parameter, unknown_class, unsupported };

  ModelError(Kind kind, int line, int column, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

/// Parses one model. When `classes` is given, every sensor class must be a
/// concept there (derived conv classes excepted). Parameters referenced by
/// the expression must be declared; shifts and windows need a time unit,
/// counts must be unitless and positive.
ModelAst parse_model(std::string_view text, const ConceptGraph* classes = nullptr);

/// Canonical text: parse_model(format_model(ast)) == ast.
std::string format_model(const ModelAst& ast);

/// Plain-English rendering of the expression, with parameter values.
std::string describe_model(const ModelAst& ast);

/// Window scan run before rule evaluation: over every `source_concept`
/// statement with state `phi`, if there are at least `min_count` of them and
/// the earliest plus `min_span` is no later than the latest, `instance_id`
/// is asserted true at the latest time as a `derived_concept`.
struct Prepass {
  std::string source_concept;
  bool phi = true;
  Duration min_span{0};
  unsigned min_count = 1;
  std::string derived_concept;
  std::string instance_id;

  friend bool operator==(const Prepass&, const Prepass&) = default;
};

struct CompileOptions {
  /// Concepts attached to the recognised activity statement.
  std::vector<std::string> result_concepts{"ACTIVITY"};
};

struct CompiledModel {
  std::string name;
  std::vector<rules::Rule> rules;  // one per disjunct; a single rule without `|`
  std::vector<Prepass> prepasses;
  std::vector<std::string> result_concepts;
};

/// Throws ModelError (unsupported) for nested convolutions or a false mask.
CompiledModel compile_model(const ModelAst& ast, const CompileOptions& options = {});

}  // namespace ontonet::dsl
