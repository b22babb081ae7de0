// Hand-rolled random generators shared by the property tests.
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ontonet/algebra.hpp"
#include "ontonet/context_store.hpp"
#include "ontonet/fluent_dsl.hpp"
#include "ontonet/rule_engine.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(between(0, static_cast<std::int64_t>(n) - 1)); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64 engine_;
};

/// Times on a coarse grid so that ties and window edges come up often.
inline ontonet::TimeMs grid_time(Rng& rng, ontonet::TimeMs max_ms = 30'000, ontonet::TimeMs step = 500) {
  return rng.between(0, max_ms / step) * step;
}

inline ontonet::Statement statement(Rng& rng, const std::string& id) {
  return ontonet::Statement(id, rng.coin(), grid_time(rng));
}

/// Members named s0, s1, ...
inline ontonet::StatementSet statement_set(Rng& rng, std::size_t n) {
  ontonet::StatementSet out;
  for (std::size_t i = 0; i < n; ++i) out.insert(statement(rng, "s" + std::to_string(i)));
  return out;
}

inline ontonet::Duration duration(Rng& rng, ontonet::TimeMs max_ms = 10'000) {
  return ontonet::Duration(rng.between(0, max_ms / 500) * 500);
}

/// Operator tree of depth at most `depth` whose leaves name members of `set`.
inline ontonet::OpExprPtr op_tree(Rng& rng, const ontonet::StatementSet& set, int depth) {
  using namespace ontonet;
  std::vector<std::string> ids;
  for (const auto& s : set) ids.push_back(s.id());
  if (depth <= 1 || rng.coin(0.25)) {
    if (rng.coin(0.8)) return expr::leaf(rng.pick(ids));
    std::vector<std::string> members;
    for (const auto& id : ids)
      if (rng.coin()) members.push_back(id);
    return expr::at_least(members, rng.coin(), duration(rng), static_cast<unsigned>(rng.between(1, 4)));
  }
  switch (rng.below(4)) {
    case 0:
      return expr::logical(rng.coin() ? LogicalOp::conjunction : LogicalOp::disjunction,
                           op_tree(rng, set, depth - 1), op_tree(rng, set, depth - 1));
    case 1:
      return expr::precedence(static_cast<PrecedenceOp>(rng.below(4)), op_tree(rng, set, depth - 1),
                              op_tree(rng, set, depth - 1));
    case 2: return expr::mask(op_tree(rng, set, depth - 1), rng.coin());
    default: return expr::shift(op_tree(rng, set, depth - 1), duration(rng));
  }
}

// ── model ASTs ──────────────────────────────────────────────────────────

class AstBuilder {
 public:
  explicit AstBuilder(Rng& rng) : rng_(rng) {}

  ontonet::dsl::ModelAst build(int depth) {
    ontonet::dsl::ModelAst ast;
    ast.name = "M" + std::to_string(rng_.between(1, 99));
    ast.root = node(depth);
    ast.params = std::move(params_);
    return ast;
  }

 private:
  using Node = ontonet::dsl::Node;
  using NodeKind = ontonet::dsl::NodeKind;

  Node atom() {
    static const std::vector<std::string> classes{"DOOR", "ITEM", "FLOW", "PHONE", "KITCHEN", "SOFA"};
    Node n;
    n.kind = NodeKind::atom;
    n.concept_name = rng_.pick(classes);
    n.state = rng_.coin();
    return n;
  }

  // Reuses a declared parameter of the right kind now and then.
  std::string param(bool duration) {
    std::vector<std::string> same;
    for (const auto& p : params_)
      if ((p.unit == ontonet::dsl::Unit::count) != duration) same.push_back(p.name);
    if (!same.empty() && rng_.coin(0.3)) return rng_.pick(same);
    ontonet::dsl::Param p;
    p.name = (duration ? "d" : "h") + std::to_string(params_.size() + 1);
    if (duration) {
      p.unit = static_cast<ontonet::dsl::Unit>(rng_.between(1, 3));
      p.amount = rng_.between(0, 120);
    } else {
      p.amount = rng_.between(1, 9);
    }
    params_.push_back(p);
    return p.name;
  }

  Node leaf() {
    switch (rng_.below(3)) {
      case 0: return atom();
      case 1: {
        Node n;
        n.kind = NodeKind::shift;
        n.children.push_back(atom());
        n.param = param(true);
        return n;
      }
      default: {
        Node a = atom();
        Node n;
        n.kind = NodeKind::conv;
        n.concept_name = a.concept_name;
        n.state = a.state;
        n.param = param(false);
        n.window = param(true);
        if (rng_.coin()) n.derived = a.concept_name + "_DONE";
        return n;
      }
    }
  }

  Node node(int depth) {
    if (depth <= 1 || rng_.coin(0.2)) return leaf();
    Node n;
    switch (rng_.below(4)) {
      case 0: n.kind = NodeKind::conj; break;
      case 1: n.kind = NodeKind::disj; break;
      case 2: n.kind = NodeKind::precedence; break;
      default:
        n.kind = NodeKind::mask;
        n.state = rng_.coin();
        n.children.push_back(node(depth - 1));
        return n;
    }
    n.children.push_back(node(depth - 1));
    n.children.push_back(node(depth - 1));
    return n;
  }

  Rng& rng_;
  std::vector<ontonet::dsl::Param> params_;
};

// ── rule snapshots ──────────────────────────────────────────────────────

/// Every concept a rule body tests with a class atom.
inline std::vector<std::string> body_concepts(const ontonet::rules::Rule& rule) {
  std::set<std::string> out;
  for (const auto& a : rule.body)
    if (const auto* c = std::get_if<ontonet::rules::ClassAtom>(&a)) out.insert(c->concept_name);
  return {out.begin(), out.end()};
}

/// Fills `store` (append mode) with up to `max_instances` statements of the
/// rule's classes, drawn from a few sensors over a one-minute span.
inline void fill_store(Rng& rng, ontonet::ContextStore& store, const ontonet::rules::Rule& rule,
                       std::size_t max_instances = 12) {
  const auto concepts = body_concepts(rule);
  const std::size_t n = rng.below(max_instances + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& cls = rng.pick(concepts);
    const std::string sensor = cls + std::to_string(rng.between(1, 3));
    const ontonet::TimeMs t = rng.between(0, 60) * 1000;
    store.assert_statement(ontonet::Statement(sensor, rng.coin(0.6), t), {cls}, ontonet::AssertMode::append);
  }
}

}  // namespace gen
