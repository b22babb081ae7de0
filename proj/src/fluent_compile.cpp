#include "ontonet/fluent_dsl.hpp"

#include <optional>

#include "ontonet/concept_graph.hpp"

namespace ontonet::dsl {

namespace {

using rules::Assign;
using rules::ClassAtom;
using rules::Compare;
using rules::CompareOp;
using rules::PropertyAtom;
using rules::Var;

[[noreturn]] void unsupported(const std::string& msg) {
  throw ModelError(ModelError::Kind::unsupported, 0, 0, msg);
}

/// Rewrites the tree into disjunction-free alternatives.
std::vector<Node> expand(const Node& n) {
  switch (n.kind) {
    case NodeKind::atom:
    case NodeKind::conv: return {n};
    case NodeKind::disj: {
      auto out = expand(n.children[0]);
      auto rhs = expand(n.children[1]);
      out.insert(out.end(), rhs.begin(), rhs.end());
      return out;
    }
    case NodeKind::shift:
    case NodeKind::mask: {
      std::vector<Node> out;
      for (auto& child : expand(n.children[0])) {
        Node copy = n;
        copy.children = {std::move(child)};
        out.push_back(std::move(copy));
      }
      return out;
    }
    default: {
      std::vector<Node> out;
      const auto lhs = expand(n.children[0]);
      const auto rhs = expand(n.children[1]);
      for (const auto& l : lhs)
        for (const auto& r : rhs) {
          Node copy = n;
          copy.children = {l, r};
          out.push_back(std::move(copy));
        }
      return out;
    }
  }
}

void collect_convs(const Node& n, std::vector<const Node*>& out) {
  if (n.kind == NodeKind::conv) {
    if (!n.children.empty()) unsupported("convolution nested inside a convolution");
    for (const Node* seen : out)
      if (*seen == n) return;
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children) collect_convs(c, out);
}

std::string derived_name(const Node& conv) {
  return conv.derived.empty() ? conv.concept_name + "_CONV" : conv.derived;
}

struct Fragment {
  std::vector<std::string> begins;
  std::vector<std::string> ends;
};

class RuleBuilder {
 public:
  RuleBuilder(const ModelAst& ast, const std::vector<Prepass>& prepasses,
              const std::vector<const Node*>& convs)
      : ast_(ast), prepasses_(prepasses), convs_(convs) {}

  /// `last` picks the end that carries the head time. Ends before it must be
  /// strictly earlier so that each match is produced by exactly one choice.
  rules::Rule build(const Node& root, std::string rule_name, const std::vector<std::string>& result_concepts,
                    std::size_t last_index, bool strict_before) {
    Fragment f = walk(root);
    for (std::size_t i = 0; i < occurrences_.size(); ++i)
      for (std::size_t j = i + 1; j < occurrences_.size(); ++j)
        if (occurrences_[i].cls == occurrences_[j].cls &&
            occurrences_[i].state == occurrences_[j].state)
          body_.push_back(Compare{CompareOp::ne, Var{occurrences_[i].subject},
                                  Var{occurrences_[j].subject}});
    const std::string last = f.ends.at(last_index);
    for (std::size_t i = 0; i < f.ends.size(); ++i)
      if (i != last_index)
        body_.push_back(Compare{strict_before && i < last_index ? CompareOp::lt : CompareOp::le, Var{f.ends[i]},
                                Var{last}});

    rules::Rule rule;
    rule.name = std::move(rule_name);
    rule.body = std::move(body_);
    rule.head = rules::Head{ast_.name, true, Var{last}, result_concepts};
    return rule;
  }

 private:
  struct Occurrence {
    std::string cls;
    bool state;
    std::string subject;
  };

  std::int64_t value_of(const std::string& param) const {
    const Param* p = ast_.param(param);
    if (p == nullptr)
      throw ModelError(ModelError::Kind::unknown_parameter, 0, 0, "parameter '" + param + "' has no value");
    return p->resolved();
  }

  Fragment match(const std::string& cls, bool state) {
    const std::string k = std::to_string(++counter_);
    const std::string subject = "s" + k;
    const std::string time = "t" + k;
    body_.push_back(ClassAtom{cls, Var{subject}});
    body_.push_back(PropertyAtom{std::string(prop::has_state), Var{subject}, Value{state}});
    body_.push_back(PropertyAtom{std::string(prop::has_time), Var{subject}, Var{time}});
    occurrences_.push_back({cls, state, subject});
    return {{time}, {time}};
  }

  Fragment walk(const Node& n) {
    switch (n.kind) {
      case NodeKind::atom: return match(n.concept_name, n.state);
      case NodeKind::conv: {
        for (std::size_t i = 0; i < convs_.size(); ++i)
          if (*convs_[i] == n) return match(prepasses_[i].derived_concept, true);
        unsupported("unregistered convolution");
      }
      case NodeKind::mask:
        if (!n.state) unsupported("a false mask can never be satisfied");
        return walk(n.children[0]);
      case NodeKind::shift: {
        Fragment inner = walk(n.children[0]);
        const std::string shifted = "u" + std::to_string(++counter_);
        body_.push_back(Assign{Var{shifted}, Var{inner.ends.back()}, Value{value_of(n.param)}});
        inner.ends = {shifted};
        return inner;
      }
      case NodeKind::conj: {
        Fragment lhs = walk(n.children[0]);
        Fragment rhs = walk(n.children[1]);
        lhs.begins.insert(lhs.begins.end(), rhs.begins.begin(), rhs.begins.end());
        lhs.ends.insert(lhs.ends.end(), rhs.ends.begin(), rhs.ends.end());
        return lhs;
      }
      case NodeKind::precedence: {
        Fragment lhs = walk(n.children[0]);
        Fragment rhs = walk(n.children[1]);
        for (const auto& e : lhs.ends)
          for (const auto& b : rhs.begins) body_.push_back(Compare{CompareOp::le, Var{e}, Var{b}});
        return {lhs.begins, rhs.ends};
      }
      case NodeKind::disj: unsupported("disjunction left after expansion");
    }
    unsupported("unknown node");
  }

  const ModelAst& ast_;
  const std::vector<Prepass>& prepasses_;
  const std::vector<const Node*>& convs_;
  std::vector<rules::Atom> body_;
  std::vector<Occurrence> occurrences_;
  int counter_ = 0;
};

std::size_t end_count(const Node& n) {
  switch (n.kind) {
    case NodeKind::atom:
    case NodeKind::conv:
    case NodeKind::shift: return 1;
    case NodeKind::mask: return end_count(n.children[0]);
    case NodeKind::precedence: return end_count(n.children[1]);
    default: return end_count(n.children[0]) + end_count(n.children[1]);
  }
}

/// Same compiled body up to variable names: parameters compare by value.
bool same_shape(const ModelAst& ast, const Node& a, const Node& b) {
  auto value = [&](const std::string& name) {
    const Param* p = ast.param(name);
    return p == nullptr ? std::optional<std::int64_t>{} : std::optional<std::int64_t>{p->resolved()};
  };
  if (a.kind != b.kind || a.concept_name != b.concept_name || a.state != b.state ||
      a.children.size() != b.children.size())
    return false;
  if (a.kind == NodeKind::shift && value(a.param) != value(b.param)) return false;
  if (a.kind == NodeKind::conv &&
      (derived_name(a) != derived_name(b) || value(a.param) != value(b.param) || value(a.window) != value(b.window)))
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_shape(ast, a.children[i], b.children[i])) return false;
  return true;
}

/// A conjunction of two like single-ended branches: swapping the bindings
/// mirrors any match, so letting the right branch carry the head time loses nothing.
bool symmetric_ends(const ModelAst& ast, const Node& n) {
  switch (n.kind) {
    case NodeKind::mask: return symmetric_ends(ast, n.children[0]);
    case NodeKind::precedence: return symmetric_ends(ast, n.children[1]);
    case NodeKind::conj:
      return end_count(n.children[0]) == 1 && same_shape(ast, n.children[0], n.children[1]);
    default: return false;
  }
}

}  // namespace

CompiledModel compile_model(const ModelAst& ast, const CompileOptions& options) {
  CompiledModel out;
  out.name = ast.name;
  out.result_concepts = options.result_concepts;

  std::vector<const Node*> convs;
  collect_convs(ast.root, convs);
  for (std::size_t i = 0; i < convs.size(); ++i) {
    const Node& c = *convs[i];
    const Param* count = ast.param(c.param);
    const Param* span = ast.param(c.window);
    if (count == nullptr || span == nullptr) unsupported("convolution parameters are unresolved");
    out.prepasses.push_back(Prepass{c.concept_name, c.state, Duration{span->resolved()},
                                    static_cast<unsigned>(count->resolved()), derived_name(c),
                                    ast.name + ".conv" + std::to_string(i + 1)});
  }

  struct Choice {
    const Node* root;
    std::size_t last;
    bool strict;
  };
  const auto alternatives = expand(ast.root);
  std::vector<Choice> choices;
  for (const auto& alt : alternatives) {
    const std::size_t ends = end_count(alt);
    if (ends == 1 || symmetric_ends(ast, alt)) {
      choices.push_back({&alt, ends - 1, false});
      continue;
    }
    for (std::size_t e = 0; e < ends; ++e) choices.push_back({&alt, e, true});
  }
  for (std::size_t i = 0; i < choices.size(); ++i) {
    std::string rule_name = choices.size() == 1 ? ast.name : ast.name + "#" + std::to_string(i + 1);
    out.rules.push_back(RuleBuilder(ast, out.prepasses, convs)
                            .build(*choices[i].root, std::move(rule_name), options.result_concepts, choices[i].last,
                                   choices[i].strict));
  }
  return out;
}

}  // namespace ontonet::dsl
