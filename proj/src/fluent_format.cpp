#include "ontonet/fluent_dsl.hpp"

#include <cctype>

namespace ontonet::dsl {

namespace {

int level(const Node& n) {
  switch (n.kind) {
    case NodeKind::precedence: return 0;
    case NodeKind::disj: return 1;
    case NodeKind::conj: return 2;
    default: return 3;
  }
}

const char* op_text(NodeKind k) {
  switch (k) {
    case NodeKind::precedence: return " <= ";
    case NodeKind::disj: return " | ";
    default: return " & ";
  }
}

std::string state_text(bool s) { return s ? "+" : "-"; }

std::string unit_suffix(Unit u) {
  switch (u) {
    case Unit::count: return "";
    case Unit::ms: return " ms";
    case Unit::s: return " s";
    case Unit::min: return " min";
  }
  return "";
}

std::string format_node(const Node& n) {
  switch (n.kind) {
    case NodeKind::atom: return n.concept_name + ":" + state_text(n.state);
    case NodeKind::shift: return "(" + format_node(n.children[0]) + " + " + n.param + ")";
    case NodeKind::conv: {
      std::string out = "conv(" + n.concept_name + ":" + state_text(n.state) + ", " + n.param + ", " +
                        n.window;
      if (!n.derived.empty()) out += ", " + n.derived;
      return out + ")";
    }
    case NodeKind::mask: {
      const Node& inner = n.children[0];
      std::string body = format_node(inner);
      if (level(inner) < 3 || inner.kind == NodeKind::mask) body = "(" + body + ")";
      return body + "^" + state_text(n.state);
    }
    default: {
      const int lv = level(n);
      std::string lhs = format_node(n.children[0]);
      std::string rhs = format_node(n.children[1]);
      if (level(n.children[0]) < lv) lhs = "(" + lhs + ")";
      if (level(n.children[1]) <= lv) rhs = "(" + rhs + ")";
      return lhs + op_text(n.kind) + rhs;
    }
  }
}

class Narrator {
 public:
  explicit Narrator(const ModelAst& ast) : ast_(ast) {}

  std::string operator()(const Node& n) const {
    switch (n.kind) {
      case NodeKind::atom: return event(n.concept_name, n.state);
      case NodeKind::shift: return (*this)(n.children[0]) + ", followed by a delay of " + amount(n.param);
      case NodeKind::conv:
        return "the person stayed in " + n.concept_name + " for " + amount(n.window) + " with at least " +
               amount(n.param) + " visits";
      case NodeKind::mask:
        return (*this)(n.children[0]) + (n.state ? " (holding)" : " (not holding)");
      case NodeKind::conj:
        if (simple(n.children[0]) && simple(n.children[1]))
          return (*this)(n.children[0]) + " and " + (*this)(n.children[1]);
        return (*this)(n.children[0]) + "; in addition, " + (*this)(n.children[1]);
      case NodeKind::disj:
        if (simple(n.children[0]) && simple(n.children[1]))
          return (*this)(n.children[0]) + " or " + (*this)(n.children[1]);
        return "either " + (*this)(n.children[0]) + "; or else " + (*this)(n.children[1]);
      case NodeKind::precedence: {
        const Node& lhs = n.children[0];
        if (lhs.kind == NodeKind::shift)
          return (*this)(lhs.children[0]) + ", then after " + amount(lhs.param) + ", " +
                 (*this)(n.children[1]);
        return (*this)(lhs) + ", then " + (*this)(n.children[1]);
      }
    }
    return {};
  }

 private:
  static bool simple(const Node& n) { return n.kind == NodeKind::atom || n.kind == NodeKind::conv; }

  std::string amount(const std::string& name) const {
    const Param* p = ast_.param(name);
    if (p == nullptr) return name;
    return name + " (" + std::to_string(p->amount) + unit_suffix(p->unit) + ")";
  }

  static std::string event(const std::string& cls, bool state) {
    if (cls == "DOOR") return state ? "the door was opened" : "the door was closed";
    if (cls == "ITEM") return state ? "an object was put back" : "an object was taken";
    if (cls == "FLOW") return state ? "water was used" : "the water was turned off";
    if (cls == "PHONE") return state ? "the phone was picked up" : "the phone was hung up";
    return state ? "the person was in " + cls : "the person left " + cls;
  }

  const ModelAst& ast_;
};

}  // namespace

std::string format_model(const ModelAst& ast) {
  std::string out = ast.name + " := " + format_node(ast.root) + "\n";
  if (!ast.params.empty()) {
    out += "where\n";
    for (const auto& p : ast.params)
      out += "  " + p.name + " = " + std::to_string(p.amount) + unit_suffix(p.unit) + "\n";
  }
  return out;
}

std::string describe_model(const ModelAst& ast) {
  std::string sentence = Narrator(ast)(ast.root);
  if (!sentence.empty()) sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
  return ast.name + ": " + sentence + ".";
}

}  // namespace ontonet::dsl
