#include "ontonet/algebra.hpp"

#include <algorithm>

#include "ontonet/error.hpp"

namespace ontonet {

namespace {

std::string symbol(LogicalOp op) { return op == LogicalOp::conjunction ? " & " : " | "; }

std::string symbol(PrecedenceOp op) {
  switch (op) {
    case PrecedenceOp::leq: return " <= ";
    case PrecedenceOp::geq: return " >= ";
    case PrecedenceOp::lt: return " < ";
    case PrecedenceOp::gt: return " > ";
  }
  return " ? ";
}

bool compare(PrecedenceOp op, TimeMs a, TimeMs b) {
  switch (op) {
    case PrecedenceOp::leq: return a <= b;
    case PrecedenceOp::geq: return a >= b;
    case PrecedenceOp::lt: return a < b;
    case PrecedenceOp::gt: return a > b;
  }
  return false;
}

}  // namespace

Statement apply_logical(LogicalOp op, const Statement& x, const Statement& y) {
  const bool state = op == LogicalOp::conjunction ? (x.state() && y.state())
                                                  : (x.state() || y.state());
  return Statement("(" + x.id() + symbol(op) + y.id() + ")", state, std::max(x.time(), y.time()),
                   StatementKind::aggregated);
}

Statement apply_precedence(PrecedenceOp op, const Statement& x, const Statement& y) {
  return Statement("(" + x.id() + symbol(op) + y.id() + ")", compare(op, x.time(), y.time()),
                   std::max(x.time(), y.time()), StatementKind::aggregated);
}

Statement apply_state_mask(const Statement& x, bool phi) {
  return Statement(x.id() + (phi ? "^+" : "^-"), x.state() && phi, x.time(),
                   StatementKind::aggregated);
}

Statement shift_time(const Statement& x, Duration delta) {
  const TimeMs shifted = x.time() + delta.count();
  if (shifted < 0)
    throw DomainError("shifting " + x.id() + " by " + std::to_string(delta.count()) +
                      " ms goes below zero");
  return Statement(x.id() + "+" + std::to_string(delta.count()), x.state(), shifted,
                   StatementKind::aggregated);
}

StatementSet convolve(const StatementSet& chi, bool phi, Duration delta) {
  if (delta.count() < 0) throw DomainError("convolution window must not be negative");
  std::vector<Statement> window;
  const Statement* first = nullptr;
  for (const auto& s : chi) {
    if (s.state() != phi) continue;
    // members are time-ordered, so the first match carries t0
    if (first == nullptr) first = &s;
    if (s.time() - first->time() > delta.count()) break;
    window.push_back(s);
  }
  return StatementSet(std::move(window));
}

Statement convolve_at_least(const StatementSet& chi, bool phi, Duration delta, unsigned h) {
  if (h == 0) throw DomainError("convolution threshold h must be at least 1");
  const StatementSet window = convolve(chi, phi, delta);
  std::string id = "conv[" + std::to_string(window.size()) + ">=" + std::to_string(h) + "]";
  if (window.empty()) return Statement(std::move(id), false, 0, StatementKind::aggregated);
  return Statement(std::move(id), window.size() >= h, window.members().back().time(),
                   StatementKind::aggregated);
}

namespace expr {

OpExprPtr leaf(std::string id) {
  return std::make_shared<const OpExpr>(OpExpr{OpExpr::Leaf{std::move(id)}});
}
OpExprPtr logical(LogicalOp op, OpExprPtr lhs, OpExprPtr rhs) {
  return std::make_shared<const OpExpr>(OpExpr{OpExpr::Logical{op, std::move(lhs), std::move(rhs)}});
}
OpExprPtr precedence(PrecedenceOp op, OpExprPtr lhs, OpExprPtr rhs) {
  return std::make_shared<const OpExpr>(
      OpExpr{OpExpr::Precedence{op, std::move(lhs), std::move(rhs)}});
}
OpExprPtr mask(OpExprPtr operand, bool phi) {
  return std::make_shared<const OpExpr>(OpExpr{OpExpr::Mask{std::move(operand), phi}});
}
OpExprPtr shift(OpExprPtr operand, Duration delta) {
  return std::make_shared<const OpExpr>(OpExpr{OpExpr::Shift{std::move(operand), delta}});
}
OpExprPtr at_least(std::vector<std::string> members, bool phi, Duration delta, unsigned h) {
  return std::make_shared<const OpExpr>(OpExpr{OpExpr::AtLeast{std::move(members), phi, delta, h}});
}

}  // namespace expr

namespace {

struct Evaluator {
  const StatementSet& input;

  Statement operator()(const OpExpr::Leaf& n) const {
    const Statement* s = input.find(n.id);
    if (s == nullptr) throw DomainError("unbound statement reference " + n.id);
    return *s;
  }
  Statement operator()(const OpExpr::Logical& n) const {
    return apply_logical(n.op, eval(*n.lhs), eval(*n.rhs));
  }
  Statement operator()(const OpExpr::Precedence& n) const {
    return apply_precedence(n.op, eval(*n.lhs), eval(*n.rhs));
  }
  Statement operator()(const OpExpr::Mask& n) const {
    return apply_state_mask(eval(*n.operand), n.phi);
  }
  Statement operator()(const OpExpr::Shift& n) const {
    return shift_time(eval(*n.operand), n.delta);
  }
  Statement operator()(const OpExpr::AtLeast& n) const {
    StatementSet chi;
    for (const auto& id : n.members) chi.insert((*this)(OpExpr::Leaf{id}));
    return convolve_at_least(chi, n.phi, n.delta, n.h);
  }

  Statement eval(const OpExpr& e) const {
    if (e.node.valueless_by_exception()) throw DomainError("malformed operator tree");
    return std::visit(*this, e.node);
  }
};

}  // namespace

Statement aggregate(const OpExpr& tree, const StatementSet& input) {
  return Evaluator{input}.eval(tree);
}

}  // namespace ontonet
