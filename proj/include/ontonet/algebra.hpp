#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ontonet/statement.hpp"

namespace ontonet {

enum class LogicalOp { conjunction, disjunction };
enum class PrecedenceOp { leq, geq, lt, gt };

/// State combined by `op`, time is the later of the two.
Statement apply_logical(LogicalOp op, const Statement& x, const Statement& y);

/// State is the time comparison `x.time op y.time`; time is the later of the two.
Statement apply_precedence(PrecedenceOp op, const Statement& x, const Statement& y);

/// State and-ed with `phi`; time unchanged.
Statement apply_state_mask(const Statement& x, bool phi);

/// Time moved by `delta`. Throws DomainError when the result would be negative.
Statement shift_time(const Statement& x, Duration delta);

/// Members with state `phi` whose time lies in [t0, t0 + delta], where t0 is
/// the earliest time among members with state `phi`.
/// Throws DomainError for negative `delta`.
StatementSet convolve(const StatementSet& chi, bool phi, Duration delta);

/// True iff the convolution window holds at least `h` members; the result time
/// is the latest time in the window, or 0 (state false) when the window is empty.
/// Throws DomainError when `h` is zero.
Statement convolve_at_least(const StatementSet& chi, bool phi, Duration delta, unsigned h);

// ── operator trees ──────────────────────────────────────────────────────

struct OpExpr;
using OpExprPtr = std::shared_ptr<const OpExpr>;

struct OpExpr {
  struct Leaf {
    std::string id;
  };
  struct Logical {
    LogicalOp op;
    OpExprPtr lhs, rhs;
  };
  struct Precedence {
    PrecedenceOp op;
    OpExprPtr lhs, rhs;
  };
  struct Mask {
    OpExprPtr operand;
    bool phi;
  };
  struct Shift {
    OpExprPtr operand;
    Duration delta;
  };
  /// Thresholded convolution over the named members of the input set.
  struct AtLeast {
    std::vector<std::string> members;
    bool phi;
    Duration delta;
    unsigned h;
  };

  std::variant<Leaf, Logical, Precedence, Mask, Shift, AtLeast> node;
};

namespace expr {
OpExprPtr leaf(std::string id);
OpExprPtr logical(LogicalOp op, OpExprPtr lhs, OpExprPtr rhs);
OpExprPtr precedence(PrecedenceOp op, OpExprPtr lhs, OpExprPtr rhs);
OpExprPtr mask(OpExprPtr operand, bool phi);
OpExprPtr shift(OpExprPtr operand, Duration delta);
OpExprPtr at_least(std::vector<std::string> members, bool phi, Duration delta, unsigned h);
}  // namespace expr

/// Evaluates the tree bottom-up over `input`. A bare leaf returns the
/// referenced member unchanged. Throws DomainError on a reference to an id
/// not present in `input`.
Statement aggregate(const OpExpr& tree, const StatementSet& input);

}  // namespace ontonet
