#include "ontonet/rule_engine.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <tuple>

#include "ontonet/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ontonet::rules {

namespace {

const char* symbol(CompareOp op) {
  switch (op) {
    case CompareOp::le: return "<=";
    case CompareOp::ge: return ">=";
    case CompareOp::lt: return "<";
    case CompareOp::gt: return ">";
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "!=";
  }
  return "?";
}

std::string term_text(const Term& t) {
  if (const Var* v = std::get_if<Var>(&t)) return "?" + v->name;
  return ontonet::to_string(std::get<Value>(t));
}

std::optional<bool> compare_values(CompareOp op, const Value& a, const Value& b) {
  if (op == CompareOp::eq) return a == b;
  if (op == CompareOp::ne) return a != b;
  const auto* x = std::get_if<std::int64_t>(&a);
  const auto* y = std::get_if<std::int64_t>(&b);
  if (x == nullptr || y == nullptr) return std::nullopt;
  switch (op) {
    case CompareOp::le: return *x <= *y;
    case CompareOp::ge: return *x >= *y;
    case CompareOp::lt: return *x < *y;
    case CompareOp::gt: return *x > *y;
    default: return std::nullopt;
  }
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (const Var* v = std::get_if<Var>(&t)) out.push_back(v->name);
}

/// Variables an atom needs bound before it can run as a filter or builtin.
std::vector<std::string> inputs(const Atom& atom) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, ClassAtom>) {
          out.push_back(a.subject.name);
        } else if constexpr (std::is_same_v<A, PropertyAtom>) {
          out.push_back(a.subject.name);
        } else if constexpr (std::is_same_v<A, Compare>) {
          collect_vars(a.lhs, out);
          collect_vars(a.rhs, out);
        } else {
          collect_vars(a.lhs, out);
          collect_vars(a.rhs, out);
        }
      },
      atom);
  return out;
}

/// Variables an atom binds when it runs.
std::vector<std::string> outputs(const Atom& atom) {
  std::vector<std::string> out;
  if (const auto* c = std::get_if<ClassAtom>(&atom)) out.push_back(c->subject.name);
  if (const auto* p = std::get_if<PropertyAtom>(&atom)) {
    out.push_back(p->subject.name);
    collect_vars(p->object, out);
  }
  if (const auto* a = std::get_if<Assign>(&atom)) out.push_back(a->target.name);
  return out;
}

// ── matcher ─────────────────────────────────────────────────────────────

using HeadKey = std::tuple<TimeMs, std::string, bool>;
using Found = std::map<HeadKey, Binding>;

class Matcher {
 public:
  Matcher(const Rule& rule, std::span<const std::size_t> order, const StoreSnapshot& snap,
          std::ostream* debug)
      : rule_(rule), order_(order), snap_(snap), debug_(debug) {}

  void run_from(std::size_t step, Binding& b) { descend(step, b); }

  /// Candidate instance ids for a leading class generator, or empty when the
  /// plan does not start with one.
  std::vector<std::string> leading_candidates() const {
    std::vector<std::string> out;
    const auto* c = std::get_if<ClassAtom>(&rule_.body[order_.front()]);
    if (c == nullptr) return out;
    for (std::size_t idx : snap_.members_of(c->concept_name)) out.push_back(snap_.entries()[idx].id);
    return out;
  }
  bool starts_with_class_generator() const {
    return std::holds_alternative<ClassAtom>(rule_.body[order_.front()]);
  }

  Found& found() noexcept { return found_; }

 private:
  std::optional<Value> resolve(const Term& t, const Binding& b) const {
    if (const Var* v = std::get_if<Var>(&t)) {
      auto it = b.find(v->name);
      if (it == b.end()) return std::nullopt;
      return it->second;
    }
    return std::get<Value>(t);
  }

  /// Binds `var` to `value` (or checks consistency), recurses, then undoes.
  void with(const std::string& var, const Value& value, std::size_t next, Binding& b) {
    auto it = b.find(var);
    if (it != b.end()) {
      if (it->second == value) descend(next, b);
      return;
    }
    b.emplace(var, value);
    descend(next, b);
    b.erase(var);
  }

  void descend(std::size_t step, Binding& b) {
    if (step == order_.size()) return emit(b);
    const Atom& atom = rule_.body[order_[step]];
    const std::size_t next = step + 1;

    if (const auto* c = std::get_if<ClassAtom>(&atom)) {
      if (auto bound = b.find(c->subject.name); bound != b.end()) {
        const auto* id = std::get_if<std::string>(&bound->second);
        const auto* e = id ? snap_.find(*id) : nullptr;
        if (e != nullptr && e->concepts.count(c->concept_name)) descend(next, b);
        return;
      }
      for (std::size_t idx : snap_.members_of(c->concept_name))
        with(c->subject.name, Value{snap_.entries()[idx].id}, next, b);
      return;
    }

    if (const auto* p = std::get_if<PropertyAtom>(&atom)) {
      auto match_entry = [&](const StoreSnapshot::Entry& e) {
        auto range = e.properties.equal_range(p->property);
        for (auto it = range.first; it != range.second; ++it) {
          if (const Var* v = std::get_if<Var>(&p->object)) {
            with(v->name, it->second, next, b);
          } else if (std::get<Value>(p->object) == it->second) {
            descend(next, b);
            return;  // a literal object matches at most once
          }
        }
      };
      if (auto bound = b.find(p->subject.name); bound != b.end()) {
        const auto* id = std::get_if<std::string>(&bound->second);
        if (const auto* e = id ? snap_.find(*id) : nullptr) match_entry(*e);
        return;
      }
      for (const auto& e : snap_.entries()) {
        if (e.properties.count(p->property) == 0) continue;
        b.emplace(p->subject.name, Value{e.id});
        match_entry(e);
        b.erase(p->subject.name);
      }
      return;
    }

    if (const auto* cmp = std::get_if<Compare>(&atom)) {
      auto lhs = resolve(cmp->lhs, b);
      auto rhs = resolve(cmp->rhs, b);
      if (!lhs || !rhs) return;
      if (compare_values(cmp->op, *lhs, *rhs).value_or(false)) descend(next, b);
      return;
    }

    const auto& asg = std::get<Assign>(atom);
    auto lhs = resolve(asg.lhs, b);
    auto rhs = resolve(asg.rhs, b);
    if (!lhs || !rhs || !is_number(*lhs) || !is_number(*rhs)) return;
    with(asg.target.name, Value{std::get<std::int64_t>(*lhs) + std::get<std::int64_t>(*rhs)}, next,
         b);
  }

  void emit(const Binding& b) {
    auto time = resolve(rule_.head.time, b);
    if (!time || !is_number(*time)) return;
    if (debug_ != nullptr) {
      *debug_ << "rule " << rule_.name << ":";
      for (const auto& [k, v] : b) *debug_ << " ?" << k << "=" << ontonet::to_string(v);
      *debug_ << '\n';
    }
    HeadKey key{std::get<std::int64_t>(*time), rule_.head.result_id, rule_.head.state};
    auto [it, inserted] = found_.emplace(key, b);
    if (!inserted && b < it->second) it->second = b;
  }

  const Rule& rule_;
  std::span<const std::size_t> order_;
  const StoreSnapshot& snap_;
  std::ostream* debug_;
  Found found_;
};

void merge_into(Found& into, Found&& from) {
  for (auto& [key, binding] : from) {
    auto [it, inserted] = into.emplace(key, binding);
    if (!inserted && binding < it->second) it->second = std::move(binding);
  }
}

}  // namespace

BuiltinResult eval_builtin(Builtin op, const Value& lhs, const Value& rhs) {
  if (op == Builtin::sum) {
    if (!is_number(lhs) || !is_number(rhs)) throw DomainError("sum needs numeric operands");
    return Value{std::get<std::int64_t>(lhs) + std::get<std::int64_t>(rhs)};
  }
  const auto cmp = static_cast<CompareOp>(static_cast<int>(op));
  auto r = compare_values(cmp, lhs, rhs);
  if (!r) throw DomainError(std::string("comparison ") + symbol(cmp) + " needs numeric operands");
  return *r;
}

std::string to_string(const Atom& atom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, ClassAtom>) {
          return a.concept_name + "(?" + a.subject.name + ")";
        } else if constexpr (std::is_same_v<A, PropertyAtom>) {
          return a.property + "(?" + a.subject.name + ", " + term_text(a.object) + ")";
        } else if constexpr (std::is_same_v<A, Compare>) {
          return "(" + term_text(a.lhs) + " " + symbol(a.op) + " " + term_text(a.rhs) + ")";
        } else {
          return "(?" + a.target.name + " <- " + term_text(a.lhs) + " + " + term_text(a.rhs) + ")";
        }
      },
      atom);
}

std::string to_string(const Rule& rule) {
  std::string out = rule.name + ":\n";
  for (std::size_t i = 0; i < rule.body.size(); ++i)
    out += "  " + to_string(rule.body[i]) + (i + 1 < rule.body.size() ? " &\n" : "\n");
  out += "  => (" + rule.head.result_id + ", " + (rule.head.state ? "true" : "false") +
         "):hasState & (" + rule.head.result_id + ", " + term_text(rule.head.time) + "):hasTime";
  for (const auto& c : rule.head.concepts) out += " & " + c + "(" + rule.head.result_id + ")";
  return out + "\n";
}

std::size_t RuleEngine::register_rule(Rule rule) {
  if (rule.body.empty()) throw ValidationError("rule " + rule.name + " has an empty body");
  for (const auto& r : rules_)
    if (r.name == rule.name) throw ValidationError("duplicate rule name " + rule.name);

  // Greedy plan: ready filters and builtins first, then the first class
  // generator, then the first property generator.
  std::set<std::string> bound;
  std::vector<std::size_t> remaining(rule.body.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  Plan plan;
  auto is_ready = [&](std::size_t i) {
    const auto in = inputs(rule.body[i]);
    return std::all_of(in.begin(), in.end(), [&](const std::string& v) { return bound.count(v); });
  };
  while (!remaining.empty()) {
    auto pick = std::find_if(remaining.begin(), remaining.end(), is_ready);
    if (pick == remaining.end())
      pick = std::find_if(remaining.begin(), remaining.end(), [&](std::size_t i) {
        return std::holds_alternative<ClassAtom>(rule.body[i]);
      });
    if (pick == remaining.end())
      pick = std::find_if(remaining.begin(), remaining.end(), [&](std::size_t i) {
        return std::holds_alternative<PropertyAtom>(rule.body[i]);
      });
    if (pick == remaining.end()) {
      for (const auto& v : inputs(rule.body[remaining.front()]))
        if (!bound.count(v)) throw ValidationError("rule " + rule.name + ": unbound ?" + v);
      throw ValidationError("rule " + rule.name + ": cannot order body");
    }
    for (const auto& v : outputs(rule.body[*pick])) bound.insert(v);
    plan.order.push_back(*pick);
    remaining.erase(pick);
  }
  if (const Var* v = std::get_if<Var>(&rule.head.time); v && !bound.count(v->name))
    throw ValidationError("rule " + rule.name + ": unbound ?" + v->name);
  if (rule.head.result_id.empty()) throw ValidationError("rule " + rule.name + " has no head");

  rules_.push_back(std::move(rule));
  plans_.push_back(std::move(plan));
  return rules_.size() - 1;
}

std::vector<Derivation> RuleEngine::evaluate(const StoreSnapshot& snapshot, ExecPolicy policy) const {
  std::vector<Derivation> out;
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const Rule& rule = rules_[r];
    Matcher root(rule, plans_[r].order, snapshot, debug_);
    Found found;

    const bool parallel = policy == ExecPolicy::parallel && debug_ == nullptr &&
                          root.starts_with_class_generator();
    if (!parallel) {
      Binding b;
      root.run_from(0, b);
      found = std::move(root.found());
    } else {
      const auto candidates = root.leading_candidates();
      const auto& first = std::get<ClassAtom>(rule.body[plans_[r].order.front()]);
      const long n = static_cast<long>(candidates.size());
#pragma omp parallel
      {
        Matcher local(rule, plans_[r].order, snapshot, nullptr);
#pragma omp for schedule(dynamic, 1) nowait
        for (long i = 0; i < n; ++i) {
          Binding b{{first.subject.name, Value{candidates[static_cast<std::size_t>(i)]}}};
          local.run_from(1, b);
        }
#pragma omp critical(ontonet_rule_merge)
        merge_into(found, std::move(local.found()));
      }
    }

    for (auto& [key, binding] : found) {
      out.push_back(Derivation{rule.name, std::get<1>(key), std::get<2>(key), std::get<0>(key),
                               rule.head.concepts, std::move(binding)});
    }
  }
  return out;
}

}  // namespace ontonet::rules
