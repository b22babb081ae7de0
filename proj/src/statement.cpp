#include "ontonet/statement.hpp"

#include <algorithm>

#include "ontonet/error.hpp"

namespace ontonet {

ConsistencyError::ConsistencyError(std::string instance, std::string first, std::string second)
    : std::runtime_error("inconsistent: " + instance + " is both " + first + " and " + second +
                         ", which are disjoint"),
      instance_(std::move(instance)),
      first_(std::move(first)),
      second_(std::move(second)) {}

ConfigError::ConfigError(std::string where, const std::string& message)
    : std::runtime_error(where + ": " + message), where_(std::move(where)) {}

Statement::Statement(std::string id, bool state, TimeMs time, StatementKind kind)
    : id_(std::move(id)), state_(state), time_(time), kind_(kind) {
  if (id_.empty()) throw DomainError("statement id must not be empty");
  if (time_ < 0) throw DomainError("statement " + id_ + " has negative time");
}

std::string to_string(const Statement& s) {
  std::string out = s.aggregated() ? "~" : "";
  out += s.id();
  out += s.state() ? "(+@" : "(-@";
  out += std::to_string(s.time());
  out += ')';
  return out;
}

bool StatementOrder::operator()(const Statement& a, const Statement& b) const noexcept {
  if (a.time() != b.time()) return a.time() < b.time();
  return a.id() < b.id();
}

StatementSet::StatementSet(std::initializer_list<Statement> members) {
  for (const auto& s : members) insert(s);
}

StatementSet::StatementSet(std::vector<Statement> members) : members_(std::move(members)) {
  std::vector<std::string_view> ids;
  ids.reserve(members_.size());
  for (const auto& s : members_) ids.push_back(s.id());
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
    throw DomainError("duplicate statement id " + std::string(*dup));
  std::sort(members_.begin(), members_.end(), StatementOrder{});
}

void StatementSet::insert(Statement s) {
  if (contains(s.id())) throw DomainError("duplicate statement id " + s.id());
  auto pos = std::upper_bound(members_.begin(), members_.end(), s, StatementOrder{});
  members_.insert(pos, std::move(s));
}

const Statement* StatementSet::find(std::string_view id) const noexcept {
  auto it = std::find_if(members_.begin(), members_.end(),
                         [&](const Statement& s) { return s.id() == id; });
  return it == members_.end() ? nullptr : &*it;
}

}  // namespace ontonet
