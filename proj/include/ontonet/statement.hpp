#pragma once

#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ontonet {

/// Timestamps are natural numbers of milliseconds.
using TimeMs = std::int64_t;
using Duration = std::chrono::milliseconds;

enum class StatementKind { raw, aggregated };

/// An immutable (state, time) pair with an identity.
class Statement {
 public:
  /// Throws DomainError when `id` is empty or `time` is negative.
  Statement(std::string id, bool state, TimeMs time, StatementKind kind = StatementKind::raw);

  const std::string& id() const noexcept { return id_; }
  bool state() const noexcept { return state_; }
  TimeMs time() const noexcept { return time_; }
  StatementKind kind() const noexcept { return kind_; }
  bool aggregated() const noexcept { return kind_ == StatementKind::aggregated; }

  friend bool operator==(const Statement&, const Statement&) = default;

 private:
  std::string id_;
  bool state_;
  TimeMs time_;
  StatementKind kind_;
};

/// "D7(+@120)" style rendering, `~` prefix for aggregated statements.
std::string to_string(const Statement& s);

/// Time ascending, ties by id.
struct StatementOrder {
  bool operator()(const Statement& a, const Statement& b) const noexcept;
};

/// Statements kept sorted by StatementOrder; ids are unique.
class StatementSet {
 public:
  StatementSet() = default;
  StatementSet(std::initializer_list<Statement> members);
  explicit StatementSet(std::vector<Statement> members);

  /// Throws DomainError if a member with the same id exists.
  void insert(Statement s);

  std::span<const Statement> members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  const Statement* find(std::string_view id) const noexcept;
  bool contains(std::string_view id) const noexcept { return find(id) != nullptr; }

  friend bool operator==(const StatementSet&, const StatementSet&) = default;

 private:
  std::vector<Statement> members_;
};

}  // namespace ontonet
