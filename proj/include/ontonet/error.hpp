#pragma once

#include <stdexcept>
#include <string>

namespace ontonet {

/// Input outside an operation's domain (negative timestamps, unknown concepts, unbound references).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A store mutation would place one instance in two disjoint concepts.
class ConsistencyError : public std::runtime_error {
 public:
  ConsistencyError(std::string instance, std::string first, std::string second);

  const std::string& instance() const noexcept { return instance_; }
  const std::string& first() const noexcept { return first_; }
  const std::string& second() const noexcept { return second_; }

 private:
  std::string instance_;
  std::string first_;
  std::string second_;
};

/// A rule failed registration checks.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed declarative input (network config, model file, params file).
/// `where` is a dotted path or "file:line" locating the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message);

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace ontonet
