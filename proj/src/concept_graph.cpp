#include "ontonet/concept_graph.hpp"

#include <map>

#include "ontonet/error.hpp"

namespace ontonet {

std::string to_string(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* n = std::get_if<std::int64_t>(&v)) return std::to_string(*n);
  return std::get<std::string>(v);
}

void ConceptGraph::require(std::string_view concept_name) const {
  if (!contains(concept_name)) throw DomainError("unknown concept " + std::string(concept_name));
}

void ConceptGraph::add_concept(std::string name) {
  if (name.empty()) throw DomainError("concept name must not be empty");
  concepts_.insert(std::move(name));
}

void ConceptGraph::add_subclass(const std::string& child, const std::string& parent) {
  require(child);
  require(parent);
  if (child == parent || subsumes(child, parent))
    throw DomainError("subclass edge " + child + " -> " + parent + " would create a cycle");
  edges_.emplace(child, parent);
}

void ConceptGraph::add_disjoint(const std::string& a, const std::string& b) {
  require(a);
  require(b);
  if (a == b) throw DomainError("a concept cannot be disjoint with itself: " + a);
  disjoint_.insert(a < b ? std::pair{a, b} : std::pair{b, a});
}

void ConceptGraph::add_defined_class(DefinedClass dc) {
  require(dc.name);
  for (const auto& c : dc.conjuncts) require(c);
  for (const auto& r : dc.restrictions) {
    if (r.property.empty()) throw DomainError("restriction on " + dc.name + " has no property");
    if (r.target_concept) require(*r.target_concept);
  }
  defined_.push_back(std::move(dc));
}

bool ConceptGraph::contains(std::string_view concept_name) const {
  return concepts_.find(concept_name) != concepts_.end();
}

std::set<std::string> ConceptGraph::ancestors(const std::string& concept_name) const {
  std::set<std::string> out{concept_name};
  std::vector<std::string> frontier{concept_name};
  while (!frontier.empty()) {
    const std::string c = std::move(frontier.back());
    frontier.pop_back();
    for (auto it = edges_.lower_bound({c, std::string{}}); it != edges_.end() && it->first == c;
         ++it) {
      if (out.insert(it->second).second) frontier.push_back(it->second);
    }
  }
  return out;
}

bool ConceptGraph::subsumes(const std::string& parent, const std::string& child) const {
  return ancestors(child).count(parent) > 0;
}

std::size_t ConceptGraph::axiom_count() const noexcept {
  std::size_t n = concepts_.size() + edges_.size();
  for (const auto& dc : defined_) n += dc.axiom_size();
  return n;
}

}  // namespace ontonet
