#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontonet/concept_graph.hpp"
#include "ontonet/context_store.hpp"

namespace ontonet {

/// Declarative content of one store: taxonomy plus prior-knowledge instances.
///
///   concept A B C
///   subclass CHILD PARENT [PARENT...]
///   disjoint A B
///   define NAME = TERM [and TERM...]      TERM := CONCEPT | (>=|<=|=)K prop[.CONCEPT|=VALUE]
///   individual ID CONCEPT... [prop=target...]
///   sensor ID CONCEPT... [prop=target...]
struct ModelSpec {
  struct Individual {
    std::string id;
    std::set<std::string> concepts;
    std::vector<std::pair<std::string, Value>> properties;
    bool sensor = false;
  };

  ConceptGraph graph;
  std::vector<Individual> individuals;

  std::vector<std::string> sensor_ids() const;
};

/// Throws ConfigError naming `source:line` on malformed input.
ModelSpec parse_model_spec(std::string_view text, std::string_view source = "<model>");
ModelSpec load_model_spec(const std::filesystem::path& path);

/// A fresh store holding the graph and every declared individual.
ContextStore build_store(const ModelSpec& spec, std::string name);

/// `true`/`false` become Booleans, integers become numbers, anything else a symbol.
Value parse_value(std::string_view token);

}  // namespace ontonet
