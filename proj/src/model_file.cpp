#include "ontonet/model_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ontonet/error.hpp"

namespace ontonet {

namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string_view strip_comment(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

Restriction parse_restriction(const std::string& term, const std::string& where) {
  Restriction r;
  std::size_t pos = 0;
  if (term.rfind(">=", 0) == 0) {
    r.bound = Cardinality::at_least;
    pos = 2;
  } else if (term.rfind("<=", 0) == 0) {
    r.bound = Cardinality::at_most;
    pos = 2;
  } else if (term.rfind("=", 0) == 0) {
    r.bound = Cardinality::exactly;
    pos = 1;
  } else {
    throw ConfigError(where, "restriction must start with >=, <= or =: " + term);
  }
  const char* first = term.data() + pos;
  const char* last = term.data() + term.size();
  auto [end, ec] = std::from_chars(first, last, r.k);
  if (ec != std::errc{} || end == first) throw ConfigError(where, "missing cardinality in " + term);

  std::string rest(end, last);
  if (auto eq = rest.find('='); eq != std::string::npos) {
    r.property = rest.substr(0, eq);
    r.target_value = parse_value(rest.substr(eq + 1));
  } else if (auto dot = rest.find('.'); dot != std::string::npos) {
    r.property = rest.substr(0, dot);
    r.target_concept = rest.substr(dot + 1);
  } else {
    r.property = rest;
  }
  if (r.property.empty()) throw ConfigError(where, "restriction without property: " + term);
  return r;
}

}  // namespace

Value parse_value(std::string_view token) {
  if (token == "true") return true;
  if (token == "false") return false;
  std::int64_t n = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), n);
  if (ec == std::errc{} && end == token.data() + token.size() && !token.empty()) return n;
  return std::string(token);
}

std::vector<std::string> ModelSpec::sensor_ids() const {
  std::vector<std::string> out;
  for (const auto& ind : individuals)
    if (ind.sensor) out.push_back(ind.id);
  return out;
}

ModelSpec parse_model_spec(std::string_view text, std::string_view source) {
  ModelSpec spec;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int lineno = 1; std::getline(in, raw); ++lineno) {
    const auto words = split_words(strip_comment(raw));
    if (words.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(lineno);
    const std::string& kw = words[0];
    try {
      if (kw == "concept") {
        if (words.size() < 2) throw ConfigError(where, "concept needs at least one name");
        for (std::size_t i = 1; i < words.size(); ++i) spec.graph.add_concept(words[i]);
      } else if (kw == "subclass") {
        if (words.size() < 3) throw ConfigError(where, "subclass needs CHILD PARENT");
        for (std::size_t i = 2; i < words.size(); ++i) spec.graph.add_subclass(words[1], words[i]);
      } else if (kw == "disjoint") {
        if (words.size() != 3) throw ConfigError(where, "disjoint needs exactly two concepts");
        spec.graph.add_disjoint(words[1], words[2]);
      } else if (kw == "define") {
        if (words.size() < 4 || words[2] != "=")
          throw ConfigError(where, "define needs NAME = TERM [and TERM...]");
        DefinedClass dc{words[1], {}, {}};
        for (std::size_t i = 3; i < words.size(); ++i) {
          const std::string& term = words[i];
          const bool expect_term = (i - 3) % 2 == 0;
          if (!expect_term) {
            if (term != "and") throw ConfigError(where, "expected 'and' between terms, got " + term);
            continue;
          }
          if (term[0] == '>' || term[0] == '<' || term[0] == '=')
            dc.restrictions.push_back(parse_restriction(term, where));
          else
            dc.conjuncts.push_back(term);
        }
        if ((words.size() - 3) % 2 == 0) throw ConfigError(where, "dangling 'and'");
        spec.graph.add_defined_class(std::move(dc));
      } else if (kw == "individual" || kw == "sensor") {
        if (words.size() < 2) throw ConfigError(where, kw + " needs an id");
        ModelSpec::Individual ind{words[1], {}, {}, kw == "sensor"};
        for (std::size_t i = 2; i < words.size(); ++i) {
          if (auto eq = words[i].find('='); eq != std::string::npos) {
            ind.properties.emplace_back(words[i].substr(0, eq), parse_value(words[i].substr(eq + 1)));
          } else {
            if (!spec.graph.contains(words[i]))
              throw ConfigError(where, "unknown concept " + words[i]);
            ind.concepts.insert(words[i]);
          }
        }
        spec.individuals.push_back(std::move(ind));
      } else {
        throw ConfigError(where, "unknown keyword " + kw);
      }
    } catch (const DomainError& e) {
      throw ConfigError(where, e.what());
    }
  }
  return spec;
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot read model file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model_spec(text.str(), path.string());
}

ContextStore build_store(const ModelSpec& spec, std::string name) {
  ContextStore store(spec.graph, std::move(name));
  // Individuals first so that property targets resolve during classification.
  for (const auto& ind : spec.individuals) store.add_individual(ind.id, ind.concepts);
  for (const auto& ind : spec.individuals)
    for (const auto& [p, v] : ind.properties) store.add_property(ind.id, p, v);
  return store;
}

}  // namespace ontonet
