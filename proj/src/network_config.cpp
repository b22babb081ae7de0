#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ontonet/error.hpp"
#include "ontonet/network.hpp"

namespace ontonet::net {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Entry {
  std::string name;
  std::map<std::string, std::string> fields;
  std::string where;  // file:line
};

const std::set<std::string>& allowed_keys(const std::string& section) {
  static const std::map<std::string, std::set<std::string>> keys{
      {"nodes", {"represents", "mode"}},
      {"procedures", {"implements", "requires"}},
      {"events", {"observes"}},
      {"conditions", {"checks", "in", "hasTarget", "rate"}},
  };
  return keys.at(section);
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(where, "expected true or false, got " + text);
}

const std::string& require(const Entry& e, const std::string& section, const std::string& key) {
  auto it = e.fields.find(key);
  if (it == e.fields.end() || it->second.empty())
    throw ConfigError(section + "." + e.name + "." + key, "missing required field (" + e.where + ")");
  return it->second;
}

}  // namespace

NetworkModel parse_network(std::string_view text, const std::filesystem::path& base_dir,
                           std::string_view source) {
  std::map<std::string, std::vector<Entry>> sections;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int lineno = 1; std::getline(in, raw); ++lineno) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (tokens.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(lineno);

    if (tokens[0].front() == '[') {
      if (tokens.size() != 1 || tokens[0].back() != ']') throw ConfigError(where, "malformed section header");
      section = tokens[0].substr(1, tokens[0].size() - 2);
      if (section != "nodes" && section != "procedures" && section != "events" && section != "conditions")
        throw ConfigError(where, "unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) throw ConfigError(where, "entry outside of any section");

    Entry e{tokens[0], {}, where};
    if (e.name.find('=') != std::string::npos) throw ConfigError(where, "entry must start with a name");
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto eq = tokens[i].find('=');
      if (eq == std::string::npos) throw ConfigError(where, "expected key=value, got " + tokens[i]);
      std::string key = tokens[i].substr(0, eq);
      if (!allowed_keys(section).count(key))
        throw ConfigError(section + "." + e.name + "." + key, "unknown field (" + where + ")");
      if (!e.fields.emplace(key, tokens[i].substr(eq + 1)).second)
        throw ConfigError(section + "." + e.name + "." + key, "field given twice (" + where + ")");
    }
    sections[section].push_back(std::move(e));
  }

  NetworkModel model;
  model.base_dir = base_dir;

  std::set<std::string> node_names{std::string(kUpperNode)};
  for (const auto& e : sections["nodes"]) {
    if (!node_names.insert(e.name).second) throw ConfigError("nodes." + e.name, "duplicate node name");
    NodeDecl d{e.name, require(e, "nodes", "represents"), AssertMode::overwrite};
    if (auto m = e.fields.find("mode"); m != e.fields.end()) {
      if (m->second == "append") d.mode = AssertMode::append;
      else if (m->second != "overwrite")
        throw ConfigError("nodes." + e.name + ".mode", "expected overwrite or append, got " + m->second);
    }
    model.nodes.push_back(std::move(d));
  }

  std::set<std::string> condition_names;
  for (const auto& e : sections["conditions"]) {
    const std::string path = "conditions." + e.name;
    if (!condition_names.insert(e.name).second) throw ConfigError(path, "duplicate condition name");
    ConditionDecl d;
    d.name = e.name;
    const std::string& checks = require(e, "conditions", "checks");
    if (checks.find('.') != std::string::npos) {
      auto parts = split(checks, '.');
      if (parts.size() != 3) throw ConfigError(path + ".checks", "pattern must be CONCEPT.property.TARGET");
      d.checks = Pattern{parts[0], parts[1], parts[2]};
    } else {
      d.checks = checks;
    }
    d.node = require(e, "conditions", "in");
    if (!node_names.count(d.node)) throw ConfigError(path + ".in", "unknown node " + d.node);
    d.target = parse_bool(require(e, "conditions", "hasTarget"), path + ".hasTarget");
    if (auto r = e.fields.find("rate"); r != e.fields.end()) {
      try {
        std::size_t used = 0;
        d.rate_hz = std::stod(r->second, &used);
        if (used != r->second.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError(path + ".rate", "not a number: " + r->second);
      }
      if (!(d.rate_hz > 0)) throw ConfigError(path + ".rate", "rate must be positive");
    }
    model.conditions.push_back(std::move(d));
  }

  std::set<std::string> event_names;
  for (const auto& e : sections["events"]) {
    const std::string path = "events." + e.name;
    if (!event_names.insert(e.name).second) throw ConfigError(path, "duplicate event name");
    EventDecl d{e.name, split(require(e, "events", "observes"), ',')};
    if (d.observes.empty()) throw ConfigError(path + ".observes", "an event observes at least one condition");
    for (const auto& c : d.observes)
      if (!condition_names.count(c)) throw ConfigError(path + ".observes", "unknown condition " + c);
    model.events.push_back(std::move(d));
  }

  std::set<std::string> proc_names{std::string(kScheduler)};
  for (const auto& e : sections["procedures"]) {
    const std::string path = "procedures." + e.name;
    if (!proc_names.insert(e.name).second) throw ConfigError(path, "duplicate procedure name");
    auto it = e.fields.find("requires");
    if (it == e.fields.end() || split(it->second, ',').empty())
      throw ConfigError(path + ".requires", "a procedure requires at least one event");
    ProcDecl d{e.name, require(e, "procedures", "implements"), split(it->second, ',')};
    for (const auto& ev : d.required_events)
      if (!event_names.count(ev)) throw ConfigError(path + ".requires", "unknown event " + ev);
    model.procedures.push_back(std::move(d));
  }
  return model;
}

NetworkModel load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot read network config");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_network(text.str(), path.parent_path(), path.string());
}

}  // namespace ontonet::net
