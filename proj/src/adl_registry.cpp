#include <array>
#include <fstream>
#include <sstream>

#include "ontonet/adl.hpp"
#include "ontonet/error.hpp"

namespace ontonet::adl {

namespace {

net::Pattern is_in(std::string where) { return {"PERSON", "isIn", std::move(where)}; }
net::Pattern near(std::string what) { return {"PERSON", "isNearTo", std::move(what)}; }

const std::array<std::string_view, kActivityCount> kSources{
    R"(A1 := DOOR:+ <= ((ITEM:- + d1) & (ITEM:- + d1)) <= (ITEM:+ & ITEM:+) <= DOOR:-
where
  d1 = 10 s
)",
    R"(A2 := (ITEM:- + d2) <= ITEM:+
where
  d2 = 30 s
)",
    R"(A3 := DOOR:+ <= FLOW:+ <= (conv(PLANT1:+, h3, d3, WATERED) & conv(PLANT2:+, h4, d4, WATERED)) <= DOOR:-
where
  h3 = 3
  d3 = 20 s
  h4 = 3
  d4 = 20 s
)",
    R"(A4 := (PHONE:+ + d5) <= PHONE:-
where
  d5 = 10 s
)",
    R"(A5 := ((ITEM:- + d6) <= ITEM:+) & ((ITEM:- + d7) <= ITEM:+)
where
  d6 = 10 s
  d7 = 10 s
)",
    R"(A6 := DOOR:+ <= (((ITEM:- + d8) <= ITEM:+) & ((ITEM:- + d8) <= ITEM:+)) <= DOOR:-
where
  d8 = 20 s
)",
    R"(A7 := DOOR:+ <= (conv(CLEANLIVING:+, h9, d9, CLEANED) & conv(CLEANKITCHEN:+, h10, d10, CLEANED)) <= DOOR:-
where
  h9 = 3
  d9 = 30 s
  h10 = 3
  d10 = 20 s
)",
    R"(A8 := (DOOR:+ + d11) <= CHOOSE:+ <= LEAVE:+
where
  d11 = 5 s
)",
};

std::vector<ActivityBinding> make_registry() {
  std::vector<ActivityBinding> r;
  r.push_back({1, "fill medication dispenser", "MEDICINE",
               {{"MEDICINE", "DOOR"}, {"MEDICINE", "ITEM"}}, {is_in("KITCHEN")}, {}, true});
  r.push_back({2, "watch DVD", "TV", {{"TV", "ITEM"}}, {is_in("LIVINGROOM")}, {}, true});
  r.push_back({3, "water plants", "WATERING",
               {{"WATERING", "DOOR"}, {"WATERING", "MOTION"}, {"WATERING", "FLOW"}},
               {near("CABINET1"), near("SINK"), is_in("LIVINGROOM")},
               {{"PLANT1", "WATERED"}, {"PLANT2", "WATERED"}},
               true});
  r.push_back({4, "answer the phone", "PHONE", {{"PHONE"}}, {near("TABLE2")}, {}, true});
  r.push_back({5, "write a card", "WRITING", {{"WRITING", "ITEM"}}, {near("TABLE1")}, {}, true});
  r.push_back({6, "prepare a meal", "COOKING", {{"COOKING", "DOOR"}, {"COOKING", "ITEM"}},
               {is_in("KITCHEN")}, {}, true});
  r.push_back({7, "clean", "CLEANING", {{"CLEANING", "DOOR"}, {"CLEANING", "MOTION"}},
               {is_in("LIVINGROOM"), is_in("KITCHEN")},
               {{"CLEANLIVING", "CLEANED"}, {"CLEANKITCHEN", "CLEANED"}},
               true});
  r.push_back({8, "select an outfit", "OUTFIT", {{"OUTFIT", "DOOR"}, {"OUTFIT", "MOTION"}},
               {is_in("CORRIDOR"), near("SOFA"), near("TABLE1")}, {}, true});
  return r;
}

}  // namespace

std::string activity_node(int activity) { return "T" + std::to_string(activity); }

std::span<const ActivityBinding> registry() {
  static const std::vector<ActivityBinding> bindings = make_registry();
  return bindings;
}

const ActivityBinding& binding(int activity) {
  if (activity < 1 || activity > kActivityCount) throw DomainError("no activity " + std::to_string(activity));
  return registry()[static_cast<std::size_t>(activity - 1)];
}

std::string_view model_source(int activity) {
  if (activity < 1 || activity > kActivityCount) throw DomainError("no activity " + std::to_string(activity));
  return kSources[static_cast<std::size_t>(activity - 1)];
}

ParamSet parse_params(std::string_view text, std::string_view source) {
  ParamSet out;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(lineno);
    if ((w.size() != 3 && w.size() != 4) || w[1] != "=") throw ConfigError(where, "expected NAME = NUMBER [unit]");
    dsl::Param p{w[0], 0, dsl::Unit::count};
    try {
      std::size_t used = 0;
      p.amount = std::stoll(w[2], &used);
      if (used != w[2].size() || p.amount < 0) throw std::invalid_argument("bad");
    } catch (const std::exception&) {
      throw ConfigError(where, "not a non-negative integer: " + w[2]);
    }
    if (w.size() == 4) {
      if (w[3] == "ms") p.unit = dsl::Unit::ms;
      else if (w[3] == "s") p.unit = dsl::Unit::s;
      else if (w[3] == "min") p.unit = dsl::Unit::min;
      else throw ConfigError(where, "unknown unit " + w[3]);
    }
    if (!out.emplace(p.name, p).second) throw ConfigError(where, "parameter " + p.name + " given twice");
  }
  return out;
}

ParamSet load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot read parameter file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_params(text.str(), path.string());
}

std::string format_params(const ParamSet& params) {
  std::string out;
  for (const auto& [name, p] : params) {
    out += name + " = " + std::to_string(p.amount);
    switch (p.unit) {
      case dsl::Unit::count: break;
      case dsl::Unit::ms: out += " ms"; break;
      case dsl::Unit::s: out += " s"; break;
      case dsl::Unit::min: out += " min"; break;
    }
    out += "\n";
  }
  return out;
}

dsl::ModelAst apply_params(dsl::ModelAst ast, const ParamSet& params) {
  for (auto& p : ast.params) {
    auto it = params.find(p.name);
    if (it == params.end()) continue;
    const bool was_count = p.unit == dsl::Unit::count;
    const bool is_count = it->second.unit == dsl::Unit::count;
    if (was_count != is_count)
      throw ConfigError("params." + p.name, is_count ? "needs a time unit" : "must be a plain count");
    p = it->second;
  }
  return ast;
}

ParamSet default_params() {
  ParamSet out;
  for (int a = 1; a <= kActivityCount; ++a)
    for (const auto& p : dsl::parse_model(model_source(a)).params) out.emplace(p.name, p);
  return out;
}

}  // namespace ontonet::adl
