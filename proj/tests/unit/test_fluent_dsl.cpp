#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "criteria.hpp"
#include "generators.hpp"
#include "ontonet/fluent_dsl.hpp"

using namespace ontonet;
using namespace ontonet::dsl;

namespace {

int count_kind(const Node& n, NodeKind k) {
  int c = n.kind == k ? 1 : 0;
  for (const auto& child : n.children) c += count_kind(child, k);
  return c;
}

// Leaves a precedence reads on its left (the latest ones) or right (the earliest).
int boundary_leaves(const Node& n, bool latest) {
  switch (n.kind) {
    case NodeKind::atom:
    case NodeKind::conv:
    case NodeKind::shift: return 1;
    case NodeKind::mask: return boundary_leaves(n.children[0], latest);
    case NodeKind::precedence: return boundary_leaves(n.children[latest ? 1 : 0], latest);
    default: return boundary_leaves(n.children[0], latest) + boundary_leaves(n.children[1], latest);
  }
}

template <class T>
int count_atoms(const rules::Rule& r) {
  int c = 0;
  for (const auto& a : r.body) c += std::holds_alternative<T>(a) ? 1 : 0;
  return c;
}

/// Ends whose times compete for the head time.
int head_ends(const Node& n) {
  switch (n.kind) {
    case NodeKind::mask: return head_ends(n.children[0]);
    case NodeKind::precedence: return head_ends(n.children[1]);
    default: return boundary_leaves(n, true);
  }
}

/// Precedence edges: latest leaves on the left against earliest on the right.
int precedence_edges(const Node& n) {
  int c = 0;
  for (const auto& child : n.children) c += precedence_edges(child);
  if (n.kind == NodeKind::precedence)
    c += boundary_leaves(n.children[0], true) * boundary_leaves(n.children[1], false);
  return c;
}

ModelError::Kind error_kind(std::string_view text, const ConceptGraph* g = nullptr) {
  try {
    parse_model(text, g);
  } catch (const ModelError& e) {
    return e.kind();
  }
  FAIL("expected a model error for: " << text);
  return ModelError::Kind::syntax;
}

}  // namespace

TEST_CASE("delay model parses to shift then precedence") {
  const auto ast = parse_model("A2 := (ITEM:- + d2) <= ITEM:+\nwhere\n  d2 = 30 s\n");
  CHECK(ast.name == "A2");
  REQUIRE(ast.root.kind == NodeKind::precedence);
  const Node& lhs = ast.root.children[0];
  CHECK(lhs.kind == NodeKind::shift);
  CHECK(lhs.param == "d2");
  CHECK(lhs.children[0].concept_name == "ITEM");
  CHECK_FALSE(lhs.children[0].state);
  CHECK(ast.root.children[1].concept_name == "ITEM");
  CHECK(ast.root.children[1].state);
  REQUIRE(ast.params.size() == 1);
  CHECK(ast.params[0].resolved() == 30'000);
}

TEST_CASE("watering model has two convolutions") {
  const auto ast = parse_model(
      "A3 := DOOR:+ <= FLOW:+ <= (conv(PLANT1:+, h3, d3) & conv(PLANT2:+, h4, d4)) <= DOOR:-\n"
      "where\n  h3 = 3\n  d3 = 20 s\n  h4 = 3\n  d4 = 20 s\n");
  CHECK(count_kind(ast.root, NodeKind::conv) == 2);
  CHECK(count_kind(ast.root, NodeKind::precedence) == 3);
}

TEST_CASE("precedence binds loosest, conjunction tightest") {
  const auto ast = parse_model("M := A:+ & B:+ | C:- <= D:+\n");
  REQUIRE(ast.root.kind == NodeKind::precedence);
  REQUIRE(ast.root.children[0].kind == NodeKind::disj);
  CHECK(ast.root.children[0].children[0].kind == NodeKind::conj);
}

TEST_CASE("errors carry kind and position") {
  try {
    parse_model("A := X:+ <=");
    FAIL("expected a syntax error");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ModelError::Kind::syntax);
    CHECK(e.line() == 1);
    CHECK(e.column() == 10);  // the operator missing its operand
  }
  CHECK(error_kind("A := (X:+ + d9) <= Y:+\n") == ModelError::Kind::unknown_parameter);
  CHECK(error_kind("A := (X:+ + d) <= Y:+\nwhere\n  d = 3\n") == ModelError::Kind::bad_parameter);
  CHECK(error_kind("A := conv(X:+, h, d)\nwhere\n  h = 2 s\n  d = 3 s\n") == ModelError::Kind::bad_parameter);
  ConceptGraph g;
  g.add_concept("DOOR");
  CHECK(error_kind("A := DOOR:+ <= SOFA:+\n", &g) == ModelError::Kind::unknown_class);
  CHECK_NOTHROW(parse_model("A := DOOR:+ <= conv(DOOR:+, h, d, OPENED)\nwhere\n  h = 1\n  d = 1 s\n", &g));
}

TEST_CASE("compile emits one compare per precedence edge, one per competing end and one assign per shift") {
  for (int a = 1; a <= adl::kActivityCount; ++a) {
    const auto ast = parse_model(adl::model_source(a));
    const auto compiled = compile_model(ast);
    REQUIRE(compiled.rules.size() == 1);
    const auto& rule = compiled.rules.front();
    CAPTURE(a);
    CHECK(count_atoms<rules::Assign>(rule) == count_kind(ast.root, NodeKind::shift));
    int distinct = 0;
    for (const auto& atom : rule.body)
      if (const auto* c = std::get_if<rules::Compare>(&atom); c && c->op == rules::CompareOp::ne) ++distinct;
    CHECK(count_atoms<rules::Compare>(rule) - distinct == precedence_edges(ast.root) + head_ends(ast.root) - 1);
    CHECK(compiled.prepasses.size() == static_cast<std::size_t>(count_kind(ast.root, NodeKind::conv)));
  }
}

TEST_CASE("compiled heads and prepasses") {
  const auto a2 = compile_model(parse_model(adl::model_source(2)));
  CHECK(a2.prepasses.empty());
  CHECK(a2.rules[0].head.result_id == "A2");
  // head time is the returned item's time
  const auto& head_var = std::get<rules::Var>(a2.rules[0].head.time).name;
  bool from_return = false;
  for (const auto& atom : a2.rules[0].body)
    if (const auto* p = std::get_if<rules::PropertyAtom>(&atom); p && p->property == "hasTime") {
      if (std::get<rules::Var>(p->object).name != head_var) continue;
      for (const auto& other : a2.rules[0].body)
        if (const auto* q = std::get_if<rules::PropertyAtom>(&other);
            q && q->property == "hasState" && q->subject == p->subject)
          from_return = std::get<Value>(q->object) == Value{true};
    }
  CHECK(from_return);

  const auto a3 = compile_model(parse_model(adl::model_source(3)));
  REQUIRE(a3.prepasses.size() == 2);
  CHECK(a3.prepasses[0].source_concept == "PLANT1");
  CHECK(a3.prepasses[0].derived_concept == "WATERED");
  CHECK(a3.prepasses[0].min_count == 3);
  CHECK(a3.prepasses[0].min_span == std::chrono::seconds(20));
  CHECK(a3.prepasses[1].source_concept == "PLANT2");
  CHECK(a3.prepasses[0].instance_id != a3.prepasses[1].instance_id);
}

TEST_CASE("a single leaf compiles to a copy of that statement") {
  const auto c = compile_model(parse_model("S := DOOR:-\n"));
  REQUIRE(c.rules.size() == 1);
  ContextStore t([] {
    ConceptGraph g;
    g.add_concept("DOOR");
    g.add_concept("ACTIVITY");
    return g;
  }());
  t.assert_statement(Statement("D7", true, 100), {"DOOR"}, AssertMode::append);
  t.assert_statement(Statement("D7", false, 400), {"DOOR"}, AssertMode::append);
  rules::RuleEngine e;
  e.register_rule(c.rules[0]);
  const auto got = e.evaluate(t.snapshot());
  REQUIRE(got.size() == 1);
  CHECK(got[0].time == 400);
}

TEST_CASE("disjunction compiles to one rule per branch") {
  const auto c = compile_model(parse_model("M := DOOR:+ | FLOW:+\n"));
  CHECK(c.rules.size() == 2);
}

TEST_CASE("an asymmetric conjunction takes its head time from whichever side ends last") {
  const auto c = compile_model(parse_model("M := DOOR:+ & FLOW:+\n"));
  REQUIRE(c.rules.size() == 2);
  const auto run = [&](TimeMs door, TimeMs flow) {
    ConceptGraph g;
    for (auto name : {"DOOR", "FLOW", "ACTIVITY"}) g.add_concept(name);
    ContextStore t(g);
    t.assert_statement(Statement("D7", true, door), {"DOOR"}, AssertMode::append);
    t.assert_statement(Statement("F2", true, flow), {"FLOW"}, AssertMode::append);
    rules::RuleEngine e;
    for (const auto& r : c.rules) e.register_rule(r);
    return e.evaluate(t.snapshot());
  };
  for (auto [door, flow] : {std::pair<TimeMs, TimeMs>{100, 400}, {400, 100}, {250, 250}}) {
    CAPTURE(door);
    CAPTURE(flow);
    const auto got = run(door, flow);
    REQUIRE(got.size() == 1);
    CHECK(got[0].time == std::max(door, flow));
  }

  const auto twin = compile_model(parse_model(adl::model_source(5)));
  CHECK(twin.rules.size() == 1);
}

TEST_CASE("unsupported constructs") {
  CHECK_THROWS_AS(compile_model(parse_model("M := (DOOR:+)^-\n")), ModelError);
  CHECK_NOTHROW(compile_model(parse_model("M := (DOOR:+)^+\n")));
}

TEST_CASE("canonical text round trips") {
  for (int a = 1; a <= adl::kActivityCount; ++a) {
    const auto ast = parse_model(adl::model_source(a));
    CHECK(parse_model(format_model(ast)) == ast);
    CHECK(format_model(parse_model(format_model(ast))) == format_model(ast));
  }
  gen::Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    const auto ast = gen::AstBuilder(rng).build(static_cast<int>(rng.between(1, 6)));
    const auto text = format_model(ast);
    CAPTURE(text);
    ModelAst back;
    REQUIRE_NOTHROW(back = parse_model(text));
    CHECK(back == ast);
  }
  CHECK(criteria::dsl_round_trip().status == criteria::Status::pass);
}

TEST_CASE("comments and whitespace are ignored") {
  const auto a = parse_model("# header\nA2 := (ITEM:- + d2)   <=\n   ITEM:+  # trailing\nwhere\n  d2 = 30 s\n");
  CHECK(a == parse_model(adl::model_source(2)));
}

TEST_CASE("descriptions mention parameter values") {
  const auto text = describe_model(parse_model(adl::model_source(2)));
  CHECK(text.find("d2 (30 s)") != std::string::npos);
  const auto twin = describe_model(parse_model(adl::model_source(5)));
  CHECK(twin ==
        "A5: An object was taken, then after d6 (10 s), an object was put back; in addition, an object was taken, "
        "then after d7 (10 s), an object was put back.");
  CHECK(describe_model(parse_model("M := DOOR:+ & FLOW:+\n")) == "M: The door was opened and water was used.");
}
