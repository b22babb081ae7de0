// Acceptance checks, one function per criterion. Each returns a verdict plus
// a short detail line; the unit tests and the acceptance binary share them.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "ontonet/adl.hpp"
#include "ontonet/error.hpp"
#include "ontonet/metrics.hpp"
#include "ontonet/model_file.hpp"
#include "ontonet/network.hpp"
#include "ontonet/scenario.hpp"
#include "ontonet/synthetic.hpp"

namespace criteria {

namespace fs = std::filesystem;

inline const fs::path kScenario = ONTONET_SCENARIO_DIR;
inline const fs::path kTestData = ONTONET_TEST_DATA;

enum class Status { pass, fail, skip };

struct Verdict {
  Status status = Status::pass;
  std::string detail;
};

inline Verdict verdict(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string fixed(double v, int digits = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

// ── 1: operators against brute force ───────────────────────────────────

struct OperatorTally {
  std::map<std::string, int> cases;
  std::map<std::string, int> mismatches;
};

inline OperatorTally operator_suite(std::uint64_t seed, int per_operator) {
  using namespace ontonet;
  gen::Rng rng(seed);
  OperatorTally tally;
  auto check = [&](const std::string& op, bool ok) {
    ++tally.cases[op];
    if (!ok) ++tally.mismatches[op];
  };
  auto same = [](const Statement& s, oracle::Point p) { return s.state() == p.state && s.time() == p.time; };

  for (int i = 0; i < per_operator; ++i) {
    const Statement x = gen::statement(rng, "x"), y = gen::statement(rng, "y");
    const auto px = oracle::point(x), py = oracle::point(y);
    check("and", same(apply_logical(LogicalOp::conjunction, x, y), oracle::logical(true, px, py)));
    check("or", same(apply_logical(LogicalOp::disjunction, x, y), oracle::logical(false, px, py)));
    const auto pop = static_cast<PrecedenceOp>(rng.below(4));
    check("precedence", same(apply_precedence(pop, x, y), oracle::precedence(pop, px, py)));
    const bool phi = rng.coin();
    check("mask", same(apply_state_mask(x, phi), oracle::mask(px, phi)));

    const TimeMs delta = rng.between(-20, 20) * 1000;
    const auto want = oracle::shift(px, delta);
    try {
      const Statement got = shift_time(x, Duration(delta));
      check("shift", want && same(got, *want));
    } catch (const DomainError&) {
      check("shift", !want);
    }

    const auto chi = gen::statement_set(rng, rng.below(9));
    const std::vector<Statement> members(chi.begin(), chi.end());
    const Duration window = gen::duration(rng);
    std::set<std::string> got_ids;
    bool unchanged = true;
    for (const auto& s : convolve(chi, phi, window)) {
      got_ids.insert(s.id());
      unchanged = unchanged && chi.find(s.id()) && *chi.find(s.id()) == s;
    }
    check("convolve", unchanged && got_ids == oracle::convolve(members, phi, window.count()));

    const auto h = static_cast<unsigned>(rng.between(1, 5));
    check("convolve_at_least",
          same(convolve_at_least(chi, phi, window, h), oracle::convolve_at_least(members, phi, window.count(), h)));

    const auto set = gen::statement_set(rng, static_cast<std::size_t>(rng.between(1, 8)));
    const auto tree = gen::op_tree(rng, set, static_cast<int>(rng.between(1, 4)));
    const auto tree_want = oracle::evaluate(*tree, set);
    try {
      check("aggregate", tree_want && same(aggregate(*tree, set), *tree_want));
    } catch (const DomainError&) {
      check("aggregate", !tree_want);
    }
  }
  return tally;
}

inline Verdict operator_oracles() {
  Stopwatch clock;
  const auto tally = operator_suite(20260315, 1000);
  const double spent = clock.seconds();
  int cases = 0, bad = 0;
  std::string where;
  for (const auto& [op, n] : tally.cases) cases += n;
  for (const auto& [op, n] : tally.mismatches) {
    bad += n;
    where += " " + op + "=" + std::to_string(n);
  }
  return verdict(bad == 0 && spent < 5.0, std::to_string(cases) + " cases over " +
                                              std::to_string(tally.cases.size()) + " operators, " +
                                              std::to_string(bad) + " mismatches" + where + ", " +
                                              fixed(spent) + " s");
}

// ── 2: golden traces ───────────────────────────────────────────────────

inline Verdict golden_traces() {
  const auto sc = ontonet::scenario::load_scenario(kScenario);
  const auto cases = ontonet::adl::golden_cases();
  Stopwatch clock;
  const auto results = ontonet::adl::run_golden(kScenario, sc.models, cases);
  const double spent = clock.seconds();
  std::map<int, int> satisfying, perturbed;
  std::string failed;
  for (const auto& r : results) {
    (r.golden.expected ? satisfying : perturbed)[r.golden.activity]++;
    if (!r.passed) failed += " A" + std::to_string(r.golden.activity) + "/" + r.golden.name;
  }
  bool shape = true;
  for (int a = 1; a <= ontonet::adl::kActivityCount; ++a) shape = shape && satisfying[a] >= 1 && perturbed[a] >= 3;
  return verdict(failed.empty() && shape && spent < 2.0,
                 std::to_string(results.size()) + " traces, " + (shape ? "" : "missing cases, ") +
                     (failed.empty() ? "all as expected" : "failed:" + failed) + ", " + fixed(spent, 3) + " s");
}

// ── 3: scheduler ───────────────────────────────────────────────────────

struct FlagStep {
  ontonet::TimeMs time;
  std::string flag;
  bool state;
};

/// a and b together, a alone re-asserted, a re-occurring, c alone.
inline const std::vector<FlagStep> kFlagScript{
    {100, "a", true},  {200, "b", true},  {300, "a", true},  {400, "a", false}, {500, "a", true},
    {600, "c", true},  {700, "b", false}, {800, "a", false}, {900, "c", false}, {1000, "c", true},
    {1100, "a", true}, {1200, "b", true},
};
/// Where P has to run for kFlagScript.
inline const std::vector<ontonet::TimeMs> kFlagRuns{200, 500, 600, 1000, 1200};

struct FlagRun {
  std::vector<ontonet::TimeMs> runs;
  std::string log;
};

inline FlagRun run_flags(const std::vector<FlagStep>& script) {
  using namespace ontonet;
  const auto model = net::load_network(kTestData / "sched" / "network.cfg");
  auto network = net::RuntimeNetwork::bootstrap(model);
  FlagRun out;
  network.bind("count", [&](net::RuntimeNetwork& n, const std::string&) { out.runs.push_back(n.now()); });
  network.start(0);
  for (const auto& s : script) {
    network.advance_to(s.time);
    network.store("X").assert_statement(Statement(s.flag, s.state, s.time), {"FLAG"}, AssertMode::overwrite);
  }
  network.advance_to(2000);
  out.log = net::format_log(network.log());
  return out;
}

inline Verdict scheduler() {
  const auto first = run_flags(kFlagScript);
  bool identical = true;
  for (int i = 0; i < 10; ++i) identical = identical && run_flags(kFlagScript).log == first.log;
  std::string got;
  for (auto t : first.runs) got += " " + std::to_string(t);
  return verdict(first.runs == kFlagRuns && identical,
                 "P ran at" + got + (identical ? ", logs identical over 10 reruns" : ", logs differ between reruns"));
}

// ── 4: boundedness ─────────────────────────────────────────────────────

/// Random readings over every spatial sensor; motion sensors pulse so the
/// person is never in two places.
inline std::vector<ontonet::casas::TraceEvent> spatial_readings(std::uint64_t seed, std::size_t count,
                                                                 const std::vector<std::string>& sensors) {
  gen::Rng rng(seed);
  std::vector<ontonet::casas::TraceEvent> out;
  ontonet::TimeMs t = 1'000'000;
  // One ordered sweep first, then random picks.
  for (std::size_t i = 0; out.size() < count; ++i) {
    const std::string& id = i < sensors.size() ? sensors[i] : rng.pick(sensors);
    t += 1000;
    if (id.front() == 'M') {
      out.push_back({t, id, true, std::nullopt});
      t += 1000;
      out.push_back({t, id, false, std::nullopt});
    } else {
      out.push_back({t, id, rng.coin(), std::nullopt});
    }
  }
  return out;
}

struct SpatialGrowth {
  std::size_t events = 0;
  std::size_t sweep_end = 0;  // index of the first reading after every sensor was seen
  std::size_t floor = 0, ceiling = 0;
  std::size_t warnings = 0;
};

inline SpatialGrowth spatial_growth(std::size_t count) {
  using namespace ontonet;
  const auto sc = scenario::load_scenario(kScenario);
  const auto spec = load_model_spec(kScenario / "spatial.model");
  const auto readings = spatial_readings(7, count, spec.sensor_ids());
  auto network = net::RuntimeNetwork::bootstrap(sc.network);
  bool started = false;
  adl::ProcedureOptions procs;
  procs.replayer_active = &started;
  adl::bind_procedures(network, sc.models, procs);
  network.start(readings.front().time - 1000);

  SpatialGrowth g;
  g.events = readings.size();
  std::set<std::string> seen;
  g.floor = ~std::size_t{0};
  for (std::size_t i = 0; i < readings.size(); ++i) {
    network.advance_to(readings[i].time);
    if (!adl::replay_step(network, readings[i])) ++g.warnings;
    seen.insert(readings[i].sensor);
    if (seen.size() < spec.sensor_ids().size()) continue;
    if (g.sweep_end == 0) g.sweep_end = i + 1;
    const std::size_t n = network.store(adl::kSpatialNode).axiom_count();
    g.floor = std::min(g.floor, n);
    g.ceiling = std::max(g.ceiling, n);
  }
  return g;
}

struct ActivityFloors {
  int recognitions = 0;
  int off_floor = 0;
  std::string first_miss;
};

/// Axiom count of each activity store right after its recognition, checked
/// against a fresh store plus the activity and sync statements.
inline ActivityFloors activity_floors(std::span<const ontonet::casas::Trace> traces) {
  using namespace ontonet;
  const auto sc = scenario::load_scenario(kScenario);
  std::map<int, std::size_t> floor;
  for (int a = 1; a <= adl::kActivityCount; ++a) {
    const auto spec = load_model_spec(kScenario / ("activity" + std::to_string(a) + ".model"));
    // {ACTIVITY}, hasState, hasTime plus {SYNC}, hasState, hasTime
    floor[a] = build_store(spec, "fresh").axiom_count() + 3 + 3;
  }
  ActivityFloors out;
  for (const auto& trace : traces) {
    auto network = net::RuntimeNetwork::bootstrap(sc.network);
    bool started = false;
    adl::ProcedureOptions procs;
    procs.replayer_active = &started;
    procs.on_recognition = [&](const adl::RecognitionRecord& r) {
      ++out.recognitions;
      const auto& store = network.store(adl::activity_node(r.activity));
      if (store.axiom_count() != floor[r.activity] || store.recount_axioms() != floor[r.activity]) {
        if (out.off_floor++ == 0)
          out.first_miss = trace.participant + " A" + std::to_string(r.activity) + ": " +
                           std::to_string(store.axiom_count()) + " vs " + std::to_string(floor[r.activity]);
      }
    };
    adl::bind_procedures(network, sc.models, procs);
    network.start(trace.events.front().time - 1000);
    for (const auto& ev : trace.events) {
      network.advance_to(ev.time);
      adl::replay_step(network, ev);
    }
    network.advance_to(trace.events.back().time + 60'000);
  }
  return out;
}

inline std::vector<ontonet::casas::Trace> synthetic_study(std::uint64_t seed = 7) {
  ontonet::synthetic::Options o;
  o.seed = seed;
  return ontonet::synthetic::generate(o);
}

inline Verdict boundedness() {
  const auto g = spatial_growth(10'000);
  const auto traces = synthetic_study();
  const auto f = activity_floors(traces);
  const bool spatial_ok = g.events >= 10'000 && g.floor == g.ceiling;
  const bool activity_ok = f.recognitions > 0 && f.off_floor == 0;
  return verdict(spatial_ok && activity_ok,
                 "L: " + std::to_string(g.events) + " readings, axioms " + std::to_string(g.floor) + ".." +
                     std::to_string(g.ceiling) + " after the first sweep (" + std::to_string(g.sweep_end) +
                     " readings); T_a: " + std::to_string(f.recognitions) + " recognitions, " +
                     std::to_string(f.off_floor) + " off the post-clear floor" +
                     (f.first_miss.empty() ? "" : " (" + f.first_miss + ")"));
}

// ── 5: replay speed ────────────────────────────────────────────────────

inline Verdict replay_speed() {
  using namespace ontonet;
  const auto sc = scenario::load_scenario(kScenario);
  const auto traces = synthetic_study();
  scenario::RunOptions slow, fast;
  slow.speed = 1;
  fast.speed = 4;
  const auto a = scenario::run_sessions(sc, traces, slow);
  const auto b = scenario::run_sessions(sc, traces, fast);
  std::size_t total = 0;
  bool same = a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) {
    same = a[i].recognitions == b[i].recognitions && a[i].log == b[i].log;
    total += a[i].recognitions.size();
  }
  return verdict(same && total > 0, std::to_string(total) + " recognitions over " + std::to_string(traces.size()) +
                                        " sessions, " + (same ? "identical" : "different") + " at speeds 1 and 4");
}

// ── 6: recorded dataset ────────────────────────────────────────────────

inline Verdict dataset_replay() {
  using namespace ontonet;
  const char* dir = std::getenv("ONTONET_CASAS_DIR");
  if (dir == nullptr || *dir == '\0') return {Status::skip, "ONTONET_CASAS_DIR not set"};
  const auto sc = scenario::load_scenario(kScenario);
  const auto traces = casas::load_dataset(dir, casas::Vocabulary::defaults(), sc.sensors);
  const auto sessions = scenario::run_sessions(sc, traces);
  std::vector<metrics::LabelledTrace> truth;
  std::vector<adl::RecognitionRecord> recs;
  for (const auto& t : traces) truth.push_back({t.participant, t.truth});
  for (const auto& s : sessions) recs.insert(recs.end(), s.recognitions.begin(), s.recognitions.end());
  const auto score = metrics::score(truth, recs);
  const auto rates = score.rates();
  bool ok = !score.sessions.empty();
  std::string diag;
  for (std::size_t c = 0; c < metrics::kClasses; ++c) {
    double column = 0;
    for (std::size_t r = 0; r <= metrics::kClasses; ++r) column += rates[r][c];
    ok = ok && std::abs(column - 1.0) < 1e-9 && rates[c][c] >= 0.5;
    diag += " " + fixed(rates[c][c]);
  }
  return verdict(ok, std::to_string(traces.size()) + " traces, diagonal" + diag);
}

// ── 7: DSL round trip ──────────────────────────────────────────────────

inline Verdict dsl_round_trip() {
  using namespace ontonet;
  int files = 0, fuzz = 0, bad = 0;
  std::string first_bad;
  for (const auto& entry : fs::directory_iterator(kScenario / "models")) {
    if (entry.path().extension() != ".fluent") continue;
    std::ifstream in(entry.path());
    std::stringstream text;
    text << in.rdbuf();
    ++files;
    const auto ast = dsl::parse_model(text.str());
    if (dsl::parse_model(dsl::format_model(ast)) != ast) {
      ++bad;
      if (first_bad.empty()) first_bad = entry.path().filename().string();
    }
  }
  gen::Rng rng(4242);
  for (; fuzz < 200; ++fuzz) {
    const auto ast = gen::AstBuilder(rng).build(static_cast<int>(rng.between(1, 6)));
    const std::string text = dsl::format_model(ast);
    bool ok = false;
    try {
      ok = dsl::parse_model(text) == ast;
    } catch (const dsl::ModelError&) {
    }
    if (!ok) {
      ++bad;
      if (first_bad.empty()) first_bad = text;
    }
  }
  return verdict(files == 8 && bad == 0, std::to_string(files) + " shipped models, " + std::to_string(fuzz) +
                                             " generated, " + std::to_string(bad) + " mismatches" +
                                             (first_bad.empty() ? "" : ": " + first_bad));
}

// ── 8: rule engine against naive matching ──────────────────────────────

struct MatcherTally {
  int snapshots = 0;
  int with_matches = 0;
  int mismatches = 0;
  std::string first_bad;
};

inline MatcherTally matcher_suite(std::uint64_t seed, int per_rule) {
  using namespace ontonet;
  const auto sc = scenario::load_scenario(kScenario);
  gen::Rng rng(seed);
  MatcherTally tally;
  for (const auto& model : sc.models) {
    const auto spec = load_model_spec(kScenario / ("activity" + std::to_string(model.index) + ".model"));
    for (const auto& rule : model.compiled.rules) {
      rules::RuleEngine engine;
      engine.register_rule(rule);
      for (int i = 0; i < per_rule; ++i) {
        auto store = build_store(spec, "T");
        gen::fill_store(rng, store, rule);
        const auto snap = store.snapshot();
        const auto want = oracle::naive_match(rule, snap);
        const auto serial = engine.evaluate(snap, rules::ExecPolicy::serial);
        const auto parallel = engine.evaluate(snap, rules::ExecPolicy::parallel);
        ++tally.snapshots;
        if (!want.empty()) ++tally.with_matches;
        if (serial != want || parallel != want) {
          if (tally.mismatches++ == 0)
            tally.first_bad = rule.name + " snapshot " + std::to_string(i) + ": engine " +
                              std::to_string(serial.size()) + " heads, naive " + std::to_string(want.size());
        }
      }
    }
  }
  return tally;
}

inline Verdict rule_matcher() {
  const auto t = matcher_suite(99, 100);
  return verdict(t.mismatches == 0 && t.snapshots >= 800,
                 std::to_string(t.snapshots) + " snapshots (" + std::to_string(t.with_matches) +
                     " with matches), " + std::to_string(t.mismatches) + " mismatches" +
                     (t.first_bad.empty() ? "" : ": " + t.first_bad));
}

}  // namespace criteria
