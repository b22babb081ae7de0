// ontonet: replay annotated smart-home traces through the context network.
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ontonet/adl.hpp"
#include "ontonet/error.hpp"
#include "ontonet/metrics.hpp"
#include "ontonet/model_file.hpp"
#include "ontonet/report.hpp"
#include "ontonet/scenario.hpp"
#include "ontonet/synthetic.hpp"

namespace fs = std::filesystem;
using namespace ontonet;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot read");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const net::NodeDecl& node_decl(const net::NetworkModel& model, const std::string& name) {
  for (const auto& n : model.nodes)
    if (n.name == name) return n;
  throw ConfigError("nodes." + name, "missing");
}

std::vector<casas::Trace> load_traces(const std::vector<fs::path>& traces, const std::optional<fs::path>& dataset,
                                      const casas::SensorMap& sensors) {
  std::vector<casas::Trace> out;
  if (dataset) out = casas::load_dataset(*dataset, casas::Vocabulary::defaults(), sensors);
  for (const auto& t : traces) out.push_back(casas::load_trace(t, casas::Vocabulary::defaults(), sensors));
  return out;
}

metrics::Score score_sessions(std::span<const casas::Trace> traces,
                              std::span<const scenario::SessionResult> sessions) {
  std::vector<metrics::LabelledTrace> truth;
  for (const auto& t : traces) truth.push_back({t.participant, t.truth});
  std::vector<adl::RecognitionRecord> recs;
  for (const auto& s : sessions) recs.insert(recs.end(), s.recognitions.begin(), s.recognitions.end());
  return metrics::score(truth, recs);
}

void print_summary(const metrics::Score& score) {
  std::cout << "activity  tp  fp  fn     f1  delayed  max_s  mean_s\n";
  for (int a = 1; a <= metrics::kClasses; ++a) {
    const auto& s = score.per_activity[static_cast<std::size_t>(a - 1)];
    const auto& d = score.delays[static_cast<std::size_t>(a - 1)];
    std::cout << std::setw(8) << a << std::setw(4) << s.tp << std::setw(4) << s.fp << std::setw(4) << s.fn
              << std::setw(7) << std::fixed << std::setprecision(3) << s.f1 << std::setw(6) << d.delayed << "/"
              << std::setw(2) << d.sessions << std::setw(7) << std::setprecision(2) << d.max_s << std::setw(8)
              << d.mean_s << '\n';
  }
}

int check_models(const fs::path& dir, const std::optional<fs::path>& params_file) {
  const auto sc = scenario::load_scenario(dir, params_file);
  int failures = 0;
  for (int a = 1; a <= adl::kActivityCount; ++a) {
    const auto spec = load_model_spec(sc.network.base_dir / node_decl(sc.network, adl::activity_node(a)).represents);
    const fs::path file = dir / "models" / ("A" + std::to_string(a) + ".fluent");
    const std::string text = fs::exists(file) ? read_text(file) : std::string(adl::model_source(a));
    const auto ast = dsl::parse_model(text, &spec.graph);
    const auto compiled = dsl::compile_model(adl::apply_params(ast, sc.params));
    std::cout << ast.name << ": " << compiled.rules.size() << " rule(s), " << compiled.prepasses.size()
              << " prepass(es)\n";
  }
  for (const auto& r : adl::run_golden(dir, sc.models, adl::golden_cases())) {
    std::cout << (r.passed ? "ok   " : "FAIL ") << "A" << r.golden.activity << " " << r.golden.name;
    if (!r.passed) std::cout << ": " << r.detail;
    std::cout << '\n';
    if (!r.passed) ++failures;
  }
  return failures == 0 ? EXIT_SUCCESS : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-network activity recognition over smart-home sensor traces"};
  app.require_subcommand(1);

  fs::path scenario_dir = "data/scenario";
  std::optional<fs::path> params_file;

  auto* replay = app.add_subcommand("replay", "Replay traces and score the recognitions");
  std::optional<fs::path> config_file, dataset;
  std::vector<fs::path> traces;
  fs::path out_dir = "out";
  double speed = 1.0;
  bool wall_clock = false, parallel_rules = false, no_fast_forward = false;
  replay->add_option("--scenario", scenario_dir, "Scenario directory")->check(CLI::ExistingDirectory);
  replay->add_option("--config", config_file, "Network config replacing <scenario>/network.cfg");
  replay->add_option("--params", params_file, "Parameter file replacing <scenario>/params.cfg");
  replay->add_option("--trace", traces, "Annotated trace file(s)");
  replay->add_option("--dataset", dataset, "Directory with one trace per participant")
      ->check(CLI::ExistingDirectory);
  replay->add_option("--out", out_dir, "Report directory");
  replay->add_option("--speed", speed, "Replay speed factor for --wall-clock")->check(CLI::PositiveNumber);
  bool pure_virtual = false;
  auto* wall_flag = replay->add_flag("--wall-clock", wall_clock, "Sleep between readings");
  replay->add_flag("--pure-virtual", pure_virtual, "Never sleep (default)")->excludes(wall_flag);
  replay->add_flag("--parallel-rules", parallel_rules, "Evaluate rules with the OpenMP matcher");
  replay->add_flag("--no-fast-forward", no_fast_forward, "Sample every condition at every grid point");

  auto* check = app.add_subcommand("check-models", "Parse and compile the models, run the golden traces");
  check->add_option("--scenario", scenario_dir, "Scenario directory")->check(CLI::ExistingDirectory);
  check->add_option("--params", params_file, "Parameter file");

  auto* explain = app.add_subcommand("explain", "Print models in canonical form, in prose and as rules");
  int only = 0;
  explain->add_option("--scenario", scenario_dir, "Scenario directory")->check(CLI::ExistingDirectory);
  explain->add_option("--params", params_file, "Parameter file");
  explain->add_option("--activity", only, "Only this activity")->check(CLI::Range(1, adl::kActivityCount));

  auto* score_cmd = app.add_subcommand("score", "Score a recognitions.csv against annotated traces");
  fs::path recognitions_file;
  score_cmd->add_option("--recognitions", recognitions_file, "CSV written by replay")->required();
  score_cmd->add_option("--dataset", dataset, "Annotated traces")->required()->check(CLI::ExistingDirectory);

  auto* synth = app.add_subcommand("synth", "Write synthetic annotated traces");
  synthetic::Options synth_options;
  synth->add_option("--out", out_dir, "Directory for p01.txt ...")->required();
  synth->add_option("--seed", synth_options.seed, "Random seed");
  synth->add_option("--participants", synth_options.participants, "Number of traces")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*replay) {
      const fs::path dir = config_file && !replay->count("--scenario") ? config_file->parent_path() : scenario_dir;
      const auto sc = scenario::load_scenario(dir, params_file, config_file);
      const auto loaded = load_traces(traces, dataset, sc.sensors);
      if (loaded.empty()) throw ConfigError("replay", "no traces given");
      scenario::RunOptions options;
      options.speed = speed;
      options.mode = wall_clock ? casas::DriveMode::wall_clock : casas::DriveMode::pure_virtual;
      options.policy = parallel_rules ? rules::ExecPolicy::parallel : rules::ExecPolicy::serial;
      options.fast_forward = !no_fast_forward;
      const auto sessions = scenario::run_sessions(sc, loaded, options);
      for (const auto& s : sessions)
        for (const auto& w : s.warnings) std::cerr << s.participant << ": " << w << '\n';
      const auto score = score_sessions(loaded, sessions);
      report::write_all(out_dir, score, sessions, sc.params);
      print_summary(score);
      return EXIT_SUCCESS;
    }
    if (*check) return check_models(scenario_dir, params_file);
    if (*explain) {
      const auto sc = scenario::load_scenario(scenario_dir, params_file);
      for (const auto& m : sc.models) {
        if (only != 0 && m.index != only) continue;
        std::cout << "# " << m.index << " " << adl::binding(m.index).label << "\n"
                  << dsl::format_model(m.ast) << "\n" << dsl::describe_model(m.ast) << "\n\n";
        for (const auto& r : m.compiled.rules) std::cout << rules::to_string(r) << "\n";
        std::cout << '\n';
      }
      return EXIT_SUCCESS;
    }
    if (*score_cmd) {
      const auto loaded = casas::load_dataset(*dataset);
      std::ifstream in(recognitions_file);
      if (!in) throw ConfigError(recognitions_file.string(), "cannot read");
      std::vector<adl::RecognitionRecord> recs;
      std::string line;
      std::getline(in, line);
      for (int lineno = 2; std::getline(in, line); ++lineno) {
        std::istringstream row(line);
        std::string participant, activity, time, notified;
        if (!std::getline(row, participant, ',') || !std::getline(row, activity, ',') ||
            !std::getline(row, time, ',') || !std::getline(row, notified, ','))
          throw ConfigError(recognitions_file.string() + ":" + std::to_string(lineno), "expected 5 columns");
        adl::RecognitionRecord r;
        r.participant = participant;
        r.activity = std::stoi(activity);
        r.time = std::stoll(time);
        r.notified_at = std::stoll(notified);
        recs.push_back(std::move(r));
      }
      std::vector<metrics::LabelledTrace> truth;
      for (const auto& t : loaded) truth.push_back({t.participant, t.truth});
      print_summary(metrics::score(truth, recs));
      return EXIT_SUCCESS;
    }
    if (*synth) {
      fs::create_directories(out_dir);
      for (const auto& t : synthetic::generate(synth_options)) {
        std::ofstream out(out_dir / (t.participant + ".txt"));
        for (const auto& ev : t.events) out << casas::format_line(ev) << '\n';
      }
      return EXIT_SUCCESS;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dsl::ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return EXIT_SUCCESS;
}
