#include "ontonet/scenario.hpp"

#include <algorithm>
#include <exception>

#include "ontonet/error.hpp"

namespace ontonet::scenario {

Scenario load_scenario(const std::filesystem::path& dir, const std::optional<std::filesystem::path>& params_file,
                       const std::optional<std::filesystem::path>& network_file) {
  Scenario sc;
  sc.dir = dir;
  sc.network = net::load_network(network_file.value_or(dir / "network.cfg"));
  sc.params = adl::default_params();
  const auto params_path = params_file.value_or(dir / "params.cfg");
  if (params_file || std::filesystem::exists(params_path))
    for (auto& [name, p] : adl::load_params(params_path)) {
      if (!sc.params.count(name)) throw ConfigError(params_path.string(), "unknown parameter " + name);
      sc.params[name] = p;
    }
  sc.models = adl::build_activity_models(sc.params);
  if (std::filesystem::exists(dir / "sensors.map")) sc.sensors = casas::SensorMap::load(dir / "sensors.map");
  return sc;
}

SessionResult run_session(const Scenario& sc, const casas::Trace& trace, const RunOptions& options) {
  SessionResult result;
  result.participant = trace.participant;
  result.warnings = trace.warnings;

  auto net = net::RuntimeNetwork::bootstrap(sc.network);
  net.set_fast_forward(options.fast_forward);
  adl::ProcedureOptions procs;
  procs.policy = options.policy;
  procs.replayer_active = &result.replayer_started;
  procs.on_recognition = [&](const adl::RecognitionRecord& rec) {
    result.recognitions.push_back(rec);
    result.recognitions.back().participant = trace.participant;
  };
  adl::bind_procedures(net, sc.models, procs);

  if (!trace.events.empty()) {
    net.start(std::max<TimeMs>(0, trace.events.front().time - options.lead));
    casas::TraceDriver driver(trace.events, options.speed, options.mode, options.sleeper);
    while (const casas::TraceEvent* ev = driver.next()) {
      net.advance_to(ev->time);
      if (!result.replayer_started) net.record("warn", "D", "reading before the replayer started");
      adl::replay_step(net, *ev);
      net.record_telemetry();
    }
    net.advance_to(trace.events.back().time + options.tail);
  }

  for (const auto& r : net.log())
    if (r.kind == "warn") result.warnings.push_back(std::to_string(r.time) + " " + r.name + ": " + r.detail);
  result.log = net.log();
  result.telemetry = net.telemetry();
  result.timings = net.timings();
  return result;
}

std::vector<SessionResult> run_sessions(const Scenario& sc, std::span<const casas::Trace> traces,
                                        const RunOptions& options) {
  std::vector<SessionResult> out(traces.size());
  std::vector<std::exception_ptr> failures(traces.size());
  const auto n = static_cast<std::ptrdiff_t>(traces.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run_session(sc, traces[static_cast<std::size_t>(i)], options);
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

}  // namespace ontonet::scenario
