#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ontonet/adl.hpp"
#include "ontonet/casas.hpp"
#include "ontonet/network.hpp"

namespace ontonet::scenario {

/// Everything a replay needs, loaded from one directory:
/// network.cfg, the model files it names, params.cfg and sensors.map.
struct Scenario {
  std::filesystem::path dir;
  net::NetworkModel network;
  adl::ParamSet params;
  std::vector<adl::ActivityModel> models;
  casas::SensorMap sensors;
};

/// `network_file` and `params_file` override `dir/network.cfg` and
/// `dir/params.cfg`. A missing params.cfg or sensors.map is fine.
Scenario load_scenario(const std::filesystem::path& dir,
                       const std::optional<std::filesystem::path>& params_file = std::nullopt,
                       const std::optional<std::filesystem::path>& network_file = std::nullopt);

struct RunOptions {
  double speed = 1.0;
  casas::DriveMode mode = casas::DriveMode::pure_virtual;
  rules::ExecPolicy policy = rules::ExecPolicy::serial;
  TimeMs lead = 1000;   // network starts this long before the first reading
  TimeMs tail = 60000;  // and keeps sampling this long after the last one
  bool fast_forward = true;
  casas::Sleeper sleeper;
};

struct SessionResult {
  std::string participant;
  std::vector<adl::RecognitionRecord> recognitions;
  std::vector<net::LogRecord> log;
  std::vector<net::TelemetryPoint> telemetry;
  std::vector<net::TimingPoint> timings;
  std::vector<std::string> warnings;
  bool replayer_started = false;
};

/// Replays one trace through a fresh network.
SessionResult run_session(const Scenario& sc, const casas::Trace& trace, const RunOptions& options = {});

/// One fresh network per trace, traces spread over OpenMP threads. Results
/// keep the input order.
std::vector<SessionResult> run_sessions(const Scenario& sc, std::span<const casas::Trace> traces,
                                        const RunOptions& options = {});

}  // namespace ontonet::scenario
