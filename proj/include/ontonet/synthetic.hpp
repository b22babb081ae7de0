#pragma once

#include <cstdint>
#include <vector>

#include "ontonet/casas.hpp"

namespace ontonet::synthetic {

struct Options {
  std::uint64_t seed = 1;
  int participants = 19;
  /// Chance that a performance deviates from its model (missed threshold).
  std::vector<double> failure_rate{0.05, 0.05, 0.0, 0.0, 0.2, 0.3, 0.0, 0.05};
  /// Chance that the resident stays out of sensor range after finishing.
  /// Ignored for activities whose last step is itself a motion pulse.
  std::vector<double> late_rate{0.0, 4.0 / 19, 8.0 / 19, 5.0 / 19, 0.0, 1.0 / 19, 1.0 / 19, 0.0};
  TimeMs day_start = 1'772'442'000'000;  // 2026-03-02 09:00:00
};

/// Annotated traces shaped like the eight scripted activities, one
/// participant each, performed in index order. Motion sensors pulse one
/// at a time so every pulse is a fresh location change. Deterministic for
/// a given seed.
std::vector<casas::Trace> generate(const Options& options);

}  // namespace ontonet::synthetic
