#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ontonet/adl.hpp"
#include "ontonet/casas.hpp"

namespace ontonet::metrics {

inline constexpr int kClasses = adl::kActivityCount;
inline constexpr int kUnclassified = kClasses;  // row index of sessions nobody recognized
/// A recognition may arrive this long after its interval ended.
inline constexpr TimeMs kGraceMs = 20'000;

/// rows: predicted activity 1..8 then unclassified; columns: true activity 1..8.
template <class T>
using Matrix = std::array<std::array<T, kClasses>, kClasses + 1>;

struct Session {
  std::string participant;
  casas::Interval truth;
  int predicted = 0;  // 1..8, 0 when unclassified
  std::optional<TimeMs> notified_at;
};

struct ActivityScore {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct DelayStats {
  int sessions = 0;  // correctly recognized
  int delayed = 0;
  double max_s = 0;
  double mean_s = 0;  // over delayed sessions
};

struct Score {
  Matrix<int> counts{};
  std::array<int, kClasses> spurious{};  // recognitions matching no session
  std::vector<Session> sessions;
  std::array<ActivityScore, kClasses> per_activity{};
  std::array<DelayStats, kClasses> delays{};

  /// Column-normalized counts.
  Matrix<double> rates() const;
};

struct LabelledTrace {
  std::string participant;
  std::span<const casas::Interval> truth;
};

/// Matches recognitions to annotated intervals of the same participant by
/// notification time: inside the interval or within kGraceMs after it. Among
/// candidate intervals, one of the recognition's own activity wins, then one
/// that holds the notification outright. Leftover recognitions count as false
/// positives of their activity.
Score score(std::span<const LabelledTrace> truth, std::span<const adl::RecognitionRecord> recognitions);

/// 2TP / (2TP + FP + FN) per activity straight from a rate matrix, false
/// positives being the off-diagonal row mass.
std::array<double, kClasses> f1_from_rates(const Matrix<double>& rates);

ActivityScore activity_score(int tp, int fp, int fn);

}  // namespace ontonet::metrics
