#include "ontonet/metrics.hpp"

#include <algorithm>
#include <map>

namespace ontonet::metrics {

namespace {

std::size_t idx(int activity) { return static_cast<std::size_t>(activity - 1); }

}  // namespace

Matrix<double> Score::rates() const {
  Matrix<double> out{};
  for (std::size_t col = 0; col < kClasses; ++col) {
    int total = 0;
    for (const auto& row : counts) total += row[col];
    if (total == 0) continue;
    for (std::size_t row = 0; row <= kClasses; ++row) out[row][col] = static_cast<double>(counts[row][col]) / total;
  }
  return out;
}

ActivityScore activity_score(int tp, int fp, int fn) {
  ActivityScore s{tp, fp, fn, 0, 0, 0};
  if (tp + fp > 0) s.precision = static_cast<double>(tp) / (tp + fp);
  if (tp + fn > 0) s.recall = static_cast<double>(tp) / (tp + fn);
  if (2 * tp + fp + fn > 0) s.f1 = 2.0 * tp / (2 * tp + fp + fn);
  return s;
}

Score score(std::span<const LabelledTrace> truth, std::span<const adl::RecognitionRecord> recognitions) {
  Score out;
  std::map<std::string, std::vector<std::size_t>> by_participant;
  for (const auto& t : truth)
    for (const auto& iv : t.truth) {
      by_participant[t.participant].push_back(out.sessions.size());
      out.sessions.push_back({t.participant, iv, 0, std::nullopt});
    }

  // Per session: recognitions matched to it, in notification order.
  std::vector<std::vector<const adl::RecognitionRecord*>> matched(out.sessions.size());
  std::vector<const adl::RecognitionRecord*> ordered;
  for (const auto& r : recognitions) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->notified_at < b->notified_at; });

  for (const auto* r : ordered) {
    const auto it = by_participant.find(r->participant);
    // Own label first, then an interval holding the notification, then grace only.
    std::optional<std::size_t> pick;
    int best = 0;
    if (it != by_participant.end()) {
      for (auto s : it->second) {
        const auto& iv = out.sessions[s].truth;
        if (r->notified_at < iv.begin || r->notified_at > iv.end + kGraceMs) continue;
        const int rank = iv.activity == r->activity ? 3 : r->notified_at <= iv.end ? 2 : 1;
        if (rank > best) {
          best = rank;
          pick = s;
        }
      }
    }
    if (pick) matched[*pick].push_back(r);
    else ++out.spurious[idx(r->activity)];
  }

  for (std::size_t s = 0; s < out.sessions.size(); ++s) {
    Session& session = out.sessions[s];
    const int truth_a = session.truth.activity;
    if (truth_a < 1 || truth_a > kClasses) continue;
    const adl::RecognitionRecord* chosen = nullptr;
    for (const auto* r : matched[s])
      if (r->activity == truth_a) {
        chosen = r;
        break;
      }
    if (chosen == nullptr && !matched[s].empty()) chosen = matched[s].front();
    for (const auto* r : matched[s])
      if (r != chosen && r->activity != (chosen ? chosen->activity : 0)) ++out.spurious[idx(r->activity)];

    if (chosen == nullptr) {
      ++out.counts[kUnclassified][idx(truth_a)];
      continue;
    }
    session.predicted = chosen->activity;
    session.notified_at = chosen->notified_at;
    ++out.counts[idx(chosen->activity)][idx(truth_a)];
    if (chosen->activity != truth_a) continue;

    DelayStats& d = out.delays[idx(truth_a)];
    ++d.sessions;
    const TimeMs late = chosen->notified_at - session.truth.end;
    if (late > 0) {
      const double secs = static_cast<double>(late) / 1000.0;
      d.mean_s = (d.mean_s * d.delayed + secs) / (d.delayed + 1);
      ++d.delayed;
      d.max_s = std::max(d.max_s, secs);
    }
  }

  for (std::size_t a = 0; a < kClasses; ++a) {
    const int tp = out.counts[a][a];
    int fp = out.spurious[a];
    int fn = 0;
    for (std::size_t c = 0; c < kClasses; ++c)
      if (c != a) fp += out.counts[a][c];
    for (std::size_t r = 0; r <= kClasses; ++r)
      if (r != a) fn += out.counts[r][a];
    out.per_activity[a] = activity_score(tp, fp, fn);
  }
  return out;
}

std::array<double, kClasses> f1_from_rates(const Matrix<double>& rates) {
  std::array<double, kClasses> out{};
  for (std::size_t a = 0; a < kClasses; ++a) {
    const double tp = rates[a][a];
    double fp = 0, fn = 0;
    for (std::size_t c = 0; c < kClasses; ++c)
      if (c != a) fp += rates[a][c];
    for (std::size_t r = 0; r <= kClasses; ++r)
      if (r != a) fn += rates[r][a];
    const double denom = 2 * tp + fp + fn;
    out[a] = denom > 0 ? 2 * tp / denom : 0.0;
  }
  return out;
}

}  // namespace ontonet::metrics
