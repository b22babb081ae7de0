#include "ontonet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "ontonet/error.hpp"

namespace ontonet::synthetic {

namespace {

using casas::Annotation;
using casas::Tag;
using casas::TraceEvent;
using Sensors = std::vector<std::string>;

const Sensors kKitchen{"M19", "M20"};
const Sensors kLiving{"M1", "M2"};
const Sensors kTable1{"M15"};
const Sensors kTable2{"M1", "M2"};
const Sensors kCorridor{"M24", "M25", "M26"};
const Sensors kPlant1{"M6", "M7", "M8", "M9"};
const Sensors kPlant2{"M11", "M12", "M13"};

class Script {
 public:
  Script(std::mt19937_64& rng, TimeMs start) : rng_(rng), now_(start) {}

  TimeMs now() const { return now_; }
  std::vector<TraceEvent>& events() { return events_; }

  /// Whole seconds in [lo, hi].
  TimeMs secs(int lo, int hi) { return std::uniform_int_distribution<TimeMs>(lo, hi)(rng_) * 1000; }
  bool chance(double p) { return p > 0 && std::bernoulli_distribution(p)(rng_); }
  const std::string& pick(const Sensors& s) {
    return s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng_)];
  }

  void wait(TimeMs d) { now_ += d; }

  std::size_t emit(const std::string& sensor, bool state) {
    events_.push_back({now_, sensor, state, std::nullopt});
    return events_.size() - 1;
  }

  /// ON then OFF a second later; never overlaps another pulse.
  std::size_t pulse(const std::string& sensor) {
    now_ = std::max(now_, motion_free_ + 1000);
    const auto on = emit(sensor, true);
    events_.push_back({now_ + 1000, sensor, false, std::nullopt});
    motion_free_ = now_ + 1000;
    return on;
  }

  /// A fixture event followed by a location pulse so it gets imported.
  std::size_t act(const std::string& sensor, bool state, const Sensors& where) {
    const auto idx = emit(sensor, state);
    const TimeMs at = now_;
    now_ += 1000;
    pulse(pick(where));
    now_ = at;
    return idx;
  }

  void tag(std::size_t idx, int activity, Tag t) { events_[idx].annotation = Annotation{activity, t}; }

 private:
  std::mt19937_64& rng_;
  TimeMs now_;
  TimeMs motion_free_ = 0;
  std::vector<TraceEvent> events_;
};

struct Outcome {
  std::size_t first = 0;
  std::size_t terminal = 0;
  const Sensors* after = nullptr;  // where the resident shows up next; null when terminal is a pulse
};

Outcome medication(Script& s, bool fail) {
  Outcome o{.after = &kKitchen};
  o.first = s.act("D7", true, kKitchen);
  s.wait(s.secs(2, 5));
  s.act("I4", false, kKitchen);
  s.wait(s.secs(1, 3));
  s.act("I6", false, kKitchen);
  s.wait(fail ? s.secs(3, 8) : s.secs(11, 25));
  s.act("I4", true, kKitchen);
  s.wait(s.secs(1, 3));
  s.act("I6", true, kKitchen);
  s.wait(s.secs(2, 5));
  o.terminal = s.emit("D7", false);
  return o;
}

Outcome dvd(Script& s, bool fail) {
  Outcome o{.after = &kLiving};
  const std::string item = s.pick({"I3", "I5"});
  o.first = s.act(item, false, kLiving);
  s.wait(fail ? s.secs(8, 25) : s.secs(35, 90));
  o.terminal = s.emit(item, true);
  return o;
}

Outcome watering(Script& s, bool fail) {
  Outcome o{.after = &kLiving};
  o.first = s.act("D11", true, kLiving);
  s.wait(s.secs(3, 6));
  const std::string tap = s.pick({"F2", "F3"});
  s.act(tap, true, kLiving);
  s.wait(s.secs(3, 6));
  s.act(tap, false, kLiving);
  for (const auto* area : {&kPlant1, &kPlant2}) {
    const int visits = (fail && area == &kPlant2) ? 2 : static_cast<int>(s.secs(3, 4) / 1000);
    s.wait(s.secs(3, 6));
    for (int v = 0; v < visits; ++v) {
      if (v > 0) s.wait(s.secs(11, 15));
      s.pulse(s.pick(*area));
    }
  }
  s.wait(s.secs(3, 8));
  o.terminal = s.emit("D11", false);
  return o;
}

Outcome phone(Script& s, bool fail) {
  Outcome o{.after = &kTable2};
  o.first = s.act("P1", true, kTable2);
  s.wait(fail ? s.secs(3, 9) : s.secs(15, 60));
  o.terminal = s.emit("P1", false);
  return o;
}

Outcome card(Script& s, bool fail) {
  Outcome o{.after = &kTable1};
  o.first = s.act("I8", false, kTable1);
  s.wait(s.secs(1, 3));
  s.act("I9", false, kTable1);
  if (fail) {
    s.wait(s.secs(3, 8));
    s.act("I9", true, kTable1);
    s.wait(s.secs(12, 30));
    o.terminal = s.emit("I8", true);
    return o;
  }
  s.wait(s.secs(12, 40));
  s.act("I8", true, kTable1);
  s.wait(s.secs(1, 5));
  o.terminal = s.emit("I9", true);
  return o;
}

Outcome meal(Script& s, bool fail) {
  Outcome o{.after = &kKitchen};
  const std::string door = s.pick({"D8", "D9", "D10"});
  o.first = s.act(door, true, kKitchen);
  s.wait(s.secs(2, 5));
  s.act("I1", false, kKitchen);
  s.wait(s.secs(1, 3));
  s.act("I2", false, kKitchen);
  s.wait(fail ? s.secs(5, 15) : s.secs(22, 60));
  s.act("I1", true, kKitchen);
  s.wait(s.secs(1, 5));
  s.act("I2", true, kKitchen);
  s.wait(s.secs(2, 5));
  o.terminal = s.emit(door, false);
  return o;
}

Outcome cleaning(Script& s, bool fail) {
  Outcome o{.after = &kLiving};
  o.first = s.act("D11", true, kLiving);
  struct Area {
    Sensors sensors;
    int lo, hi;
  };
  for (const auto& area : {Area{{"M6", "M7", "M8", "M9", "M10"}, 16, 20}, Area{{"M16", "M17", "M18"}, 11, 15}}) {
    const int visits = (fail && area.sensors.front() == "M16") ? 2 : static_cast<int>(s.secs(3, 4) / 1000);
    s.wait(s.secs(3, 6));
    for (int v = 0; v < visits; ++v) {
      if (v > 0) s.wait(s.secs(area.lo, area.hi));
      s.pulse(s.pick(area.sensors));
    }
  }
  s.wait(s.secs(3, 8));
  o.terminal = s.emit("D11", false);
  return o;
}

Outcome outfit(Script& s, bool fail) {
  Outcome o;
  o.first = s.act("D12", true, kCorridor);
  s.wait(fail ? s.secs(1, 4) : s.secs(6, 15));
  s.pulse(s.pick({"M21", "M22", "M23"}));
  s.wait(s.secs(1, 2));
  s.act("D12", false, kCorridor);
  s.wait(s.secs(3, 10));
  o.terminal = s.pulse(s.pick({"M3", "M4", "M5"}));
  return o;
}

using Performer = Outcome (*)(Script&, bool);
constexpr Performer kPerformers[] = {medication, dvd, watering, phone, card, meal, cleaning, outfit};

}  // namespace

std::vector<casas::Trace> generate(const Options& options) {
  if (options.failure_rate.size() != 8 || options.late_rate.size() != 8)
    throw DomainError("synthetic rates need one entry per activity");
  std::vector<casas::Trace> out;
  for (int p = 0; p < options.participants; ++p) {
    std::mt19937_64 rng(options.seed * 1'000'003 + static_cast<std::uint64_t>(p));
    Script s(rng, options.day_start + static_cast<TimeMs>(p) * 86'400'000);
    s.pulse(s.pick(kCorridor));
    for (int a = 1; a <= 8; ++a) {
      s.wait(s.secs(40, 120));
      if (s.chance(0.5)) {
        s.pulse(s.pick(kCorridor));
        s.wait(s.secs(20, 40));
      }
      const bool fail = s.chance(options.failure_rate[static_cast<std::size_t>(a - 1)]);
      const Outcome o = kPerformers[a - 1](s, fail);
      s.tag(o.first, a, casas::Tag::begin);
      if (o.after == nullptr) {
        s.tag(o.terminal, a, casas::Tag::end);
        continue;
      }
      if (s.chance(options.late_rate[static_cast<std::size_t>(a - 1)])) {
        s.tag(o.terminal, a, casas::Tag::end);
        s.wait(s.secs(3, 15));
        s.pulse(s.pick(*o.after));
      } else {
        s.wait(1000);
        s.tag(s.pulse(s.pick(*o.after)), a, casas::Tag::end);
      }
    }
    s.wait(s.secs(20, 40));
    s.pulse(s.pick(kCorridor));

    auto& events = s.events();
    std::stable_sort(events.begin(), events.end(),
                     [](const TraceEvent& x, const TraceEvent& y) { return x.time < y.time; });
    std::string name = "p" + std::to_string(p + 1);
    if (name.size() < 3) name.insert(1, "0");
    std::ostringstream text;
    for (const auto& ev : events) text << casas::format_line(ev) << '\n';
    std::istringstream in(text.str());
    out.push_back(casas::load_trace(in, name));
  }
  return out;
}

}  // namespace ontonet::synthetic
