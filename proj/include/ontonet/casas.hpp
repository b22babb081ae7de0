#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ontonet/statement.hpp"

namespace ontonet::casas {

enum class Tag { begin, end };

struct Annotation {
  int activity = 0;
  Tag tag = Tag::begin;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct TraceEvent {
  TimeMs time = 0;  // ms since 1970-01-01, no time zone
  std::string sensor;
  bool state = false;
  std::optional<Annotation> annotation;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Interval {
  int activity = 0;
  TimeMs begin = 0;
  TimeMs end = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::string line_text);
  std::string line;
};

/// Raw value words per sensor family, keyed by the letters an id starts
/// with. Flow-like families also accept numbers, positive meaning true.
class Vocabulary {
 public:
  /// M ON/OFF, I PRESENT/ABSENT, D OPEN/CLOSE, F and AD ON/OFF, P ON/OFF.
  static Vocabulary defaults();

  void add_family(std::string prefix, std::string on_word, std::string off_word, bool numeric = false);
  std::optional<bool> normalize(std::string_view sensor, std::string_view word) const;
  /// Word that normalizes back to `state` for this sensor.
  std::string word_for(std::string_view sensor, bool state) const;

 private:
  struct Family {
    std::string on_word;
    std::string off_word;
    bool numeric = false;
  };
  const Family* family(std::string_view sensor) const;
  std::map<std::string, Family, std::less<>> families_;
};

/// Raw dataset ids to scenario ids: explicit entries first, otherwise the
/// zeros after the letter prefix are dropped (M016 -> M16).
class SensorMap {
 public:
  void add(std::string raw, std::string mapped);
  std::string canonical(std::string_view raw) const;
  /// One `RAW MAPPED` pair per line, `#` comments.
  static SensorMap load(const std::filesystem::path& path);
  static SensorMap parse(std::string_view text);

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// Parses `DATE TIME SENSOR VALUE [ACTIVITY begin|end|start]`.
TraceEvent parse_line(std::string_view text, const Vocabulary& vocab = Vocabulary::defaults(),
                      const SensorMap& sensors = {});

/// Canonical line with millisecond precision; parse_line inverts it.
std::string format_line(const TraceEvent& ev, const Vocabulary& vocab = Vocabulary::defaults());

/// Milliseconds for `YYYY-MM-DD` and `HH:MM:SS[.fraction]`.
TimeMs parse_timestamp(std::string_view date, std::string_view time);
std::string format_timestamp(TimeMs t);

struct Trace {
  std::string participant;
  std::vector<TraceEvent> events;
  std::vector<Interval> truth;
  std::vector<std::string> warnings;
};

/// Malformed lines are skipped with a warning; out-of-order events are
/// stably sorted; an unclosed annotation ends at the last event.
Trace load_trace(std::istream& in, std::string participant, const Vocabulary& vocab = Vocabulary::defaults(),
                 const SensorMap& sensors = {});
Trace load_trace(const std::filesystem::path& path, const Vocabulary& vocab = Vocabulary::defaults(),
                 const SensorMap& sensors = {});
/// One participant per regular file, in file name order.
std::vector<Trace> load_dataset(const std::filesystem::path& dir, const Vocabulary& vocab = Vocabulary::defaults(),
                                const SensorMap& sensors = {});

enum class DriveMode { pure_virtual, wall_clock };
using Sleeper = std::function<void(std::chrono::nanoseconds)>;

/// Hands out events in order. In wall-clock mode it first sleeps for the
/// virtual gap divided by `speed`; pure-virtual mode never sleeps.
class TraceDriver {
 public:
  TraceDriver(std::span<const TraceEvent> events, double speed, DriveMode mode, Sleeper sleeper = {});

  const TraceEvent* next();
  double speed() const noexcept { return speed_; }

 private:
  std::span<const TraceEvent> events_;
  std::size_t cursor_ = 0;
  double speed_;
  DriveMode mode_;
  Sleeper sleeper_;
};

}  // namespace ontonet::casas
