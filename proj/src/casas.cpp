#include "ontonet/casas.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include "ontonet/error.hpp"

namespace ontonet::casas {

namespace {

using namespace std::chrono;

constexpr TimeMs kDayMs = 86'400'000;

std::vector<std::string_view> words_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Int>
bool to_int(std::string_view s, Int& out) {
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && end == s.data() + s.size() && !s.empty();
}

std::string_view letters(std::string_view id) {
  std::size_t n = 0;
  while (n < id.size() && std::isalpha(static_cast<unsigned char>(id[n]))) ++n;
  return id.substr(0, n);
}

}  // namespace

ParseError::ParseError(const std::string& message, std::string line_text)
    : std::runtime_error(message + ": " + line_text), line(std::move(line_text)) {}

Vocabulary Vocabulary::defaults() {
  Vocabulary v;
  v.add_family("M", "ON", "OFF");
  v.add_family("I", "PRESENT", "ABSENT");
  v.add_family("D", "OPEN", "CLOSE");
  v.add_family("F", "ON", "OFF", true);
  v.add_family("AD", "ON", "OFF", true);
  v.add_family("P", "ON", "OFF");
  return v;
}

void Vocabulary::add_family(std::string prefix, std::string on_word, std::string off_word, bool numeric) {
  if (on_word == off_word) throw DomainError("family " + prefix + " maps both states to " + on_word);
  families_[std::move(prefix)] = Family{std::move(on_word), std::move(off_word), numeric};
}

const Vocabulary::Family* Vocabulary::family(std::string_view sensor) const {
  auto it = families_.find(letters(sensor));
  return it == families_.end() ? nullptr : &it->second;
}

std::optional<bool> Vocabulary::normalize(std::string_view sensor, std::string_view word) const {
  const Family* f = family(sensor);
  if (f == nullptr) return std::nullopt;
  if (word == f->on_word) return true;
  if (word == f->off_word) return false;
  if (f->numeric) {
    double value = 0;
    auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec == std::errc{} && end == word.data() + word.size()) return value > 0;
  }
  return std::nullopt;
}

std::string Vocabulary::word_for(std::string_view sensor, bool state) const {
  const Family* f = family(sensor);
  if (f == nullptr) throw DomainError("no value vocabulary for sensor " + std::string(sensor));
  return state ? f->on_word : f->off_word;
}

void SensorMap::add(std::string raw, std::string mapped) { entries_[std::move(raw)] = std::move(mapped); }

std::string SensorMap::canonical(std::string_view raw) const {
  if (auto it = entries_.find(raw); it != entries_.end()) return it->second;
  const auto prefix = letters(raw);
  std::string_view rest = raw.substr(prefix.size());
  std::size_t zeros = 0;
  while (zeros + 1 < rest.size() && rest[zeros] == '0' && std::isdigit(static_cast<unsigned char>(rest[zeros + 1])))
    ++zeros;
  return std::string(prefix) + std::string(rest.substr(zeros));
}

SensorMap SensorMap::parse(std::string_view text) {
  SensorMap map;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto w = words_of(line);
    if (w.empty()) continue;
    if (w.size() != 2) throw ConfigError("sensor-map:" + std::to_string(lineno), "expected RAW MAPPED");
    map.add(std::string(w[0]), std::string(w[1]));
  }
  return map;
}

SensorMap SensorMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot read sensor map");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

TimeMs parse_timestamp(std::string_view date, std::string_view time) {
  int y = 0;
  unsigned mo = 0, d = 0;
  if (date.size() != 10 || date[4] != '-' || date[7] != '-' || !to_int(date.substr(0, 4), y) ||
      !to_int(date.substr(5, 2), mo) || !to_int(date.substr(8, 2), d))
    throw DomainError("bad date " + std::string(date));
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) throw DomainError("bad date " + std::string(date));

  int hh = 0, mm = 0, ss = 0;
  if (time.size() < 8 || time[2] != ':' || time[5] != ':' || !to_int(time.substr(0, 2), hh) ||
      !to_int(time.substr(3, 2), mm) || !to_int(time.substr(6, 2), ss) || hh > 23 || mm > 59 || ss > 60)
    throw DomainError("bad time " + std::string(time));
  int ms = 0;
  if (time.size() > 8) {
    if (time[8] != '.' || time.size() == 9) throw DomainError("bad time " + std::string(time));
    const auto frac = time.substr(9);
    if (!std::all_of(frac.begin(), frac.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw DomainError("bad time " + std::string(time));
    std::string digits(frac.substr(0, 3));
    digits.resize(3, '0');
    to_int(std::string_view(digits), ms);
  }
  const auto days = sys_days(ymd).time_since_epoch().count();
  const TimeMs t = days * kDayMs + ((hh * 60 + mm) * 60 + ss) * TimeMs{1000} + ms;
  if (t < 0) throw DomainError("timestamps before 1970 are not supported");
  return t;
}

std::string format_timestamp(TimeMs t) {
  const TimeMs days = t / kDayMs;
  TimeMs rest = t % kDayMs;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld.%03lld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(rest / 3'600'000), static_cast<long long>(rest / 60'000 % 60),
                static_cast<long long>(rest / 1000 % 60), static_cast<long long>(rest % 1000));
  return buf;
}

TraceEvent parse_line(std::string_view text, const Vocabulary& vocab, const SensorMap& sensors) {
  const auto w = words_of(text);
  if (w.size() != 4 && w.size() != 6) throw ParseError("expected 4 or 6 fields", std::string(text));
  TraceEvent ev;
  try {
    ev.time = parse_timestamp(w[0], w[1]);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), std::string(text));
  }
  ev.sensor = sensors.canonical(w[2]);
  auto state = vocab.normalize(ev.sensor, w[3]);
  if (!state) throw ParseError("unknown value " + std::string(w[3]) + " for " + ev.sensor, std::string(text));
  ev.state = *state;
  if (w.size() == 6) {
    Annotation a;
    if (!to_int(w[4], a.activity) || a.activity < 1) throw ParseError("bad activity " + std::string(w[4]), std::string(text));
    if (w[5] == "begin" || w[5] == "start") a.tag = Tag::begin;
    else if (w[5] == "end") a.tag = Tag::end;
    else throw ParseError("bad annotation tag " + std::string(w[5]), std::string(text));
    ev.annotation = a;
  }
  return ev;
}

std::string format_line(const TraceEvent& ev, const Vocabulary& vocab) {
  std::string out = format_timestamp(ev.time) + " " + ev.sensor + " " + vocab.word_for(ev.sensor, ev.state);
  if (ev.annotation)
    out += " " + std::to_string(ev.annotation->activity) + (ev.annotation->tag == Tag::begin ? " begin" : " end");
  return out;
}

Trace load_trace(std::istream& in, std::string participant, const Vocabulary& vocab, const SensorMap& sensors) {
  Trace trace;
  trace.participant = std::move(participant);
  std::string line;
  bool unsorted = false;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (words_of(line).empty()) continue;
    try {
      TraceEvent ev = parse_line(line, vocab, sensors);
      if (!trace.events.empty() && ev.time < trace.events.back().time) unsorted = true;
      trace.events.push_back(std::move(ev));
    } catch (const ParseError& e) {
      trace.warnings.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (unsorted) {
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
    trace.warnings.push_back("events out of time order; sorted");
  }

  std::map<int, TimeMs> open;
  for (const auto& ev : trace.events) {
    if (!ev.annotation) continue;
    const int a = ev.annotation->activity;
    if (ev.annotation->tag == Tag::begin) {
      if (!open.emplace(a, ev.time).second)
        trace.warnings.push_back("activity " + std::to_string(a) + " begins twice; keeping the first");
    } else if (auto it = open.find(a); it != open.end()) {
      trace.truth.push_back({a, it->second, ev.time});
      open.erase(it);
    } else {
      trace.warnings.push_back("activity " + std::to_string(a) + " ends without a begin");
    }
  }
  const TimeMs last = trace.events.empty() ? 0 : trace.events.back().time;
  for (const auto& [a, begin] : open) {
    trace.truth.push_back({a, begin, last});
    trace.warnings.push_back("activity " + std::to_string(a) + " never ends; closed at the last event");
  }
  std::sort(trace.truth.begin(), trace.truth.end(), [](const Interval& x, const Interval& y) {
    return std::tie(x.begin, x.activity, x.end) < std::tie(y.begin, y.activity, y.end);
  });
  return trace;
}

Trace load_trace(const std::filesystem::path& path, const Vocabulary& vocab, const SensorMap& sensors) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot read trace");
  return load_trace(in, path.stem().string(), vocab, sensors);
}

std::vector<Trace> load_dataset(const std::filesystem::path& dir, const Vocabulary& vocab, const SensorMap& sensors) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<Trace> out;
  for (const auto& f : files) out.push_back(load_trace(f, vocab, sensors));
  return out;
}

TraceDriver::TraceDriver(std::span<const TraceEvent> events, double speed, DriveMode mode, Sleeper sleeper)
    : events_(events), speed_(speed), mode_(mode), sleeper_(std::move(sleeper)) {
  if (!(speed > 0)) throw DomainError("speed must be positive");
  if (!sleeper_) sleeper_ = [](std::chrono::nanoseconds d) { std::this_thread::sleep_for(d); };
}

const TraceEvent* TraceDriver::next() {
  if (cursor_ >= events_.size()) return nullptr;
  if (mode_ == DriveMode::wall_clock && cursor_ > 0) {
    const TimeMs gap = events_[cursor_].time - events_[cursor_ - 1].time;
    if (gap > 0)
      sleeper_(std::chrono::nanoseconds(static_cast<std::int64_t>(static_cast<double>(gap) * 1e6 / speed_)));
  }
  return &events_[cursor_++];
}

}  // namespace ontonet::casas
