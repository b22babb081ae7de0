#include "ontonet/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "ontonet/error.hpp"

namespace ontonet::report {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), "cannot write");
  out << text;
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

std::string confusion_csv(const metrics::Score& score, bool normalized) {
  const auto rates = score.rates();
  std::ostringstream out;
  out << "predicted";
  for (int a = 1; a <= metrics::kClasses; ++a) out << ',' << a;
  out << '\n';
  for (std::size_t row = 0; row <= metrics::kClasses; ++row) {
    if (row == metrics::kUnclassified) out << "none";
    else out << row + 1;
    for (std::size_t col = 0; col < metrics::kClasses; ++col)
      out << ',' << (normalized ? fixed(rates[row][col], 2) : std::to_string(score.counts[row][col]));
    out << '\n';
  }
  return out.str();
}

std::string activity_csv(const metrics::Score& score) {
  std::ostringstream out;
  out << "activity,label,tp,fp,fn,precision,recall,f1,sessions,delayed,max_delay_s,mean_delay_s\n";
  for (int a = 1; a <= metrics::kClasses; ++a) {
    const auto& s = score.per_activity[static_cast<std::size_t>(a - 1)];
    const auto& d = score.delays[static_cast<std::size_t>(a - 1)];
    out << a << ",\"" << adl::binding(a).label << "\"," << s.tp << ',' << s.fp << ',' << s.fn << ','
        << fixed(s.precision) << ',' << fixed(s.recall) << ',' << fixed(s.f1) << ',' << d.sessions << ','
        << d.delayed << ',' << fixed(d.max_s, 2) << ',' << fixed(d.mean_s, 2) << '\n';
  }
  return out.str();
}

std::string recognitions_csv(std::span<const adl::RecognitionRecord> recognitions) {
  std::ostringstream out;
  out << "participant,activity,time,notified_at,evidence\n";
  for (const auto& r : recognitions) {
    out << r.participant << ',' << r.activity << ',' << r.time << ',' << r.notified_at << ',';
    for (std::size_t i = 0; i < r.evidence.size(); ++i) out << (i ? ";" : "") << r.evidence[i];
    out << '\n';
  }
  return out.str();
}

std::string telemetry_csv(std::span<const scenario::SessionResult> sessions) {
  std::ostringstream out;
  out << "participant,time,node,axioms\n";
  for (const auto& s : sessions)
    for (const auto& p : s.telemetry) out << s.participant << ',' << p.time << ',' << p.node << ',' << p.axioms << '\n';
  return out.str();
}

std::string timing_csv(std::span<const scenario::SessionResult> sessions) {
  std::ostringstream out;
  out << "participant,time,procedure,nanos\n";
  for (const auto& s : sessions)
    for (const auto& p : s.timings) out << s.participant << ',' << p.time << ',' << p.procedure << ',' << p.nanos << '\n';
  return out.str();
}

std::string score_json(const metrics::Score& score) {
  nlohmann::json doc;
  doc["confusion"] = score.counts;
  doc["rates"] = score.rates();
  doc["spurious"] = score.spurious;
  for (int a = 1; a <= metrics::kClasses; ++a) {
    const auto& s = score.per_activity[static_cast<std::size_t>(a - 1)];
    const auto& d = score.delays[static_cast<std::size_t>(a - 1)];
    doc["activities"].push_back({{"activity", a},
                                 {"label", adl::binding(a).label},
                                 {"tp", s.tp},
                                 {"fp", s.fp},
                                 {"fn", s.fn},
                                 {"precision", s.precision},
                                 {"recall", s.recall},
                                 {"f1", s.f1},
                                 {"recognized_sessions", d.sessions},
                                 {"delayed", d.delayed},
                                 {"max_delay_s", d.max_s},
                                 {"mean_delay_s", d.mean_s}});
  }
  return doc.dump(2) + "\n";
}

void write_all(const std::filesystem::path& dir, const metrics::Score& score,
               std::span<const scenario::SessionResult> sessions, const adl::ParamSet& params) {
  std::filesystem::create_directories(dir);
  std::vector<adl::RecognitionRecord> all;
  for (const auto& s : sessions) {
    all.insert(all.end(), s.recognitions.begin(), s.recognitions.end());
    write_file(dir / (s.participant + ".log"), net::format_log(s.log));
  }
  write_file(dir / "confusion.csv", confusion_csv(score, false));
  write_file(dir / "confusion_rates.csv", confusion_csv(score, true));
  write_file(dir / "activities.csv", activity_csv(score));
  write_file(dir / "recognitions.csv", recognitions_csv(all));
  write_file(dir / "telemetry.csv", telemetry_csv(sessions));
  write_file(dir / "timings.csv", timing_csv(sessions));
  write_file(dir / "score.json", score_json(score));
  write_file(dir / "params.cfg", adl::format_params(params));
}

}  // namespace ontonet::report
