#include "carnot/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace carnot {

std::string format_double(double x) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void ReportWriter::section(const std::string& name) {
  if (!buf_.empty()) buf_ += "\n";
  buf_ += "[" + name + "]\n";
}
void ReportWriter::kv(const std::string& key, const std::string& value) {
  buf_ += key + " = " + value + "\n";
}
void ReportWriter::kv(const std::string& key, double value) {
  kv(key, format_double(value));
}
void ReportWriter::kv(const std::string& key, std::int64_t value) {
  kv(key, std::to_string(value));
}
void ReportWriter::kv(const std::string& key, std::uint64_t value) {
  kv(key, std::to_string(value));
}
void ReportWriter::blank() { buf_ += "\n"; }

std::string render_report(const VerificationReport& report,
                          const std::map<std::string, double>& tolerance_overrides) {
  ReportWriter w;
  w.section("run");
  w.kv("group", report.group);
  w.kv("seed", static_cast<std::uint64_t>(report.seed));
  w.kv("points", static_cast<std::int64_t>(report.points));
  for (const auto& [k, v] : tolerance_overrides) w.kv("tolerance_override." + k, v);
  w.kv("verdict", report.all_pass() ? "pass" : "fail");

  for (const auto& l : report.lines) {
    w.section(l.name);
    if (l.skipped) {
      w.kv("status", "skipped");
      if (!l.note.empty()) w.kv("note", l.note);
      continue;
    }
    w.kv("value", l.value);
    w.kv("tolerance", l.tolerance);
    w.kv("source", l.source);
    if (!l.note.empty()) w.kv("note", l.note);
    w.kv("verdict", l.pass ? "pass" : "fail");
  }
  return w.str();
}

std::map<std::string, std::vector<double>> read_golden_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open golden file '" + path + "'");
  std::map<std::string, std::vector<double>> table;
  std::string lineStr;
  while (std::getline(in, lineStr)) {
    const auto hash = lineStr.find('#');
    if (hash != std::string::npos) lineStr.resize(hash);
    std::istringstream iss(lineStr);
    std::string name;
    if (!(iss >> name)) continue;
    std::vector<double> vals;
    double v;
    while (iss >> v) vals.push_back(v);
    table[name] = std::move(vals);
  }
  return table;
}

void write_golden_table(const std::string& path,
                        const std::map<std::string, std::vector<double>>& table,
                        const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write golden file '" + path + "'");
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  for (const auto& [name, vals] : table) {
    out << name;
    for (double v : vals) out << " " << format_double(v);
    out << "\n";
  }
}

}  // namespace carnot
