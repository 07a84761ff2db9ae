#pragma once

// Flat key/value report writer with section headers; deterministic float
// formatting so fixed inputs produce byte-identical reports. Also the small
// whitespace-table reader/writer used for golden-value files.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "carnot/verify.hpp"

namespace carnot {

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

class ReportWriter {
 public:
  void section(const std::string& name);
  void kv(const std::string& key, const std::string& value);
  void kv(const std::string& key, double value);
  void kv(const std::string& key, std::int64_t value);
  void kv(const std::string& key, std::uint64_t value);
  void blank();
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

/// Renders the verification report (no wall-clock content; timings go to
/// stderr so reports stay byte-identical for fixed inputs).
std::string render_report(const VerificationReport& report,
                          const std::map<std::string, double>& tolerance_overrides);

/// Golden tables: lines of "name v1 v2 ...", '#' comments allowed.
std::map<std::string, std::vector<double>> read_golden_table(const std::string& path);
void write_golden_table(const std::string& path,
                        const std::map<std::string, std::vector<double>>& table,
                        const std::string& header_comment);

}  // namespace carnot
