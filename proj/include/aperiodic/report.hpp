#ifndef APERIODIC_REPORT_HPP
#define APERIODIC_REPORT_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace aperiodic {

inline constexpr const char* kToolVersion = "0.1.0";

// 17 significant digits: round-trips any double. inf/nan print as
// "inf"/"-inf"/"nan".
std::string fmt17(double x);

// Tabular report with '#'-prefixed metadata lines (CSV) or the mirrored
// {"meta": ..., "columns": ..., "rows": ...} object (JSON).
class TableWriter {
 public:
  using Cell = std::variant<std::int64_t, double, std::string>;

  explicit TableWriter(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value) { meta(key, fmt17(value)); }
  void meta(const std::string& key, std::int64_t value) {
    meta(key, std::to_string(value));
  }

  void row(std::vector<Cell> cells);

  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;
  void write(std::ostream& os, const std::string& format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace aperiodic

#endif
