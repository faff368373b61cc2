#include "aperiodic/report.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "aperiodic/errors.hpp"

namespace aperiodic {

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void TableWriter::meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void TableWriter::row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size()) {
    throw InputError("TableWriter: row width does not match the column list");
  }
  rows_.push_back(std::move(cells));
}

namespace {

std::string cell_text(const TableWriter::Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return fmt17(*d);
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const TableWriter::Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return fmt17(*d);  // JSON has no inf/nan literals
  }
  return std::get<std::string>(c);
}

}  // namespace

void TableWriter::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : meta_) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    os << (i ? "," : "") << columns_[i];
  }
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << cell_text(row[i]);
    }
    os << "\n";
  }
}

void TableWriter::write_json(std::ostream& os) const {
  nlohmann::json j;
  j["meta"] = nlohmann::json::object();
  for (const auto& [k, v] : meta_) j["meta"][k] = v;
  j["columns"] = columns_;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& c : row) jr.push_back(cell_json(c));
    j["rows"].push_back(std::move(jr));
  }
  os << j.dump(2) << "\n";
}

void TableWriter::write(std::ostream& os, const std::string& format) const {
  if (format == "csv") {
    write_csv(os);
  } else if (format == "json") {
    write_json(os);
  } else {
    throw InputError("TableWriter: unknown format '" + format + "'");
  }
}

}  // namespace aperiodic
