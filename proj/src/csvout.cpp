#include "rwrp/csvout.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace rwrp {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  // decimal-point floats regardless of locale quirks
  for (char* p = buf; *p; ++p)
    if (*p == ',') *p = '.';
  return buf;
}

std::string fmt_int(std::int64_t v) { return std::to_string(v); }
std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& columns,
                     const RunMeta& meta)
    : os_(os), width_(columns.size()) {
  meta_fields_ = {meta.config_hash, fmt_u64(meta.seed), meta.versions};
  std::string header;
  for (const auto& c : columns) {
    header += csv_quote(c);
    header += ',';
  }
  header += "config_hash,seed,versions";
  os_ << header << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_)
    throw std::invalid_argument("csv row width mismatch");
  std::string line;
  for (const auto& f : fields) {
    line += csv_quote(f);
    line += ',';
  }
  for (std::size_t i = 0; i < meta_fields_.size(); ++i) {
    line += csv_quote(meta_fields_[i]);
    if (i + 1 < meta_fields_.size()) line += ',';
  }
  os_ << line << '\n';
}

}  // namespace rwrp
