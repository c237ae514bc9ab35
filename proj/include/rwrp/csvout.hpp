#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rwrp {

// RFC 4180 quoting: fields containing commas, quotes or newlines are wrapped
// in double quotes with embedded quotes doubled.
std::string csv_quote(const std::string& field);

// Shortest decimal form that round-trips the value exactly.
std::string fmt_double(double v);
std::string fmt_int(std::int64_t v);
std::string fmt_u64(std::uint64_t v);

// Provenance carried on every emitted row.
struct RunMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string versions;
};

// Writes a header on construction and appends the meta columns
// (config_hash, seed, versions) to every row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& columns,
            const RunMeta& meta);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
  std::size_t width_ = 0;
  std::vector<std::string> meta_fields_;
};

}  // namespace rwrp
