#include "deltaloop/csv.hpp"

#include <cmath>
#include <cstdio>

#include "deltaloop/errors.hpp"

namespace deltaloop {

namespace {

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

struct Formatter {
  std::string operator()(double v) const {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  std::string operator()(long long v) const { return std::to_string(v); }
  std::string operator()(std::size_t v) const { return std::to_string(v); }
  std::string operator()(int v) const { return std::to_string(v); }
  std::string operator()(bool v) const { return v ? "true" : "false"; }
  std::string operator()(const std::string& v) const { return quoted(v); }
};

}  // namespace

std::string format_field(const CsvField& f) { return std::visit(Formatter{}, f); }

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns, const std::string& units)
    : out_(out), columns_(columns.size()) {
  if (columns.empty()) throw PreconditionError("CsvWriter: no columns");
  out_ << "# units: " << units << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvField>& fields) {
  if (fields.size() != columns_) throw PreconditionError("CsvWriter: field count does not match the header");
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << format_field(fields[i]);
  out_ << '\n';
  ++rows_;
}

}  // namespace deltaloop
