#pragma once

// Deterministic CSV output. The first line is a `# units:` comment, the second
// the column header; doubles are written with 17 significant digits.

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace deltaloop {

using CsvField = std::variant<double, long long, std::size_t, int, bool, std::string>;

std::string format_field(const CsvField& f);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns, const std::string& units);

  void row(const std::vector<CsvField>& fields);
  std::size_t rows() const { return rows_; }

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

}  // namespace deltaloop
