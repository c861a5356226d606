#pragma once

#include <istream>
#include <string>
#include <vector>

namespace reviewbomb {

/// Minimal RFC 4180 reader: comma separated, double-quote quoting with ""
/// escapes, quoted fields may span lines. CRLF and LF both end a record.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Reads the next record into `fields`. Returns false at end of input.
  bool next(std::vector<std::string>& fields);

  /// 1-based physical line where the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

}  // namespace reviewbomb
