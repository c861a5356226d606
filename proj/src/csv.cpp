#include "reviewbomb/csv.hpp"

namespace reviewbomb {

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  int c = in_.get();
  if (c == EOF) return false;
  record_line_ = line_;

  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (;; c = in_.get()) {
    if (quoted) {
      if (c == EOF) break;  // unterminated quote: take what we have
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    if (c == EOF || c == '\n') {
      if (c == '\n') ++line_;
      break;
    }
    if (c == '\r') {
      if (in_.peek() == '\n') continue;
      ++line_;
      break;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_started = false;
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
      continue;
    }
    field_started = true;
    field.push_back(static_cast<char>(c));
  }
  fields.push_back(std::move(field));
  return true;
}

}  // namespace reviewbomb
