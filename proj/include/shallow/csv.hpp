#pragma once

// RFC 4180 reading and writing, with a configurable delimiter so TSV goes
// through the same code.

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "shallow/text.hpp"

namespace shallow::csv {

struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

inline bool needs_quotes(std::string_view field, char delim) {
  for (char c : field)
    if (c == delim || c == '"' || c == '\n' || c == '\r') return true;
  return false;
}

inline std::string quote(std::string_view field, char delim = ',') {
  if (!needs_quotes(field, delim)) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields, char delim = ',') {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << delim;
    os << quote(fields[i], delim);
  }
  os << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in, char delim = ',') : in_(in), delim_(delim) {}

  // Physical line on which the last returned record started (1-based).
  std::size_t record_line() const { return record_line_; }

  // Next record, or nullopt at end of input. Blank lines are skipped.
  std::optional<std::vector<std::string>> next() {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;      // inside a quoted section
    bool was_quoted = false;  // current field started with a quote
    bool any = false;
    record_line_ = line_ + 1;
    int ch;
    while ((ch = in_.get()) != std::char_traits<char>::eof()) {
      const char c = static_cast<char>(ch);
      any = true;
      if (quoted) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field += '"';
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field += c;
        }
        continue;
      }
      if (c == '"') {
        if (!field.empty() || was_quoted)
          throw ParseError(record_line_, "stray quote inside unquoted field");
        quoted = was_quoted = true;
      } else if (c == delim_) {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (c == '\r' && in_.peek() == '\n') {
        continue;
      } else if (c == '\n') {
        ++line_;
        if (fields.empty() && field.empty() && !was_quoted) {
          record_line_ = line_ + 1;
          any = false;
          continue;
        }
        fields.push_back(std::move(field));
        return fields;
      } else {
        if (was_quoted) throw ParseError(record_line_, "text after closing quote");
        field += c;
      }
    }
    if (quoted) throw ParseError(record_line_, "unterminated quoted field");
    if (!any) return std::nullopt;
    ++line_;
    fields.push_back(std::move(field));
    return fields;
  }

 private:
  std::istream& in_;
  char delim_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

}  // namespace shallow::csv
