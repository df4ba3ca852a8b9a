#pragma once

#include <charconv>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>

#include "hexfem/errors.hpp"

namespace hexfem::detail {

/// Whitespace-separated token reader over one line of text.
class LineTokens {
 public:
  LineTokens(std::string_view line, std::size_t line_no)
      : rest_(line), line_no_(line_no) {}

  std::string_view next(const char* what) {
    skip_space();
    if (rest_.empty()) throw ParseError(line_no_, std::string("missing ") + what);
    const auto end = rest_.find_first_of(" \t");
    const auto tok = rest_.substr(0, end);
    rest_ = end == std::string_view::npos ? std::string_view{} : rest_.substr(end);
    return tok;
  }

  template <class T>
  T number(const char* what) {
    const auto tok = next(what);
    T value{};
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      throw ParseError(line_no_, std::string("invalid ") + what + " '" +
                                     std::string(tok) + "'");
    }
    return value;
  }

  bool at_end() {
    skip_space();
    return rest_.empty();
  }

  void expect_end() {
    if (!at_end()) {
      throw ParseError(line_no_, "unexpected trailing data '" +
                                     std::string(rest_) + "'");
    }
  }

 private:
  void skip_space() {
    const auto start = rest_.find_first_not_of(" \t");
    rest_ = start == std::string_view::npos ? std::string_view{} : rest_.substr(start);
  }

  std::string_view rest_;
  std::size_t line_no_;
};

/// getline that counts lines and strips a trailing '\r'.
inline bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  if (!std::getline(in, line)) return false;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace hexfem::detail
