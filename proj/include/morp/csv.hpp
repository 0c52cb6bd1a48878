#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace morp {

// Line-oriented reader for the simple delimited text formats used here.
// Quoting is not supported; none of the formats need it.
class delimited_reader {
public:
  delimited_reader(std::istream& in, char sep) : in_{in}, sep_{sep} {}

  // Reads the next non-blank line into fields. Returns false at end of input.
  bool next(std::vector<std::string_view>& fields);

  std::size_t line() const { return line_; }

private:
  std::istream& in_;
  char sep_;
  std::string buf_;
  std::size_t line_ = 0;
};

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

}  // namespace morp
