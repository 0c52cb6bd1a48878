#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace morp {

// Dense vertex index, assigned in declaration order of the nodes file.
using vertex_id = std::uint32_t;

// Travel times are integer milliseconds.
using time_ms = std::int64_t;

// Costs are integer micro-units: a weight given in thousandths multiplied by a
// time in milliseconds. One second of unit-weighted travel is 1'000'000.
using cost_t = std::int64_t;

inline constexpr time_ms kInf = std::numeric_limits<time_ms>::max();
inline constexpr vertex_id kNoVertex = std::numeric_limits<vertex_id>::max();
inline constexpr cost_t kCostPerSecond = 1'000'000;

constexpr time_ms add_dist(time_ms a, time_ms b) {
  return (a == kInf || b == kInf) ? kInf : a + b;
}

struct parse_error : std::runtime_error {
  parse_error(std::string const& what, std::size_t line)
      : std::runtime_error{"line " + std::to_string(line) + ": " + what},
        line_{line} {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "12.345" for finite values, "inf" otherwise.
std::string format_seconds(time_ms t);

// Cost in micro-units rendered as seconds with six fractional digits.
std::string format_cost(cost_t c);

// Parses decimal seconds ("12.5", "inf") into milliseconds, rounding half up.
time_ms parse_seconds(std::string_view s);

// Parses a decimal such as "0.3" into thousandths (300), rounding half up.
std::int64_t parse_milli(std::string_view s);

}  // namespace morp
