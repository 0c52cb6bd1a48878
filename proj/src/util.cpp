#include "morp/csv.hpp"
#include "morp/types.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace morp {

std::string_view trim(std::string_view s) {
  auto const ws = " \t\r\n";
  auto const b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) {
    return {};
  }
  auto const e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto const next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) {
      break;
    }
    pos = next + 1;
  }
  return out;
}

bool delimited_reader::next(std::vector<std::string_view>& fields) {
  while (std::getline(in_, buf_)) {
    ++line_;
    if (trim(buf_).empty()) {
      continue;
    }
    fields = split(buf_, sep_);
    return true;
  }
  return false;
}

std::string format_seconds(time_ms const t) {
  if (t == kInf) {
    return "inf";
  }
  char buf[32];
  auto const sign = t < 0 ? "-" : "";
  auto const a = t < 0 ? -t : t;
  std::snprintf(buf, sizeof(buf), "%s%lld.%03lld", sign,
                static_cast<long long>(a / 1000),
                static_cast<long long>(a % 1000));
  return buf;
}

std::string format_cost(cost_t const c) {
  char buf[40];
  auto const sign = c < 0 ? "-" : "";
  auto const a = c < 0 ? -c : c;
  std::snprintf(buf, sizeof(buf), "%s%lld.%06lld", sign,
                static_cast<long long>(a / kCostPerSecond),
                static_cast<long long>(a % kCostPerSecond));
  return buf;
}

namespace {

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument{"not a number: '" + std::string{s} + "'"};
  }
  return v;
}

}  // namespace

time_ms parse_seconds(std::string_view s) {
  s = trim(s);
  if (s == "inf") {
    return kInf;
  }
  auto const v = parse_double(s);
  if (!std::isfinite(v)) {
    throw std::invalid_argument{"not finite: '" + std::string{s} + "'"};
  }
  return static_cast<time_ms>(std::llround(v * 1000.0));
}

std::int64_t parse_milli(std::string_view s) {
  return static_cast<std::int64_t>(std::llround(parse_double(s) * 1000.0));
}

}  // namespace morp
