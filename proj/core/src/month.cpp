#include "atrisk/month.hpp"

#include <charconv>
#include <cstdio>

#include "atrisk/errors.hpp"

namespace atrisk {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Month::Month(int year, int month) {
  if (month < 1 || month > 12) {
    throw ArgumentError("month out of range: " + std::to_string(month));
  }
  index = year * 12 + month - 1;
}

std::string Month::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year(), month());
  return buf;
}

Month Month::parse(std::string_view text) {
  int y = 0, m = 0, d = 0;
  auto fail = [&]() -> Month {
    throw ParseError("malformed date: '" + std::string(text) + "'");
  };

  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    // M/D/YYYY
    auto rest = text.substr(slash + 1);
    auto slash2 = rest.find('/');
    if (slash2 == std::string_view::npos) return fail();
    if (!parse_int(text.substr(0, slash), m) ||
        !parse_int(rest.substr(0, slash2), d) ||
        !parse_int(rest.substr(slash2 + 1), y)) {
      return fail();
    }
    if (m < 1 || m > 12 || d < 1 || d > 31 || y < 1000) return fail();
    return Month(y, m);
  }

  auto dash = text.find('-');
  if (dash == std::string_view::npos) return fail();
  auto rest = text.substr(dash + 1);
  auto dash2 = rest.find('-');
  std::string_view month_part = dash2 == std::string_view::npos ? rest : rest.substr(0, dash2);
  if (!parse_int(text.substr(0, dash), y) || !parse_int(month_part, m)) return fail();
  if (m < 1 || m > 12 || y < 1000) return fail();
  return Month(y, m);
}

}  // namespace atrisk
