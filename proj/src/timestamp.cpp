#include "ocular/timestamp.hpp"

#include <fmt/format.h>

#include <charconv>

#include "ocular/error.hpp"

namespace ocular {

namespace {

// Howard Hinnant's civil-calendar conversions.
constexpr long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

struct Civil {
  long long y;
  unsigned m, d;
};

constexpr Civil civil_from_days(long long z) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long long y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return Civil{y + (m <= 2), m, d};
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::InvalidArgument, fmt::format("not an ISO 8601 UTC timestamp: '{}'", text));
}

int digits(std::string_view text, std::size_t pos, std::size_t len) {
  if (pos + len > text.size()) bad(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
  if (ec != std::errc{} || ptr != text.data() + pos + len) bad(text);
  return v;
}

}  // namespace

Timestamp now_utc() {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

std::string format_iso8601(Timestamp t) {
  const long long ms = t.time_since_epoch().count();
  long long days = ms / 86400000;
  long long rem = ms % 86400000;
  if (rem < 0) {
    rem += 86400000;
    --days;
  }
  const Civil c = civil_from_days(days);
  const long long secs = rem / 1000;
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", c.y, c.m, c.d, secs / 3600,
                     (secs / 60) % 60, secs % 60, rem % 1000);
}

Timestamp parse_iso8601(std::string_view text) {
  if (text.size() < 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':') {
    bad(text);
  }
  const int year = digits(text, 0, 4), month = digits(text, 5, 2), day = digits(text, 8, 2);
  const int hour = digits(text, 11, 2), minute = digits(text, 14, 2), second = digits(text, 17, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) bad(text);

  std::size_t pos = 19;
  long long millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int scale = 100;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (scale > 0) millis += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == start) bad(text);
  }
  const std::string_view zone = text.substr(pos);
  if (zone != "Z" && zone != "+00:00") bad(text);

  const long long days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  const long long ms = ((days * 24 + hour) * 60 + minute) * 60000LL + second * 1000LL + millis;
  return Timestamp(std::chrono::milliseconds(ms));
}

}  // namespace ocular
