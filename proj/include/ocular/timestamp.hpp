#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace ocular {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now_utc();

// "YYYY-MM-DDTHH:MM:SS.mmmZ"
std::string format_iso8601(Timestamp t);

// Accepts the format above, with or without fractional seconds, and a
// trailing "Z" or "+00:00". Throws InvalidArgument on anything else.
Timestamp parse_iso8601(std::string_view text);

inline double days_between(Timestamp from, Timestamp to) {
  return std::chrono::duration<double>(to - from).count() / 86400.0;
}

}  // namespace ocular
