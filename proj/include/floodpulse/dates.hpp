#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "floodpulse/errors.hpp"

namespace floodpulse {

/// Calendar date at day resolution (UTC).
using Date = std::chrono::sys_days;
using Days = std::chrono::days;

inline Date make_date(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                  std::chrono::day{day}};
  if (!ymd.ok()) throw InvalidParameter("invalid calendar date");
  return Date{ymd};
}

namespace detail {
inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}
}  // namespace detail

/// Parses "YYYY-MM-DD". Returns nullopt on malformed input.
inline std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y, m, d;
  if (!detail::parse_int(s.substr(0, 4), y) || !detail::parse_int(s.substr(5, 2), m) ||
      !detail::parse_int(s.substr(8, 2), d))
    return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                  std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

inline std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

inline int year_of(Date d) { return int(std::chrono::year_month_day{d}.year()); }

inline bool is_leap_year(int y) {
  return std::chrono::year{y}.is_leap();
}

/// 1-based ordinal day within the calendar year.
inline int day_of_year(Date d) {
  const int y = year_of(d);
  return int((d - Date{std::chrono::year{y} / 1 / 1}).count()) + 1;
}

/// True exactly on February 29.
inline bool is_leap_day(Date d) {
  std::chrono::year_month_day ymd{d};
  return ymd.month() == std::chrono::month{2} && ymd.day() == std::chrono::day{29};
}

struct IsoWeek {
  int year = 0;
  int week = 0;
  auto operator<=>(const IsoWeek&) const = default;
};

inline int iso_weeks_in_year(int y) {
  auto p = [](int yy) { return (yy + yy / 4 - yy / 100 + yy / 400) % 7; };
  return 52 + ((p(y) == 4 || p(y - 1) == 3) ? 1 : 0);
}

/// ISO-8601 week numbering; the year is the week-based year, not the calendar one.
inline IsoWeek iso_week(Date d) {
  const int y = year_of(d);
  const int dow = int(std::chrono::weekday{d}.iso_encoding());  // Mon=1..Sun=7
  const int w = (day_of_year(d) - dow + 10) / 7;
  if (w < 1) return {y - 1, iso_weeks_in_year(y - 1)};
  if (w > iso_weeks_in_year(y)) return {y + 1, 1};
  return {y, w};
}

/// Point in time with second resolution, stored in UTC.
struct Timestamp {
  std::chrono::sys_seconds tp{};

  Date day() const { return std::chrono::floor<Days>(tp); }
  int hour() const {
    auto since_midnight = tp - day();
    return int(std::chrono::duration_cast<std::chrono::hours>(since_midnight).count());
  }
  auto operator<=>(const Timestamp&) const = default;
};

/// Parses ISO-8601 timestamps: "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS[.fff][Z|±HH:MM|±HHMM]".
/// A space is accepted in place of 'T'. Offsets are folded into UTC.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  if (s.size() < 10) return std::nullopt;
  auto date = parse_date(s.substr(0, 10));
  if (!date) return std::nullopt;
  std::chrono::sys_seconds tp = *date;
  if (s.size() == 10) return Timestamp{tp};
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;

  std::string_view rest = s.substr(11);
  if (rest.size() < 8 || rest[2] != ':' || rest[5] != ':') return std::nullopt;
  int hh, mm, ss;
  if (!detail::parse_int(rest.substr(0, 2), hh) || !detail::parse_int(rest.substr(3, 2), mm) ||
      !detail::parse_int(rest.substr(6, 2), ss))
    return std::nullopt;
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  if (ss == 60) ss = 59;  // fold leap seconds
  tp += std::chrono::hours(hh) + std::chrono::minutes(mm) + std::chrono::seconds(ss);
  rest = rest.substr(8);

  if (!rest.empty() && rest[0] == '.') {  // fractional seconds: ignored
    std::size_t i = 1;
    while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
    if (i == 1) return std::nullopt;
    rest = rest.substr(i);
  }
  if (rest.empty()) return Timestamp{tp};
  if (rest == "Z") return Timestamp{tp};
  if (rest[0] != '+' && rest[0] != '-') return std::nullopt;
  const int sign = rest[0] == '+' ? 1 : -1;
  rest = rest.substr(1);
  int oh = 0, om = 0;
  if (rest.size() == 5 && rest[2] == ':') {
    if (!detail::parse_int(rest.substr(0, 2), oh) || !detail::parse_int(rest.substr(3, 2), om))
      return std::nullopt;
  } else if (rest.size() == 4) {
    if (!detail::parse_int(rest.substr(0, 2), oh) || !detail::parse_int(rest.substr(2, 2), om))
      return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (oh > 14 || om > 59) return std::nullopt;
  tp -= sign * (std::chrono::hours(oh) + std::chrono::minutes(om));
  return Timestamp{tp};
}

/// Closed date interval [start, end].
struct DateRange {
  Date start{};
  Date end{};

  bool contains(Date d) const { return d >= start && d <= end; }
  /// Number of calendar days covered (inclusive).
  int days() const { return int((end - start).count()) + 1; }
  auto operator<=>(const DateRange&) const = default;
};

inline DateRange make_range(Date start, Date end) {
  if (end < start) throw InvalidRange("inverted date range");
  return {start, end};
}

}  // namespace floodpulse
