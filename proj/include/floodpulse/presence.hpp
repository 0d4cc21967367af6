#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "floodpulse/dates.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/geo.hpp"

namespace floodpulse::presence {

/// One hourly person count at an anonymized antenna.
struct PresenceRecord {
  std::string antenna_id;
  geo::GeoPoint location;
  Date date{};
  int hour = 0;  // 0..23
  double count = 0;
};

inline bool valid_record(const PresenceRecord& r) {
  return !r.antenna_id.empty() && geo::valid_point(r.location) && r.hour >= 0 && r.hour <= 23 &&
         r.count >= 0 && std::isfinite(r.count);
}

/// Append-only store keyed by (antenna, date, hour); duplicates are rejected
/// and the first write wins.
class PresenceStore {
 public:
  struct AntennaData {
    geo::GeoPoint location;
    std::map<std::pair<Date, int>, double> counts;  // (date, hour) -> persons
  };

  /// Returns false when the (antenna, timestamp) slot is already taken.
  bool insert(const PresenceRecord& r) {
    if (!valid_record(r)) throw InvalidParameter("malformed presence record");
    auto [it, fresh] = antennas_.try_emplace(r.antenna_id, AntennaData{r.location, {}});
    return it->second.counts.emplace(std::make_pair(r.date, r.hour), r.count).second;
  }

  const std::map<std::string, AntennaData>& antennas() const { return antennas_; }
  bool empty() const { return antennas_.empty(); }
  std::size_t record_count() const {
    std::size_t n = 0;
    for (const auto& [id, a] : antennas_) n += a.counts.size();
    return n;
  }

 private:
  std::map<std::string, AntennaData> antennas_;
};

/// Half-open hour-of-day interval [begin, end), e.g. {20, 24} covers the
/// evening buckets 20..23.
struct HourInterval {
  int begin = 20;
  int end = 24;
  bool contains(int hour) const { return hour >= begin && hour < end; }
  void validate() const {
    if (begin < 0 || end > 24 || begin >= end)
      throw InvalidParameter("hour interval must be non-empty within one day");
  }
};

struct DaySeries {
  std::string antenna_id;
  std::vector<std::pair<Date, double>> entries;  // strictly increasing dates
};

/// Per antenna per date, sum of counts within the hour interval. Dates with
/// no in-interval record do not appear.
inline std::map<std::string, DaySeries> aggregate_daily_interval(const PresenceStore& store,
                                                                 HourInterval interval = {}) {
  interval.validate();
  std::map<std::string, DaySeries> out;
  for (const auto& [id, ant] : store.antennas()) {
    std::map<Date, double> sums;
    for (const auto& [key, count] : ant.counts)
      if (interval.contains(key.second)) sums[key.first] += count;
    if (sums.empty()) continue;
    DaySeries s{id, {sums.begin(), sums.end()}};
    out.emplace(id, std::move(s));
  }
  return out;
}

/// Per antenna per date, arithmetic mean over the hours that have records.
inline std::map<std::string, DaySeries> aggregate_daily_mean(const PresenceStore& store) {
  std::map<std::string, DaySeries> out;
  for (const auto& [id, ant] : store.antennas()) {
    std::map<Date, std::pair<double, std::size_t>> acc;
    for (const auto& [key, count] : ant.counts) {
      auto& slot = acc[key.first];
      slot.first += count;
      slot.second += 1;
    }
    if (acc.empty()) continue;
    DaySeries s{id, {}};
    for (const auto& [date, slot] : acc) s.entries.emplace_back(date, slot.first / double(slot.second));
    out.emplace(id, std::move(s));
  }
  return out;
}

struct WeekEntry {
  IsoWeek week;
  double value = 0;
  bool partial = false;  // fewer than 7 observed days
};

struct WeekSeries {
  std::string antenna_id;
  std::vector<WeekEntry> entries;
};

/// ISO-week mean of the daily values present in each week.
inline WeekSeries aggregate_weekly(const DaySeries& daily) {
  std::map<IsoWeek, std::pair<double, std::size_t>> acc;
  for (const auto& [date, value] : daily.entries) {
    auto& slot = acc[iso_week(date)];
    slot.first += value;
    slot.second += 1;
  }
  WeekSeries out{daily.antenna_id, {}};
  for (const auto& [week, slot] : acc)
    out.entries.push_back({week, slot.first / double(slot.second), slot.second < 7});
  return out;
}

inline constexpr int kNightBegin = 1;  // discarded hours: kNightBegin..kNightEnd inclusive
inline constexpr int kNightEnd = 7;

struct HourSlot {
  Date date{};
  int hour = 0;
  std::optional<double> value;  // absent when no record exists
};

/// Hourly slots over event_day +- span, night hours dropped. Every remaining
/// slot is emitted, with missing observations left empty.
inline std::map<std::string, std::vector<HourSlot>> hourly_event_window(
    const PresenceStore& store, Date event_day, int span = 3, int night_begin = kNightBegin,
    int night_end = kNightEnd) {
  if (span < 0) throw InvalidParameter("span must be >= 0");
  std::map<std::string, std::vector<HourSlot>> out;
  for (const auto& [id, ant] : store.antennas()) {
    std::vector<HourSlot> slots;
    for (Date d = event_day - Days(span); d <= event_day + Days(span); d += Days(1))
      for (int h = 0; h < 24; ++h) {
        if (h >= night_begin && h <= night_end) continue;
        auto it = ant.counts.find({d, h});
        slots.push_back({d, h,
                         it == ant.counts.end() ? std::nullopt : std::make_optional(it->second)});
      }
    out.emplace(id, std::move(slots));
  }
  return out;
}

/// z_t = (x_t - mean) / sigma with population sigma; a constant series maps
/// to all zeros.
inline std::vector<double> zscore(std::span<const double> series) {
  if (series.empty()) throw EmptySeries("zscore of empty series");
  const double n = double(series.size());
  double mean = 0;
  for (double v : series) mean += v;
  mean /= n;
  double var = 0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= n;
  const double sigma = std::sqrt(var);
  std::vector<double> out(series.size(), 0.0);
  if (sigma > 0)
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - mean) / sigma;
  return out;
}

/// Per-antenna z-score series over labelled time bins.
struct ZMap {
  // antenna -> ordered (bin label, z)
  std::map<std::string, std::vector<std::pair<std::string, double>>> series;
};

inline ZMap zmap_from_daily(const std::map<std::string, DaySeries>& daily) {
  ZMap zm;
  for (const auto& [id, s] : daily) {
    std::vector<double> values;
    values.reserve(s.entries.size());
    for (const auto& [date, v] : s.entries) values.push_back(v);
    const auto z = zscore(values);
    auto& out = zm.series[id];
    for (std::size_t i = 0; i < z.size(); ++i)
      out.emplace_back(format_date(s.entries[i].first), z[i]);
  }
  return zm;
}

namespace detail {
template <typename InRegion>
double census_over(const PresenceStore& store, Date date, HourInterval interval,
                   InRegion&& in_region) {
  interval.validate();
  double sum = 0;
  std::size_t n = 0;
  for (const auto& [id, ant] : store.antennas()) {
    if (!in_region(ant.location)) continue;
    double day_sum = 0;
    bool any = false;
    for (int h = interval.begin; h < interval.end; ++h) {
      auto it = ant.counts.find({date, h});
      if (it != ant.counts.end()) {
        day_sum += it->second;
        any = true;
      }
    }
    if (any) {
      sum += day_sum;
      ++n;
    }
  }
  if (n == 0) throw NoAntennaCoverage("no antenna with data in region on date");
  return sum / double(n);
}
}  // namespace detail

/// Mean evening-interval presence over the antennas inside the region.
inline double dynamic_census(const PresenceStore& store, const geo::BoundingBox& region,
                             Date date, HourInterval interval = {}) {
  return detail::census_over(store, date, interval,
                             [&](geo::GeoPoint p) { return region.contains(p); });
}

inline double dynamic_census(const PresenceStore& store, const geo::RingPolygon& region,
                             Date date, HourInterval interval = {}) {
  return detail::census_over(store, date, interval,
                             [&](geo::GeoPoint p) { return geo::point_in_polygon(p, region); });
}

}  // namespace floodpulse::presence
