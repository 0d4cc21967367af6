#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floodpulse/dates.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/geo.hpp"

namespace floodpulse::rainfall {

struct Station {
  std::string id;
  geo::GeoPoint location;
  std::string name;
};

struct RainfallSeries {
  std::string station_id;
  std::vector<std::pair<Date, double>> entries;  // strictly increasing dates, mm >= 0
};

/// Station minimizing great-circle distance; ties go to the smallest id.
inline const Station& nearest_station(std::span<const Station> stations, geo::GeoPoint point) {
  if (stations.empty()) throw NoStations("no stations loaded");
  const Station* best = &stations[0];
  double best_km = geo::haversine_km(point, best->location);
  for (const auto& st : stations.subspan(1)) {
    const double km = geo::haversine_km(point, st.location);
    if (km < best_km || (km == best_km && st.id < best->id)) {
      best = &st;
      best_km = km;
    }
  }
  return *best;
}

/// Read-only after load; concurrent queries are safe.
class RainfallStore {
 public:
  bool add_station(Station st) {
    if (!geo::valid_point(st.location)) throw InvalidParameter("station location out of bounds");
    for (const auto& existing : stations_)
      if (existing.id == st.id) return false;
    stations_.push_back(std::move(st));
    return true;
  }

  /// Rejects duplicate (station, date) rows; first write wins.
  bool add_measurement(const std::string& station_id, Date date, double mm) {
    if (mm < 0) throw InvalidParameter("rainfall must be >= 0");
    return cells_[station_id].emplace(date, mm).second;
  }

  std::span<const Station> stations() const { return stations_; }

  const Station& nearest(geo::GeoPoint p) const { return nearest_station(stations_, p); }

  RainfallSeries series_for(const std::string& station_id) const {
    RainfallSeries s{station_id, {}};
    auto it = cells_.find(station_id);
    if (it != cells_.end()) s.entries.assign(it->second.begin(), it->second.end());
    return s;
  }

  /// Nearest station's series restricted to [start, end]; gaps preserved.
  RainfallSeries query(DateRange interval, geo::GeoPoint point) const {
    if (interval.end < interval.start) throw InvalidRange("inverted interval");
    const Station& st = nearest(point);
    RainfallSeries all = series_for(st.id);
    RainfallSeries out{st.id, {}};
    for (const auto& e : all.entries)
      if (interval.contains(e.first)) out.entries.push_back(e);
    return out;
  }

 private:
  std::vector<Station> stations_;
  std::map<std::string, std::map<Date, double>> cells_;
};

/// Rows = requested years, columns = day-of-year 1..365 with February 29
/// dropped so columns align across years. Missing days stay empty.
struct HistoricProfile {
  std::vector<int> years;
  std::vector<std::vector<std::optional<double>>> rows;  // each of length 365
};

inline HistoricProfile historic_profile(const RainfallSeries& series, std::span<const int> years) {
  if (years.empty()) throw InvalidParameter("no years requested");
  HistoricProfile hp;
  hp.years.assign(years.begin(), years.end());
  hp.rows.assign(years.size(), std::vector<std::optional<double>>(365));
  std::map<int, std::size_t> row_of;
  for (std::size_t i = 0; i < hp.years.size(); ++i) row_of[hp.years[i]] = i;

  for (const auto& [date, mm] : series.entries) {
    auto it = row_of.find(year_of(date));
    if (it == row_of.end()) continue;
    if (is_leap_day(date)) continue;
    int doy = day_of_year(date);
    if (is_leap_year(year_of(date)) && doy > 60) --doy;  // skip the Feb 29 column
    hp.rows[it->second][std::size_t(doy - 1)] = mm;
  }
  return hp;
}

}  // namespace floodpulse::rainfall
