#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "floodpulse/rainfall.hpp"

using namespace floodpulse;
using rainfall::RainfallStore;
using rainfall::Station;

TEST_CASE("nearest station selection") {
  const std::vector<Station> stations{
      {"st_b", {43.6, 3.9}, "B"},
      {"st_a", {48.85, 2.35}, "A"},
      {"st_c", {40.4, -3.7}, "C"},
  };
  CHECK(rainfall::nearest_station(stations, {43.61, 3.91}).id == "st_b");
  CHECK(rainfall::nearest_station(stations, {48.85, 2.35}).id == "st_a");

  SECTION("single station") {
    const std::vector<Station> one{{"only", {0, 0}, ""}};
    CHECK(rainfall::nearest_station(one, {50, 50}).id == "only");
  }
  SECTION("empty set") {
    CHECK_THROWS_AS(rainfall::nearest_station({}, {0, 0}), NoStations);
  }
  SECTION("colocated stations tie-break on id") {
    const std::vector<Station> tied{{"st_z", {10, 10}, ""}, {"st_a", {10, 10}, ""}};
    CHECK(rainfall::nearest_station(tied, {10.01, 10.0}).id == "st_a");
  }
  SECTION("permutation invariance") {
    auto shuffled = stations;
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      CHECK(rainfall::nearest_station(shuffled, {43.0, 3.0}).id ==
            rainfall::nearest_station(stations, {43.0, 3.0}).id);
    }
  }
}

namespace {

RainfallStore sample_store() {
  RainfallStore store;
  store.add_station({"near", {43.6, 3.9}, "near"});
  store.add_station({"far", {10.0, 10.0}, "far"});
  for (int d = 0; d < 10; ++d)
    store.add_measurement("near", make_date(2014, 9, 20) + Days(d), double(d));
  store.add_measurement("far", make_date(2014, 9, 20), 99.0);
  return store;
}

}  // namespace

TEST_CASE("query slices the nearest station series") {
  const auto store = sample_store();
  const geo::GeoPoint p{43.61, 3.91};

  const auto full = store.query({make_date(2014, 9, 20), make_date(2014, 9, 29)}, p);
  CHECK(full.station_id == "near");
  CHECK(full.entries.size() == 10);

  const auto slice = store.query({make_date(2014, 9, 22), make_date(2014, 9, 24)}, p);
  REQUIRE(slice.entries.size() == 3);
  CHECK(slice.entries.front().second == 2.0);
  CHECK(slice.entries.back().second == 4.0);

  const auto single = store.query({make_date(2014, 9, 25), make_date(2014, 9, 25)}, p);
  CHECK(single.entries.size() == 1);

  const auto before = store.query({make_date(2000, 1, 1), make_date(2000, 12, 31)}, p);
  CHECK(before.entries.empty());  // empty, not an error

  CHECK_THROWS_AS(store.query({make_date(2014, 9, 24), make_date(2014, 9, 22)}, p),
                  InvalidRange);
  CHECK_THROWS_AS(RainfallStore{}.query({make_date(2014, 9, 22), make_date(2014, 9, 24)}, p),
                  NoStations);
}

TEST_CASE("query preserves gaps exactly") {
  RainfallStore store;
  store.add_station({"s", {0, 0}, ""});
  const std::vector<int> offsets{0, 1, 4, 9, 10};
  for (int off : offsets) store.add_measurement("s", make_date(2015, 6, 1) + Days(off), 1.0 + off);
  const auto out = store.query({make_date(2015, 6, 1), make_date(2015, 6, 30)}, {0, 0});
  REQUIRE(out.entries.size() == offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i)
    CHECK(out.entries[i].first == make_date(2015, 6, 1) + Days(offsets[i]));
}

TEST_CASE("store rejects duplicates and bad values") {
  RainfallStore store;
  CHECK(store.add_station({"s", {0, 0}, ""}));
  CHECK_FALSE(store.add_station({"s", {1, 1}, ""}));
  CHECK(store.add_measurement("s", make_date(2015, 6, 1), 5.0));
  CHECK_FALSE(store.add_measurement("s", make_date(2015, 6, 1), 7.0));
  CHECK_THROWS_AS(store.add_measurement("s", make_date(2015, 6, 2), -1.0), InvalidParameter);
}

TEST_CASE("historic profile aligns day-of-year columns") {
  rainfall::RainfallSeries series{"s", {}};
  // a full non-leap year
  for (Date d = make_date(2015, 1, 1); d <= make_date(2015, 12, 31); d += Days(1))
    series.entries.emplace_back(d, double(day_of_year(d)));
  const auto hp = rainfall::historic_profile(series, std::vector<int>{2015});
  REQUIRE(hp.rows.size() == 1);
  REQUIRE(hp.rows[0].size() == 365);
  for (int i = 0; i < 365; ++i) {
    REQUIRE(hp.rows[0][std::size_t(i)].has_value());
    CHECK(*hp.rows[0][std::size_t(i)] == double(i + 1));
  }
}

TEST_CASE("historic profile drops february 29") {
  rainfall::RainfallSeries series{"s", {}};
  for (Date d = make_date(2016, 1, 1); d <= make_date(2016, 12, 31); d += Days(1))
    series.entries.emplace_back(d, is_leap_day(d) ? 999.0 : 1.0);
  const auto hp = rainfall::historic_profile(series, std::vector<int>{2016});
  REQUIRE(hp.rows[0].size() == 365);
  double sum = 0;
  for (const auto& cell : hp.rows[0]) {
    REQUIRE(cell.has_value());
    sum += *cell;
  }
  CHECK(sum == 365.0);  // the leap-day value never shows up
  // March 1st lands in the same column for leap and non-leap years
  CHECK(*hp.rows[0][59] == 1.0);
}

TEST_CASE("historic profile marks gaps and sums to the series") {
  rainfall::RainfallSeries series{"s", {}};
  for (Date d = make_date(2015, 1, 1); d <= make_date(2015, 12, 31); d += Days(1)) {
    const auto month = std::chrono::year_month_day{d}.month();
    if (month == std::chrono::month{6}) continue;  // June missing
    series.entries.emplace_back(d, 2.0);
  }
  const auto hp = rainfall::historic_profile(series, std::vector<int>{2015, 2020});
  REQUIRE(hp.rows.size() == 2);
  double sum = 0;
  std::size_t gaps = 0;
  for (const auto& cell : hp.rows[0]) {
    if (cell)
      sum += *cell;
    else
      ++gaps;
  }
  CHECK(gaps == 30);
  double expected = 0;
  for (const auto& [date, mm] : series.entries) expected += mm;
  CHECK(sum == expected);
  // the year with no data is all gaps
  for (const auto& cell : hp.rows[1]) CHECK_FALSE(cell.has_value());

  CHECK_THROWS_AS(rainfall::historic_profile(series, {}), InvalidParameter);
}
