#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "floodpulse/presence.hpp"

using namespace floodpulse;
using presence::PresenceRecord;
using presence::PresenceStore;

namespace {

const Date kDay = make_date(2014, 9, 29);

PresenceStore store_with_hours(const std::vector<std::pair<int, double>>& hours,
                               const std::string& antenna = "a1") {
  PresenceStore store;
  for (const auto& [h, c] : hours) store.insert({antenna, {43.6, 3.9}, kDay, h, c});
  return store;
}

}  // namespace

TEST_CASE("store rejects duplicate (antenna, timestamp) slots") {
  PresenceStore store;
  CHECK(store.insert({"a1", {43.6, 3.9}, kDay, 10, 5}));
  CHECK_FALSE(store.insert({"a1", {43.6, 3.9}, kDay, 10, 7}));  // first write wins
  CHECK(store.insert({"a1", {43.6, 3.9}, kDay, 11, 7}));
  CHECK(store.insert({"a2", {43.7, 3.8}, kDay, 10, 7}));
  CHECK(store.record_count() == 3);
  CHECK_THROWS_AS(store.insert({"a1", {43.6, 3.9}, kDay, 24, 1}), InvalidParameter);
  CHECK_THROWS_AS(store.insert({"a1", {43.6, 3.9}, kDay, 3, -1}), InvalidParameter);
}

TEST_CASE("evening interval cumulates hour buckets 20..23") {
  auto store = store_with_hours({{20, 5}, {21, 5}, {22, 5}, {23, 5}, {19, 99}, {0, 99}});
  const auto daily = presence::aggregate_daily_interval(store);
  REQUIRE(daily.count("a1") == 1);
  REQUIRE(daily.at("a1").entries.size() == 1);
  CHECK(daily.at("a1").entries[0].second == 20.0);  // 4 x 5, hour 19 excluded
}

TEST_CASE("interval sums only the hours present") {
  auto store = store_with_hours({{20, 3}, {21, 7}});
  const auto daily = presence::aggregate_daily_interval(store);
  CHECK(daily.at("a1").entries[0].second == 10.0);
}

TEST_CASE("dates without in-interval records are absent") {
  auto store = store_with_hours({{3, 100}});
  const auto daily = presence::aggregate_daily_interval(store);
  CHECK(daily.empty());
  CHECK(presence::aggregate_daily_interval(PresenceStore{}).empty());
}

TEST_CASE("interval validation") {
  CHECK_THROWS_AS(presence::aggregate_daily_interval(PresenceStore{}, {10, 10}),
                  InvalidParameter);
  CHECK_THROWS_AS(presence::aggregate_daily_interval(PresenceStore{}, {-1, 5}),
                  InvalidParameter);
  CHECK_THROWS_AS(presence::aggregate_daily_interval(PresenceStore{}, {20, 25}),
                  InvalidParameter);
}

TEST_CASE("daily mean averages over observed hours") {
  std::vector<std::pair<int, double>> hours;
  for (int h = 0; h < 24; ++h) hours.emplace_back(h, double(h));
  auto store = store_with_hours(hours);
  const auto daily = presence::aggregate_daily_mean(store);
  CHECK(daily.at("a1").entries[0].second == 11.5);

  auto single = store_with_hours({{3, 7}});
  CHECK(presence::aggregate_daily_mean(single).at("a1").entries[0].second == 7.0);
}

TEST_CASE("full-day interval equals 24x the daily mean on complete days") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> count(0, 50);
  PresenceStore store;
  for (int d = 0; d < 5; ++d)
    for (int h = 0; h < 24; ++h)
      store.insert({"a1", {43.6, 3.9}, kDay + Days(d), h, std::floor(count(rng))});
  const auto sums = presence::aggregate_daily_interval(store, {0, 24});
  const auto means = presence::aggregate_daily_mean(store);
  REQUIRE(sums.at("a1").entries.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(sums.at("a1").entries[i].second ==
          Catch::Approx(24.0 * means.at("a1").entries[i].second).epsilon(1e-12));
}

TEST_CASE("weekly aggregation follows iso weeks") {
  // 2014-09-29 is a Monday
  presence::DaySeries daily{"a1", {}};
  for (int d = 0; d < 7; ++d) daily.entries.emplace_back(kDay + Days(d), double(d + 1));
  const auto weekly = presence::aggregate_weekly(daily);
  REQUIRE(weekly.entries.size() == 1);
  CHECK(weekly.entries[0].week == IsoWeek{2014, 40});
  CHECK(weekly.entries[0].value == 4.0);  // mean of 1..7
  CHECK_FALSE(weekly.entries[0].partial);
}

TEST_CASE("weeks with fewer than seven observed days are partial") {
  presence::DaySeries daily{"a1", {}};
  daily.entries.emplace_back(kDay, 2.0);
  daily.entries.emplace_back(kDay + Days(2), 4.0);
  daily.entries.emplace_back(kDay + Days(4), 6.0);
  const auto weekly = presence::aggregate_weekly(daily);
  REQUIRE(weekly.entries.size() == 1);
  CHECK(weekly.entries[0].value == 4.0);
  CHECK(weekly.entries[0].partial);
}

TEST_CASE("constant daily series aggregates to that constant") {
  presence::DaySeries daily{"a1", {}};
  for (int d = 0; d < 21; ++d) daily.entries.emplace_back(kDay + Days(d), 8.25);
  for (const auto& e : presence::aggregate_weekly(daily).entries) {
    CHECK(e.value == 8.25);
    CHECK_FALSE(e.partial);
  }
}

TEST_CASE("hourly event window drops night hours") {
  PresenceStore store;
  for (int d = -3; d <= 3; ++d)
    for (int h = 0; h < 24; ++h)
      store.insert({"a1", {43.6, 3.9}, kDay + Days(d), h, 1.0});
  const auto windows = presence::hourly_event_window(store, kDay, 3);
  REQUIRE(windows.count("a1") == 1);
  const auto& slots = windows.at("a1");
  CHECK(slots.size() == 119);  // 7 days x (24 - 7) hours
  for (const auto& s : slots) {
    CHECK((s.hour < 1 || s.hour > 7));
    CHECK(s.value.has_value());
  }
  // boundary hours 0 and 8 stay in
  CHECK(std::count_if(slots.begin(), slots.end(), [](const auto& s) { return s.hour == 0; }) == 7);
  CHECK(std::count_if(slots.begin(), slots.end(), [](const auto& s) { return s.hour == 8; }) == 7);
}

TEST_CASE("hourly event window marks missing observations") {
  auto store = store_with_hours({{12, 3.0}});
  const auto windows = presence::hourly_event_window(store, kDay, 0);
  const auto& slots = windows.at("a1");
  CHECK(slots.size() == 17);
  std::size_t present = 0;
  for (const auto& s : slots) present += s.value.has_value() ? 1 : 0;
  CHECK(present == 1);
  CHECK_THROWS_AS(presence::hourly_event_window(store, kDay, -1), InvalidParameter);
}

TEST_CASE("zscore fixed points") {
  CHECK(presence::zscore(std::vector<double>{2, 2, 2}) == std::vector<double>{0, 0, 0});
  CHECK(presence::zscore(std::vector<double>{5}) == std::vector<double>{0});
  const auto z = presence::zscore(std::vector<double>{1, 2, 3});
  REQUIRE(z.size() == 3);
  CHECK(z[0] == Catch::Approx(-1.2247).margin(1e-3));
  CHECK(z[1] == Catch::Approx(0.0).margin(1e-12));
  CHECK(z[2] == Catch::Approx(1.2247).margin(1e-3));
  CHECK_THROWS_AS(presence::zscore(std::vector<double>{}), EmptySeries);
}

TEST_CASE("zscore normalizes and is affine invariant") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> value(-100, 100);
  std::uniform_real_distribution<double> scale(0.1, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs;
    for (int i = 0; i < 40; ++i) xs.push_back(value(rng));
    const auto z = presence::zscore(xs);

    double mean = 0, var = 0;
    for (double v : z) mean += v;
    mean /= double(z.size());
    for (double v : z) var += (v - mean) * (v - mean);
    var /= double(z.size());
    CHECK(std::fabs(mean) <= 1e-9);
    CHECK(std::fabs(std::sqrt(var) - 1.0) <= 1e-9);

    const double a = scale(rng), b = value(rng);
    std::vector<double> ys;
    for (double v : xs) ys.push_back(a * v + b);
    const auto zy = presence::zscore(ys);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(zy[i] == Catch::Approx(z[i]).margin(1e-9));
  }
}

TEST_CASE("zmap is built per antenna") {
  PresenceStore store;
  for (int d = 0; d < 5; ++d) {
    store.insert({"a1", {43.6, 3.9}, kDay + Days(d), 21, double(d)});
    store.insert({"a2", {43.7, 3.8}, kDay + Days(d), 21, 7.0});
  }
  const auto zm = presence::zmap_from_daily(presence::aggregate_daily_interval(store));
  REQUIRE(zm.series.count("a1") == 1);
  REQUIRE(zm.series.count("a2") == 1);
  for (const auto& [label, z] : zm.series.at("a2")) CHECK(z == 0.0);  // constant series
  CHECK(zm.series.at("a1").front().first == format_date(kDay));
}

TEST_CASE("dynamic census averages antennas inside the region") {
  PresenceStore store;
  auto add_day = [&](const std::string& id, geo::GeoPoint loc, double per_hour) {
    for (int h = 20; h < 24; ++h) store.insert({id, loc, kDay, h, per_hour});
  };
  add_day("in_1", {43.60, 3.90}, 25.0);   // evening total 100
  add_day("in_2", {43.62, 3.92}, 50.0);   // evening total 200
  add_day("out_1", {48.85, 2.35}, 999.0);  // outside the region

  const geo::BoundingBox region{43.5, 3.8, 43.7, 4.0};
  CHECK(presence::dynamic_census(store, region, kDay) == 150.0);

  SECTION("single antenna") {
    PresenceStore one;
    for (int h = 20; h < 24; ++h) one.insert({"a", {43.6, 3.9}, kDay, h, 25.0});
    CHECK(presence::dynamic_census(one, region, kDay) == 100.0);
  }
  SECTION("no antenna in region") {
    const geo::BoundingBox empty_region{0.0, 0.0, 1.0, 1.0};
    CHECK_THROWS_AS(presence::dynamic_census(store, empty_region, kDay), NoAntennaCoverage);
  }
  SECTION("no data on the requested date") {
    CHECK_THROWS_AS(presence::dynamic_census(store, region, kDay + Days(30)),
                    NoAntennaCoverage);
  }
  SECTION("polygon region") {
    const geo::RingPolygon poly{
        {{43.5, 3.8}, {43.5, 4.0}, {43.7, 4.0}, {43.7, 3.8}}, {}};
    CHECK(presence::dynamic_census(store, poly, kDay) == 150.0);
  }
  SECTION("permutation invariance") {
    PresenceStore reordered;
    for (int h = 23; h >= 20; --h) {
      reordered.insert({"in_2", {43.62, 3.92}, kDay, h, 50.0});
      reordered.insert({"in_1", {43.60, 3.90}, kDay, h, 25.0});
    }
    CHECK(presence::dynamic_census(reordered, region, kDay) == 150.0);
  }
}
