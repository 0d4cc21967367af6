#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "floodpulse/social.hpp"

using namespace floodpulse;
using social::Gender;
using social::SocialPost;

namespace {

Timestamp ts_on(Date d, int hour = 12) {
  Timestamp t;
  t.tp = d + std::chrono::hours(hour);
  return t;
}

SocialPost post(std::string id, Date d, std::string text, std::string author = "u1",
                Gender g = Gender::Unknown, std::optional<geo::GeoPoint> where = std::nullopt) {
  return {std::move(id), ts_on(d), std::move(text), std::move(author), g, where, "tw"};
}

const Date kDay = make_date(2017, 4, 1);

}  // namespace

TEST_CASE("keyword filter matches whole words, case-insensitively") {
  const auto lex = social::Lexicon::default_awareness();
  std::vector<SocialPost> posts{
      post("1", kDay, "Heavy RAIN tonight"),
      post("2", kDay, "brainstorm session"),
      post("3", kDay, "the river looks calm"),
      post("4", kDay, "nothing to see"),
  };
  const auto matched = social::keyword_filter(posts, lex, "en");
  REQUIRE(matched.size() == 2);
  CHECK(matched[0].id == "1");
  CHECK(matched[1].id == "3");

  SECTION("idempotent and a subset of the input") {
    const auto again = social::keyword_filter(matched, lex, "en");
    REQUIRE(again.size() == matched.size());
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].id == matched[i].id);
  }
  SECTION("case changes do not matter") {
    std::vector<SocialPost> shouty{post("1", kDay, "HEAVY rain TONIGHT")};
    CHECK(social::keyword_filter(shouty, lex, "en").size() == 1);
  }
  SECTION("unknown language") {
    CHECK_THROWS_AS(social::keyword_filter(posts, lex, "de"), UnknownLanguage);
  }
}

TEST_CASE("spanish lexicon matches accented keywords") {
  const auto lex = social::Lexicon::default_awareness();
  std::vector<SocialPost> posts{
      post("1", kDay, "inundación en Mocoa"),
      post("2", kDay, "inundación en Mocoa"),  // decomposed accent
      post("3", kDay, "el clima de hoy"),
      post("4", kDay, "nada que ver"),
  };
  CHECK(social::keyword_filter(posts, lex, "es").size() == 3);
}

TEST_CASE("daily counts over a range") {
  const DateRange range{kDay, kDay + Days(4)};
  SECTION("empty corpus gives a zero series") {
    const auto s = social::daily_counts({}, std::nullopt, range);
    REQUIRE(s.entries.size() == 5);
    for (const auto& e : s.entries) CHECK(e.value == 0.0);
  }
  SECTION("posts aggregate per date") {
    std::vector<SocialPost> posts{
        post("1", kDay + Days(1), "a"), post("2", kDay + Days(1), "b"),
        post("3", kDay + Days(1), "c"), post("4", kDay + Days(3), "d"),
        post("5", kDay + Days(30), "outside range"),
    };
    const auto s = social::daily_counts(posts, std::nullopt, range);
    CHECK(s.entries[1].value == 3.0);
    CHECK(s.entries[3].value == 1.0);
    double sum = 0;
    for (const auto& e : s.entries) sum += e.value;
    CHECK(sum == 4.0);
  }
  SECTION("bbox keeps only geotagged posts inside it") {
    const geo::BoundingBox bbox{43.0, 3.0, 44.0, 4.0};
    std::vector<SocialPost> posts{
        post("in", kDay, "a", "u1", Gender::Unknown, geo::GeoPoint{43.5, 3.5}),
        post("out", kDay, "b", "u1", Gender::Unknown, geo::GeoPoint{10.0, 10.0}),
        post("nogeo", kDay, "c"),
    };
    const auto gated = social::daily_counts(posts, bbox, range);
    CHECK(gated.entries[0].value == 1.0);
    const auto ungated = social::daily_counts(posts, std::nullopt, range);
    CHECK(ungated.entries[0].value == 3.0);
  }
  SECTION("inverted range") {
    CHECK_THROWS_AS(social::daily_counts({}, std::nullopt, DateRange{kDay, kDay - Days(1)}),
                    InvalidRange);
  }
}

namespace {

social::ProxySeries series_of(const std::vector<double>& values, std::string name = "s") {
  social::ProxySeries s{std::move(name), {}};
  for (std::size_t i = 0; i < values.size(); ++i)
    s.entries.push_back({kDay + Days(int(i)), values[i], false});
  return s;
}

presence::DaySeries census_of(const std::vector<double>& values) {
  presence::DaySeries s{"census", {}};
  for (std::size_t i = 0; i < values.size(); ++i)
    s.entries.emplace_back(kDay + Days(int(i)), values[i]);
  return s;
}

}  // namespace

TEST_CASE("normalized awareness follows the ratio formula") {
  const auto flood = series_of({10, 20, 0});
  const auto total = series_of({100, 100, 100});
  const auto census = census_of({1000, 1000, 1000});
  const auto out = social::normalize_awareness(flood, total, 500, census);
  CHECK(out.entries[0].value == Catch::Approx(0.05).epsilon(1e-12));
  CHECK(out.entries[1].value == Catch::Approx(0.10).epsilon(1e-12));
  CHECK(out.entries[2].value == 0.0);
  CHECK_FALSE(out.entries[2].missing_denominator);  // zero numerator is a real zero
}

TEST_CASE("normalized awareness identity case") {
  const auto flood = series_of({7, 9, 11});
  const auto census = census_of({500, 500, 500});
  const auto out = social::normalize_awareness(flood, flood, 500, census);
  for (const auto& e : out.entries) CHECK(e.value == 1.0);
}

TEST_CASE("zero or missing denominators are flagged") {
  const auto flood = series_of({10, 10, 10});
  const auto total = series_of({0, 100, 100});
  const auto census = census_of({1000, 1000});  // last date missing
  const auto out = social::normalize_awareness(flood, total, 500, census);
  CHECK(out.entries[0].missing_denominator);
  CHECK(out.entries[0].value == 0.0);
  CHECK_FALSE(out.entries[1].missing_denominator);
  CHECK(out.entries[2].missing_denominator);

  CHECK_THROWS_AS(social::normalize_awareness(flood, total, 0, census), InvalidParameter);
  CHECK_THROWS_AS(social::normalize_awareness(flood, series_of({1, 2}), 500, census),
                  InvalidParameter);
}

TEST_CASE("doubling totals halves unflagged values exactly") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> v(0, 50);
  std::vector<double> floods, totals, cens;
  for (int i = 0; i < 30; ++i) {
    floods.push_back(std::floor(v(rng)));
    totals.push_back(std::floor(v(rng)));
    cens.push_back(std::floor(v(rng)) + 1);
  }
  const auto base =
      social::normalize_awareness(series_of(floods), series_of(totals), 777, census_of(cens));
  auto doubled_totals = totals;
  for (auto& t : doubled_totals) t *= 2;
  const auto halved = social::normalize_awareness(series_of(floods), series_of(doubled_totals),
                                                  777, census_of(cens));
  for (std::size_t i = 0; i < base.entries.size(); ++i) {
    if (base.entries[i].missing_denominator) continue;
    CHECK(halved.entries[i].value == base.entries[i].value / 2.0);  // exact
  }
}

TEST_CASE("joint scaling of users and census cancels") {
  const auto flood = series_of({3, 5, 8, 13});
  const auto total = series_of({50, 60, 70, 80});
  const auto census = census_of({100, 200, 300, 400});
  const auto base = social::normalize_awareness(flood, total, 1000, census);
  for (double factor : {3.0, 0.25, 17.5}) {
    std::vector<double> scaled;
    for (const auto& [d, v] : census.entries) scaled.push_back(v * factor);
    const auto out =
        social::normalize_awareness(flood, total, 1000 * factor, census_of(scaled));
    for (std::size_t i = 0; i < base.entries.size(); ++i)
      CHECK(out.entries[i].value ==
            Catch::Approx(base.entries[i].value).epsilon(1e-12).margin(1e-15));
  }
}

TEST_CASE("awareness and damage proxies are independent filters") {
  const auto aware = social::Lexicon::default_awareness();
  const auto damage = social::Lexicon::default_damage();
  const DateRange range{kDay, kDay + Days(1)};
  std::vector<SocialPost> posts{
      post("1", kDay, "flood in the streets"),
      post("2", kDay, "my insurance claim"),
      post("3", kDay, "flood damage everywhere"),
  };
  const auto a = social::awareness_series(posts, aware, "en", std::nullopt, range);
  const auto d = social::damage_series(posts, damage, "en", std::nullopt, range);
  CHECK(a.entries[0].value == 2.0);  // posts 1 and 3
  CHECK(d.entries[0].value == 2.0);  // posts 2 and 3
}

TEST_CASE("spatial proxy shapes") {
  SECTION("no geotagged match") {
    std::vector<SocialPost> posts{post("1", kDay, "x")};
    CHECK_FALSE(social::spatial_proxy(posts).has_value());
  }
  SECTION("two points give a bbox but no hull") {
    std::vector<SocialPost> posts{
        post("1", kDay, "x", "u", Gender::Unknown, geo::GeoPoint{1.0, 1.0}),
        post("2", kDay, "x", "u", Gender::Unknown, geo::GeoPoint{2.0, 2.0}),
    };
    const auto sp = social::spatial_proxy(posts);
    REQUIRE(sp.has_value());
    CHECK_FALSE(sp->hull.has_value());
    CHECK(sp->bbox.min_lat == 1.0);
    CHECK(sp->bbox.max_lat == 2.0);
  }
  SECTION("square corners give matching bbox and hull") {
    std::vector<SocialPost> posts;
    const double lats[4] = {0, 0, 1, 1};
    const double lons[4] = {0, 1, 1, 0};
    for (int i = 0; i < 4; ++i)
      posts.push_back(post(std::to_string(i), kDay, "x", "u", Gender::Unknown,
                           geo::GeoPoint{lats[i], lons[i]}));
    const auto sp = social::spatial_proxy(posts);
    REQUIRE(sp.has_value());
    REQUIRE(sp->hull.has_value());
    CHECK(sp->hull->exterior.size() == 4);
    for (const auto& p : sp->hull->exterior) CHECK(sp->bbox.contains(p));
  }
}

TEST_CASE("social proxy counts distinct users and genders") {
  std::vector<SocialPost> posts{
      post("1", kDay, "x", "alice", Gender::Female),
      post("2", kDay, "y", "alice", Gender::Female),
      post("3", kDay, "z", "bob", Gender::Male),
      post("4", kDay, "w", "casey", Gender::Unknown),
  };
  const auto sp = social::social_proxy(posts);
  CHECK(sp.distinct_users == 3);
  CHECK(sp.gender_counts[0] == 1);
  CHECK(sp.gender_counts[1] == 1);
  CHECK(sp.gender_counts[2] == 1);
  CHECK(sp.histogram_total() == sp.distinct_users);

  const auto empty = social::social_proxy({});
  CHECK(empty.distinct_users == 0);
  CHECK(empty.histogram_total() == 0);
}

TEST_CASE("gender histogram always sums to distinct users") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> g(0, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<SocialPost> posts;
    for (int i = 0; i < 25; ++i)
      posts.push_back(post(std::to_string(i), kDay, "x", "user" + std::to_string(pick(rng)),
                           Gender(g(rng))));
    const auto sp = social::social_proxy(posts);
    CHECK(sp.histogram_total() == sp.distinct_users);
  }
}

TEST_CASE("post store rejects duplicate ids") {
  social::PostStore store;
  CHECK(store.insert(post("1", kDay, "x")));
  CHECK_FALSE(store.insert(post("1", kDay, "y")));
  CHECK(store.size() == 1);
  CHECK_THROWS_AS(store.insert(post("", kDay, "z")), InvalidParameter);
}

TEST_CASE("evidence bundle completeness") {
  std::vector<SocialPost> geotagged{
      post("1", kDay, "x", "u1", Gender::Female, geo::GeoPoint{0.0, 0.0}),
      post("2", kDay, "x", "u2", Gender::Male, geo::GeoPoint{0.5, 0.5}),
      post("3", kDay, "x", "u3", Gender::Unknown, geo::GeoPoint{1.0, 0.2}),
  };
  const auto full = social::build_evidence(kDay, 4.2, geotagged);
  CHECK(full.complete());
  CHECK(full.temporal->peak_z == 4.2);
  CHECK(full.social->distinct_users == 3);

  std::vector<SocialPost> blind{post("1", kDay, "x")};
  const auto partial = social::build_evidence(kDay, 4.2, blind);
  CHECK_FALSE(partial.complete());
  CHECK_FALSE(partial.spatial.has_value());
}
