#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "floodpulse/dates.hpp"
#include "floodpulse/detect.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/geo.hpp"
#include "floodpulse/io.hpp"
#include "floodpulse/rng.hpp"
#include "floodpulse/social.hpp"

namespace floodpulse::scenario {

struct ScenarioEvent {
  int day = 0;  // 0-based offset from start_date
  detect::FloodKind type = detect::FloodKind::Torrential;
  double rain_mult = 10.0;
  double posts_mult = 6.0;
  double presence_mult = 1.5;
};

/// Synthetic dataset description. All randomness flows from the seed; equal
/// specs generate identical files.
struct ScenarioSpec {
  std::uint64_t seed = 1;
  int days = 60;
  Date start_date = make_date(2017, 3, 1);
  double posts_per_day = 40.0;
  double rain_mm_per_day = 3.0;
  double presence_per_antenna = 50.0;  // expected persons per antenna-hour
  int antennas = 5;
  int stations = 2;
  int authors = 24;
  geo::BoundingBox region{43.55, 3.80, 43.65, 3.95};
  std::string language = "en";
  double keyword_rate = 0.15;        // baseline share of posts carrying an awareness keyword
  double event_keyword_rate = 0.85;  // same share inside an event window
  double damage_rate = 0.05;
  double geotag_rate = 0.8;
  double mention_rate = 0.3;
  double retweet_rate = 0.15;
  std::vector<ScenarioEvent> events;
};

inline ScenarioSpec parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) throw CorruptInput("scenario must be a JSON object");
  ScenarioSpec s;
  s.seed = j.value("seed", s.seed);
  s.days = j.value("days", s.days);
  if (s.days < 1) throw CorruptInput("scenario: days must be >= 1");
  if (j.contains("start_date")) {
    auto d = parse_date(j["start_date"].get<std::string>());
    if (!d) throw CorruptInput("scenario: bad start_date");
    s.start_date = *d;
  }
  s.posts_per_day = j.value("posts_per_day", s.posts_per_day);
  s.rain_mm_per_day = j.value("rain_mm_per_day", s.rain_mm_per_day);
  s.presence_per_antenna = j.value("presence_per_antenna", s.presence_per_antenna);
  s.antennas = j.value("antennas", s.antennas);
  s.stations = j.value("stations", s.stations);
  s.authors = j.value("authors", s.authors);
  if (j.contains("region")) {
    const auto& r = j["region"];
    s.region = {r.value("min_lat", 0.0), r.value("min_lon", 0.0), r.value("max_lat", 0.0),
                r.value("max_lon", 0.0)};
  }
  s.language = j.value("language", s.language);
  s.keyword_rate = j.value("keyword_rate", s.keyword_rate);
  s.event_keyword_rate = j.value("event_keyword_rate", s.event_keyword_rate);
  s.damage_rate = j.value("damage_rate", s.damage_rate);
  s.geotag_rate = j.value("geotag_rate", s.geotag_rate);
  s.mention_rate = j.value("mention_rate", s.mention_rate);
  s.retweet_rate = j.value("retweet_rate", s.retweet_rate);
  for (const auto& e : j.value("events", nlohmann::json::array())) {
    ScenarioEvent ev;
    ev.day = e.value("day", 0);
    if (ev.day < 0 || ev.day >= s.days) throw CorruptInput("scenario: event day outside range");
    const std::string type = e.value("type", "torrential");
    if (type == "torrential")
      ev.type = detect::FloodKind::Torrential;
    else if (type == "overflow")
      ev.type = detect::FloodKind::Overflow;
    else
      throw CorruptInput("scenario: event type must be torrential|overflow");
    ev.rain_mult = e.value("rain_mult", ev.rain_mult);
    ev.posts_mult = e.value("posts_mult", ev.posts_mult);
    ev.presence_mult = e.value("presence_mult", ev.presence_mult);
    if (ev.rain_mult <= 0 || ev.posts_mult <= 0 || ev.presence_mult <= 0)
      throw CorruptInput("scenario: multipliers must be > 0");
    s.events.push_back(ev);
  }
  return s;
}

inline ScenarioSpec load_scenario(const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded()) throw CorruptInput("scenario is not valid JSON: " + path.string());
  return parse_scenario(j);
}

struct GeneratedScenario {
  std::filesystem::path posts, presence, stations, rainfall, config;
};

namespace detail {

// Event window is the event day plus one day either side.
inline const ScenarioEvent* event_at(const ScenarioSpec& spec, int day) {
  for (const auto& e : spec.events)
    if (day >= e.day - 1 && day <= e.day + 1) return &e;
  return nullptr;
}

inline std::string author_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "user_%02d", i);
  return buf;
}

inline const std::vector<std::string>& neutral_texts() {
  static const std::vector<std::string> texts = {
      "quiet afternoon at the plaza",
      "traffic jam on the ring road again",
      "new bakery opened downtown",
      "big match tonight at the stadium",
      "looking for a good book to read",
      "the tram was packed this morning",
      "concert tickets on sale now",
      "lost keys near the market, any tips?",
  };
  return texts;
}

inline const std::vector<std::string>& awareness_templates() {
  static const std::vector<std::string> t = {
      "heavy % over the north side",
      "% rising near the old bridge",
      "alert: % reported across the valley",
      "stay safe, % everywhere this evening",
  };
  return t;
}

inline const std::vector<std::string>& damage_templates() {
  static const std::vector<std::string> t = {
      "filing an % claim for the house",
      "the % to the shop is serious",
      "checking % options after last night",
  };
  return t;
}

inline std::string fill_template(const std::string& tpl, const std::string& word) {
  std::string out;
  for (char c : tpl) {
    if (c == '%')
      out += word;
    else
      out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Writes posts.jsonl, presence.csv, stations.csv, rainfall.csv and a ready
/// config.json into out_dir. Equal ScenarioSpecs produce identical files.
inline GeneratedScenario generate_scenario(const ScenarioSpec& spec,
                                           const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  rng::Generator gen(spec.seed);

  const auto& region = spec.region;
  auto point_at = [&](double fx, double fy) {
    return geo::GeoPoint{region.min_lat + fy * (region.max_lat - region.min_lat),
                         region.min_lon + fx * (region.max_lon - region.min_lon)};
  };

  // antennas and stations: jittered grid positions inside the region
  std::vector<geo::GeoPoint> antennas;
  for (int a = 0; a < spec.antennas; ++a) {
    const double fx = 0.15 + 0.7 * (double(a) + gen.uniform01() * 0.5) / double(spec.antennas);
    antennas.push_back(point_at(fx, 0.25 + 0.5 * gen.uniform01()));
  }
  std::vector<geo::GeoPoint> stations;
  for (int s = 0; s < std::max(1, spec.stations); ++s) {
    const double fx = 0.2 + 0.6 * (double(s) + gen.uniform01() * 0.5) / double(std::max(1, spec.stations));
    stations.push_back(point_at(fx, 0.3 + 0.4 * gen.uniform01()));
  }

  // rainfall: one value per station per day
  std::string rain_csv = "station_id,date,mm\n";
  for (int s = 0; s < std::max(1, spec.stations); ++s) {
    for (int d = 0; d < spec.days; ++d) {
      const auto* ev = detail::event_at(spec, d);
      const double lambda = spec.rain_mm_per_day * (ev ? ev->rain_mult : 1.0);
      const double mm = double(gen.poisson(lambda));
      rain_csv += "st_" + std::to_string(s) + "," + format_date(spec.start_date + Days(d)) + "," +
                  io::fmt_double(mm) + "\n";
    }
  }

  // presence: hourly person counts per antenna
  std::string presence_csv = "antenna_id,lat,lon,date,hour,count\n";
  for (int a = 0; a < spec.antennas; ++a) {
    for (int d = 0; d < spec.days; ++d) {
      const auto* ev = detail::event_at(spec, d);
      const double lambda = spec.presence_per_antenna * (ev ? ev->presence_mult : 1.0);
      for (int h = 0; h < 24; ++h) {
        const auto count = gen.poisson(lambda);
        presence_csv += "ant_" + std::to_string(a) + "," + io::fmt_double(antennas[a].lat) + "," +
                        io::fmt_double(antennas[a].lon) + "," +
                        format_date(spec.start_date + Days(d)) + "," + std::to_string(h) + "," +
                        std::to_string(count) + "\n";
      }
    }
  }

  // posts
  const auto awareness_lexicon = social::Lexicon::default_awareness();
  const auto damage_lexicon = social::Lexicon::default_damage();
  const auto& aw_set = awareness_lexicon.for_language(spec.language);
  const auto& dmg_set = damage_lexicon.for_language(spec.language);
  const std::vector<std::string> awareness_words(aw_set.begin(), aw_set.end());
  const std::vector<std::string> damage_words(dmg_set.begin(), dmg_set.end());

  std::string posts_jsonl;
  int post_seq = 0;
  for (int d = 0; d < spec.days; ++d) {
    const auto* ev = detail::event_at(spec, d);
    const double lambda = spec.posts_per_day * (ev ? ev->posts_mult : 1.0);
    const double kw_rate = ev ? spec.event_keyword_rate : spec.keyword_rate;
    const long n_posts = gen.poisson(lambda);
    for (long p = 0; p < n_posts; ++p) {
      const int author = int(gen.index(std::size_t(std::max(1, spec.authors))));
      std::string text;
      if (gen.uniform01() < kw_rate) {
        const auto& tpl = detail::awareness_templates()[gen.index(detail::awareness_templates().size())];
        text = detail::fill_template(tpl, awareness_words[gen.index(awareness_words.size())]);
      } else if (gen.uniform01() < spec.damage_rate) {
        const auto& tpl = detail::damage_templates()[gen.index(detail::damage_templates().size())];
        text = detail::fill_template(tpl, damage_words[gen.index(damage_words.size())]);
      } else {
        text = detail::neutral_texts()[gen.index(detail::neutral_texts().size())];
      }
      if (gen.uniform01() < spec.retweet_rate) {
        text = "RT @" + detail::author_name(int(gen.index(std::size_t(std::max(1, spec.authors))))) +
               " " + text;
      } else if (gen.uniform01() < spec.mention_rate) {
        text += " @" + detail::author_name(int(gen.index(std::size_t(std::max(1, spec.authors)))));
      }
      const int hour = 8 + int(gen.index(16));
      const int minute = int(gen.index(60));
      char ts[40];
      std::snprintf(ts, sizeof(ts), "%sT%02d:%02d:00Z",
                    format_date(spec.start_date + Days(d)).c_str(), hour, minute);

      nlohmann::json j{{"id", "post_" + std::to_string(post_seq++)},
                       {"ts", ts},
                       {"text", text},
                       {"author", detail::author_name(author)},
                       {"gender", author % 3 == 0 ? "f" : (author % 3 == 1 ? "m" : "u")},
                       {"platform", "synthetic"}};
      if (gen.uniform01() < spec.geotag_rate) {
        const auto pt = point_at(gen.uniform01(), gen.uniform01());
        j["lat"] = pt.lat;
        j["lon"] = pt.lon;
      }
      posts_jsonl += j.dump() + "\n";
    }
  }

  std::string stations_csv = "id,lat,lon,name\n";
  for (int s = 0; s < std::max(1, spec.stations); ++s)
    stations_csv += "st_" + std::to_string(s) + "," + io::fmt_double(stations[std::size_t(s)].lat) +
                    "," + io::fmt_double(stations[std::size_t(s)].lon) + ",station " +
                    std::to_string(s) + "\n";

  GeneratedScenario out;
  out.posts = out_dir / "posts.jsonl";
  out.presence = out_dir / "presence.csv";
  out.stations = out_dir / "stations.csv";
  out.rainfall = out_dir / "rainfall.csv";
  out.config = out_dir / "config.json";
  io::write_file(out.posts, posts_jsonl);
  io::write_file(out.presence, presence_csv);
  io::write_file(out.stations, stations_csv);
  io::write_file(out.rainfall, rain_csv);

  nlohmann::json cfg{
      {"inputs",
       {{"posts", out.posts.string()},
        {"presence", out.presence.string()},
        {"stations", out.stations.string()},
        {"rainfall", out.rainfall.string()}}},
      {"region",
       {{"min_lat", region.min_lat},
        {"min_lon", region.min_lon},
        {"max_lat", region.max_lat},
        {"max_lon", region.max_lon}}},
      {"range",
       {{"start", format_date(spec.start_date)},
        {"end", format_date(spec.start_date + Days(spec.days - 1))}}},
      {"language", spec.language},
      {"seed", spec.seed}};
  io::write_file(out.config, cfg.dump(2) + "\n");
  return out;
}

}  // namespace floodpulse::scenario
