#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "floodpulse/dates.hpp"
#include "floodpulse/detect.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/geo.hpp"
#include "floodpulse/io.hpp"
#include "floodpulse/presence.hpp"
#include "floodpulse/social.hpp"

namespace floodpulse::pipeline {

struct InputPaths {
  std::string posts;
  std::string presence;
  std::string stations;
  std::string rainfall;
  std::string hydrography_pre;
  std::string hydrography_post;
  std::string population;
  std::string dem;
  std::string region_geojson;  // optional polygon refinement of the bbox
};

struct SegmentationSettings {
  double cell_size_m = 10.0;
  std::string pre_layer_id = "pre";
  std::string post_layer_id = "post";
  Date pre_date = make_date(2000, 1, 1);
  Date post_date = make_date(2000, 1, 2);
};

struct NetworkSettings {
  int k = 4;
  bool l1_normalize = false;
  std::uint64_t max_iter = 100;
  std::optional<DateRange> interval;  // profiling window; defaults to the run range
};

struct DetectSettings {
  detect::DetectorConfig detector;
  std::string series = "auto";  // auto | normalized_awareness | awareness
};

/// Everything a run needs; loaded from one JSON file, every key defaulted.
struct RunConfig {
  InputPaths inputs;
  geo::BoundingBox region;
  DateRange range;
  std::string language = "en";
  double social_users = 1000.0;
  social::Lexicon awareness_lexicon = social::Lexicon::default_awareness();
  social::Lexicon damage_lexicon = social::Lexicon::default_damage();
  presence::HourInterval presence_interval{20, 24};
  DetectSettings detect;
  detect::ClassifierConfig classify;
  detect::EscalationConfig escalate;
  SegmentationSettings segmentation;
  NetworkSettings network;
  std::uint64_t seed = 42;
};

namespace detail {

using json = nlohmann::json;

inline Date require_date(const json& j, const std::string& what) {
  if (!j.is_string()) throw CorruptInput("config: " + what + " must be a date string");
  auto d = parse_date(j.get<std::string>());
  if (!d) throw CorruptInput("config: bad date in " + what);
  return *d;
}

inline void load_lexicon(const json& j, social::Lexicon& out, const std::string& what) {
  if (!j.is_object()) throw CorruptInput("config: " + what + " must map language to keywords");
  std::map<std::string, std::vector<std::string>> raw;
  for (const auto& [lang, words] : j.items()) {
    if (!words.is_array()) throw CorruptInput("config: " + what + "." + lang + " must be a list");
    for (const auto& w : words) raw[lang].push_back(w.get<std::string>());
  }
  out = social::Lexicon::from_raw(std::move(raw));
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::require_date;
  if (!j.is_object()) throw CorruptInput("config must be a JSON object");
  RunConfig cfg;

  if (j.contains("inputs")) {
    const auto& in = j["inputs"];
    cfg.inputs.posts = in.value("posts", "");
    cfg.inputs.presence = in.value("presence", "");
    cfg.inputs.stations = in.value("stations", "");
    cfg.inputs.rainfall = in.value("rainfall", "");
    cfg.inputs.hydrography_pre = in.value("hydrography_pre", "");
    cfg.inputs.hydrography_post = in.value("hydrography_post", "");
    cfg.inputs.population = in.value("population", "");
    cfg.inputs.dem = in.value("dem", "");
    cfg.inputs.region_geojson = in.value("region_geojson", "");
  }

  if (!j.contains("region")) throw CorruptInput("config: region is required");
  {
    const auto& r = j["region"];
    cfg.region = {r.value("min_lat", 0.0), r.value("min_lon", 0.0), r.value("max_lat", 0.0),
                  r.value("max_lon", 0.0)};
    if (cfg.region.min_lat > cfg.region.max_lat || cfg.region.min_lon > cfg.region.max_lon)
      throw CorruptInput("config: region bbox is inverted");
  }

  if (!j.contains("range")) throw CorruptInput("config: range is required");
  cfg.range.start = require_date(j["range"]["start"], "range.start");
  cfg.range.end = require_date(j["range"]["end"], "range.end");
  if (cfg.range.end < cfg.range.start) throw CorruptInput("config: range is inverted");

  cfg.language = j.value("language", cfg.language);
  cfg.social_users = j.value("social_users", cfg.social_users);
  if (!(cfg.social_users > 0)) throw CorruptInput("config: social_users must be > 0");

  if (j.contains("lexicons")) {
    const auto& lx = j["lexicons"];
    if (lx.contains("awareness"))
      detail::load_lexicon(lx["awareness"], cfg.awareness_lexicon, "lexicons.awareness");
    if (lx.contains("damage"))
      detail::load_lexicon(lx["damage"], cfg.damage_lexicon, "lexicons.damage");
  }

  if (j.contains("presence_interval")) {
    const auto& iv = j["presence_interval"];
    if (!iv.is_array() || iv.size() != 2)
      throw CorruptInput("config: presence_interval must be [begin, end)");
    cfg.presence_interval = {iv[0].get<int>(), iv[1].get<int>()};
    cfg.presence_interval.validate();
  }

  if (j.contains("detect")) {
    const auto& d = j["detect"];
    cfg.detect.detector.window = d.value("window", cfg.detect.detector.window);
    cfg.detect.detector.z_threshold = d.value("z", cfg.detect.detector.z_threshold);
    cfg.detect.detector.refractory = d.value("refractory", cfg.detect.detector.refractory);
    cfg.detect.series = d.value("series", cfg.detect.series);
    if (cfg.detect.series != "auto" && cfg.detect.series != "awareness" &&
        cfg.detect.series != "normalized_awareness")
      throw CorruptInput("config: detect.series must be auto|awareness|normalized_awareness");
  }
  if (j.contains("classify")) {
    const auto& c = j["classify"];
    cfg.classify.tolerance_days = c.value("tolerance_days", cfg.classify.tolerance_days);
    cfg.classify.rain_z_threshold = c.value("rain_z", cfg.classify.rain_z_threshold);
  }
  cfg.classify.window = cfg.detect.detector.window;  // rainfall shares the detection baseline
  if (j.contains("escalate")) {
    const auto& e = j["escalate"];
    cfg.escalate.quiescence_days = e.value("quiescence_days", cfg.escalate.quiescence_days);
  }
  if (j.contains("segmentation")) {
    const auto& s = j["segmentation"];
    cfg.segmentation.cell_size_m = s.value("cell_size_m", cfg.segmentation.cell_size_m);
    cfg.segmentation.pre_layer_id = s.value("pre_layer_id", cfg.segmentation.pre_layer_id);
    cfg.segmentation.post_layer_id = s.value("post_layer_id", cfg.segmentation.post_layer_id);
    if (s.contains("pre_date")) cfg.segmentation.pre_date = require_date(s["pre_date"], "segmentation.pre_date");
    if (s.contains("post_date"))
      cfg.segmentation.post_date = require_date(s["post_date"], "segmentation.post_date");
  }
  if (j.contains("network")) {
    const auto& n = j["network"];
    cfg.network.k = n.value("k", cfg.network.k);
    cfg.network.l1_normalize = n.value("l1_normalize", cfg.network.l1_normalize);
    cfg.network.max_iter = n.value("max_iter", cfg.network.max_iter);
    if (n.contains("start") != n.contains("end"))
      throw CorruptInput("config: network.start and network.end come together");
    if (n.contains("start")) {
      DateRange iv{require_date(n["start"], "network.start"), require_date(n["end"], "network.end")};
      if (iv.end < iv.start) throw CorruptInput("config: network interval is inverted");
      cfg.network.interval = iv;
    }
  }
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded()) throw CorruptInput("config is not valid JSON: " + path.string());
  return parse_config(j);
}

}  // namespace floodpulse::pipeline
