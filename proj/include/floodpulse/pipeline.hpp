#pragma once

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "floodpulse/config.hpp"
#include "floodpulse/dates.hpp"
#include "floodpulse/detect.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/geo.hpp"
#include "floodpulse/io.hpp"
#include "floodpulse/netdyn.hpp"
#include "floodpulse/presence.hpp"
#include "floodpulse/rainfall.hpp"
#include "floodpulse/social.hpp"

namespace floodpulse::pipeline {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// validation & loading

struct FileReport {
  std::string label;
  std::string path;
  bool present = false;
  std::size_t total = 0;      // raw data rows
  std::size_t accepted = 0;   // rows that made it into a store
  std::size_t malformed = 0;  // parse-level rejects (drive the corrupt threshold)
  std::vector<io::RowError> rejects;  // malformed + duplicates, with reasons
  std::string failure;        // "missing" | "corrupt..." | "" when usable
};

struct ValidationReport {
  std::vector<FileReport> files;
  bool ok = true;
};

struct LoadedData {
  social::PostStore posts;
  presence::PresenceStore presence;
  rainfall::RainfallStore rain;
  std::vector<geo::RingPolygon> hydro_pre, hydro_post;
  std::optional<geo::RasterGrid> population, dem;
  std::optional<geo::RingPolygon> region_polygon;
};

inline constexpr double kCorruptRowFraction = 0.10;

namespace detail {

inline bool over_threshold(const FileReport& fr) {
  return fr.total > 0 && double(fr.malformed) > kCorruptRowFraction * double(fr.total);
}

template <typename Reader, typename Insert>
void load_tabular(const std::string& label, const std::string& path, bool required,
                  ValidationReport& report, Reader&& reader, Insert&& insert) {
  if (path.empty()) {
    if (required) {
      report.files.push_back({label, path, false, 0, 0, 0, {}, "missing"});
      report.ok = false;
    }
    return;
  }
  FileReport fr;
  fr.label = label;
  fr.path = path;
  if (!std::filesystem::exists(path)) {
    fr.failure = "missing";
    report.files.push_back(std::move(fr));
    report.ok = false;
    return;
  }
  fr.present = true;
  try {
    auto parsed = reader(path);
    fr.total = parsed.total;
    fr.malformed = parsed.rejected.size();
    fr.rejects = std::move(parsed.rejected);
    for (auto& row : parsed.rows) {
      if (insert(row)) {
        ++fr.accepted;
      } else {
        fr.rejects.push_back({0, "duplicate key, first kept"});
      }
    }
    if (over_threshold(fr)) {
      fr.failure = "corrupt: malformed rows above threshold";
      report.ok = false;
    }
  } catch (const Error& e) {
    fr.failure = std::string("corrupt: ") + e.what();
    report.ok = false;
  }
  report.files.push_back(std::move(fr));
}

}  // namespace detail

/// Schema-checks every referenced input and fills the stores. Files named in
/// `required` must be present; anything else only has to validate when a
/// path is configured.
inline ValidationReport validate_and_load(const RunConfig& cfg, LoadedData& data,
                                          const std::set<std::string>& required = {"posts"}) {
  ValidationReport report;

  detail::load_tabular("posts", cfg.inputs.posts, required.count("posts") > 0, report,
                       [](const std::string& p) { return io::read_posts_jsonl(p); },
                       [&](social::SocialPost& row) { return data.posts.insert(std::move(row)); });
  detail::load_tabular("presence", cfg.inputs.presence, required.count("presence") > 0, report,
                       [](const std::string& p) { return io::read_presence_csv(p); },
                       [&](const presence::PresenceRecord& row) { return data.presence.insert(row); });
  detail::load_tabular("stations", cfg.inputs.stations, required.count("stations") > 0, report,
                       [](const std::string& p) { return io::read_stations_csv(p); },
                       [&](rainfall::Station& row) { return data.rain.add_station(std::move(row)); });
  detail::load_tabular("rainfall", cfg.inputs.rainfall, required.count("rainfall") > 0, report,
                       [](const std::string& p) { return io::read_rainfall_csv(p); },
                       [&](const io::RainRow& row) {
                         return data.rain.add_measurement(row.station_id, row.date, row.mm);
                       });

  auto load_geo = [&](const std::string& label, const std::string& path, auto&& apply) {
    if (path.empty()) {
      if (required.count(label)) {
        report.files.push_back({label, path, false, 0, 0, 0, {}, "missing"});
        report.ok = false;
      }
      return;
    }
    FileReport fr;
    fr.label = label;
    fr.path = path;
    if (!std::filesystem::exists(path)) {
      fr.failure = "missing";
      report.ok = false;
    } else {
      fr.present = true;
      try {
        apply(path);
        fr.accepted = fr.total = 1;
      } catch (const Error& e) {
        fr.failure = std::string("corrupt: ") + e.what();
        report.ok = false;
      }
    }
    report.files.push_back(std::move(fr));
  };
  load_geo("hydrography_pre", cfg.inputs.hydrography_pre,
           [&](const std::string& p) { data.hydro_pre = io::read_geojson_polygons(p); });
  load_geo("hydrography_post", cfg.inputs.hydrography_post,
           [&](const std::string& p) { data.hydro_post = io::read_geojson_polygons(p); });
  load_geo("population", cfg.inputs.population,
           [&](const std::string& p) { data.population = io::read_ascii_grid(p); });
  load_geo("dem", cfg.inputs.dem,
           [&](const std::string& p) { data.dem = io::read_ascii_grid(p); });
  load_geo("region_geojson", cfg.inputs.region_geojson, [&](const std::string& p) {
    auto polys = io::read_geojson_polygons(p);
    data.region_polygon = polys.front();
  });
  return report;
}

inline ValidationReport validate_inputs(const RunConfig& cfg) {
  LoadedData scratch;
  return validate_and_load(cfg, scratch);
}

/// Maps a failed validation onto the contract errors.
inline void ensure_valid(const ValidationReport& report) {
  for (const auto& fr : report.files) {
    if (fr.failure == "missing")
      throw MissingInput(fr.label + ": file not found: " + fr.path);
    if (!fr.failure.empty())
      throw CorruptInput(fr.label + " (" + fr.path + "): " + fr.failure);
  }
}

// ---------------------------------------------------------------------------
// stage blocks

namespace detail {

inline json series_json(const social::ProxySeries& s) {
  json arr = json::array();
  for (const auto& e : s.entries)
    arr.push_back({format_date(e.date), e.value, e.missing_denominator});
  return arr;
}

inline json day_series_json(const presence::DaySeries& s) {
  json arr = json::array();
  for (const auto& [date, v] : s.entries) arr.push_back({format_date(date), v});
  return arr;
}

struct ProxyBundle {
  std::vector<social::SocialPost> aware_posts;
  social::ProxySeries awareness, total, damage, normalized;
  presence::DaySeries census{"region", {}};
  social::ProxySeries rain_series{"rainfall", {}};
  rainfall::RainfallSeries rain_raw{"", {}};
};

inline ProxyBundle compute_proxies(const RunConfig& cfg, const LoadedData& data) {
  ProxyBundle b;
  const auto posts = data.posts.posts();
  const std::optional<geo::BoundingBox> bbox = cfg.region;

  b.aware_posts = social::keyword_filter(posts, cfg.awareness_lexicon, cfg.language);
  b.awareness = social::daily_counts(b.aware_posts, bbox, cfg.range, "awareness");
  b.total = social::daily_counts(posts, bbox, cfg.range, "total_posts");
  b.damage = social::damage_series(posts, cfg.damage_lexicon, cfg.language, bbox, cfg.range);

  for (Date d = cfg.range.start; d <= cfg.range.end; d += Days(1)) {
    try {
      const double value =
          data.region_polygon
              ? presence::dynamic_census(data.presence, *data.region_polygon, d,
                                         cfg.presence_interval)
              : presence::dynamic_census(data.presence, cfg.region, d, cfg.presence_interval);
      b.census.entries.emplace_back(d, value);
    } catch (const NoAntennaCoverage&) {
      continue;  // date absent from the census
    }
  }
  b.normalized = social::normalize_awareness(b.awareness, b.total, cfg.social_users, b.census);

  if (!data.rain.stations().empty()) {
    b.rain_raw = data.rain.query(cfg.range, cfg.region.center());
    for (const auto& [date, mm] : b.rain_raw.entries)
      b.rain_series.entries.push_back({date, mm, false});
  }
  return b;
}

inline json proxies_json(const ProxyBundle& b) {
  return {{"awareness", series_json(b.awareness)},
          {"total_posts", series_json(b.total)},
          {"damage", series_json(b.damage)},
          {"normalized_awareness", series_json(b.normalized)},
          {"rainfall", series_json(b.rain_series)},
          {"census", day_series_json(b.census)}};
}

inline json rainfall_profile_json(const LoadedData& data, const ProxyBundle& b) {
  if (b.rain_raw.station_id.empty()) return {};
  const auto full = data.rain.series_for(b.rain_raw.station_id);
  std::set<int> year_set;
  for (const auto& [date, mm] : full.entries) year_set.insert(year_of(date));
  if (year_set.empty()) return {};
  const std::vector<int> years(year_set.begin(), year_set.end());
  const auto hp = rainfall::historic_profile(full, years);
  json rows = json::array();
  for (const auto& row : hp.rows) {
    json r = json::array();
    for (const auto& cell : row) r.push_back(cell ? json(*cell) : json());
    rows.push_back(r);
  }
  return {{"years", years}, {"rows", rows}};
}

inline json presence_block(const RunConfig& cfg, const LoadedData& data) {
  const auto daily = presence::aggregate_daily_interval(data.presence, cfg.presence_interval);
  json daily_json(json::value_t::object), weekly_json(json::value_t::object);
  for (const auto& [antenna, series] : daily) {
    daily_json[antenna] = day_series_json(series);
    const auto weekly = presence::aggregate_weekly(series);
    json arr = json::array();
    for (const auto& e : weekly.entries)
      arr.push_back({e.week.year, e.week.week, e.value, e.partial});
    weekly_json[antenna] = arr;
  }
  std::map<std::string, geo::GeoPoint> locations;
  for (const auto& [id, ant] : data.presence.antennas()) locations[id] = ant.location;
  return {{"daily", daily_json},
          {"weekly", weekly_json},
          {"zmap", io::zmap_geojson(presence::zmap_from_daily(daily), locations)}};
}

inline json stats_json(const geo::ElevationStats& st) {
  return {{"mean", st.mean}, {"min", st.min}, {"max", st.max}, {"n_cells", st.n_cells}};
}

// Layer-level elevation stats: per-polygon stats merged cell-count-weighted;
// polygons without coverage are skipped.
inline geo::ElevationStats layer_drape(const std::vector<geo::RingPolygon>& layer,
                                       const geo::RasterGrid& dem) {
  geo::ElevationStats acc;
  acc.min = std::numeric_limits<double>::infinity();
  acc.max = -acc.min;
  double weighted = 0;
  for (const auto& poly : layer) {
    try {
      const auto st = geo::drape_stats(poly, dem);
      weighted += st.mean * double(st.n_cells);
      acc.min = std::min(acc.min, st.min);
      acc.max = std::max(acc.max, st.max);
      acc.n_cells += st.n_cells;
    } catch (const NoElevationCoverage&) {
      continue;
    }
  }
  if (acc.n_cells == 0) throw NoElevationCoverage("no layer polygon covered by the DEM");
  acc.mean = weighted / double(acc.n_cells);
  return acc;
}

inline json physical_block(const RunConfig& cfg, const LoadedData& data) {
  json physical;
  if (data.hydro_pre.empty() || data.hydro_post.empty()) return physical;
  geo::ExtentMeta meta{cfg.segmentation.pre_layer_id, cfg.segmentation.post_layer_id,
                       cfg.segmentation.pre_date, cfg.segmentation.post_date};
  const auto extent =
      geo::flood_extent(data.hydro_pre, data.hydro_post, cfg.segmentation.cell_size_m, meta);
  physical["extent_geojson"] = io::extent_geojson(extent);
  physical["area_m2"] = extent.area_m2;
  if (data.dem) {
    const auto pre_stats = layer_drape(data.hydro_pre, *data.dem);
    const auto post_stats = layer_drape(data.hydro_post, *data.dem);
    const auto rise = geo::river_rise(pre_stats, post_stats);
    physical["drape_pre"] = stats_json(pre_stats);
    physical["drape_post"] = stats_json(post_stats);
    physical["river_rise"] = {{"d_mean", rise.d_mean}, {"d_min", rise.d_min}, {"d_max", rise.d_max}};
  }
  if (data.population)
    physical["affected_population"] = geo::affected_population(extent, *data.population);
  return physical;
}

inline std::string gender_code_of(std::span<const netdyn::ActorNode> nodes, const std::string& id,
                                  netdyn::NodeKind kind) {
  for (const auto& n : nodes)
    if (n.kind == kind && n.id == id) return social::gender_code(n.gender);
  return "u";
}

inline json network_kind_json(const std::vector<netdyn::LinkTimeline>& timelines,
                              std::span<const netdyn::ActorNode> nodes, netdyn::NodeKind kind,
                              const NetworkSettings& settings, std::uint64_t seed) {
  json out;
  out["timelines"] = timelines.size();
  if (timelines.empty() || int(timelines.size()) < settings.k) {
    out["clustered"] = false;
    return out;
  }
  std::vector<std::vector<double>> vectors;
  if (settings.l1_normalize) {
    vectors = netdyn::l1_normalized(timelines);
  } else {
    vectors.reserve(timelines.size());
    for (const auto& tl : timelines) vectors.push_back(tl.bins);
  }
  const auto km = netdyn::kmeans(vectors, settings.k, seed, int(settings.max_iter));
  const auto clusters = netdyn::profile_aggregate(km.assignments, timelines);

  out["clustered"] = true;
  out["k"] = settings.k;
  out["inertia"] = km.inertia;
  json members = json::array();
  json aggregates = json::array();
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const auto& id : clusters[c].member_ids)
      members.push_back({c, id, netdyn::node_kind_name(kind), gender_code_of(nodes, id, kind)});
    aggregates.push_back(clusters[c].aggregate);
  }
  out["members"] = members;        // rows: cluster_id, node_id, kind, gender
  out["aggregates"] = aggregates;  // per cluster, per day-index link counts

  const auto split = netdyn::gender_split(nodes, timelines);
  out["gender_timelines"] = {{"f", split.female.size()},
                             {"m", split.male.size()},
                             {"u", split.unknown.size()}};
  return out;
}

inline json network_block(const RunConfig& cfg, const LoadedData& data) {
  json network;
  const auto posts = data.posts.posts();
  if (posts.empty()) return network;
  const DateRange interval = cfg.network.interval.value_or(cfg.range);
  const auto net = netdyn::build_network(posts, interval);
  json edges = json::array();
  for (const auto& e : net.edges)
    edges.push_back({e.src, e.dst, netdyn::edge_kind_name(e.kind), format_date(e.date), e.post_id});
  network["interval"] = {{"start", format_date(interval.start)}, {"end", format_date(interval.end)}};
  network["edges"] = edges;
  const auto poster_tl = netdyn::node_timelines(net.edges, interval, netdyn::NodeKind::Poster);
  const auto target_tl = netdyn::node_timelines(net.edges, interval, netdyn::NodeKind::Target);
  network["poster"] =
      network_kind_json(poster_tl, net.nodes, netdyn::NodeKind::Poster, cfg.network, cfg.seed);
  network["target"] =
      network_kind_json(target_tl, net.nodes, netdyn::NodeKind::Target, cfg.network, cfg.seed + 1);
  return network;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run

struct ClassifiedEvent {
  detect::DetectionEvent event;
  detect::FloodClass flood_class;
  social::EvidenceBundle evidence;
};

struct RunReport {
  json document;  // the full, export-ready report
  std::vector<ClassifiedEvent> events;
  std::vector<detect::DataRequest> requests;
  detect::Stage final_stage = detect::Stage::Idle;
};

/// End-to-end run: proxies -> detection -> classification -> escalation ->
/// optional segmentation and population -> optional network profiling.
/// Deterministic for fixed (config, inputs, seed).
inline RunReport run_pipeline(const RunConfig& cfg) {
  LoadedData data;
  const ValidationReport validation = validate_and_load(cfg, data);
  ensure_valid(validation);

  const DateRange range = cfg.range;
  auto proxies = detail::compute_proxies(cfg, data);

  // detection
  std::string series_used = cfg.detect.series;
  if (series_used == "auto")
    series_used = proxies.census.entries.empty() ? "awareness" : "normalized_awareness";
  const social::ProxySeries& detection_input =
      series_used == "normalized_awareness" ? proxies.normalized : proxies.awareness;
  const auto events = detect::detect_peaks(detection_input, cfg.detect.detector);

  // per-event evidence comes from the keyword matches around the event
  auto matches_for = [&](Date event_date) {
    std::vector<social::SocialPost> m;
    const DateRange window{event_date - Days(cfg.escalate.hourly_span_days),
                           event_date + Days(cfg.escalate.hourly_span_days)};
    for (const auto& p : proxies.aware_posts) {
      if (!window.contains(p.ts.day())) continue;
      if (!p.geo || !cfg.region.contains(*p.geo)) continue;
      m.push_back(p);
    }
    return m;
  };

  RunReport report;
  std::map<std::string, json> hourly_windows;
  detect::EscalationState state;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& event = events[i];
    const auto flood_class = detect::classify_flood(event, proxies.rain_raw, cfg.classify);
    const auto evidence = social::build_evidence(event.date, event.z_peak, matches_for(event.date));
    report.events.push_back({event, flood_class, evidence});

    state = detect::escalate(state, {.event = event}, cfg.escalate).state;
    auto step = detect::escalate(state, {.evidence = evidence}, cfg.escalate);
    state = step.state;
    for (auto& r : step.requests) report.requests.push_back(std::move(r));
    if (state.stage != detect::Stage::Escalated) continue;

    // serve the hourly presence window request from the local store
    if (!data.presence.empty()) {
      const auto windows = presence::hourly_event_window(data.presence, event.date,
                                                         cfg.escalate.hourly_span_days);
      json per_antenna(json::value_t::object);
      for (const auto& [antenna, slots] : windows) {
        json arr = json::array();
        for (const auto& s : slots)
          arr.push_back({format_date(s.date), s.hour, s.value ? json(*s.value) : json()});
        per_antenna[antenna] = arr;
      }
      hourly_windows[format_date(event.date)] = per_antenna;
    }
    state = detect::escalate(state, {.data_registered = true}, cfg.escalate).state;

    const Date horizon = i + 1 < events.size() ? events[i + 1].date : range.end;
    const int quiescent = int((horizon - event.date).count());
    if (state.stage == detect::Stage::Monitoring && quiescent >= cfg.escalate.quiescence_days) {
      auto eval = detect::escalate(state, {.quiescent_days = quiescent}, cfg.escalate);
      state = eval.state;
      for (auto& r : eval.requests) report.requests.push_back(std::move(r));
      state = detect::escalate(state, {.report_issued = true}, cfg.escalate).state;
    }
  }
  report.final_stage = state.stage;

  // assemble the report document
  json doc;
  doc["range"] = {{"start", format_date(range.start)}, {"end", format_date(range.end)}};
  doc["region"] = {{"min_lat", cfg.region.min_lat},
                   {"min_lon", cfg.region.min_lon},
                   {"max_lat", cfg.region.max_lat},
                   {"max_lon", cfg.region.max_lon}};
  doc["language"] = cfg.language;
  doc["seed"] = cfg.seed;
  doc["social_users"] = cfg.social_users;

  json counts(json::value_t::object);
  for (const auto& fr : validation.files)
    counts[fr.label] = {{"total", fr.total},
                        {"accepted", fr.accepted},
                        {"rejected", fr.total - fr.accepted}};
  doc["counts"] = counts;

  doc["series"] = detail::proxies_json(proxies);
  const json profile = detail::rainfall_profile_json(data, proxies);
  if (!profile.is_null()) doc["rainfall_profile"] = profile;

  doc["detection"] = {{"series_used", series_used},
                      {"window", cfg.detect.detector.window},
                      {"z_threshold", cfg.detect.detector.z_threshold},
                      {"refractory", cfg.detect.detector.refractory}};

  json ev_arr = json::array();
  for (const auto& ce : report.events) {
    json e{{"date", format_date(ce.event.date)},
           {"z_peak", ce.event.z_peak},
           {"proxy_value", ce.event.proxy_value},
           {"source_series", ce.event.source_series},
           {"class", {{"kind", detect::flood_kind_name(ce.flood_class.kind)}}},
           {"evidence", io::evidence_json(ce.evidence)}};
    if (ce.flood_class.rainfall_lag_days)
      e["class"]["rainfall_lag_days"] = *ce.flood_class.rainfall_lag_days;
    ev_arr.push_back(e);
  }
  doc["events"] = ev_arr;

  json req_arr = json::array();
  for (const auto& r : report.requests) req_arr.push_back(io::request_json(r));
  doc["requests"] = req_arr;
  doc["final_stage"] = detect::stage_name(state.stage);

  json presence_doc = detail::presence_block(cfg, data);
  doc["zmap"] = presence_doc["zmap"];
  doc["presence"] = {{"daily", presence_doc["daily"]},
                     {"weekly", presence_doc["weekly"]},
                     {"hourly_windows", json(hourly_windows)}};

  const json physical = detail::physical_block(cfg, data);
  if (!physical.is_null()) doc["physical"] = physical;
  const json network = detail::network_block(cfg, data);
  if (!network.is_null()) doc["network"] = network;

  report.document = std::move(doc);
  return report;
}

// partial documents backing the single-stage CLI verbs ----------------------

inline json proxies_document(const RunConfig& cfg) {
  LoadedData data;
  ensure_valid(validate_and_load(cfg, data, {"posts"}));
  const auto proxies = detail::compute_proxies(cfg, data);
  json doc{{"series", detail::proxies_json(proxies)}};
  const json profile = detail::rainfall_profile_json(data, proxies);
  if (!profile.is_null()) doc["rainfall_profile"] = profile;
  return doc;
}

inline json presence_document(const RunConfig& cfg) {
  LoadedData data;
  ensure_valid(validate_and_load(cfg, data, {"presence"}));
  json block = detail::presence_block(cfg, data);
  return {{"presence", {{"daily", block["daily"]}, {"weekly", block["weekly"]}}},
          {"zmap", block["zmap"]}};
}

inline json network_document(const RunConfig& cfg) {
  LoadedData data;
  ensure_valid(validate_and_load(cfg, data, {"posts"}));
  return {{"network", detail::network_block(cfg, data)}};
}

inline json segment_document(const RunConfig& cfg) {
  LoadedData data;
  ensure_valid(validate_and_load(cfg, data, {"hydrography_pre", "hydrography_post"}));
  return {{"physical", detail::physical_block(cfg, data)}};
}

// ---------------------------------------------------------------------------
// exports

namespace detail {

inline void export_series_csv(const json& series, const std::filesystem::path& path) {
  std::string out = "date,value,flag\n";
  for (const auto& e : series) {
    out += e[0].get<std::string>();
    out += ',';
    out += io::fmt_double(e[1].get<double>());
    out += ',';
    if (e.size() > 2 && e[2].is_boolean() && e[2].get<bool>()) out += "missing_denominator";
    out += '\n';
  }
  io::write_file(path, out);
}

inline void export_census_csv(const json& census, const std::filesystem::path& path) {
  std::string out = "date,value,flag\n";
  for (const auto& e : census)
    out += e[0].get<std::string>() + "," + io::fmt_double(e[1].get<double>()) + ",\n";
  io::write_file(path, out);
}

}  // namespace detail

/// Writes every export a report document describes: a CSV per series, GeoJSON
/// for z-map / flood extent / spatial proxies, JSON Lines for data requests,
/// presence and network CSVs, and a human-readable summary.
inline std::vector<std::filesystem::path> export_from_json(const json& doc,
                                                           const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> written;
  auto emit = [&](const fs::path& p, const std::string& content) {
    io::write_file(p, content);
    written.push_back(p);
  };

  if (doc.contains("series")) {
    for (const auto& [name, series] : doc["series"].items()) {
      const fs::path p = out_dir / ("series_" + name + ".csv");
      if (name == "census")
        detail::export_census_csv(series, p);
      else
        detail::export_series_csv(series, p);
      written.push_back(p);
    }
  }

  if (doc.contains("requests")) {
    std::string lines;
    for (const auto& r : doc["requests"]) lines += r.dump() + "\n";
    emit(out_dir / "requests.jsonl", lines);
  }

  if (doc.contains("zmap")) emit(out_dir / "zmap.geojson", doc["zmap"].dump(2) + "\n");

  if (doc.contains("physical") && doc["physical"].contains("extent_geojson"))
    emit(out_dir / "extent.geojson", doc["physical"]["extent_geojson"].dump(2) + "\n");

  if (doc.contains("events")) {
    json features = json::array();
    for (const auto& e : doc["events"]) {
      if (!e.contains("evidence") || !e["evidence"].contains("spatial")) continue;
      const auto& sp = e["evidence"]["spatial"];
      json geometry;
      if (sp.contains("hull")) {
        geometry = sp["hull"];
      } else {
        const auto& b = sp["bbox"];
        geo::BoundingBox bbox{b["min_lat"].get<double>(), b["min_lon"].get<double>(),
                              b["max_lat"].get<double>(), b["max_lon"].get<double>()};
        geometry = io::bbox_geometry(bbox);
      }
      features.push_back({{"type", "Feature"},
                          {"geometry", geometry},
                          {"properties", {{"event_date", e["date"]}}}});
    }
    emit(out_dir / "spatial_proxies.geojson",
         json{{"type", "FeatureCollection"}, {"features", features}}.dump(2) + "\n");
  }

  if (doc.contains("presence")) {
    const auto& pres = doc["presence"];
    const json daily_json = pres.value("daily", json(json::value_t::object));
    std::string daily = "antenna_id,date,value\n";
    for (const auto& [antenna, series] : daily_json.items())
      for (const auto& e : series)
        daily += io::csv_escape(antenna) + "," + e[0].get<std::string>() + "," +
                 io::fmt_double(e[1].get<double>()) + "\n";
    emit(out_dir / "presence_daily.csv", daily);

    const json weekly_json = pres.value("weekly", json(json::value_t::object));
    std::string weekly = "antenna_id,iso_year,iso_week,value,partial\n";
    for (const auto& [antenna, series] : weekly_json.items())
      for (const auto& e : series)
        weekly += io::csv_escape(antenna) + "," + std::to_string(e[0].get<int>()) + "," +
                  std::to_string(e[1].get<int>()) + "," + io::fmt_double(e[2].get<double>()) +
                  "," + (e[3].get<bool>() ? "1" : "0") + "\n";
    emit(out_dir / "presence_weekly.csv", weekly);

    const json windows_json = pres.value("hourly_windows", json(json::value_t::object));
    for (const auto& [event_date, windows] : windows_json.items()) {
      std::string hourly = "antenna_id,date,hour,value\n";
      for (const auto& [antenna, slots] : windows.items())
        for (const auto& s : slots)
          hourly += io::csv_escape(antenna) + "," + s[0].get<std::string>() + "," +
                    std::to_string(s[1].get<int>()) + "," +
                    (s[2].is_null() ? "" : io::fmt_double(s[2].get<double>())) + "\n";
      emit(out_dir / ("hourly_window_" + event_date + ".csv"), hourly);
    }
  }

  if (doc.contains("network")) {
    const auto& net = doc["network"];
    const json edges_json = net.value("edges", json::array());
    std::string edges = "src,dst,kind,date,post_id\n";
    for (const auto& e : edges_json)
      edges += io::csv_escape(e[0].get<std::string>()) + "," +
               io::csv_escape(e[1].get<std::string>()) + "," + e[2].get<std::string>() + "," +
               e[3].get<std::string>() + "," + io::csv_escape(e[4].get<std::string>()) + "\n";
    emit(out_dir / "network_edges.csv", edges);

    for (const char* kind : {"poster", "target"}) {
      if (!net.contains(kind) || !net[kind].value("clustered", false)) continue;
      std::string members = "cluster_id,node_id,kind,gender\n";
      for (const auto& m : net[kind]["members"])
        members += std::to_string(m[0].get<int>()) + "," + io::csv_escape(m[1].get<std::string>()) +
                   "," + m[2].get<std::string>() + "," + m[3].get<std::string>() + "\n";
      emit(out_dir / ("network_clusters_" + std::string(kind) + ".csv"), members);

      std::string agg = "cluster_id,day_index,count\n";
      const auto& aggregates = net[kind]["aggregates"];
      for (std::size_t c = 0; c < aggregates.size(); ++c)
        for (std::size_t d = 0; d < aggregates[c].size(); ++d)
          agg += std::to_string(c) + "," + std::to_string(d) + "," +
                 io::fmt_double(aggregates[c][d].get<double>()) + "\n";
      emit(out_dir / ("network_aggregates_" + std::string(kind) + ".csv"), agg);
    }
  }

  if (doc.contains("rainfall_profile")) {
    const auto& hp = doc["rainfall_profile"];
    std::string out = "year,day_of_year,mm\n";
    const auto& years = hp["years"];
    const auto& rows = hp["rows"];
    for (std::size_t r = 0; r < years.size(); ++r)
      for (std::size_t d = 0; d < rows[r].size(); ++d)
        out += std::to_string(years[r].get<int>()) + "," + std::to_string(d + 1) + "," +
               (rows[r][d].is_null() ? "" : io::fmt_double(rows[r][d].get<double>())) + "\n";
    emit(out_dir / "rainfall_profile.csv", out);
  }

  // human-readable summary
  std::ostringstream sum;
  sum << "floodpulse run summary\n";
  sum << "======================\n";
  if (doc.contains("range"))
    sum << "range: " << doc["range"]["start"].get<std::string>() << " .. "
        << doc["range"]["end"].get<std::string>() << "\n";
  if (doc.contains("detection"))
    sum << "detection series: " << doc["detection"]["series_used"].get<std::string>() << "\n";
  if (doc.contains("events")) {
    sum << "events: " << doc["events"].size() << "\n";
    for (const auto& e : doc["events"]) {
      sum << "  - " << e["date"].get<std::string>() << "  z=" << io::fmt_double(e["z_peak"].get<double>())
          << "  class=" << e["class"]["kind"].get<std::string>();
      if (e["class"].contains("rainfall_lag_days"))
        sum << "  rain_lag=" << e["class"]["rainfall_lag_days"].get<int>();
      sum << "\n";
    }
  }
  if (doc.contains("requests")) sum << "data requests: " << doc["requests"].size() << "\n";
  if (doc.contains("final_stage"))
    sum << "final stage: " << doc["final_stage"].get<std::string>() << "\n";
  if (doc.contains("physical") && doc["physical"].contains("area_m2")) {
    sum << "flood area m2: " << io::fmt_double(doc["physical"]["area_m2"].get<double>()) << "\n";
    if (doc["physical"].contains("affected_population"))
      sum << "affected population: "
          << io::fmt_double(doc["physical"]["affected_population"].get<double>()) << "\n";
  }
  emit(out_dir / "summary.txt", sum.str());
  return written;
}

/// run + report.json + every export.
inline RunReport run_and_export(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  RunReport report = run_pipeline(cfg);
  io::write_file(out_dir / "report.json", report.document.dump(2) + "\n");
  export_from_json(report.document, out_dir);
  return report;
}

}  // namespace floodpulse::pipeline
