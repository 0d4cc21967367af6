#pragma once

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "floodpulse/dates.hpp"
#include "floodpulse/detect.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/geo.hpp"
#include "floodpulse/presence.hpp"
#include "floodpulse/rainfall.hpp"
#include "floodpulse/social.hpp"

namespace floodpulse::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// primitives

inline std::string fmt_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw IoError("short write to " + path.string());
}

/// RFC-4180-ish field split: quoted fields, doubled quotes, commas in quotes.
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

struct RowError {
  std::size_t line = 0;  // 1-based, header included
  std::string reason;
};

template <typename T>
struct ParseResult {
  std::vector<T> rows;
  std::vector<RowError> rejected;
  std::size_t total = 0;  // data rows seen (header excluded)
};

namespace detail {

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  std::vector<std::string> lines;
  std::string cur;
  for (char c : content) {
    if (c == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// readers

/// presence CSV: antenna_id,lat,lon,date,hour,count (header required)
inline ParseResult<presence::PresenceRecord> read_presence_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  ParseResult<presence::PresenceRecord> out;
  if (lines.empty()) throw CorruptInput("presence CSV is empty: " + path.string());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ++out.total;
    const auto f = split_csv(lines[i]);
    auto reject = [&](const std::string& why) { out.rejected.push_back({i + 1, why}); };
    if (f.size() != 6) {
      reject("expected 6 fields");
      continue;
    }
    const auto lat = parse_double(f[1]), lon = parse_double(f[2]);
    const auto date = parse_date(f[3]);
    const auto hour = parse_double(f[4]), count = parse_double(f[5]);
    if (f[0].empty()) { reject("empty antenna_id"); continue; }
    if (!lat || !lon || !geo::valid_point({*lat, *lon})) { reject("bad coordinates"); continue; }
    if (!date) { reject("bad date"); continue; }
    if (!hour || *hour != int(*hour) || *hour < 0 || *hour > 23) { reject("bad hour"); continue; }
    if (!count || *count < 0) { reject("bad count"); continue; }
    out.rows.push_back({f[0], {*lat, *lon}, *date, int(*hour), *count});
  }
  return out;
}

/// stations CSV: id,lat,lon,name
inline ParseResult<rainfall::Station> read_stations_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  ParseResult<rainfall::Station> out;
  if (lines.empty()) throw CorruptInput("stations CSV is empty: " + path.string());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ++out.total;
    const auto f = split_csv(lines[i]);
    if (f.size() < 3 || f.size() > 4) {
      out.rejected.push_back({i + 1, "expected 3 or 4 fields"});
      continue;
    }
    const auto lat = parse_double(f[1]), lon = parse_double(f[2]);
    if (f[0].empty() || !lat || !lon || !geo::valid_point({*lat, *lon})) {
      out.rejected.push_back({i + 1, "bad id or coordinates"});
      continue;
    }
    out.rows.push_back({f[0], {*lat, *lon}, f.size() == 4 ? f[3] : ""});
  }
  return out;
}

struct RainRow {
  std::string station_id;
  Date date{};
  double mm = 0;
};

/// rainfall CSV: station_id,date,mm
inline ParseResult<RainRow> read_rainfall_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  ParseResult<RainRow> out;
  if (lines.empty()) throw CorruptInput("rainfall CSV is empty: " + path.string());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ++out.total;
    const auto f = split_csv(lines[i]);
    if (f.size() != 3) {
      out.rejected.push_back({i + 1, "expected 3 fields"});
      continue;
    }
    const auto date = parse_date(f[1]);
    const auto mm = parse_double(f[2]);
    if (f[0].empty() || !date || !mm || *mm < 0) {
      out.rejected.push_back({i + 1, "bad station, date or mm"});
      continue;
    }
    out.rows.push_back({f[0], *date, *mm});
  }
  return out;
}

/// posts JSON Lines: {"id","ts","text","author","gender","lat"?,"lon"?,"platform"}
inline ParseResult<social::SocialPost> read_posts_jsonl(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  ParseResult<social::SocialPost> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ++out.total;
    auto reject = [&](const std::string& why) { out.rejected.push_back({i + 1, why}); };
    json j = json::parse(lines[i], nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      reject("not a JSON object");
      continue;
    }
    social::SocialPost p;
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
      reject("missing id");
      continue;
    }
    p.id = j["id"].get<std::string>();
    if (!j.contains("ts") || !j["ts"].is_string()) {
      reject("missing ts");
      continue;
    }
    auto ts = parse_timestamp(j["ts"].get<std::string>());
    if (!ts) {
      reject("unparseable ts");
      continue;
    }
    p.ts = *ts;
    if (!j.contains("text") || !j["text"].is_string()) {
      reject("missing text");
      continue;
    }
    p.text = j["text"].get<std::string>();
    if (!j.contains("author") || !j["author"].is_string() ||
        j["author"].get<std::string>().empty()) {
      reject("missing author");
      continue;
    }
    p.author_id = j["author"].get<std::string>();
    if (j.contains("gender")) {
      if (!j["gender"].is_string()) {
        reject("bad gender");
        continue;
      }
      auto g = social::parse_gender(j["gender"].get<std::string>());
      if (!g) {
        reject("bad gender");
        continue;
      }
      p.gender = *g;
    }
    const bool has_lat = j.contains("lat"), has_lon = j.contains("lon");
    if (has_lat != has_lon) {
      reject("lat/lon must come together");
      continue;
    }
    if (has_lat) {
      if (!j["lat"].is_number() || !j["lon"].is_number()) {
        reject("bad lat/lon");
        continue;
      }
      geo::GeoPoint g{j["lat"].get<double>(), j["lon"].get<double>()};
      if (!geo::valid_point(g)) {
        reject("coordinates out of bounds");
        continue;
      }
      p.geo = g;
    }
    if (j.contains("platform") && j["platform"].is_string())
      p.platform = j["platform"].get<std::string>();
    out.rows.push_back(std::move(p));
  }
  return out;
}

/// ESRI ASCII grid (ncols/nrows/xllcorner/yllcorner/cellsize/NODATA_value).
inline geo::RasterGrid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open " + path.string());
  geo::RasterGrid g;
  double xll = 0, yll = 0;
  long nrows = -1, ncols = -1;
  bool have_nodata = false;
  std::string key;
  // header: key/value pairs until the first pure number
  while (in >> key) {
    std::string lower = key;
    for (auto& c : lower) c = char(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "ncols") in >> ncols;
    else if (lower == "nrows") in >> nrows;
    else if (lower == "xllcorner") in >> xll;
    else if (lower == "yllcorner") in >> yll;
    else if (lower == "cellsize") in >> g.cell_size;
    else if (lower == "nodata_value") { in >> g.nodata; have_nodata = true; }
    else break;  // key holds the first data token
  }
  if (nrows <= 0 || ncols <= 0 || g.cell_size <= 0)
    throw CorruptInput("bad ASCII grid header in " + path.string());
  if (!have_nodata) g.nodata = -9999.0;
  g.nrows = std::size_t(nrows);
  g.ncols = std::size_t(ncols);
  g.origin = {yll + double(nrows) * g.cell_size, xll};
  g.values.reserve(g.nrows * g.ncols);
  // first token was already consumed into `key`
  try {
    g.values.push_back(std::stod(key));
  } catch (...) {
    throw CorruptInput("bad ASCII grid data in " + path.string());
  }
  double v;
  while (in >> v) g.values.push_back(v);
  if (g.values.size() != g.nrows * g.ncols)
    throw CorruptInput("ASCII grid value count mismatch in " + path.string());
  return g;
}

inline void write_ascii_grid(const std::filesystem::path& path, const geo::RasterGrid& g) {
  g.validate();
  std::ostringstream out;
  out << "ncols " << g.ncols << "\n"
      << "nrows " << g.nrows << "\n"
      << "xllcorner " << fmt_double(g.origin.lon) << "\n"
      << "yllcorner " << fmt_double(g.origin.lat - double(g.nrows) * g.cell_size) << "\n"
      << "cellsize " << fmt_double(g.cell_size) << "\n"
      << "NODATA_value " << fmt_double(g.nodata) << "\n";
  for (std::size_t r = 0; r < g.nrows; ++r) {
    for (std::size_t c = 0; c < g.ncols; ++c) {
      if (c) out << ' ';
      out << fmt_double(g.at(r, c));
    }
    out << '\n';
  }
  write_file(path, out.str());
}

// ---------------------------------------------------------------------------
// GeoJSON

inline json ring_coords(std::span<const geo::GeoPoint> ring) {
  json arr = json::array();
  for (auto p : ring) arr.push_back({p.lon, p.lat});
  if (!ring.empty()) arr.push_back({ring[0].lon, ring[0].lat});  // close the ring
  return arr;
}

inline json polygon_geometry(const geo::RingPolygon& poly) {
  json rings = json::array();
  rings.push_back(ring_coords(poly.exterior));
  for (const auto& h : poly.holes) rings.push_back(ring_coords(h));
  return {{"type", "Polygon"}, {"coordinates", rings}};
}

inline json bbox_geometry(const geo::BoundingBox& b) {
  const std::vector<geo::GeoPoint> ring{{b.min_lat, b.min_lon},
                                        {b.min_lat, b.max_lon},
                                        {b.max_lat, b.max_lon},
                                        {b.max_lat, b.min_lon}};
  return polygon_geometry({ring, {}});
}

inline std::optional<geo::GeoPoint> coord_to_point(const json& c) {
  if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
    return std::nullopt;
  geo::GeoPoint p{c[1].get<double>(), c[0].get<double>()};
  if (!geo::valid_point(p)) return std::nullopt;
  return p;
}

namespace detail {

inline std::optional<geo::RingPolygon> polygon_from_rings(const json& rings) {
  if (!rings.is_array() || rings.empty()) return std::nullopt;
  geo::RingPolygon poly;
  for (std::size_t k = 0; k < rings.size(); ++k) {
    std::vector<geo::GeoPoint> ring;
    if (!rings[k].is_array()) return std::nullopt;
    for (const auto& c : rings[k]) {
      auto p = coord_to_point(c);
      if (!p) return std::nullopt;
      ring.push_back(*p);
    }
    ring = geo::open_ring(std::move(ring));
    if (ring.size() < 3) return std::nullopt;
    if (k == 0)
      poly.exterior = std::move(ring);
    else
      poly.holes.push_back(std::move(ring));
  }
  return poly;
}

inline void collect_polygons(const json& geometry, std::vector<geo::RingPolygon>& out) {
  if (!geometry.is_object() || !geometry.contains("type")) return;
  const std::string type = geometry.value("type", "");
  if (type == "Polygon") {
    if (auto p = polygon_from_rings(geometry.value("coordinates", json::array())))
      out.push_back(std::move(*p));
  } else if (type == "MultiPolygon") {
    for (const auto& rings : geometry.value("coordinates", json::array()))
      if (auto p = polygon_from_rings(rings)) out.push_back(std::move(*p));
  }
}

}  // namespace detail

/// Polygons from a GeoJSON FeatureCollection (Feature and bare geometries
/// are accepted as well). Non-polygon geometries are ignored.
inline std::vector<geo::RingPolygon> read_geojson_polygons(const std::filesystem::path& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw CorruptInput("invalid GeoJSON in " + path.string());
  std::vector<geo::RingPolygon> out;
  const std::string type = j.is_object() ? j.value("type", "") : "";
  if (type == "FeatureCollection") {
    for (const auto& f : j.value("features", json::array()))
      if (f.is_object() && f.contains("geometry")) detail::collect_polygons(f["geometry"], out);
  } else if (type == "Feature") {
    if (j.contains("geometry")) detail::collect_polygons(j["geometry"], out);
  } else {
    detail::collect_polygons(j, out);
  }
  if (out.empty()) throw CorruptInput("no polygons in " + path.string());
  return out;
}

inline json spatial_proxy_geometry(const social::SpatialProxy& sp) {
  return sp.hull ? polygon_geometry(*sp.hull) : bbox_geometry(sp.bbox);
}

inline json evidence_json(const social::EvidenceBundle& e) {
  json j;
  if (e.temporal)
    j["temporal"] = {{"event_date", format_date(e.temporal->event_date)},
                     {"peak_z", e.temporal->peak_z}};
  if (e.spatial) {
    j["spatial"] = {{"bbox",
                     {{"min_lat", e.spatial->bbox.min_lat},
                      {"min_lon", e.spatial->bbox.min_lon},
                      {"max_lat", e.spatial->bbox.max_lat},
                      {"max_lon", e.spatial->bbox.max_lon}}}};
    if (e.spatial->hull) j["spatial"]["hull"] = polygon_geometry(*e.spatial->hull);
  }
  if (e.social)
    j["social"] = {{"distinct_users", e.social->distinct_users},
                   {"gender_histogram",
                    {{"f", e.social->gender_counts[0]},
                     {"m", e.social->gender_counts[1]},
                     {"u", e.social->gender_counts[2]}}}};
  return j;
}

inline json request_json(const detect::DataRequest& r) {
  return {{"kind", detect::request_kind_name(r.kind)},
          {"region", spatial_proxy_geometry(r.region)},
          {"window", {{"start", format_date(r.window.start)}, {"end", format_date(r.window.end)}}},
          {"evidence", evidence_json(r.evidence)}};
}

inline json zmap_geojson(const presence::ZMap& zm,
                         const std::map<std::string, geo::GeoPoint>& locations) {
  json features = json::array();
  for (const auto& [antenna, series] : zm.series) {
    auto loc = locations.find(antenna);
    if (loc == locations.end()) continue;
    for (const auto& [label, z] : series) {
      features.push_back(
          {{"type", "Feature"},
           {"geometry",
            {{"type", "Point"}, {"coordinates", {loc->second.lon, loc->second.lat}}}},
           {"properties", {{"antenna_id", antenna}, {"t", label}, {"z", z}}}});
    }
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

/// Mask cells as square features plus a summary foreign member.
inline json extent_geojson(const geo::FloodExtent& extent) {
  const geo::LocalProjection proj(extent.ref_lat);
  json features = json::array();
  for (const auto& cell : extent.mask) {
    const double x0 = extent.origin_x + double(cell.col) * extent.analysis_cell_size;
    const double y0 = extent.origin_y + double(cell.row) * extent.analysis_cell_size;
    const double s = extent.analysis_cell_size;
    const std::vector<geo::GeoPoint> ring{
        proj.to_geo({x0, y0}), proj.to_geo({x0 + s, y0}), proj.to_geo({x0 + s, y0 + s}),
        proj.to_geo({x0, y0 + s})};
    features.push_back({{"type", "Feature"},
                        {"geometry", polygon_geometry({ring, {}})},
                        {"properties", {{"row", cell.row}, {"col", cell.col}}}});
  }
  return {{"type", "FeatureCollection"},
          {"summary",
           {{"area_m2", extent.area_m2},
            {"cell_size_m", extent.analysis_cell_size},
            {"n_cells", extent.mask.size()},
            {"pre_layer_id", extent.pre_layer_id},
            {"post_layer_id", extent.post_layer_id},
            {"pre_date", format_date(extent.pre_date)},
            {"post_date", format_date(extent.post_date)}}},
          {"features", features}};
}

}  // namespace floodpulse::io
