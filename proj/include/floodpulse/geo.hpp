#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floodpulse/dates.hpp"
#include "floodpulse/errors.hpp"

namespace floodpulse::geo {

/// Meters per degree at the equator (WGS84 equatorial circumference / 360).
inline constexpr double kMetersPerDegree = 111319.4908;
inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180)
  auto operator<=>(const GeoPoint&) const = default;
};

inline bool valid_point(GeoPoint p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon < 180.0;
}

inline GeoPoint make_point(double lat, double lon) {
  GeoPoint p{lat, lon};
  if (!valid_point(p)) throw InvalidParameter("coordinates out of bounds");
  return p;
}

struct BoundingBox {
  double min_lat = 0, min_lon = 0, max_lat = 0, max_lon = 0;

  bool contains(GeoPoint p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
  }
  GeoPoint center() const { return {(min_lat + max_lat) / 2.0, (min_lon + max_lon) / 2.0}; }
  void expand(GeoPoint p) {
    min_lat = std::min(min_lat, p.lat);
    max_lat = std::max(max_lat, p.lat);
    min_lon = std::min(min_lon, p.lon);
    max_lon = std::max(max_lon, p.lon);
  }
  static BoundingBox of(std::span<const GeoPoint> pts) {
    if (pts.empty()) throw InvalidParameter("bounding box of no points");
    BoundingBox b{pts[0].lat, pts[0].lon, pts[0].lat, pts[0].lon};
    for (auto p : pts) b.expand(p);
    return b;
  }
  auto operator<=>(const BoundingBox&) const = default;
};

/// Simple polygon: exterior ring plus optional holes, implicitly closed
/// (the first vertex is not repeated at the end).
struct RingPolygon {
  std::vector<GeoPoint> exterior;
  std::vector<std::vector<GeoPoint>> holes;
};

/// Drops a repeated closing vertex, if present.
inline std::vector<GeoPoint> open_ring(std::vector<GeoPoint> ring) {
  if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

inline std::size_t distinct_vertices(std::span<const GeoPoint> ring) {
  std::vector<GeoPoint> v(ring.begin(), ring.end());
  std::sort(v.begin(), v.end());
  return std::unique(v.begin(), v.end()) - v.begin();
}

inline double haversine_km(GeoPoint a, GeoPoint b) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * rad;
  const double dlon = (b.lon - a.lon) * rad;
  const double s = std::sin(dlat / 2), t = std::sin(dlon / 2);
  const double h = s * s + std::cos(a.lat * rad) * std::cos(b.lat * rad) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

struct XY {
  double x = 0, y = 0;
};

/// Equirectangular projection around a reference latitude. Good to well under
/// a percent at flood scales; all planar geometry below runs in its meters.
class LocalProjection {
 public:
  explicit LocalProjection(double ref_lat_deg)
      : ref_lat_(ref_lat_deg),
        kx_(kMetersPerDegree * std::cos(ref_lat_deg * std::numbers::pi / 180.0)) {}

  XY to_xy(GeoPoint p) const { return {p.lon * kx_, p.lat * kMetersPerDegree}; }
  GeoPoint to_geo(XY q) const { return {q.y / kMetersPerDegree, q.x / kx_}; }
  double ref_lat() const { return ref_lat_; }

 private:
  double ref_lat_;
  double kx_;
};

namespace detail {

inline double shoelace(std::span<const XY> ring) {
  double acc = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const XY& a = ring[i];
    const XY& b = ring[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return acc / 2.0;
}

// Even-odd ray cast.
inline bool point_in_ring_xy(XY p, std::span<const XY> ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const XY& a = ring[j];
    const XY& b = ring[i];
    if ((b.y > p.y) != (a.y > p.y)) {
      const double xint = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

struct ProjectedPolygon {
  std::vector<XY> exterior;
  std::vector<std::vector<XY>> holes;
};

inline ProjectedPolygon project(const RingPolygon& poly, const LocalProjection& proj) {
  ProjectedPolygon out;
  for (auto p : poly.exterior) out.exterior.push_back(proj.to_xy(p));
  for (const auto& h : poly.holes) {
    std::vector<XY> ring;
    for (auto p : h) ring.push_back(proj.to_xy(p));
    out.holes.push_back(std::move(ring));
  }
  return out;
}

inline bool point_in_projected(XY p, const ProjectedPolygon& poly) {
  if (!point_in_ring_xy(p, poly.exterior)) return false;
  for (const auto& h : poly.holes)
    if (point_in_ring_xy(p, h)) return false;
  return true;
}

}  // namespace detail

/// Even-odd point-in-polygon over geographic coordinates (treated as planar).
inline bool point_in_polygon(GeoPoint p, const RingPolygon& poly) {
  auto in_ring = [&](std::span<const GeoPoint> ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const GeoPoint& a = ring[j];
      const GeoPoint& b = ring[i];
      if ((b.lat > p.lat) != (a.lat > p.lat)) {
        const double xint = b.lon + (p.lat - b.lat) * (a.lon - b.lon) / (a.lat - b.lat);
        if (p.lon < xint) inside = !inside;
      }
    }
    return inside;
  };
  if (!in_ring(poly.exterior)) return false;
  for (const auto& h : poly.holes)
    if (in_ring(h)) return false;
  return true;
}

/// Planar shoelace area in an equirectangular frame centered at the mean of
/// the exterior vertices. Holes are subtracted; result is non-negative.
inline double polygon_area_m2(const RingPolygon& poly) {
  const auto ring = open_ring(poly.exterior);
  if (distinct_vertices(ring) < 3) throw DegeneratePolygon("polygon needs 3 distinct vertices");
  // vertex means, summed in sorted order so the reference frame does not
  // depend on ring direction or starting vertex
  auto sorted_mean = [&](auto&& get) {
    std::vector<double> vals;
    vals.reserve(ring.size());
    for (auto p : ring) vals.push_back(get(p));
    std::sort(vals.begin(), vals.end());
    double sum = 0.0;
    for (double v : vals) sum += v;
    return sum / double(vals.size());
  };
  const double lat0 = sorted_mean([](GeoPoint p) { return p.lat; });
  const double lon0 = sorted_mean([](GeoPoint p) { return p.lon; });

  // shoelace on locally centered coordinates; centering avoids the large
  // cancellation that would otherwise dominate small areas
  LocalProjection proj(lat0);
  const XY center = proj.to_xy({lat0, lon0});
  auto centered = [&](std::span<const GeoPoint> r) {
    std::vector<XY> xy;
    xy.reserve(r.size());
    for (auto p : r) {
      const XY q = proj.to_xy(p);
      xy.push_back({q.x - center.x, q.y - center.y});
    }
    return xy;
  };
  double area = std::abs(detail::shoelace(centered(ring)));
  for (const auto& hole : poly.holes) {
    const auto hr = open_ring(hole);
    if (hr.size() < 3) continue;
    area -= std::abs(detail::shoelace(centered(hr)));
  }
  return std::max(area, 0.0);
}

/// Minimal convex ring containing all points, counterclockwise.
inline RingPolygon convex_hull(std::vector<GeoPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](GeoPoint a, GeoPoint b) {
    return a.lon < b.lon || (a.lon == b.lon && a.lat < b.lat);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) throw DegenerateHull("hull needs 3 distinct points");

  auto cross = [](GeoPoint o, GeoPoint a, GeoPoint b) {
    return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
  };
  std::vector<GeoPoint> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateHull("all points collinear");
  double twice_area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const GeoPoint& a = hull[i];
    const GeoPoint& b = hull[(i + 1) % hull.size()];
    twice_area += a.lon * b.lat - b.lon * a.lat;
  }
  if (twice_area < 0) std::reverse(hull.begin(), hull.end());
  return RingPolygon{std::move(hull), {}};
}

/// Regular grid in geographic coordinates. `origin` is the upper-left corner
/// of the grid (not of the first cell); rows run north to south.
struct RasterGrid {
  GeoPoint origin;
  double cell_size = 0;  // degrees
  std::size_t nrows = 0, ncols = 0;
  double nodata = -9999.0;
  std::vector<double> values;  // row-major, values[r * ncols + c]

  double at(std::size_t r, std::size_t c) const { return values[r * ncols + c]; }
  bool is_nodata(double v) const { return v == nodata || std::isnan(v); }
  GeoPoint cell_center(std::size_t r, std::size_t c) const {
    return {origin.lat - (double(r) + 0.5) * cell_size,
            origin.lon + (double(c) + 0.5) * cell_size};
  }
  bool covers(GeoPoint p) const {
    return p.lon >= origin.lon && p.lon < origin.lon + double(ncols) * cell_size &&
           p.lat <= origin.lat && p.lat > origin.lat - double(nrows) * cell_size;
  }
  /// Cell containing the point; only valid when covers(p).
  std::pair<std::size_t, std::size_t> cell_of(GeoPoint p) const {
    auto r = std::size_t((origin.lat - p.lat) / cell_size);
    auto c = std::size_t((p.lon - origin.lon) / cell_size);
    if (r >= nrows) r = nrows - 1;
    if (c >= ncols) c = ncols - 1;
    return {r, c};
  }
  void validate() const {
    if (cell_size <= 0) throw InvalidParameter("raster cell_size must be > 0");
    if (nrows == 0 || ncols == 0 || values.size() != nrows * ncols)
      throw InvalidParameter("raster dimensions do not match value grid");
  }
};

struct CellIndex {
  int row = 0, col = 0;
  auto operator<=>(const CellIndex&) const = default;
};

/// Flooded-area mask on a metric analysis grid: cells wet after the event
/// that were not wet before it.
struct FloodExtent {
  std::vector<CellIndex> mask;   // sorted (row, col)
  double analysis_cell_size = 0;  // meters
  double area_m2 = 0;
  std::string pre_layer_id, post_layer_id;
  Date pre_date{}, post_date{};

  // analysis grid frame (projected meters)
  double origin_x = 0, origin_y = 0;
  std::size_t nrows = 0, ncols = 0;
  double ref_lat = 0;

  XY cell_center_xy(CellIndex c) const {
    return {origin_x + (double(c.col) + 0.5) * analysis_cell_size,
            origin_y + (double(c.row) + 0.5) * analysis_cell_size};
  }
  GeoPoint cell_center_geo(CellIndex c) const {
    return LocalProjection(ref_lat).to_geo(cell_center_xy(c));
  }
};

struct ExtentMeta {
  std::string pre_layer_id = "pre";
  std::string post_layer_id = "post";
  Date pre_date = make_date(2000, 1, 1);
  Date post_date = make_date(2000, 1, 2);
};

inline constexpr std::size_t kMaxAnalysisCells = 30'000'000;

/// Rasterizes both hydrography layers onto a shared grid over their union
/// bounding box (cell-center membership, even-odd) and differences the masks.
inline FloodExtent flood_extent(const std::vector<RingPolygon>& pre,
                                const std::vector<RingPolygon>& post,
                                double analysis_cell_size_m, const ExtentMeta& meta = {}) {
  if (pre.empty() || post.empty()) throw EmptyLayer("hydrography layer is empty");
  if (!(analysis_cell_size_m > 0)) throw InvalidParameter("analysis cell size must be > 0");
  if (!(meta.pre_date < meta.post_date)) throw InvalidParameter("pre_date must precede post_date");

  std::vector<GeoPoint> all;
  for (const auto* layer : {&pre, &post})
    for (const auto& poly : *layer) {
      if (open_ring(poly.exterior).size() < 3) throw DegeneratePolygon("ring in layer");
      for (auto p : poly.exterior) all.push_back(p);
    }
  const BoundingBox bbox = BoundingBox::of(all);
  const LocalProjection proj(bbox.center().lat);

  std::vector<detail::ProjectedPolygon> pre_xy, post_xy;
  for (const auto& poly : pre) pre_xy.push_back(detail::project(poly, proj));
  for (const auto& poly : post) post_xy.push_back(detail::project(poly, proj));

  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const auto* layer : {&pre_xy, &post_xy})
    for (const auto& poly : *layer)
      for (auto q : poly.exterior) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
        ymin = std::min(ymin, q.y);
        ymax = std::max(ymax, q.y);
      }

  const double s = analysis_cell_size_m;
  const auto ncols = std::size_t(std::max(1.0, std::ceil((xmax - xmin) / s)));
  const auto nrows = std::size_t(std::max(1.0, std::ceil((ymax - ymin) / s)));
  if (nrows * ncols > kMaxAnalysisCells)
    throw InvalidParameter("analysis grid too large; increase cell size");

  FloodExtent out;
  out.analysis_cell_size = s;
  out.pre_layer_id = meta.pre_layer_id;
  out.post_layer_id = meta.post_layer_id;
  out.pre_date = meta.pre_date;
  out.post_date = meta.post_date;
  out.origin_x = xmin;
  out.origin_y = ymin;
  out.nrows = nrows;
  out.ncols = ncols;
  out.ref_lat = proj.ref_lat();

  auto in_layer = [](XY p, const std::vector<detail::ProjectedPolygon>& layer) {
    for (const auto& poly : layer)
      if (detail::point_in_projected(p, poly)) return true;
    return false;
  };
  for (std::size_t r = 0; r < nrows; ++r)
    for (std::size_t c = 0; c < ncols; ++c) {
      const XY center{xmin + (double(c) + 0.5) * s, ymin + (double(r) + 0.5) * s};
      if (in_layer(center, post_xy) && !in_layer(center, pre_xy))
        out.mask.push_back({int(r), int(c)});
    }
  out.area_m2 = double(out.mask.size()) * s * s;
  return out;
}

struct ElevationStats {
  double mean = 0, min = 0, max = 0;
  std::size_t n_cells = 0;
};

/// Statistics over raster cells whose centers fall inside the polygon,
/// skipping nodata.
inline ElevationStats drape_stats(const RingPolygon& poly, const RasterGrid& dem) {
  dem.validate();
  const auto ring = open_ring(poly.exterior);
  if (distinct_vertices(ring) < 3) throw DegeneratePolygon("polygon needs 3 distinct vertices");
  const BoundingBox bbox = BoundingBox::of(ring);

  ElevationStats st;
  st.min = std::numeric_limits<double>::infinity();
  st.max = -st.min;
  double sum = 0.0;
  for (std::size_t r = 0; r < dem.nrows; ++r) {
    const double lat = dem.cell_center(r, 0).lat;
    if (lat < bbox.min_lat || lat > bbox.max_lat) continue;
    for (std::size_t c = 0; c < dem.ncols; ++c) {
      const GeoPoint center = dem.cell_center(r, c);
      if (center.lon < bbox.min_lon || center.lon > bbox.max_lon) continue;
      const double v = dem.at(r, c);
      if (dem.is_nodata(v)) continue;
      if (!point_in_polygon(center, poly)) continue;
      sum += v;
      st.min = std::min(st.min, v);
      st.max = std::max(st.max, v);
      ++st.n_cells;
    }
  }
  if (st.n_cells == 0) throw NoElevationCoverage("no non-nodata cell inside polygon");
  st.mean = sum / double(st.n_cells);
  return st;
}

struct RiverRise {
  double d_mean = 0, d_min = 0, d_max = 0;
};

inline RiverRise river_rise(const ElevationStats& pre, const ElevationStats& post) {
  return {post.mean - pre.mean, post.min - pre.min, post.max - pre.max};
}

/// Sums population over the flood mask. Each population cell's value is split
/// uniformly among the analysis cells whose centers fall in it (counted over
/// the whole analysis grid), so totals are conserved. Nodata counts as zero.
inline double affected_population(const FloodExtent& extent, const RasterGrid& pop) {
  pop.validate();
  if (extent.mask.empty()) return 0.0;

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> covering;
  for (std::size_t r = 0; r < extent.nrows; ++r)
    for (std::size_t c = 0; c < extent.ncols; ++c) {
      const GeoPoint g = extent.cell_center_geo({int(r), int(c)});
      if (pop.covers(g)) ++covering[pop.cell_of(g)];
    }

  double total = 0.0;
  std::size_t covered = 0;
  for (const auto& cell : extent.mask) {
    const GeoPoint g = extent.cell_center_geo(cell);
    if (!pop.covers(g)) continue;
    ++covered;
    const auto idx = pop.cell_of(g);
    double v = pop.at(idx.first, idx.second);
    if (pop.is_nodata(v)) v = 0.0;
    total += v / double(covering.at(idx));
  }
  if (covered == 0) throw NoPopulationCoverage("population raster does not overlap flood mask");
  return total;
}

}  // namespace floodpulse::geo
