#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <filesystem>

#include "floodpulse/io.hpp"

using namespace floodpulse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("fp_io_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("csv splitting honors quotes") {
  CHECK(io::split_csv("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(io::split_csv("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
  CHECK(io::split_csv("a,\"say \"\"hi\"\"\",c") == std::vector<std::string>{"a", "say \"hi\"", "c"});
  CHECK(io::split_csv("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(io::split_csv("a,b\r") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("doubles format compactly and round-trip") {
  CHECK(io::fmt_double(0.5) == "0.5");
  CHECK(io::fmt_double(12) == "12");
  const double v = 0.1 + 0.2;
  CHECK(io::parse_double(io::fmt_double(v)) == v);
  CHECK_FALSE(io::parse_double("nope").has_value());
  CHECK_FALSE(io::parse_double("1.5x").has_value());
}

TEST_CASE("presence csv parsing rejects bad rows with reasons") {
  TempDir tmp;
  const auto path = tmp.path / "presence.csv";
  io::write_file(path,
                 "antenna_id,lat,lon,date,hour,count\n"
                 "a1,43.6,3.9,2014-09-29,20,12\n"
                 "a1,43.6,3.9,2014-09-29,24,12\n"   // bad hour
                 "a1,43.6,3.9,2014-99-29,20,12\n"   // bad date
                 "a1,91.0,3.9,2014-09-29,20,12\n"   // bad lat
                 "a1,43.6,3.9,2014-09-30,21,-3\n"   // negative count
                 ",43.6,3.9,2014-09-30,21,3\n"      // empty id
                 "a2,43.7,3.8,2014-09-29,20,5\n");
  const auto res = io::read_presence_csv(path);
  CHECK(res.total == 7);
  CHECK(res.rows.size() == 2);
  REQUIRE(res.rejected.size() == 5);
  CHECK(res.rejected[0].line == 3);
  CHECK(res.rejected[0].reason == "bad hour");
}

TEST_CASE("posts jsonl parsing") {
  TempDir tmp;
  const auto path = tmp.path / "posts.jsonl";
  io::write_file(
      path,
      R"({"id":"1","ts":"2017-04-01T10:00:00Z","text":"flood","author":"u1","gender":"f","lat":3.4,"lon":-76.5,"platform":"tw"})"
      "\n"
      R"({"id":"2","text":"missing ts","author":"u1"})"
      "\n"
      R"({"id":"3","ts":"2017-04-01T10:00:00Z","text":"no geo","author":"u2","gender":"u"})"
      "\n"
      R"({"id":"4","ts":"2017-04-01T10:00:00Z","text":"bad gender","author":"u2","gender":"x"})"
      "\n"
      R"({"id":"5","ts":"2017-04-01T10:00:00Z","text":"lat only","author":"u2","lat":1.0})"
      "\n"
      "not json at all\n");
  const auto res = io::read_posts_jsonl(path);
  CHECK(res.total == 6);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].gender == social::Gender::Female);
  REQUIRE(res.rows[0].geo.has_value());
  CHECK(res.rows[0].geo->lat == 3.4);
  CHECK(res.rows[1].id == "3");
  REQUIRE(res.rejected.size() == 4);
  CHECK(res.rejected[0].reason == "missing ts");
  CHECK(res.rejected[1].reason == "bad gender");
  CHECK(res.rejected[2].reason == "lat/lon must come together");
  CHECK(res.rejected[3].reason == "not a JSON object");
}

TEST_CASE("stations and rainfall csv parsing") {
  TempDir tmp;
  io::write_file(tmp.path / "stations.csv",
                 "id,lat,lon,name\n"
                 "st_1,43.6,3.9,\"Montpellier, centre\"\n"
                 "st_2,1.15,-76.65\n"
                 "st_3,banana,3.9,x\n");
  const auto st = io::read_stations_csv(tmp.path / "stations.csv");
  REQUIRE(st.rows.size() == 2);
  CHECK(st.rows[0].name == "Montpellier, centre");
  CHECK(st.rejected.size() == 1);

  io::write_file(tmp.path / "rain.csv",
                 "station_id,date,mm\n"
                 "st_1,2014-09-29,43.5\n"
                 "st_1,2014-09-30,-1\n"
                 "st_1,nope,3\n");
  const auto rain = io::read_rainfall_csv(tmp.path / "rain.csv");
  REQUIRE(rain.rows.size() == 1);
  CHECK(rain.rows[0].mm == 43.5);
  CHECK(rain.rejected.size() == 2);
}

TEST_CASE("missing files raise MissingInput") {
  CHECK_THROWS_AS(io::read_presence_csv("/nonexistent/nope.csv"), MissingInput);
  CHECK_THROWS_AS(io::read_ascii_grid("/nonexistent/nope.asc"), MissingInput);
}

TEST_CASE("ascii grid round trip") {
  TempDir tmp;
  geo::RasterGrid g;
  g.origin = {1.0, 2.0};
  g.cell_size = 0.25;
  g.nrows = 2;
  g.ncols = 3;
  g.nodata = -1;
  g.values = {1, 2, 3, 4, 5, 6};
  const auto path = tmp.path / "grid.asc";
  io::write_ascii_grid(path, g);
  const auto back = io::read_ascii_grid(path);
  CHECK(back.nrows == 2);
  CHECK(back.ncols == 3);
  CHECK(back.cell_size == 0.25);
  CHECK(back.nodata == -1);
  CHECK(back.origin.lat == Catch::Approx(1.0));
  CHECK(back.origin.lon == Catch::Approx(2.0));
  CHECK(back.values == g.values);
}

TEST_CASE("ascii grid header validation") {
  TempDir tmp;
  io::write_file(tmp.path / "bad.asc", "ncols 2\nnrows 2\ncellsize 0\n1 2 3 4\n");
  CHECK_THROWS_AS(io::read_ascii_grid(tmp.path / "bad.asc"), CorruptInput);
  io::write_file(tmp.path / "short.asc",
                 "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3\n");
  CHECK_THROWS_AS(io::read_ascii_grid(tmp.path / "short.asc"), CorruptInput);
}

TEST_CASE("geojson polygons parse with holes and multipolygons") {
  TempDir tmp;
  const auto path = tmp.path / "layers.geojson";
  io::write_file(path, R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature", "properties": {},
       "geometry": {"type": "Polygon", "coordinates": [
         [[0,0],[1,0],[1,1],[0,1],[0,0]],
         [[0.25,0.25],[0.75,0.25],[0.75,0.75],[0.25,0.75],[0.25,0.25]]]}},
      {"type": "Feature", "properties": {},
       "geometry": {"type": "MultiPolygon", "coordinates": [
         [[[2,2],[3,2],[3,3],[2,2]]],
         [[[5,5],[6,5],[6,6],[5,5]]]]}},
      {"type": "Feature", "properties": {}, "geometry": {"type": "Point", "coordinates": [9,9]}}
    ]})");
  const auto polys = io::read_geojson_polygons(path);
  REQUIRE(polys.size() == 3);
  CHECK(polys[0].exterior.size() == 4);  // closing vertex dropped
  CHECK(polys[0].holes.size() == 1);
  CHECK(polys[1].exterior.size() == 3);
  // coordinates arrive lon-first
  CHECK(polys[0].exterior[1].lon == 1.0);
  CHECK(polys[0].exterior[1].lat == 0.0);
}

TEST_CASE("invalid geojson raises CorruptInput") {
  TempDir tmp;
  io::write_file(tmp.path / "bad.geojson", "{not json");
  CHECK_THROWS_AS(io::read_geojson_polygons(tmp.path / "bad.geojson"), CorruptInput);
  io::write_file(tmp.path / "empty.geojson", R"({"type":"FeatureCollection","features":[]})");
  CHECK_THROWS_AS(io::read_geojson_polygons(tmp.path / "empty.geojson"), CorruptInput);
}

TEST_CASE("geojson writers produce rfc-shaped documents") {
  const geo::RingPolygon poly{{{0, 0}, {0, 1}, {1, 1}}, {}};
  const auto geom = io::polygon_geometry(poly);
  CHECK(geom["type"] == "Polygon");
  REQUIRE(geom["coordinates"].size() == 1);
  CHECK(geom["coordinates"][0].size() == 4);  // ring closed on output
  CHECK(geom["coordinates"][0][0][0] == 0.0);

  const auto box = io::bbox_geometry({10, 20, 11, 21});
  CHECK(box["type"] == "Polygon");
  CHECK(box["coordinates"][0].size() == 5);
}
