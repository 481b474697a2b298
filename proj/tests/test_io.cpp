#include <filesystem>
#include <fstream>
#include <sstream>

#include "bskel/io.hpp"
#include "doctest.h"

using namespace bskel;

namespace {

std::size_t occurrences(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++n;
  return n;
}

PointSet csv(const std::string& text) {
  std::istringstream in(text);
  return parse_points_csv(in);
}

PointSet json_points(const std::string& text) {
  std::istringstream in(text);
  return parse_points_json(in);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("bskel_test_" + name);
}

}  // namespace

TEST_CASE("csv ingestion") {
  auto ps = csv("0,0\n2,0\n1,0.5\n");
  REQUIRE(ps.size() == 3);
  CHECK(ps.dim() == 2);
  CHECK(ps[0].id == 0);
  CHECK(ps[2].id == 2);
  CHECK(ps[2].coords == Coords{1, 0.5});

  ps = csv("# comment\nid,x,y,z\n7, 1, 2, 3\n\n3,4,5,6\n");
  REQUIRE(ps.size() == 2);
  CHECK(ps.dim() == 3);
  CHECK(ps[0].id == 7);
  CHECK(ps[1].coords == Coords{4, 5, 6});

  CHECK_THROWS_AS(csv("0,0\n1,1\n0,0\n"), InputError);
  CHECK_THROWS_AS(csv("id,x\n1,0\n1,2\n"), InputError);
  CHECK_THROWS_AS(csv(""), InputError);
  try {
    csv("0,0\n1,1\n2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  try {
    csv("id,x,y\n0,1,abc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("json ingestion") {
  const auto ps = json_points(R"({"dim": 3, "points": [{"id": 4, "coords": [1, 2, 3]},
                                                       {"id": 9, "coords": [0, 0, 0.5]}]})");
  REQUIRE(ps.size() == 2);
  CHECK(ps[1].id == 9);
  CHECK(ps[1].coords == Coords{0, 0, 0.5});
  CHECK_THROWS_AS(json_points(R"({"dim": 3, "points": [{"id": 0, "coords": [1, 2]}]})"),
                  InputError);
  CHECK_THROWS_AS(json_points(R"({"dim": 2, "points": [{"id": 0, "coords": [1, 2]},
                                                        {"id": 1, "coords": [1, 2]}]})"),
                  InputError);
  CHECK_THROWS_AS(json_points("{"), InputError);
  CHECK_THROWS_AS(json_points(R"({"points": []})"), InputError);
}

TEST_CASE("graph output formats") {
  SkeletonGraph g;
  g.params = {1.5, Metric::kL1, Variant::kCircleBased, Algorithm::kBrute};
  std::ostringstream js;
  write_graph_json(js, g);
  CHECK(js.str() ==
        "{\n  \"beta\": 1.5,\n  \"metric\": \"l1\",\n  \"variant\": \"circle\",\n"
        "  \"algorithm\": \"brute\",\n  \"edges\": []\n}\n");

  g.edges = {{0, 1}, {0, 2}};
  std::ostringstream cs;
  write_graph_csv(cs, g);
  CHECK(cs.str() == "0,1\n0,2\n");

  const auto two = PointSet::from_coords({{0, 0}, {1, 3}});
  const auto g2 = build_skeleton(two, 2, Metric::kLInf, Variant::kLensBased, Algorithm::kIndexed);
  std::ostringstream j2;
  write_graph_json(j2, g2);
  CHECK(j2.str().find("\"edges\": [\n    [0, 1]\n  ]") != std::string::npos);
}

TEST_CASE("graph round trip") {
  const auto ps = PointSet::from_coords({{0, 0}, {2, 0}, {1, 0.5}, {4, 1}, {3, 3}});
  for (Format f : {Format::kJson, Format::kCsv}) {
    const auto g = build_skeleton(ps, 1.3, Metric::kL1, Variant::kLensBased, Algorithm::kIndexed);
    const auto path = temp_path(f == Format::kJson ? "g.json" : "g.csv").string();
    save_graph(g, path, f);
    if (f == Format::kJson) {
      const auto back = load_graph(path);
      CHECK(back.edges == g.edges);
      CHECK(back.params == g.params);
    } else {
      std::ifstream in(path);
      std::stringstream text;
      text << in.rdbuf();
      std::ostringstream want;
      write_graph_csv(want, g);
      CHECK(text.str() == want.str());
    }
    std::filesystem::remove(path);
  }
  std::istringstream bad(R"({"beta": 1, "metric": "l2", "variant": "lens",
                             "algorithm": "brute", "edges": []})");
  CHECK_THROWS_AS(parse_graph_json(bad), InputError);
}

TEST_CASE("point file round trip by extension") {
  const auto path = temp_path("pts.json").string();
  {
    std::ofstream out(path);
    out << R"({"dim": 2, "points": [{"id": 0, "coords": [1, 2]}, {"id": 1, "coords": [3, 4]}]})";
  }
  CHECK(format_from_path(path) == Format::kJson);
  CHECK(load_points(path).size() == 2);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_points(temp_path("missing.csv").string()), InputError);
}

TEST_CASE("svg rendering") {
  const auto ps = PointSet::from_coords({{0, 0}, {2, 0}, {1, 0.5}});
  const auto g = build_skeleton(ps, 1, Metric::kL1, Variant::kLensBased, Algorithm::kIndexed);
  REQUIRE(g.edges.size() == 2);
  const auto svg = render_svg(ps, g);
  CHECK(occurrences(svg, "<circle ") == 3);
  CHECK(occurrences(svg, "<line ") == 2);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(render_svg(ps, g) == svg);

  const auto p4 = PointSet::from_coords({{0, 0, 0, 0}, {1, 1, 1, 1}});
  SkeletonGraph empty;
  CHECK_THROWS_AS(render_svg(p4, empty), InputError);
  SvgOptions axes;
  axes.axes = std::pair{0, 3};
  CHECK_NOTHROW(render_svg(p4, empty, axes));
}

TEST_CASE("lens overlay of the unit Linf box is a rectangle") {
  const auto ps = PointSet::from_coords({{0, 0, 0}, {4, 2, 1}});
  const auto lenses = minimal_lenses(ps[0], ps[1], 1, Metric::kLInf, Variant::kLensBased);
  REQUIRE(lenses.size() == 1);
  for (auto axes : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    const auto polys = lens_outlines(lenses[0], axes);
    REQUIRE(polys.size() == 1);
    const auto& poly = polys[0];
    REQUIRE(poly.size() == 4);
    const double hi[3] = {4, 2, 1};
    for (auto [x, y] : poly) {
      CHECK((std::abs(x) < 1e-9 || std::abs(x - hi[axes.first]) < 1e-9));
      CHECK((std::abs(y) < 1e-9 || std::abs(y - hi[axes.second]) < 1e-9));
    }
  }
  const auto g = build_skeleton(ps, 1, Metric::kLInf, Variant::kLensBased, Algorithm::kIndexed);
  SvgOptions opt;
  opt.lens_pair = std::pair<PointId, PointId>{0, 1};
  const auto svg = render_svg(ps, g, opt);
  CHECK(occurrences(svg, "<polygon ") == 1);
  opt.lens_pair = std::pair<PointId, PointId>{0, 5};
  CHECK_THROWS_AS(render_svg(ps, g, opt), InputError);
}

TEST_CASE("lens outlines contain exactly the projected lens") {
  const auto ps = PointSet::from_coords({{0, 0}, {3, 1}});
  for (Metric m : {Metric::kL1, Metric::kLInf}) {
    for (double beta : {0.5, 1.0, 1.5, 3.0}) {
      for (Variant v : {Variant::kLensBased, Variant::kCircleBased}) {
        for (const auto& L : minimal_lenses(ps[0], ps[1], beta, m, v)) {
          const auto polys = lens_outlines(L, {0, 1});
          CHECK(polys.size() == (L.mode == LensMode::kUnion ? 2u : 1u));
          // Vertices of each outline lie on the lens boundary.
          for (const auto& poly : polys) {
            for (auto [x, y] : poly) CHECK(point_in_lens({x, y}, L, 1e-7));
          }
        }
      }
    }
  }
}

TEST_CASE("bench report") {
  BenchConfig cfg;
  cfg.sizes = {32};
  const auto r = bench(cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK_FALSE(r.rows[0].ratio);
  const auto text = format_bench(r);
  CHECK(text.find("ratio") == std::string::npos);
  cfg.sizes = {16, 32};
  const auto two = bench(cfg);
  CHECK(two.rows[1].ratio);
  CHECK(format_bench(two).find("ratio") != std::string::npos);
  CHECK(loglog_slope({1, 2, 4}, {1, 4, 16}) == doctest::Approx(2));
}

TEST_CASE("random lattice points are reproducible") {
  const auto a = random_lattice_points(50, 3, 42);
  const auto b = random_lattice_points(50, 3, 42);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coords == b[i].coords);
  for (const auto& p : a) {
    for (int i = 0; i < 3; ++i) CHECK((p.coords[i] >= 0 && p.coords[i] <= 1000000));
  }
}
