#include "bskel/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace bskel {

using nlohmann::json;

ParseError::ParseError(int l, const std::string& what)
    : InputError("line " + std::to_string(l) + ": " + what), line(l) {}

std::optional<Format> parse_format(std::string_view s) {
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  return std::nullopt;
}

Format format_from_path(const std::string& path) {
  const std::string ext = ".json";
  if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return Format::kJson;
  }
  return Format::kCsv;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || b == e) return std::nullopt;
  return v;
}

std::optional<PointId> to_id(const std::string& s) {
  PointId v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty() || v < 0) return std::nullopt;
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

std::string json_number(double x) { return json(x).dump(); }

}  // namespace

PointSet parse_points_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool header = false, first = true;
  int dim = -1;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto cells = split_csv(t);
    if (first) {
      first = false;
      if (!to_double(cells[0])) {
        if (cells[0] != "id") throw ParseError(lineno, "header must start with 'id'");
        header = true;
        dim = static_cast<int>(cells.size()) - 1;
        if (dim < 1) throw ParseError(lineno, "header has no coordinate columns");
        continue;
      }
    }
    const int ncoords = static_cast<int>(cells.size()) - (header ? 1 : 0);
    if (dim < 0) dim = ncoords;
    if (ncoords != dim) {
      throw ParseError(lineno, "expected " + std::to_string(dim) + " coordinates, found " +
                                   std::to_string(ncoords));
    }
    if (dim > kMaxDim) throw ParseError(lineno, "too many coordinates");
    Point p;
    if (header) {
      auto id = to_id(cells[0]);
      if (!id) throw ParseError(lineno, "invalid id '" + cells[0] + "'");
      p.id = *id;
    } else {
      p.id = static_cast<PointId>(pts.size());
    }
    p.coords = Coords(dim);
    for (int i = 0; i < dim; ++i) {
      const auto& cell = cells[static_cast<std::size_t>(i + (header ? 1 : 0))];
      auto v = to_double(cell);
      if (!v) throw ParseError(lineno, "invalid number '" + cell + "'");
      p.coords[i] = *v;
    }
    pts.push_back(p);
  }
  if (pts.empty()) throw InputError("no points in input");
  return PointSet(dim, std::move(pts));
}

PointSet parse_points_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    if (dim < 1 || dim > kMaxDim) throw InputError("unsupported dimension " + std::to_string(dim));
    std::vector<Point> pts;
    for (const auto& e : j.at("points")) {
      Point p;
      p.id = e.at("id").get<PointId>();
      if (p.id < 0) throw InputError("negative id " + std::to_string(p.id));
      const auto c = e.at("coords").get<std::vector<double>>();
      if (static_cast<int>(c.size()) != dim) {
        throw InputError("point " + std::to_string(p.id) + " has " + std::to_string(c.size()) +
                         " coordinates, expected " + std::to_string(dim));
      }
      p.coords = Coords::from(c);
      pts.push_back(p);
    }
    if (pts.empty()) throw InputError("no points in input");
    return PointSet(dim, std::move(pts));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed point JSON: ") + e.what());
  }
}

PointSet load_points(const std::string& path, std::optional<Format> fmt) {
  auto in = open_in(path);
  return fmt.value_or(format_from_path(path)) == Format::kJson ? parse_points_json(in)
                                                                : parse_points_csv(in);
}

namespace {

void write_graph_body(std::ostream& out, const SkeletonGraph& g, const std::string& pad) {
  const auto& p = g.params;
  out << pad << "{\n";
  out << pad << "  \"beta\": " << json_number(p.beta) << ",\n";
  out << pad << "  \"metric\": \"" << to_string(p.metric) << "\",\n";
  out << pad << "  \"variant\": \"" << to_string(p.variant) << "\",\n";
  out << pad << "  \"algorithm\": \"" << to_string(p.algorithm) << "\",\n";
  out << pad << "  \"edges\": [";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    out << (i ? ",\n" : "\n") << pad << "    [" << g.edges[i].a << ", " << g.edges[i].b << "]";
  }
  out << (g.edges.empty() ? "]\n" : "\n" + pad + "  ]\n");
  out << pad << "}";
}

SkeletonGraph graph_from_json(const json& j) {
  SkeletonGraph g;
  auto metric = parse_metric(j.at("metric").get<std::string>());
  auto variant = parse_variant(j.at("variant").get<std::string>());
  auto algo = parse_algorithm(j.at("algorithm").get<std::string>());
  if (!metric || !variant || !algo) throw InputError("unknown graph parameters");
  g.params = {j.at("beta").get<double>(), *metric, *variant, *algo};
  for (const auto& e : j.at("edges")) {
    auto pr = e.get<std::vector<PointId>>();
    if (pr.size() != 2 || pr[0] >= pr[1]) throw InputError("malformed edge");
    g.edges.push_back({pr[0], pr[1]});
  }
  return g;
}

}  // namespace

void write_graph_json(std::ostream& out, const SkeletonGraph& g) {
  write_graph_body(out, g, "");
  out << "\n";
}

void write_spectrum_json(std::ostream& out, const std::vector<SkeletonGraph>& graphs) {
  out << "[";
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    out << (i ? ",\n" : "\n");
    write_graph_body(out, graphs[i], "  ");
  }
  out << "\n]\n";
}

void write_graph_csv(std::ostream& out, const SkeletonGraph& g) {
  for (const auto& e : g.edges) out << e.a << ',' << e.b << '\n';
}

void save_graph(const SkeletonGraph& g, const std::string& path, Format fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  if (fmt == Format::kJson) {
    write_graph_json(out, g);
  } else {
    write_graph_csv(out, g);
  }
  if (!out) throw InputError("write failed for " + path);
}

SkeletonGraph parse_graph_json(std::istream& in) {
  try {
    return graph_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed graph JSON: ") + e.what());
  }
}

SkeletonGraph load_graph(const std::string& path) {
  auto in = open_in(path);
  return parse_graph_json(in);
}

}  // namespace bskel
