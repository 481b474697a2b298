// Point-set ingestion, graph output, SVG figures and the benchmark harness.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bskel/geometry.hpp"
#include "bskel/skeleton.hpp"

namespace bskel {

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& what);
  int line;
};

enum class Format { kCsv, kJson };

std::optional<Format> parse_format(std::string_view s);
// From the file extension; csv unless the path ends in ".json".
Format format_from_path(const std::string& path);

// CSV: header "id,x1,...,xd" or headerless coordinate rows with ids 0..n-1.
// Blank lines and lines starting with '#' are skipped.
PointSet parse_points_csv(std::istream& in);
// JSON: {"dim": d, "points": [{"id": i, "coords": [...]}, ...]}.
PointSet parse_points_json(std::istream& in);
PointSet load_points(const std::string& path, std::optional<Format> fmt = std::nullopt);

void write_graph_json(std::ostream& out, const SkeletonGraph& g);
void write_graph_csv(std::ostream& out, const SkeletonGraph& g);
void write_spectrum_json(std::ostream& out, const std::vector<SkeletonGraph>& graphs);
void save_graph(const SkeletonGraph& g, const std::string& path, Format fmt);

// Parameters and edges; point ids are not part of the format.
SkeletonGraph parse_graph_json(std::istream& in);
SkeletonGraph load_graph(const std::string& path);

struct SvgOptions {
  double width = 640;
  double point_radius = 3;
  double margin = 16;
  std::optional<std::pair<int, int>> axes;  // required for d > 3
  std::optional<std::pair<PointId, PointId>> lens_pair;
  bool labels = false;
};

// Throws InputError for d > 3 without axes or an unknown lens pair.
std::string render_svg(const PointSet& ps, const SkeletonGraph& g, const SvgOptions& opt = {});

using Polygon = std::vector<std::pair<double, double>>;

// Projection of a lens onto an axis pair: one polygon for an intersection
// lens, one per ball for a union lens.  Exact, counter-clockwise.
std::vector<Polygon> lens_outlines(const Lens& lens, std::pair<int, int> axes);

PointSet random_lattice_points(int n, int dim, std::uint64_t seed,
                               std::int64_t max_coord = 1000000);

struct BenchConfig {
  std::vector<int> sizes;
  int dim = 2;
  Metric metric = Metric::kLInf;
  double beta = 1;
  Variant variant = Variant::kLensBased;
  std::uint64_t seed = 1;
  int brute_cutoff = 256;
  int repeats = 1;
  int threads = 1;
  bool run_indexed = true;
};

struct BenchRow {
  int n = 0;
  std::optional<double> t_indexed, t_build, t_brute;
  std::optional<double> ratio;  // t_indexed(n) / t_indexed(n / 2)
  std::size_t edges = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::optional<double> indexed_slope, brute_slope;
};

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);
BenchReport bench(const BenchConfig& cfg);
std::string format_bench(const BenchReport& r);

}  // namespace bskel
