// Lens-based and circle-based beta-skeletons: the brute-force oracle and the
// range-index accelerated builder.
#pragma once

#include <compare>
#include <string>
#include <vector>

#include "bskel/geometry.hpp"
#include "bskel/lens.hpp"

namespace bskel {

enum class Algorithm { kBrute, kIndexed };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct SkeletonParams {
  double beta = 1;
  Metric metric = Metric::kLInf;
  Variant variant = Variant::kLensBased;
  Algorithm algorithm = Algorithm::kIndexed;
  friend bool operator==(const SkeletonParams&, const SkeletonParams&) = default;
};

struct Edge {
  PointId a = 0, b = 0;  // a < b
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct SkeletonGraph {
  std::vector<PointId> ids;
  std::vector<Edge> edges;  // sorted, unique
  SkeletonParams params;
  std::vector<std::string> warnings;

  bool has_edge(PointId a, PointId b) const;
};

struct IndexTimings {
  double build_seconds = 0;
  double query_seconds = 0;
};

struct BuildOptions {
  int threads = 1;
  double eps = kDefaultEpsilon;
  // Soft bound |E| <= size_factor * n checked for lens-based beta >= 2.
  double size_factor = 12;
  IndexTimings* timings = nullptr;
};

SkeletonGraph brute_force_skeleton(const PointSet& ps, double beta, Metric m, Variant v,
                                   const BuildOptions& opt = {});

SkeletonGraph indexed_skeleton(const PointSet& ps, double beta, Metric m, Variant v,
                               const BuildOptions& opt = {});

SkeletonGraph build_skeleton(const PointSet& ps, double beta, Metric m, Variant v, Algorithm a,
                             const BuildOptions& opt = {});

SkeletonGraph gabriel(const PointSet& ps, Metric m, const BuildOptions& opt = {});
SkeletonGraph rng(const PointSet& ps, Metric m, const BuildOptions& opt = {});

class NestingError : public InvariantError {
 public:
  NestingError(Edge witness, double beta_lo, double beta_hi);
  Edge witness;
  double beta_lo, beta_hi;
};

// One graph per beta over a shared index.  Lens-based spectra are checked to
// be nested; a violation throws NestingError.
std::vector<SkeletonGraph> beta_spectrum(const PointSet& ps, const std::vector<double>& betas,
                                         Metric m, Variant v, const BuildOptions& opt = {});

}  // namespace bskel
