#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "bskel/io.hpp"

namespace bskel {

PointSet random_lattice_points(int n, int dim, std::uint64_t seed, std::int64_t max_coord) {
  if (n < 1 || dim < 1 || dim > kMaxDim) throw InputError("invalid lattice sample size");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(0, max_coord);
  std::set<Coords> seen;
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < n) {
    Coords c(dim);
    for (int i = 0; i < dim; ++i) c[i] = static_cast<double>(coord(rng));
    if (!seen.insert(c).second) continue;
    pts.push_back({static_cast<PointId>(pts.size()), c});
  }
  return PointSet(dim, std::move(pts));
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw InputError("slope needs two samples");
  double mx = 0, my = 0;
  const double k = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]) / k;
    my += std::log(ys[i]) / k;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// Repeats run as rounds over all sizes so slow drift in machine speed hits
// every size alike; each size keeps its best time.
BenchReport bench(const BenchConfig& cfg) {
  BenchReport rep;
  std::vector<PointSet> sets;
  for (int n : cfg.sizes) {
    sets.push_back(random_lattice_points(n, cfg.dim, cfg.seed + static_cast<std::uint64_t>(n)));
    BenchRow row;
    row.n = n;
    rep.rows.push_back(row);
  }
  BuildOptions opt;
  opt.threads = cfg.threads;
  const auto keep_min = [](std::optional<double>& slot, double t) {
    slot = slot ? std::min(*slot, t) : t;
  };
  for (int r = 0; r < std::max(1, cfg.repeats); ++r) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      BenchRow& row = rep.rows[i];
      if (cfg.run_indexed) {
        IndexTimings timings;
        opt.timings = &timings;
        const auto t0 = std::chrono::steady_clock::now();
        row.edges = indexed_skeleton(sets[i], cfg.beta, cfg.metric, cfg.variant, opt).edges.size();
        keep_min(row.t_indexed, seconds(t0));
        keep_min(row.t_build, timings.build_seconds);
        opt.timings = nullptr;
      }
      if (row.n <= cfg.brute_cutoff) {
        const auto t0 = std::chrono::steady_clock::now();
        row.edges =
            brute_force_skeleton(sets[i], cfg.beta, cfg.metric, cfg.variant, opt).edges.size();
        keep_min(row.t_brute, seconds(t0));
      }
    }
  }
  std::vector<double> ni, ti, nb, tb;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    BenchRow& row = rep.rows[i];
    if (row.t_indexed) {
      ni.push_back(row.n);
      ti.push_back(*row.t_indexed);
      if (i > 0 && rep.rows[i - 1].n * 2 == row.n && rep.rows[i - 1].t_indexed) {
        row.ratio = *row.t_indexed / *rep.rows[i - 1].t_indexed;
      }
    }
    if (row.t_brute) {
      nb.push_back(row.n);
      tb.push_back(*row.t_brute);
    }
  }
  if (ni.size() >= 2) rep.indexed_slope = loglog_slope(ni, ti);
  if (nb.size() >= 2) rep.brute_slope = loglog_slope(nb, tb);
  return rep;
}

std::string format_bench(const BenchReport& r) {
  std::ostringstream os;
  const bool ratios = r.rows.size() > 1;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%8s %12s %12s %12s %8s", "n", "t_indexed", "t_build", "t_brute",
                "edges");
  os << buf << (ratios ? "    ratio" : "") << "\n";
  auto cell = [](const std::optional<double>& v) {
    char b[32];
    if (v) {
      std::snprintf(b, sizeof b, "%12.6f", *v);
    } else {
      std::snprintf(b, sizeof b, "%12s", "-");
    }
    return std::string(b);
  };
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%8d", row.n);
    os << buf << " " << cell(row.t_indexed) << " " << cell(row.t_build) << " "
       << cell(row.t_brute);
    std::snprintf(buf, sizeof buf, " %8zu", row.edges);
    os << buf;
    if (ratios) {
      if (row.ratio) {
        std::snprintf(buf, sizeof buf, " %8.3f", *row.ratio);
      } else {
        std::snprintf(buf, sizeof buf, " %8s", "-");
      }
      os << buf;
    }
    os << "\n";
  }
  if (r.indexed_slope) os << "indexed log-log slope: " << *r.indexed_slope << "\n";
  if (r.brute_slope) os << "brute log-log slope: " << *r.brute_slope << "\n";
  return os.str();
}

}  // namespace bskel
