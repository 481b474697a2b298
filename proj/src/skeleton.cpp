#include "bskel/skeleton.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <numeric>
#include <thread>

#include "bskel/family.hpp"
#include "bskel/region_index.hpp"

namespace bskel {

std::string_view to_string(Algorithm a) { return a == Algorithm::kBrute ? "brute" : "indexed"; }

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "brute") return Algorithm::kBrute;
  if (s == "indexed") return Algorithm::kIndexed;
  return std::nullopt;
}

bool SkeletonGraph::has_edge(PointId a, PointId b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges.begin(), edges.end(), Edge{a, b});
}

NestingError::NestingError(Edge w, double lo, double hi)
    : InvariantError("nesting violated: edge (" + std::to_string(w.a) + ", " +
                     std::to_string(w.b) + ") present at beta " + std::to_string(hi) +
                     " but not at beta " + std::to_string(lo)),
      witness(w),
      beta_lo(lo),
      beta_hi(hi) {}

namespace {

using PairTest = std::function<bool(const Point&, const Point&)>;

// Points in id order.
std::vector<const Point*> by_id(const PointSet& ps) {
  std::vector<const Point*> pts;
  for (const auto& p : ps) pts.push_back(&p);
  std::sort(pts.begin(), pts.end(), [](const Point* a, const Point* b) { return a->id < b->id; });
  return pts;
}

void validate(const PointSet& ps, double beta, Variant v) {
  if (ps.size() < 2) throw InputError("a skeleton needs at least two points");
  regime_of(beta, v);
}

SkeletonGraph run_pairs(const PointSet& ps, const SkeletonParams& params, int threads,
                        const PairTest& test) {
  const auto pts = by_id(ps);
  const std::size_t n = pts.size();
  std::vector<std::vector<Edge>> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (test(*pts[i], *pts[j])) rows[i].push_back({pts[i]->id, pts[j]->id});
      }
    }
  };
  const int t = std::max(1, threads);
  if (t == 1) {
    worker();
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k) {
      pool.emplace_back([&, k] {
        try {
          worker();
        } catch (...) {
          errors[static_cast<std::size_t>(k)] = std::current_exception();
          next = n;
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  SkeletonGraph g;
  g.params = params;
  for (const Point* p : pts) g.ids.push_back(p->id);
  for (auto& r : rows) g.edges.insert(g.edges.end(), r.begin(), r.end());
  return g;
}

void size_check(SkeletonGraph& g, const BuildOptions& opt) {
  const auto& p = g.params;
  if (p.variant != Variant::kLensBased || p.beta < 2 - opt.eps) return;
  const double bound = opt.size_factor * static_cast<double>(g.ids.size());
  if (static_cast<double>(g.edges.size()) > bound) {
    g.warnings.push_back("edge count " + std::to_string(g.edges.size()) + " exceeds " +
                         std::to_string(opt.size_factor) + " * n");
  }
}

SkeletonGraph indexed_with(const PointSet& ps, const RangeIndex& index, double beta, Metric m,
                           Variant v, const BuildOptions& opt) {
  SkeletonGraph g = run_pairs(ps, {beta, m, v, Algorithm::kIndexed}, opt.threads,
                              [&](const Point& a, const Point& b) {
                                for (const auto& lens : minimal_lenses(a, b, beta, m, v, opt.eps)) {
                                  if (lens_is_empty(index, lens, a.id, b.id, opt.eps)) return true;
                                }
                                const auto fam = center_family(a, b, beta, m, v, opt.eps);
                                if (!fam) return false;
                                // Endpoints lie in every lens.
                                if (index.tree.count_capped(fam->core_box(), 3, opt.eps) > 2) {
                                  return false;
                                }
                                std::vector<Coords> blockers;
                                for (PointId id : report_in_box(index, fam->hull_box(), opt.eps)) {
                                  const Coords& c = index.coords_of(id);
                                  if (id != a.id && id != b.id && fam->blocks_any(c)) {
                                    blockers.push_back(c);
                                  }
                                }
                                return fam->has_empty_lens(blockers);
                              });
  size_check(g, opt);
  return g;
}

void require_indexable(const PointSet& ps) {
  if (ps.dim() < 2 || ps.dim() > 3) {
    throw UnsupportedError("indexed skeletons support d = 2 and d = 3, got d = " +
                           std::to_string(ps.dim()) + "; use the brute-force algorithm");
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SkeletonGraph brute_force_skeleton(const PointSet& ps, double beta, Metric m, Variant v,
                                   const BuildOptions& opt) {
  validate(ps, beta, v);
  SkeletonGraph g = run_pairs(ps, {beta, m, v, Algorithm::kBrute}, opt.threads,
                              [&](const Point& a, const Point& b) {
                                for (const auto& lens : minimal_lenses(a, b, beta, m, v, opt.eps)) {
                                  std::size_t inside = 0;
                                  for (const auto& p : ps) {
                                    if (p.id != a.id && p.id != b.id) {
                                      inside += point_in_lens(p.coords, lens, opt.eps);
                                    }
                                  }
                                  if (inside == 0) return true;
                                }
                                const auto fam = center_family(a, b, beta, m, v, opt.eps);
                                if (!fam) return false;
                                std::vector<Coords> blockers;
                                for (const auto& p : ps) {
                                  if (p.id != a.id && p.id != b.id && fam->blocks_any(p.coords)) {
                                    blockers.push_back(p.coords);
                                  }
                                }
                                return fam->has_empty_lens(blockers);
                              });
  size_check(g, opt);
  return g;
}

SkeletonGraph indexed_skeleton(const PointSet& ps, double beta, Metric m, Variant v,
                               const BuildOptions& opt) {
  validate(ps, beta, v);
  require_indexable(ps);
  const auto t0 = std::chrono::steady_clock::now();
  const RangeIndex index = build_index(ps, m);
  const auto t1 = std::chrono::steady_clock::now();
  SkeletonGraph g = indexed_with(ps, index, beta, m, v, opt);
  if (opt.timings) {
    opt.timings->build_seconds = std::chrono::duration<double>(t1 - t0).count();
    opt.timings->query_seconds = seconds_since(t1);
  }
  return g;
}

SkeletonGraph build_skeleton(const PointSet& ps, double beta, Metric m, Variant v, Algorithm a,
                             const BuildOptions& opt) {
  return a == Algorithm::kBrute ? brute_force_skeleton(ps, beta, m, v, opt)
                                : indexed_skeleton(ps, beta, m, v, opt);
}

SkeletonGraph gabriel(const PointSet& ps, Metric m, const BuildOptions& opt) {
  return indexed_skeleton(ps, 1.0, m, Variant::kLensBased, opt);
}

SkeletonGraph rng(const PointSet& ps, Metric m, const BuildOptions& opt) {
  return indexed_skeleton(ps, 2.0, m, Variant::kLensBased, opt);
}

std::vector<SkeletonGraph> beta_spectrum(const PointSet& ps, const std::vector<double>& betas,
                                         Metric m, Variant v, const BuildOptions& opt) {
  if (betas.empty()) throw InputError("empty beta list");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    validate(ps, betas[i], v);
    if (i > 0 && !(betas[i] > betas[i - 1])) throw InputError("betas must be strictly increasing");
  }
  require_indexable(ps);
  const RangeIndex index = build_index(ps, m);
  std::vector<SkeletonGraph> out;
  for (double beta : betas) out.push_back(indexed_with(ps, index, beta, m, v, opt));
  if (v == Variant::kLensBased) {
    for (std::size_t i = 1; i < out.size(); ++i) {
      for (const Edge& e : out[i].edges) {
        if (!out[i - 1].has_edge(e.a, e.b)) throw NestingError(e, betas[i - 1], betas[i]);
      }
    }
  }
  return out;
}

}  // namespace bskel
