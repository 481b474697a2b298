// Acceptance checks, one line per criterion.  Usage:
//   bskel_acceptance --skel path/to/skel [--only N] [--regen]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "bskel/io.hpp"
#include "bskel/skeleton.hpp"
#include "oracle.hpp"

using namespace bskel;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sizes.
constexpr int kInstancesPerConfig = 200;
constexpr int kGridSizes[] = {8, 16, 32, 64};
const std::vector<double> kGridBetas{0.5, 0.8, 1, 1.3, 2, 2.7, 3.5};
constexpr int kLensesPerMetric = 100;
constexpr int kProbesPerLens = 10000;
constexpr int kRandomBoxes = 10000;
constexpr int kLemmaPairs = 1000;
constexpr int kLemma1Samples = 50;
constexpr double kIndexedSlopeLo = 1.8, kIndexedSlopeHi = 2.5;
constexpr double kBruteSlopeLo = 2.6, kBruteSlopeHi = 3.4;
const std::vector<int> kIndexedSizes{512, 1024, 2048, 4096};
const std::vector<int> kBruteSizes{64, 128, 256};
constexpr int kThreadCounts[] = {1, 2, 4};

constexpr Metric kMetrics[] = {Metric::kL1, Metric::kLInf};
constexpr Variant kVariants[] = {Variant::kLensBased, Variant::kCircleBased};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

PointSet grid_instance(int dim, int k, std::uint64_t salt) {
  const int n = kGridSizes[k % 4];
  return oracle::random_points(n, dim, 4 * n, salt * 1000003ULL + static_cast<std::uint64_t>(k));
}

Outcome oracle_equivalence() {
  std::size_t configs = 0, instances = 0, mismatches = 0;
  std::string first;
  for (int dim : {2, 3}) {
    for (Metric m : kMetrics) {
      for (int k = 0; k < kInstancesPerConfig; ++k) {
        const auto ps = grid_instance(dim, k, static_cast<std::uint64_t>(dim * 10 + (int)m));
        for (Variant v : kVariants) {
          for (double beta : kGridBetas) {
            const auto b = brute_force_skeleton(ps, beta, m, v);
            const auto x = indexed_skeleton(ps, beta, m, v);
            ++instances;
            if (b.edges != x.edges) {
              ++mismatches;
              if (first.empty()) {
                first = "; first at d=" + std::to_string(dim) + " " +
                        std::string(to_string(m)) + " " + std::string(to_string(v)) +
                        " beta=" + fmt("%g", beta) + " n=" + std::to_string(ps.size());
              }
            }
          }
        }
      }
      configs += 2 * kGridBetas.size();
    }
  }
  return {mismatches == 0, std::to_string(configs) + " configs x " +
                               std::to_string(kInstancesPerConfig) + " instances (" +
                               std::to_string(instances) + " runs), " +
                               std::to_string(mismatches) + " mismatching" + first};
}

Outcome monotonicity() {
  std::size_t instances = 0, violations = 0;
  std::map<std::string, std::size_t> by_case;
  for (int dim : {2, 3}) {
    for (Metric m : kMetrics) {
      for (int k = 0; k < kInstancesPerConfig; ++k) {
        const auto ps = grid_instance(dim, k, static_cast<std::uint64_t>(dim * 10 + (int)m));
        std::vector<SkeletonGraph> gs;
        for (double beta : kGridBetas) gs.push_back(indexed_skeleton(ps, beta, m, Variant::kLensBased));
        ++instances;
        for (std::size_t i = 1; i < gs.size(); ++i) {
          for (const auto& e : gs[i].edges) {
            if (gs[i - 1].has_edge(e.a, e.b)) continue;
            ++violations;
            ++by_case["d=" + std::to_string(dim) + " " + std::string(to_string(m)) + " " +
                      fmt("%g", kGridBetas[i - 1]) + "->" + fmt("%g", kGridBetas[i])];
          }
        }
      }
    }
  }
  std::string detail = std::to_string(instances) + " instances, " + std::to_string(violations) +
                       " violating edges";
  for (const auto& [k, c] : by_case) detail += "; " + k + ": " + std::to_string(c);
  return {violations == 0, detail};
}

Outcome case_coverage() {
  struct Fixture {
    std::string name;
    std::function<CandidateSet()> run;
    LocusShape shape;
    std::size_t pairs;
    int extra = -1;  // faces or locus vertices when set
  };
  const auto I = Metric::kLInf, L = Metric::kL1;
  const std::vector<Fixture> fixtures{
      {"linf unit rectangle", [=] { return equidistant_candidates({0, 0, 0}, {4, 2, 1}, 2, I); },
       LocusShape::kRectangle, 1},
      {"linf unit segment", [=] { return equidistant_candidates({0, 0}, {4, 2}, 2, I); },
       LocusShape::kSegment, 1},
      {"linf unit point", [=] { return equidistant_candidates({0, 0, 0}, {4, 4, 4}, 2, I); },
       LocusShape::kPoint, 1},
      {"linf band", [=] { return equidistant_candidates({0, 0, 0}, {4, 0, 0}, 3, I); },
       LocusShape::kBand, 1},
      {"linf curve", [=] { return equidistant_candidates({0, 0, 0}, {4, 2, 1}, 3, I); },
       LocusShape::kCurve, 1},
      {"l1 parallelogram", [=] { return equidistant_candidates({0, 0, 0}, {4, 2, 1}, 5, L); },
       LocusShape::kParallelogram, 2},
      {"l1 parallel segments",
       [=] { return equidistant_candidates({0, 0, 0}, {4, 3, 1}, 5, L); },
       LocusShape::kParallelSegments, 3},
      {"l1 square", [=] { return equidistant_candidates({0, 0, 0}, {4, 0, 0}, 5, L); },
       LocusShape::kSquare, 1},
      {"l1 mid point", [=] { return asymmetric_candidates({0, 0, 0}, {4, 0, 0}, 1.5, L); },
       LocusShape::kPoint, 1, 1},
      {"l1 mid segment", [=] { return asymmetric_candidates({0, 0, 0}, {4, 2, 0}, 1.5, L); },
       LocusShape::kSegment, 1, 2},
      {"l1 mid hexagon", [=] { return asymmetric_candidates({0, 0, 0}, {2, 2, 1}, 1, L); },
       LocusShape::kPolygon, 1, 6},
      {"linf mid rectangle", [=] { return asymmetric_candidates({0, 0, 0}, {4, 2, 1}, 1.5, I); },
       LocusShape::kRectangle, 1},
      {"rng unique", [=] { return asymmetric_candidates({0, 0, 0}, {4, 2, 1}, 2, L); },
       LocusShape::kUnique, 1},
      {"l1 large, distinct gaps",
       [=] { return asymmetric_candidates({0, 0, 0}, {1, 2, 3}, 3, L); }, LocusShape::kFaces, 3,
       1},
      {"l1 large, one zero gap", [=] { return asymmetric_candidates({0, 0, 0}, {1, 0, 3}, 3, L); },
       LocusShape::kFaces, 4, 2},
      {"l1 large, axis parallel",
       [=] { return asymmetric_candidates({0, 0, 0}, {0, 0, 3}, 3, L); }, LocusShape::kFaces, 5,
       4},
  };
  std::size_t ok = 0;
  std::string bad;
  for (const auto& f : fixtures) {
    const auto cs = f.run();
    const int extra = f.shape == LocusShape::kFaces ? cs.faces : cs.locus_vertices;
    const bool good = cs.shape == f.shape && cs.pairs.size() == f.pairs &&
                      (f.extra < 0 || extra == f.extra);
    ok += good;
    if (!good) {
      bad += "; " + f.name + " gave " + std::string(to_string(cs.shape)) + "/" +
             std::to_string(cs.pairs.size());
    }
  }
  return {ok == fixtures.size(),
          std::to_string(ok) + "/" + std::to_string(fixtures.size()) + " branch fixtures" + bad};
}

Outcome exactness() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  std::size_t lens_mismatch = 0, lenses = 0;
  for (Metric m : kMetrics) {
    for (int it = 0; it < kLensesPerMetric; ++it) {
      const int n = 2 + it % 2;
      Coords a(n), b(n);
      for (int i = 0; i < n; ++i) a[i] = 5 * u(rng), b[i] = 5 * u(rng);
      const double beta = kGridBetas[static_cast<std::size_t>(it) % kGridBetas.size()];
      const Variant v = it % 4 < 2 ? Variant::kLensBased : Variant::kCircleBased;
      const auto ls = minimal_lenses({0, a}, {1, b}, beta, m, v);
      const Lens& lens = ls[static_cast<std::size_t>(it) % ls.size()];
      ++lenses;
      const ExtendedFrame frame(m, n);
      const auto boxes = lens_to_boxes(lens, frame);
      const double reach = 2 * (lens.r1 + lens.r2);
      const Coords mid = (lens.c1 + lens.c2) * 0.5;
      for (int p = 0; p < kProbesPerLens; ++p) {
        Coords q(n);
        for (int i = 0; i < n; ++i) q[i] = mid[i] + reach * u(rng);
        bool in_box = false;
        for (const auto& box : boxes) in_box |= box.contains(extended_coords(q, frame));
        lens_mismatch += in_box != point_in_lens(q, lens);
      }
    }
  }
  std::size_t box_mismatch = 0;
  for (Metric m : kMetrics) {
    for (int n : {2, 3}) {
      const auto ps = oracle::random_points(500, n, 60, static_cast<std::uint64_t>(n * 7 + (int)m));
      const ExtendedFrame frame(m, n);
      const auto index = build_index(ps, frame);
      std::vector<ExtCoords> pts;
      for (const auto& p : ps) pts.push_back(extended_coords(p.coords, frame));
      std::uniform_real_distribution<double> c(-100, 160);
      for (int q = 0; q < kRandomBoxes / 4; ++q) {
        Box box(frame.size());
        for (int k = 0; k < frame.size(); ++k) {
          double x = c(rng), y = c(rng);
          if (x > y) std::swap(x, y);
          box[k] = {x, y};
        }
        box_mismatch += count_in_box(index, box) != oracle::linear_count(pts, box);
      }
    }
  }
  return {lens_mismatch == 0 && box_mismatch == 0,
          std::to_string(lenses) + " lenses x " + std::to_string(kProbesPerLens) + " probes: " +
              std::to_string(lens_mismatch) + " mismatches; " + std::to_string(kRandomBoxes) +
              " boxes: " + std::to_string(box_mismatch) + " mismatches"};
}

Outcome lemmas() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coord(-20, 20);
  std::size_t lemma1_fail = 0, lemma2_fail = 0, centers = 0;
  for (Metric m : kMetrics) {
    for (int it = 0; it < kLemmaPairs; ++it) {
      const int n = 2 + it % 2;
      Coords a(n), b(n);
      do {
        for (int i = 0; i < n; ++i) a[i] = coord(rng) / 2.0, b[i] = coord(rng) / 2.0;
      } while (a == b);
      lemma1_fail += !sphere_union_decomposition_check(a, b, m, kLemma1Samples,
                                                       static_cast<std::uint64_t>(it));
      // Lens centers are equidistant from both endpoints, lie outside S and
      // sit in opposite arms of a common direction.
      const double d = distance(a, b, m);
      for (auto [beta, v] : {std::pair{0.5, Variant::kLensBased}, {0.8, Variant::kLensBased},
                             {1.3, Variant::kCircleBased}, {2.7, Variant::kCircleBased}}) {
        const double r = v == Variant::kLensBased ? d / (2 * beta) : beta * d / 2;
        for (const auto& lens : minimal_lenses({0, a}, {1, b}, beta, m, v)) {
          const auto p1 = oracle::arm_position(lens.c1, a, b, m);
          const auto p2 = oracle::arm_position(lens.c2, a, b, m);
          bool ok = !p1.core && !p2.core;
          for (const auto& c : {lens.c1, lens.c2}) {
            ok &= std::abs(distance(c, a, m) - r) <= 1e-9 * r &&
                  std::abs(distance(c, b, m) - r) <= 1e-9 * r;
          }
          bool opposite = false;
          for (const auto& x : p1.arms) opposite |= p2.in_arm(x.direction, bskel::opposite(x.side));
          ++centers;
          lemma2_fail += !(ok && opposite);
        }
      }
    }
  }
  return {lemma1_fail == 0 && lemma2_fail == 0,
          std::to_string(2 * kLemmaPairs) + " pairs: sphere decomposition " +
              std::to_string(lemma1_fail) + " counterexamples; " + std::to_string(centers) +
              " center pairs checked for arm membership, " + std::to_string(lemma2_fail) +
              " counterexamples"};
}

Outcome scaling() {
  bool pass = true;
  std::string detail;
  for (Metric m : kMetrics) {
    BenchConfig cfg;
    cfg.dim = 2;
    cfg.metric = m;
    cfg.beta = 1;
    cfg.brute_cutoff = 0;
    cfg.repeats = 2;
    cfg.sizes = kIndexedSizes;
    const auto idx = bench(cfg);
    cfg.sizes = kBruteSizes;
    cfg.brute_cutoff = kBruteSizes.back();
    cfg.repeats = 5;
    cfg.run_indexed = false;
    const auto brute = bench(cfg);
    const double si = *idx.indexed_slope, sb = *brute.brute_slope;
    const bool ok = si >= kIndexedSlopeLo && si <= kIndexedSlopeHi && sb >= kBruteSlopeLo &&
                    sb <= kBruteSlopeHi;
    pass &= ok;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(m)) +
              " indexed slope " + fmt("%.3f", si) + ", brute slope " + fmt("%.3f", sb);
  }
  return {pass, detail + " (bands [1.8, 2.5] and [2.6, 3.4])"};
}

// CLI golden files.
struct CliRun {
  std::string name, command, input, options, ext;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<CliRun>& cli_runs() {
  static const std::vector<CliRun> runs{
      {"triangle.build", "build", "triangle.csv", "--metric l1 --beta 1 --algo brute", "json"},
      {"triangle.spectrum", "spectrum", "triangle.csv", "--metric l1 --betas 0.5,1,2,3", "json"},
      {"triangle.plot", "plot", "triangle.csv", "--metric l1 --beta 1 --lens-pair 0,1 --labels",
       "svg"},
      {"lattice2d.build", "build", "lattice2d.csv", "--metric linf --variant circle --beta 1.3",
       "json"},
      {"lattice2d.spectrum", "spectrum", "lattice2d.csv", "--metric linf --betas 0.8,1,1.3,2,2.7",
       "json"},
      {"lattice2d.plot", "plot", "lattice2d.csv", "--metric linf --beta 2 --lens-pair 103,107", "svg"},
      {"cloud3d.build", "build", "cloud3d.json", "--metric l1 --beta 2.7", "json"},
      {"cloud3d.spectrum", "spectrum", "cloud3d.json",
       "--metric linf --variant circle --betas 0.5,1,1.3,3.5", "json"},
      {"cloud3d.plot", "plot", "cloud3d.json", "--metric linf --beta 1 --axes 0,2 --lens-pair 0,1",
       "svg"},
  };
  return runs;
}

std::optional<std::string> run_cli(const std::string& skel, const std::string& args, int threads,
                                   const fs::path& out) {
  const std::string cmd = "\"" + skel + "\" --threads " + std::to_string(threads) + " " + args +
                          " > \"" + out.string() + "\"";
  if (std::system(cmd.c_str()) != 0) return std::nullopt;
  return slurp(out);
}

Outcome cli_goldens(const std::string& skel, bool regen) {
  const std::string data = BSKEL_DATA_DIR;
  const fs::path golden = fs::path(data) / "golden";
  const fs::path tmp = fs::temp_directory_path() / "bskel_acceptance";
  fs::create_directories(tmp);
  if (regen) fs::create_directories(golden);
  std::size_t runs = 0, diffs = 0, failures = 0, roundtrip = 0;
  std::string bad;
  for (const auto& r : cli_runs()) {
    const auto gpath = golden / (r.name + "." + r.ext);
    const fs::path input = fs::path(data) / r.input;
    const std::string args = r.command + " --input \"" + input.string() + "\" " + r.options;
    if (regen) {
      if (auto text = run_cli(skel, args, 1, tmp / "out")) {
        std::ofstream(gpath, std::ios::binary) << *text;
      }
    }
    const std::string want = slurp(gpath);
    for (int rep = 0; rep < 2; ++rep) {
      for (int threads : kThreadCounts) {
        ++runs;
        const auto got = run_cli(skel, args, threads, tmp / "out");
        if (!got) {
          ++failures;
          bad += "; " + r.name + " failed";
        } else if (*got != want || want.empty()) {
          ++diffs;
          if (bad.find(r.name) == std::string::npos) bad += "; " + r.name + " differs";
        }
      }
    }
    if (r.name.ends_with(".build")) {
      // The golden graph parses back to the library's own result.
      std::istringstream in(want);
      const auto g = parse_graph_json(in);
      const auto pts = load_points(input.string());
      const auto again = build_skeleton(pts, g.params.beta, g.params.metric, g.params.variant,
                                        g.params.algorithm);
      const auto brute = brute_force_skeleton(pts, g.params.beta, g.params.metric, g.params.variant);
      if (again.edges != g.edges || brute.edges != g.edges) {
        ++roundtrip;
        bad += "; " + r.name + " round trip differs";
      }
    }
  }
  fs::remove_all(tmp);
  return {diffs == 0 && failures == 0 && roundtrip == 0,
          std::to_string(cli_runs().size()) + " golden outputs over 3 fixtures, " +
              std::to_string(runs) + " runs at threads {1,2,4}: " + std::to_string(diffs) +
              " differing, " + std::to_string(failures) + " failed, " +
              std::to_string(roundtrip) + " round-trip mismatches" + bad};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string skel;
  int only = 0;
  bool regen = false;
  app.add_option("--skel", skel, "path to the skel binary")->required();
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 7));
  app.add_flag("--regen", regen, "rewrite the CLI golden files first");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"beta monotonicity", monotonicity},
      {"lens case coverage", case_coverage},
      {"geometric exactness", exactness},
      {"lemma validation", lemmas},
      {"scaling", scaling},
      {"cli goldens and determinism", [&] { return cli_goldens(skel, regen); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": "
              << o.detail << " [" << fmt("%.1f", secs) << "s]" << std::endl;
    all &= o.pass;
  }
  return all ? 0 : 1;
}
