// skel: command-line driver for beta-skeleton construction.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bskel/io.hpp"
#include "bskel/skeleton.hpp"

namespace {

using namespace bskel;

struct Common {
  std::string input, output, format, metric = "linf", variant = "lens", algo = "indexed";
  double epsilon = kDefaultEpsilon;
  int threads = 1;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw InputError("invalid number '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty list");
  return out;
}

std::pair<int, int> parse_pair(const std::string& s) {
  const auto v = parse_list(s);
  if (v.size() != 2 || v[0] != static_cast<int>(v[0]) || v[1] != static_cast<int>(v[1])) {
    throw InputError("expected two integers, got '" + s + "'");
  }
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

Metric metric_of(const Common& c) { return *parse_metric(c.metric); }
Variant variant_of(const Common& c) { return *parse_variant(c.variant); }

BuildOptions options_of(const Common& c) {
  BuildOptions o;
  o.threads = c.threads;
  o.eps = c.epsilon;
  return o;
}

void add_common(CLI::App* sub, Common& c, bool with_algo) {
  sub->add_option("--input", c.input, "point file (csv or json)")->required();
  sub->add_option("--metric", c.metric)->check(CLI::IsMember({"l1", "linf"}));
  sub->add_option("--variant", c.variant)->check(CLI::IsMember({"lens", "circle"}));
  if (with_algo) sub->add_option("--algo", c.algo)->check(CLI::IsMember({"brute", "indexed"}));
  sub->add_option("--epsilon", c.epsilon)->check(CLI::PositiveNumber);
  sub->add_option("--format", c.format, "input format, default from extension")
      ->check(CLI::IsMember({"csv", "json"}));
}

PointSet load(const Common& c) {
  return load_points(c.input, c.format.empty() ? std::nullopt : parse_format(c.format));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

void warn(const SkeletonGraph& g) {
  for (const auto& w : g.warnings) std::cerr << "warning: " << w << "\n";
}

SvgOptions svg_options(const std::string& axes, const std::string& lens_pair, double width,
                       bool labels) {
  SvgOptions o;
  o.width = width;
  o.labels = labels;
  if (!axes.empty()) o.axes = parse_pair(axes);
  if (!lens_pair.empty()) {
    const auto [a, b] = parse_pair(lens_pair);
    o.lens_pair = std::pair<PointId, PointId>{a, b};
  }
  return o;
}

// Edge counts of the same beta under both metrics.
void compare_metrics(const PointSet& ps, double beta, Variant v, Algorithm a,
                     const BuildOptions& opt) {
  const auto g1 = build_skeleton(ps, beta, Metric::kL1, v, a, opt);
  const auto g2 = build_skeleton(ps, beta, Metric::kLInf, v, a, opt);
  std::size_t both = 0;
  for (const auto& e : g1.edges) both += g2.has_edge(e.a, e.b);
  std::cerr << "l1 edges " << g1.edges.size() << ", linf edges " << g2.edges.size()
            << ", shared " << both << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"beta-skeletons under L1 and Linf"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  if (const char* env = std::getenv("SKEL_THREADS")) {
    try {
      c.threads = std::stoi(env);
    } catch (const std::exception&) {
      throw InputError("invalid SKEL_THREADS");
    }
  }
  app.add_option("--threads", c.threads, "worker threads (env SKEL_THREADS)")
      ->check(CLI::PositiveNumber);

  double beta = 1;
  std::string betas, svg, axes, lens_pair, sizes = "512,1024,2048,4096";
  double width = 640;
  bool labels = false, compare = false;
  std::uint64_t seed = 1;
  int dim = 2, cutoff = 256, repeats = 1;

  auto* build = app.add_subcommand("build", "build one skeleton");
  add_common(build, c, true);
  build->add_option("--beta", beta)->check(CLI::PositiveNumber);
  build->add_option("--output", c.output, "edge file (.json or .csv), default stdout json");
  build->add_option("--svg", svg);
  build->add_flag("--compare-metrics", compare, "report L1 vs Linf edge counts on stderr");

  auto* spectrum = app.add_subcommand("spectrum", "skeletons for a list of betas");
  add_common(spectrum, c, false);
  spectrum->add_option("--betas", betas, "strictly increasing, comma separated")->required();
  spectrum->add_option("--output", c.output);

  auto* plot = app.add_subcommand("plot", "render a skeleton as SVG");
  add_common(plot, c, true);
  plot->add_option("--beta", beta)->check(CLI::PositiveNumber);
  plot->add_option("--svg,--output", svg, "default stdout");
  plot->add_option("--axes", axes, "projection axes, e.g. 0,2");
  plot->add_option("--lens-pair", lens_pair, "overlay the lenses of ids a,b");
  plot->add_option("--width", width)->check(CLI::PositiveNumber);
  plot->add_flag("--labels", labels);

  auto* benchcmd = app.add_subcommand("bench", "time indexed and brute builders");
  benchcmd->add_option("--sizes", sizes);
  benchcmd->add_option("--dim", dim)->check(CLI::Range(1, 3));
  benchcmd->add_option("--metric", c.metric)->check(CLI::IsMember({"l1", "linf"}));
  benchcmd->add_option("--variant", c.variant)->check(CLI::IsMember({"lens", "circle"}));
  benchcmd->add_option("--beta", beta)->check(CLI::PositiveNumber);
  benchcmd->add_option("--seed", seed);
  benchcmd->add_option("--brute-cutoff", cutoff);
  benchcmd->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  benchcmd->add_option("--output", c.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto algo = [&] { return *parse_algorithm(c.algo); };
  if (build->parsed()) {
    const auto ps = load(c);
    const auto opt = options_of(c);
    const auto g = build_skeleton(ps, beta, metric_of(c), variant_of(c), algo(), opt);
    warn(g);
    if (c.output.empty() || c.output == "-") {
      write_graph_json(std::cout, g);
    } else {
      save_graph(g, c.output, format_from_path(c.output));
    }
    if (!svg.empty()) emit(svg, render_svg(ps, g));
    if (compare) compare_metrics(ps, beta, variant_of(c), algo(), opt);
  } else if (spectrum->parsed()) {
    const auto ps = load(c);
    const auto list = parse_list(betas);
    const auto graphs = beta_spectrum(ps, list, metric_of(c), variant_of(c), options_of(c));
    for (const auto& g : graphs) warn(g);
    std::ostringstream os;
    write_spectrum_json(os, graphs);
    emit(c.output, os.str());
  } else if (plot->parsed()) {
    const auto ps = load(c);
    const auto g = build_skeleton(ps, beta, metric_of(c), variant_of(c), algo(), options_of(c));
    warn(g);
    emit(svg, render_svg(ps, g, svg_options(axes, lens_pair, width, labels)));
  } else if (benchcmd->parsed()) {
    BenchConfig cfg;
    for (double s : parse_list(sizes)) {
      if (s < 2 || s != static_cast<int>(s)) throw InputError("sizes must be integers >= 2");
      cfg.sizes.push_back(static_cast<int>(s));
    }
    cfg.dim = dim;
    cfg.metric = metric_of(c);
    cfg.beta = beta;
    cfg.variant = variant_of(c);
    cfg.seed = seed;
    cfg.brute_cutoff = cutoff;
    cfg.repeats = repeats;
    cfg.threads = c.threads;
    emit(c.output, format_bench(bench(cfg)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const NestingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
