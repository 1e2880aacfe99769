// Command-line front end: score / importance / render / simulate / benchmark.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dendroevo/run.hpp"

namespace {

using namespace dendroevo;

std::vector<LinkageMethod> parse_methods(const std::vector<std::string>& names) {
  std::vector<LinkageMethod> methods;
  for (const std::string& n : names) methods.push_back(parse_linkage(n));
  return methods;
}

std::vector<DistanceMetric> parse_metrics(const std::vector<std::string>& names) {
  std::vector<DistanceMetric> metrics;
  for (const std::string& n : names) metrics.push_back(parse_metric(n));
  return metrics;
}

struct CommonOpts {
  std::string input;
  std::string output_dir = "out";
  std::vector<std::string> methods = {"average"};
  std::vector<std::string> metrics = {"euclidean"};
  std::vector<std::string> kinds;
  std::string label;
  int k = 0;
  std::uint64_t seed = 0;
  bool no_standardize = false;
  bool hungarian = false;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_input) {
  if (needs_input)
    cmd->add_option("--input", opts.input, "input CSV (header row, comma separated)")
        ->required();
  cmd->add_option("--output-dir", opts.output_dir, "artifact directory");
  cmd->add_option("--methods", opts.methods,
                  "linkages: single complete average mcquitty ward.D ward.D2 "
                  "median centroid weighted_agnes average_agnes ward_agnes "
                  "diana (agnes names are aliases of mcquitty/average/ward.D2)")
      ->delimiter(',');
  cmd->add_option("--metrics", opts.metrics,
                  "distances: euclidean manhattan canberra")
      ->delimiter(',');
  cmd->add_option("--kinds", opts.kinds,
                  "per-column role overrides, col=continuous|categorical|label|ignore")
      ->delimiter(',');
  cmd->add_option("--label", opts.label, "label column (for ARI/F1/benchmark)");
  cmd->add_option("--k", opts.k, "partition size for FOM/ARI/F1 (default: #labels)");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_flag("--no-standardize", opts.no_standardize,
                "cluster on raw continuous columns");
  cmd->add_flag("--hungarian", opts.hungarian,
                "optimal one-to-one cluster-label matching for F1 "
                "(default: per-cluster majority)");
  cmd->add_option("--workers", opts.workers,
                  "worker threads (0 = auto; DENDRO_EVO_THREADS caps)");
}

RunConfig to_config(const CommonOpts& opts) {
  RunConfig cfg;
  cfg.input_path = opts.input;
  cfg.output_dir = opts.output_dir;
  cfg.methods = parse_methods(opts.methods);
  cfg.metrics = parse_metrics(opts.metrics);
  for (const std::string& kv : opts.kinds) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--kinds entries must look like col=role");
    cfg.column_roles[kv.substr(0, eq)] = parse_column_role(kv.substr(eq + 1));
  }
  cfg.label_column = opts.label;
  if (opts.k > 0) cfg.k = opts.k;
  cfg.seed = opts.seed;
  cfg.standardize = !opts.no_standardize;
  cfg.f1_matching = opts.hungarian ? F1Matching::hungarian : F1Matching::majority;
  cfg.workers = opts.workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolutionary-model evaluation of hierarchical clusterings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CommonOpts score_opts;
  CLI::App* score = app.add_subcommand(
      "score", "CVL/PFIS/FOM/COPH (+ARI/F1 with labels) per method");
  add_common(score, score_opts, true);

  CommonOpts imp_opts;
  std::string imp_method = "average";
  CLI::App* importance = app.add_subcommand(
      "importance", "per-feature PFIS table and bar chart for one method");
  add_common(importance, imp_opts, true);
  importance->add_option("--method", imp_method, "linkage to explain");

  CommonOpts render_opts;
  std::string render_method = "average";
  std::vector<std::string> render_features;
  std::string colormap = "viridis";
  std::string orientation = "vertical";
  int samples_per_edge = 16;
  CLI::App* render = app.add_subcommand(
      "render", "evolutionary dendrogram SVGs (continuous: colored edges; "
                "categorical: node pies)");
  add_common(render, render_opts, true);
  render->add_option("--method", render_method, "linkage to render");
  render->add_option("--features", render_features,
                     "features to render (default: all)")
      ->delimiter(',');
  render->add_option("--colormap", colormap, "viridis|magma|grayscale");
  render->add_option("--orientation", orientation, "vertical|horizontal");
  render->add_option("--samples-per-edge", samples_per_edge,
                     "color samples per edge (>= 2)");

  CLI::App* simulate =
      app.add_subcommand("simulate", "synthetic data generators");
  simulate->require_subcommand(1);

  CommonOpts sim_tree_opts;
  int sim_depth = 7;
  int sim_features = 6;
  CLI::App* sim_tree = simulate->add_subcommand(
      "tree", "recursive-doubling tree process (per-feature noise 2^(j-3))");
  add_common(sim_tree, sim_tree_opts, false);
  sim_tree->add_option("--depth", sim_depth, "tree depth K (2^K leaves)");
  sim_tree->add_option("--features", sim_features, "feature count");

  CommonOpts sim_gauss_opts;
  int sim_n = 250;
  CLI::App* sim_gauss = simulate->add_subcommand(
      "gaussians", "labeled 2-feature Gaussian mixture, (X1,X2)|Y ~ N((2Y,2Y),I)");
  add_common(sim_gauss, sim_gauss_opts, false);
  sim_gauss->add_option("--n", sim_n, "instance count");

  CommonOpts bench_opts;
  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "method-grid Spearman correlations of CVL/FOM/-COPH/-ARI "
                   "against gold-standard F1 (label column required)");
  add_common(benchmark, bench_opts, true);

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::string> outputs;
    RunConfig cfg;
    if (score->parsed()) {
      cfg = to_config(score_opts);
      outputs = cmd_score(cfg);
    } else if (importance->parsed()) {
      cfg = to_config(imp_opts);
      outputs = cmd_importance(cfg, parse_linkage(imp_method));
    } else if (render->parsed()) {
      cfg = to_config(render_opts);
      RenderSpec spec;
      spec.colormap = parse_colormap(colormap);
      if (orientation == "horizontal")
        spec.orientation = Orientation::horizontal;
      else if (orientation != "vertical")
        throw std::invalid_argument("orientation must be vertical|horizontal");
      spec.samples_per_edge = samples_per_edge;
      outputs = cmd_render(cfg, parse_linkage(render_method), render_features, spec);
    } else if (sim_tree->parsed()) {
      cfg = to_config(sim_tree_opts);
      SimConfig sim = default_sim_config();
      sim.seed = cfg.seed;
      if (sim_features != sim.n_features) {
        sim.n_features = sim_features;
        sim.sigma.resize(sim_features);
        for (int j = 1; j <= sim_features; ++j)
          sim.sigma[j - 1] = std::pow(2.0, j - 3);
      }
      sim.depth = sim_depth;
      outputs = cmd_simulate_tree(cfg, sim);
    } else if (sim_gauss->parsed()) {
      cfg = to_config(sim_gauss_opts);
      outputs = cmd_simulate_gaussians(cfg, sim_n);
    } else if (benchmark->parsed()) {
      cfg = to_config(bench_opts);
      outputs = cmd_benchmark(cfg);
    }
    for (const std::string& f : outputs)
      std::cout << (cfg.output_dir / f).string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
