#include "dendroevo/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dendroevo/brownian.hpp"
#include "dendroevo/ctmc.hpp"
#include "dendroevo/parallel.hpp"

namespace dendroevo {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string shortest_repr(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string dataset_stem(const RunConfig& cfg) {
  return std::filesystem::path(cfg.input_path).stem().string();
}

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["input"] = cfg.input_path;
  ordered_json methods = ordered_json::array();
  for (LinkageMethod m : cfg.methods) methods.push_back(linkage_name(m));
  j["methods"] = std::move(methods);
  ordered_json metrics = ordered_json::array();
  for (DistanceMetric m : cfg.metrics) metrics.push_back(metric_name(m));
  j["metrics"] = std::move(metrics);
  if (cfg.k) j["k"] = *cfg.k;
  if (!cfg.label_column.empty()) j["label"] = cfg.label_column;
  j["seed"] = cfg.seed;
  j["standardize"] = cfg.standardize;
  j["f1_matching"] =
      cfg.f1_matching == F1Matching::majority ? "majority" : "hungarian";
  j["workers"] = cfg.workers;
  return j;
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& outputs,
                    const std::vector<std::string>& warnings) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config_echo(cfg);
  j["outputs"] = outputs;
  j["warnings"] = warnings;
  atomic_write(cfg.output_dir / "manifest.json", j.dump(2) + "\n");
}

IngestResult load_input(const RunConfig& cfg) {
  if (cfg.input_path.empty())
    throw std::invalid_argument("no input file configured");
  return ingest(cfg.input_path, cfg.column_roles, cfg.label_column);
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::vector<BuildRecipe> recipe_grid(const RunConfig& cfg) {
  if (cfg.methods.empty() || cfg.metrics.empty())
    throw std::invalid_argument("methods and metrics must be non-empty");
  std::vector<BuildRecipe> grid;
  grid.reserve(cfg.methods.size() * cfg.metrics.size());
  for (LinkageMethod m : cfg.methods)
    for (DistanceMetric d : cfg.metrics)
      grid.push_back({m, d, cfg.standardize});
  return grid;
}

std::vector<ScoreReport> evaluate_grid(const IngestResult& data,
                                       const RunConfig& cfg,
                                       std::vector<std::string>* warnings) {
  const std::vector<BuildRecipe> grid = recipe_grid(cfg);
  const FeatureMatrix& x = data.features;

  int k = cfg.k.value_or(0);
  if (k == 0 && data.has_labels)
    k = static_cast<int>(data.label_levels.size());

  std::vector<ScoreReport> reports(grid.size());
  std::vector<std::vector<std::string>> cell_warnings(grid.size());

  // Cells are the parallel unit; everything inside a cell runs single
  // threaded so reports are independent of scheduling.
  parallel_for(static_cast<int>(grid.size()), worker_count(cfg.workers),
               [&](int g) {
    const BuildRecipe& recipe = grid[g];
    ScoreReport& rep = reports[g];
    rep.method_id = method_id(recipe);
    for (const Feature& f : x.features()) rep.feature_names.push_back(f.name);
    try {
      const FeatureMatrix basis =
          recipe.standardize_features ? standardize(x, nullptr) : x;
      const DistanceMatrix dm = distances(basis, recipe.metric);
      const Dendrogram tree = build_dendrogram(dm, recipe.method);

      const CvlResult cv = cvl(x, recipe, 1);
      rep.cvl = cv.cvl;
      rep.per_feature_loss = cv.per_feature_loss;
      for (const std::string& w : cv.warnings)
        cell_warnings[g].push_back(rep.method_id + ": " + w);

      rep.pfis = pfis(x, tree, 1);
      rep.coph = cophenetic_correlation(dm, tree);
      if (k >= 2) {
        rep.fom = fom(x, recipe, k, 1);
        if (data.has_labels) {
          rep.ari = ari(cut(tree, k), data.labels);
          rep.f1_gold = dendroevo::f1_gold(tree, data.labels, cfg.f1_matching);
        }
      }
    } catch (const std::exception& e) {
      cell_warnings[g].push_back(rep.method_id + ": failed: " + e.what());
    }
  });

  if (warnings)
    for (const auto& ws : cell_warnings)
      warnings->insert(warnings->end(), ws.begin(), ws.end());
  return reports;
}

std::vector<BenchmarkRow> benchmark_correlations(
    const std::vector<ScoreReport>& reports) {
  struct Axis {
    std::string name;
    double sign;
    double ScoreReport::* field;
  };
  // Losses correlate directly; quality scores are negated so that negative
  // Spearman against F1 always means agreement.
  const std::vector<Axis> axes = {{"cvl", 1.0, &ScoreReport::cvl},
                                  {"fom", 1.0, &ScoreReport::fom},
                                  {"neg_coph", -1.0, &ScoreReport::coph},
                                  {"neg_ari", -1.0, &ScoreReport::ari}};
  std::vector<BenchmarkRow> rows;
  for (const Axis& axis : axes) {
    std::vector<double> a, b;
    for (const ScoreReport& r : reports) {
      const double v = r.*axis.field;
      if (std::isnan(v) || std::isnan(r.f1_gold)) continue;
      a.push_back(axis.sign * v);
      b.push_back(r.f1_gold);
    }
    BenchmarkRow row;
    row.score_name = axis.name;
    try {
      row.spearman_vs_f1 = spearman(a, b);
    } catch (const std::exception&) {
      row.spearman_vs_f1 = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::string> cmd_score(const RunConfig& cfg) {
  const IngestResult data = load_input(cfg);
  std::vector<std::string> warnings;
  const std::vector<ScoreReport> reports = evaluate_grid(data, cfg, &warnings);

  std::vector<std::string> outputs = {"scores.csv", "per_feature.csv",
                                      "scores.json"};
  atomic_write(cfg.output_dir / "scores.csv", score_reports_to_csv(reports));
  atomic_write(cfg.output_dir / "per_feature.csv", per_feature_to_csv(reports));
  atomic_write(cfg.output_dir / "scores.json", score_reports_to_json(reports));
  write_manifest(cfg, "score", outputs, warnings);
  return outputs;
}

std::vector<std::string> cmd_importance(const RunConfig& cfg,
                                        LinkageMethod method) {
  const IngestResult data = load_input(cfg);
  const BuildRecipe recipe{method, cfg.metrics.at(0), cfg.standardize};
  const FeatureMatrix basis =
      recipe.standardize_features ? standardize(data.features, nullptr)
                                  : data.features;
  const DistanceMatrix dm = distances(basis, recipe.metric);
  const Dendrogram tree = build_dendrogram(dm, recipe.method);
  const std::vector<double> importance =
      pfis(data.features, tree, cfg.workers);

  std::string csv = "feature,pfis\n";
  std::vector<std::string> names;
  for (std::size_t j = 0; j < data.features.n_features(); ++j) {
    names.push_back(data.features.feature(j).name);
    csv += names.back() + ',' +
           (std::isnan(importance[j]) ? "" : shortest_repr(importance[j])) + '\n';
  }
  RenderSpec spec;
  const std::string chart = render_bar_chart(
      names, importance, "PFIS (" + method_id(recipe) + ")", spec);

  std::vector<std::string> outputs = {"pfis.csv", "pfis.svg"};
  atomic_write(cfg.output_dir / "pfis.csv", csv);
  atomic_write(cfg.output_dir / "pfis.svg", chart);
  write_manifest(cfg, "importance", outputs, {});
  return outputs;
}

std::vector<std::string> cmd_render(const RunConfig& cfg, LinkageMethod method,
                                    const std::vector<std::string>& features,
                                    const RenderSpec& spec) {
  const IngestResult data = load_input(cfg);
  const BuildRecipe recipe{method, cfg.metrics.at(0), cfg.standardize};
  const FeatureMatrix basis =
      recipe.standardize_features ? standardize(data.features, nullptr)
                                  : data.features;
  const DistanceMatrix dm = distances(basis, recipe.metric);
  const Dendrogram tree = build_dendrogram(dm, recipe.method);
  const UltrametricTree ultra = to_ultrametric(tree);

  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < data.features.n_features(); ++j) {
    const std::string& name = data.features.feature(j).name;
    if (features.empty() ||
        std::find(features.begin(), features.end(), name) != features.end())
      chosen.push_back(j);
  }
  if (!features.empty() && chosen.size() != features.size())
    throw std::invalid_argument("render: unknown feature requested");

  std::vector<std::string> outputs;
  for (std::size_t j : chosen) {
    const Feature& f = data.features.feature(j);
    std::string svg;
    if (f.kind == FeatureKind::continuous) {
      Eigen::VectorXd y(f.values.size());
      for (std::size_t i = 0; i < f.values.size(); ++i) y(i) = f.values[i];
      const BrownianFit fit = bm_fit(ultra, y);
      const AncestralStates asr =
          ancestral_states(fit, y, spec.samples_per_edge);
      svg = render_continuous(tree, asr, f.values, spec);
    } else {
      const CtmcFit fit = fit_rate(ultra, f.codes, f.levels);
      const StatePosteriors post = marginal_posteriors(fit, ultra, f.codes);
      svg = render_categorical(tree, post, f.codes, f.levels, spec);
    }
    const std::string file = dataset_stem(cfg) + "_" + f.name + "_" +
                             linkage_name(recipe.method) + ".svg";
    atomic_write(cfg.output_dir / file, svg);
    outputs.push_back(file);
  }
  write_manifest(cfg, "render", outputs, {});
  return outputs;
}

namespace {

std::string feature_matrix_csv(const FeatureMatrix& x,
                               const std::vector<int>* labels,
                               const std::vector<std::string>& label_levels,
                               const std::string& label_name) {
  std::string out;
  for (std::size_t j = 0; j < x.n_features(); ++j) {
    if (j) out += ',';
    out += x.feature(j).name;
  }
  if (labels) out += ',' + label_name;
  out += '\n';
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    for (std::size_t j = 0; j < x.n_features(); ++j) {
      if (j) out += ',';
      const Feature& f = x.feature(j);
      out += f.kind == FeatureKind::continuous ? shortest_repr(f.values[i])
                                               : f.levels[f.codes[i]];
    }
    if (labels) out += ',' + label_levels[(*labels)[i]];
    out += '\n';
  }
  return out;
}

}  // namespace

std::vector<std::string> cmd_simulate_tree(const RunConfig& cfg,
                                           const SimConfig& sim) {
  const TreeSimResult result = simulate_tree_data(sim);
  std::vector<std::string> outputs = {"sim_tree.csv", "sim_tree_truth.nwk"};
  atomic_write(cfg.output_dir / "sim_tree.csv",
               feature_matrix_csv(result.data, nullptr, {}, ""));
  atomic_write(cfg.output_dir / "sim_tree_truth.nwk",
               to_newick(to_ultrametric(result.truth)) + "\n");
  write_manifest(cfg, "simulate tree", outputs, {});
  return outputs;
}

std::vector<std::string> cmd_simulate_gaussians(const RunConfig& cfg, int n) {
  const TwoGaussiansResult result = simulate_two_gaussians(n, cfg.seed);
  std::vector<std::string> outputs = {"sim_gaussians.csv"};
  atomic_write(cfg.output_dir / "sim_gaussians.csv",
               feature_matrix_csv(result.data, &result.labels, {"y0", "y1"},
                                  "label"));
  write_manifest(cfg, "simulate gaussians", outputs, {});
  return outputs;
}

std::vector<std::string> cmd_benchmark(const RunConfig& cfg) {
  const IngestResult data = load_input(cfg);
  if (!data.has_labels)
    throw std::invalid_argument("benchmark requires a label column");
  std::vector<std::string> warnings;
  const std::vector<ScoreReport> reports = evaluate_grid(data, cfg, &warnings);
  const std::vector<BenchmarkRow> rows = benchmark_correlations(reports);

  std::string csv = "score,spearman_vs_f1\n";
  ordered_json jrows = ordered_json::array();
  for (const BenchmarkRow& row : rows) {
    csv += row.score_name + ',' +
           (std::isnan(row.spearman_vs_f1) ? ""
                                           : shortest_repr(row.spearman_vs_f1)) +
           '\n';
    ordered_json jr;
    jr["score"] = row.score_name;
    jr["spearman_vs_f1"] = row.spearman_vs_f1;
    jrows.push_back(std::move(jr));
  }

  std::vector<std::string> outputs = {"benchmark.csv", "grid.csv",
                                      "benchmark.json"};
  atomic_write(cfg.output_dir / "benchmark.csv", csv);
  atomic_write(cfg.output_dir / "grid.csv", score_reports_to_csv(reports));
  ordered_json jout;
  jout["dataset"] = dataset_stem(cfg);
  jout["correlations"] = std::move(jrows);
  jout["grid"] = nlohmann::ordered_json::parse(score_reports_to_json(reports));
  atomic_write(cfg.output_dir / "benchmark.json", jout.dump(2) + "\n");
  write_manifest(cfg, "benchmark", outputs, warnings);
  return outputs;
}

}  // namespace dendroevo
