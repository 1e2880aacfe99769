// Subcommand orchestration shared by the CLI binary and the tests:
// configuration, the score/importance/render/simulate/benchmark pipelines,
// artifact writing (atomic) and the run manifest.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dendroevo/csv.hpp"
#include "dendroevo/render.hpp"
#include "dendroevo/scores.hpp"
#include "dendroevo/simulate.hpp"

namespace dendroevo {

inline constexpr const char* kToolName = "dendroevo";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::string input_path;
  std::map<std::string, ColumnRole> column_roles;
  std::string label_column;
  std::vector<LinkageMethod> methods;
  std::vector<DistanceMetric> metrics;
  std::optional<int> k;          // for FOM/ARI/F1; defaults to #labels
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  bool standardize = true;
  F1Matching f1_matching = F1Matching::majority;
  int workers = 0;               // 0 = auto; DENDRO_EVO_THREADS caps
};

// Writes content to path via a temp file + rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// The grid rows evaluated by cmd_score / cmd_benchmark, in a deterministic
// (method-major, metric-minor) order.
std::vector<BuildRecipe> recipe_grid(const RunConfig& cfg);

// Full evaluation of every (method, metric) cell: CVL always; FOM/ARI/F1
// when k or labels allow; PFIS on the full-data dendrogram.
std::vector<ScoreReport> evaluate_grid(const IngestResult& data,
                                       const RunConfig& cfg,
                                       std::vector<std::string>* warnings);

struct BenchmarkRow {
  std::string score_name;  // cvl, fom, neg_coph, neg_ari
  double spearman_vs_f1 = 0.0;
};

// Spearman of each loss/negated score against gold-standard F1 over the
// grid cells (cells whose scores are NaN are dropped pairwise).
std::vector<BenchmarkRow> benchmark_correlations(
    const std::vector<ScoreReport>& reports);

// Subcommands; each returns the list of files written (relative to
// output_dir) and writes a manifest.json.
std::vector<std::string> cmd_score(const RunConfig& cfg);
std::vector<std::string> cmd_importance(const RunConfig& cfg,
                                        LinkageMethod method);
std::vector<std::string> cmd_render(const RunConfig& cfg, LinkageMethod method,
                                    const std::vector<std::string>& features,
                                    const RenderSpec& spec);
std::vector<std::string> cmd_simulate_tree(const RunConfig& cfg,
                                           const SimConfig& sim);
std::vector<std::string> cmd_simulate_gaussians(const RunConfig& cfg, int n);
std::vector<std::string> cmd_benchmark(const RunConfig& cfg);

}  // namespace dendroevo
