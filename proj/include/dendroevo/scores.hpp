// Dendrogram evaluation suite: cross-validated loss (CVL), phylogenetic
// feature importance (PFIS), figure of merit (FOM), cophenetic correlation,
// adjusted Rand index, gold-standard F1 and Spearman correlation.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dendroevo/dendrogram.hpp"
#include "dendroevo/distance.hpp"
#include "dendroevo/feature_matrix.hpp"
#include "dendroevo/linkage.hpp"

namespace dendroevo {

// How a dendrogram is built from data: linkage + distance metric, with
// continuous columns standardized first (flag to disable).
struct BuildRecipe {
  LinkageMethod method = LinkageMethod::average;
  DistanceMetric metric = DistanceMetric::euclidean;
  bool standardize_features = true;
};

std::string method_id(const BuildRecipe& recipe);

struct CvlResult {
  double cvl = 0.0;
  std::vector<double> per_feature_loss;  // NaN for skipped features
  std::vector<std::string> warnings;
};

// Leave-one-feature-out cross-validated loss. For each feature j, a
// dendrogram is built on the remaining features, the evolutionary model
// (BM for continuous, ER-CTMC for categorical) predicts every instance of
// feature j, and the per-instance inaccuracy (squared error on the
// standardized column, or Brier score) is averaged. CVL is the mean of the
// per-feature losses; degenerate folds are skipped with a warning.
CvlResult cvl(const FeatureMatrix& x, const BuildRecipe& recipe,
              int workers = 0);

// Feature importance on the full dendrogram: 1 - mean leave-one-out
// inaccuracy per feature (an R^2 for standardized continuous features).
// NaN for features the model cannot score (constant columns).
std::vector<double> pfis(const FeatureMatrix& x, const Dendrogram& d,
                         int workers = 0);

// Figure of merit: mean over continuous features of the root-mean-square
// within-cluster deviation of the held-out feature under the k-cut of a
// tree built without it (aggregate form; no adjusted-FOM factor).
double fom(const FeatureMatrix& x, const BuildRecipe& recipe, int k,
           int workers = 0);

// Pearson correlation between input dissimilarities and cophenetic
// distances over the n(n-1)/2 instance pairs.
double cophenetic_correlation(const DistanceMatrix& dm, const Dendrogram& d);

// Chance-corrected pair-counting agreement with ground-truth labels.
double ari(const Partition& p, std::span<const int> labels);

enum class F1Matching { majority, hungarian };

// Cuts d at k = #distinct labels, assigns each cluster a label (per-cluster
// majority by default, optimal one-to-one matching behind the flag) and
// returns the macro-averaged F1; classes never predicted score 0.
double f1_gold(const Dendrogram& d, std::span<const int> labels,
               F1Matching matching = F1Matching::majority);

// Pearson correlation of midranks (average ranks on ties).
double spearman(std::span<const double> a, std::span<const double> b);

// Maximum-total-score assignment over a square score matrix (Hungarian
// algorithm); returns column index assigned to each row.
std::vector<int> max_score_assignment(const Eigen::MatrixXd& score);

// Per-method evaluation record. ari/f1 require labels, fom requires k;
// fields that were not computed stay NaN.
struct ScoreReport {
  std::string method_id;
  double cvl = std::numeric_limits<double>::quiet_NaN();
  double fom = std::numeric_limits<double>::quiet_NaN();
  double coph = std::numeric_limits<double>::quiet_NaN();
  double ari = std::numeric_limits<double>::quiet_NaN();
  double f1_gold = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> per_feature_loss;
  std::vector<double> pfis;
  std::vector<std::string> feature_names;
};

// CSV with a fixed header and 6-decimal reals (empty cells for NaN).
std::string score_reports_to_csv(const std::vector<ScoreReport>& reports);
std::string per_feature_to_csv(const std::vector<ScoreReport>& reports);
// Full-precision JSON array, stable field order.
std::string score_reports_to_json(const std::vector<ScoreReport>& reports);

}  // namespace dendroevo
