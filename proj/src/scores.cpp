#include "dendroevo/scores.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dendroevo/brownian.hpp"
#include "dendroevo/ctmc.hpp"
#include "dendroevo/parallel.hpp"

namespace dendroevo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Standardize one column on its full extent (the held-out feature keeps the
// global scale so losses are comparable across folds). Empty when constant.
std::optional<Eigen::VectorXd> standardize_column(const std::vector<double>& v) {
  const std::size_t n = v.size();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  if (!(var > 0.0)) return std::nullopt;
  const double sd = std::sqrt(var);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) y(i) = (v[i] - mean) / sd;
  return y;
}

Dendrogram build_tree(const FeatureMatrix& x, const BuildRecipe& recipe) {
  FeatureMatrix basis =
      recipe.standardize_features ? standardize(x, nullptr) : x;
  const DistanceMatrix dm = distances(basis, recipe.metric);
  return build_dendrogram(dm, recipe.method);
}

// Mean leave-one-out inaccuracy of feature j on the given tree: squared
// error on the standardized column for continuous features, Brier score
// for categorical ones. nullopt when the feature is degenerate.
std::optional<double> feature_loss(const Feature& f, const UltrametricTree& tree) {
  if (f.kind == FeatureKind::continuous) {
    const auto y = standardize_column(f.values);
    if (!y) return std::nullopt;
    const BrownianFit fit = bm_fit(tree, *y);
    const Eigen::VectorXd pred = loo_predict(fit, *y);
    return (pred - *y).squaredNorm() / static_cast<double>(y->size());
  }
  if (f.levels.size() < 2) return std::nullopt;
  const CtmcFit fit = fit_rate(tree, f.codes, f.levels);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.codes.size(); ++i) {
    const Eigen::VectorXd post =
        holdout_leaf_posterior(fit, tree, f.codes, static_cast<int>(i));
    acc += brier(post, f.codes[i]);
  }
  return acc / static_cast<double>(f.codes.size());
}

}  // namespace

std::string method_id(const BuildRecipe& recipe) {
  return linkage_name(recipe.method) + "." + metric_name(recipe.metric);
}

CvlResult cvl(const FeatureMatrix& x, const BuildRecipe& recipe, int workers) {
  const std::size_t p = x.n_features();
  if (p < 2) throw std::invalid_argument("cvl: need at least 2 features");

  std::vector<double> losses(p, kNaN);
  std::vector<std::string> notes(p);
  parallel_for(static_cast<int>(p), worker_count(workers), [&](int j) {
    const Feature& f = x.feature(j);
    try {
      const Dendrogram fold_tree = build_tree(x.without_feature(j), recipe);
      const UltrametricTree tree = to_ultrametric(fold_tree);
      const auto loss = feature_loss(f, tree);
      if (loss)
        losses[j] = *loss;
      else
        notes[j] = "feature '" + f.name + "' skipped: degenerate feature";
    } catch (const std::exception& e) {
      notes[j] = "feature '" + f.name + "' skipped: " + e.what();
    }
  });

  CvlResult r;
  r.per_feature_loss = losses;
  double total = 0.0;
  int used = 0;
  for (std::size_t j = 0; j < p; ++j) {
    if (std::isnan(losses[j])) {
      if (!notes[j].empty()) r.warnings.push_back(notes[j]);
      continue;
    }
    total += losses[j];
    ++used;
  }
  if (used == 0) throw std::runtime_error("cvl: every feature was skipped");
  r.cvl = total / used;
  return r;
}

std::vector<double> pfis(const FeatureMatrix& x, const Dendrogram& d,
                         int workers) {
  if (static_cast<int>(x.n_rows()) != d.n_leaves())
    throw std::invalid_argument("pfis: dendrogram does not match data");
  const UltrametricTree tree = to_ultrametric(d);
  std::vector<double> scores(x.n_features(), kNaN);
  parallel_for(static_cast<int>(x.n_features()), worker_count(workers),
               [&](int j) {
                 try {
                   const auto loss = feature_loss(x.feature(j), tree);
                   if (loss) scores[j] = 1.0 - *loss;
                 } catch (const std::exception&) {
                   // left as NaN
                 }
               });
  return scores;
}

double fom(const FeatureMatrix& x, const BuildRecipe& recipe, int k,
           int workers) {
  if (k < 2) throw std::invalid_argument("fom: k must be >= 2");
  if (k > static_cast<int>(x.n_rows()))
    throw std::invalid_argument("fom: k exceeds instance count");
  const auto cont = x.continuous_indices();
  if (cont.empty()) throw std::invalid_argument("fom: no continuous features");

  const std::size_t n = x.n_rows();
  std::vector<double> terms(cont.size(), kNaN);
  parallel_for(static_cast<int>(cont.size()), worker_count(workers), [&](int c) {
    const std::size_t j = cont[c];
    try {
      const Dendrogram fold_tree = build_tree(x.without_feature(j), recipe);
      const Partition part = cut(fold_tree, k);
      const std::vector<double>& v = x.feature(j).values;
      std::vector<double> sum(part.k, 0.0);
      std::vector<int> cnt(part.k, 0);
      for (std::size_t i = 0; i < n; ++i) {
        sum[part.assignment[i]] += v[i];
        cnt[part.assignment[i]] += 1;
      }
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const int ci = part.assignment[i];
        const double d = v[i] - sum[ci] / cnt[ci];
        ss += d * d;
      }
      terms[c] = std::sqrt(ss / static_cast<double>(n));
    } catch (const std::exception&) {
      // degenerate fold: feature dropped from the aggregate
    }
  });

  double total = 0.0;
  int used = 0;
  for (double t : terms)
    if (!std::isnan(t)) {
      total += t;
      ++used;
    }
  if (used == 0) throw std::runtime_error("fom: every feature was skipped");
  return total / used;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0))
    throw std::runtime_error("correlation: degenerate input");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double cophenetic_correlation(const DistanceMatrix& dm, const Dendrogram& d) {
  const int n = dm.n();
  if (n < 3)
    throw std::invalid_argument("cophenetic_correlation: need >= 3 instances");
  if (n != d.n_leaves())
    throw std::invalid_argument("cophenetic_correlation: size mismatch");
  const Eigen::MatrixXd coph = cophenetic_matrix(d);
  std::vector<double> a, b;
  a.reserve(n * (n - 1) / 2);
  b.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a.push_back(dm(i, j));
      b.push_back(coph(i, j));
    }
  return pearson(a, b);
}

double ari(const Partition& p, std::span<const int> labels) {
  const std::size_t n = p.assignment.size();
  if (labels.size() != n) throw std::invalid_argument("ari: size mismatch");

  const int kp = p.k;
  int kl = 0;
  for (int l : labels) kl = std::max(kl, l + 1);
  Eigen::MatrixXi table = Eigen::MatrixXi::Zero(kp, kl);
  for (std::size_t i = 0; i < n; ++i) table(p.assignment[i], labels[i]) += 1;

  auto choose2 = [](double m) { return m * (m - 1.0) / 2.0; };
  double sum_cells = 0.0;
  for (int i = 0; i < kp; ++i)
    for (int j = 0; j < kl; ++j) sum_cells += choose2(table(i, j));
  double sum_rows = 0.0;
  for (int i = 0; i < kp; ++i) sum_rows += choose2(table.row(i).sum());
  double sum_cols = 0.0;
  for (int j = 0; j < kl; ++j) sum_cols += choose2(table.col(j).sum());
  const double expected = sum_rows * sum_cols / choose2(static_cast<double>(n));
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both partitions trivially agree
  return (sum_cells - expected) / (max_index - expected);
}

namespace {

std::vector<int> normalize_codes(std::span<const int> labels, int* k_out) {
  std::vector<int> uniq(labels.begin(), labels.end());
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = static_cast<int>(
        std::lower_bound(uniq.begin(), uniq.end(), labels[i]) - uniq.begin());
  *k_out = static_cast<int>(uniq.size());
  return out;
}

}  // namespace

double f1_gold(const Dendrogram& d, std::span<const int> labels,
               F1Matching matching) {
  if (static_cast<int>(labels.size()) != d.n_leaves())
    throw std::invalid_argument("f1_gold: size mismatch");
  int k = 0;
  const std::vector<int> truth = normalize_codes(labels, &k);
  if (k < 2) throw std::invalid_argument("f1_gold: need >= 2 distinct labels");

  const Partition part = cut(d, k);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(part.k, k);
  for (std::size_t i = 0; i < truth.size(); ++i)
    counts(part.assignment[i], truth[i]) += 1.0;

  std::vector<int> label_of_cluster(part.k, 0);
  if (matching == F1Matching::majority) {
    for (int c = 0; c < part.k; ++c) {
      int best = 0;
      for (int l = 1; l < k; ++l)
        if (counts(c, l) > counts(c, best)) best = l;
      label_of_cluster[c] = best;
    }
  } else {
    label_of_cluster = max_score_assignment(counts);
  }

  // Macro F1 over truth classes; never-predicted classes contribute 0.
  double macro = 0.0;
  for (int l = 0; l < k; ++l) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const int pred = label_of_cluster[part.assignment[i]];
      if (pred == l && truth[i] == l) tp += 1;
      if (pred == l && truth[i] != l) fp += 1;
      if (pred != l && truth[i] == l) fn += 1;
    }
    const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    macro += (prec + rec > 0) ? 2 * prec * rec / (prec + rec) : 0.0;
  }
  return macro / k;
}

namespace {

std::vector<double> midranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * (i + j) + 1.0;  // average of 1-based ranks
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("spearman: size mismatch");
  if (a.size() < 3) throw std::invalid_argument("spearman: need >= 3 values");
  return pearson(midranks(a), midranks(b));
}

std::vector<int> max_score_assignment(const Eigen::MatrixXd& score) {
  const int n = static_cast<int>(score.rows());
  if (score.cols() != n)
    throw std::invalid_argument("max_score_assignment: matrix must be square");
  const double top = score.maxCoeff();

  // Hungarian algorithm with potentials on cost = top - score, O(n^3).
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (top - score(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> result(n, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] > 0) result[match[j] - 1] = j - 1;
  return result;
}

namespace {

std::string fmt6(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string score_reports_to_csv(const std::vector<ScoreReport>& reports) {
  std::string out = "method_id,cvl,fom,coph,ari,f1_gold\n";
  for (const ScoreReport& r : reports) {
    out += r.method_id + ',' + fmt6(r.cvl) + ',' + fmt6(r.fom) + ',' +
           fmt6(r.coph) + ',' + fmt6(r.ari) + ',' + fmt6(r.f1_gold) + '\n';
  }
  return out;
}

std::string per_feature_to_csv(const std::vector<ScoreReport>& reports) {
  std::string out = "method_id,feature,loss,pfis\n";
  for (const ScoreReport& r : reports)
    for (std::size_t j = 0; j < r.feature_names.size(); ++j) {
      const double loss = j < r.per_feature_loss.size() ? r.per_feature_loss[j] : kNaN;
      const double imp = j < r.pfis.size() ? r.pfis[j] : kNaN;
      out += r.method_id + ',' + r.feature_names[j] + ',' + fmt6(loss) + ',' +
             fmt6(imp) + '\n';
    }
  return out;
}

std::string score_reports_to_json(const std::vector<ScoreReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ScoreReport& r : reports) {
    nlohmann::ordered_json obj;
    obj["method_id"] = r.method_id;
    obj["cvl"] = r.cvl;
    obj["fom"] = r.fom;
    obj["coph"] = r.coph;
    obj["ari"] = r.ari;
    obj["f1_gold"] = r.f1_gold;
    nlohmann::ordered_json loss = nlohmann::ordered_json::object();
    nlohmann::ordered_json imp = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < r.feature_names.size(); ++j) {
      if (j < r.per_feature_loss.size()) loss[r.feature_names[j]] = r.per_feature_loss[j];
      if (j < r.pfis.size()) imp[r.feature_names[j]] = r.pfis[j];
    }
    obj["per_feature_loss"] = std::move(loss);
    obj["pfis"] = std::move(imp);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

}  // namespace dendroevo
