#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dendroevo/simulate.hpp"

using namespace dendroevo;

namespace {

double column_mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / v.size();
}

double column_var(const std::vector<double>& v) {
  const double m = column_mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / (v.size() - 1);
}

// two-sample Kolmogorov-Smirnov statistic
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("simulated tree data is reproducible and seed-sensitive") {
  SimConfig cfg = default_sim_config();
  cfg.seed = 7;
  const TreeSimResult a = simulate_tree_data(cfg);
  const TreeSimResult b = simulate_tree_data(cfg);
  for (int j = 0; j < 6; ++j)
    CHECK(a.data.feature(j).values == b.data.feature(j).values);

  cfg.seed = 8;
  const TreeSimResult c = simulate_tree_data(cfg);
  CHECK(a.data.feature(0).values != c.data.feature(0).values);
}

TEST_CASE("vanishing noise scale gives vanishing leaves") {
  SimConfig cfg = default_sim_config();
  cfg.sigma.assign(6, 1e-12);
  cfg.seed = 3;
  const TreeSimResult sim = simulate_tree_data(cfg);
  for (int j = 0; j < 6; ++j)
    for (double v : sim.data.feature(j).values) CHECK(std::abs(v) < 1e-4);
}

TEST_CASE("depth-1 single feature: two independent standard normals") {
  SimConfig cfg;
  cfg.depth = 1;
  cfg.n_features = 1;
  cfg.sigma = {1.0};
  std::vector<double> left, right;
  for (int seed = 0; seed < 10000; ++seed) {
    cfg.seed = seed;
    const TreeSimResult sim = simulate_tree_data(cfg);
    left.push_back(sim.data.feature(0).values[0]);
    right.push_back(sim.data.feature(0).values[1]);
  }
  CHECK(std::abs(column_mean(left)) < 0.05);
  CHECK(std::abs(column_mean(right)) < 0.05);
  CHECK(column_var(left) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(column_var(right) == doctest::Approx(1.0).epsilon(0.1));
  double cross = 0.0;
  for (std::size_t i = 0; i < left.size(); ++i) cross += left[i] * right[i];
  CHECK(std::abs(cross / left.size()) < 0.05);  // independence
}

TEST_CASE("paper config: leaf variance increases with the noise scale") {
  // per-seed orderings can flip between the two quietest features (their
  // sample variance is dominated by a couple of shared early draws);
  // measured 47/50 with these seeds
  int ordered = 0;
  double mean_var[6] = {0, 0, 0, 0, 0, 0};
  for (int seed = 0; seed < 50; ++seed) {
    SimConfig cfg = default_sim_config();
    cfg.seed = 9000 + seed;
    const TreeSimResult sim = simulate_tree_data(cfg);
    CHECK(sim.data.n_rows() == 128);
    CHECK(sim.data.n_features() == 6);
    bool ok = true;
    for (int j = 0; j < 6; ++j)
      mean_var[j] += column_var(sim.data.feature(j).values) / 50.0;
    for (int j = 1; j < 6; ++j)
      ok = ok && column_var(sim.data.feature(j).values) >
                     column_var(sim.data.feature(j - 1).values);
    ordered += ok;
  }
  CHECK(ordered >= 45);
  for (int j = 1; j < 6; ++j) CHECK(mean_var[j] > mean_var[j - 1]);
}

TEST_CASE("generating tree covariance matches the analytic shared-path sum") {
  // sigma = 1: Cov(X_i, X_j) = number of shared levels = MRCA depth in the
  // unit-edge truth tree
  SimConfig cfg;
  cfg.depth = 3;
  cfg.n_features = 1;
  cfg.sigma = {1.0};
  const int reps = 4000;
  std::vector<double> x0(reps), x4(reps), x1(reps);
  for (int seed = 0; seed < reps; ++seed) {
    cfg.seed = 100000 + seed;
    const TreeSimResult sim = simulate_tree_data(cfg);
    x0[seed] = sim.data.feature(0).values[0];
    x4[seed] = sim.data.feature(0).values[4];
    x1[seed] = sim.data.feature(0).values[1];
  }
  auto cov = [&](const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = column_mean(a), mb = column_mean(b);
    double acc = 0.0;
    for (int i = 0; i < reps; ++i) acc += (a[i] - ma) * (b[i] - mb);
    return acc / (reps - 1);
  };
  // leaves 0 and 4 share levels 1..2 -> cov 2; leaves 0 and 1 split at the
  // root -> cov 0; Var = 3 shared levels with itself
  CHECK(cov(x0, x4) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::abs(cov(x0, x1)) < 0.25);
  CHECK(cov(x0, x0) == doctest::Approx(3.0).epsilon(0.15));

  // and the exported truth tree agrees
  const TreeSimResult sim = simulate_tree_data(cfg);
  const Eigen::MatrixXd coph = cophenetic_matrix(sim.truth);
  CHECK(coph(0, 4) == doctest::Approx(1.0));  // cherries merge first
  CHECK(coph(0, 1) == doctest::Approx(3.0));  // root-level split
}

TEST_CASE("features with equal noise scales are exchangeable") {
  SimConfig cfg;
  cfg.depth = 4;
  cfg.n_features = 2;
  cfg.sigma = {1.0, 1.0};
  std::vector<double> f1, f2;
  for (int seed = 0; seed < 200; ++seed) {
    cfg.seed = 5000 + seed;
    const TreeSimResult sim = simulate_tree_data(cfg);
    const auto& a = sim.data.feature(0).values;
    const auto& b = sim.data.feature(1).values;
    f1.insert(f1.end(), a.begin(), a.end());
    f2.insert(f2.end(), b.begin(), b.end());
  }
  CHECK(ks_statistic(f1, f2) < 0.15);
}

TEST_CASE("noise_scale_is_variance flag flips the spread") {
  SimConfig cfg;
  cfg.depth = 5;
  cfg.n_features = 1;
  cfg.sigma = {4.0};
  cfg.seed = 11;
  const double var_reading =
      column_var(simulate_tree_data(cfg).data.feature(0).values);
  cfg.noise_scale_is_variance = false;  // sigma^k becomes the SD
  const double sd_reading =
      column_var(simulate_tree_data(cfg).data.feature(0).values);
  CHECK(sd_reading > 10.0 * var_reading);
}

TEST_CASE("two-gaussian generator") {
  SUBCASE("deterministic at fixed seed") {
    const TwoGaussiansResult a = simulate_two_gaussians(100, 42);
    const TwoGaussiansResult b = simulate_two_gaussians(100, 42);
    CHECK(a.data.feature(0).values == b.data.feature(0).values);
    CHECK(a.labels == b.labels);
  }
  SUBCASE("conditional means and label balance") {
    const TwoGaussiansResult sim = simulate_two_gaussians(10000, 9);
    double mean1 = 0.0, mean0 = 0.0;
    int n1 = 0;
    for (int i = 0; i < 10000; ++i) {
      if (sim.labels[i] == 1) {
        mean1 += sim.data.feature(0).values[i];
        ++n1;
      } else {
        mean0 += sim.data.feature(0).values[i];
      }
    }
    mean1 /= n1;
    mean0 /= (10000 - n1);
    CHECK(std::abs(n1 / 10000.0 - 0.5) < 0.05);
    CHECK(mean1 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::abs(mean0) < 0.1);
  }
}
