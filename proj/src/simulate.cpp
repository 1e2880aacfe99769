#include "dendroevo/simulate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dendroevo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double bits_to_unit(std::uint64_t bits) {
  // 53-bit mantissa, shifted into (0,1]
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

std::uint64_t derive_key(std::uint64_t seed) { return splitmix64(seed); }

double normal_from_key(std::uint64_t key) {
  const double u1 = bits_to_unit(splitmix64(key));
  const double u2 = bits_to_unit(splitmix64(key + 0x632be59bd9b4e019ULL));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

SimConfig default_sim_config() {
  SimConfig cfg;
  cfg.sigma.resize(cfg.n_features);
  for (int j = 1; j <= cfg.n_features; ++j)
    cfg.sigma[j - 1] = std::pow(2.0, j - 3);
  return cfg;
}

TreeSimResult simulate_tree_data(const SimConfig& cfg) {
  if (cfg.depth < 1) throw std::invalid_argument("simulate: depth must be >= 1");
  if (cfg.n_features < 1 ||
      static_cast<int>(cfg.sigma.size()) != cfg.n_features)
    throw std::invalid_argument("simulate: sigma length must equal n_features");
  for (double s : cfg.sigma)
    if (!(s > 0.0)) throw std::invalid_argument("simulate: sigma must be > 0");

  const int K = cfg.depth;
  const int n = 1 << K;

  // Level k duplicates node i of level k-1 into children i and 2^(k-1)+i,
  // each with independent N(0, sigma_j^k) noise. Substream key = (seed,
  // level, child index, feature), so the draw order never matters.
  std::vector<std::vector<double>> theta(
      cfg.n_features, std::vector<double>(n, 0.0));
  for (int k = 1; k <= K; ++k) {
    const int half = 1 << (k - 1);
    for (int j = 0; j < cfg.n_features; ++j) {
      const double scale = std::pow(cfg.sigma[j], k);
      const double sd = cfg.noise_scale_is_variance ? std::sqrt(scale) : scale;
      auto& col = theta[j];
      for (int i = half - 1; i >= 0; --i) {
        const double parent = col[i];
        const double z1 = normal_from_key(derive_key(
            cfg.seed, static_cast<std::uint64_t>(k),
            static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
        const double z2 = normal_from_key(derive_key(
            cfg.seed, static_cast<std::uint64_t>(k),
            static_cast<std::uint64_t>(half + i), static_cast<std::uint64_t>(j)));
        col[i] = parent + sd * z1;
        col[half + i] = parent + sd * z2;
      }
    }
  }

  std::vector<Feature> features;
  features.reserve(cfg.n_features);
  for (int j = 0; j < cfg.n_features; ++j)
    features.push_back(make_continuous("f" + std::to_string(j + 1),
                                       std::move(theta[j])));

  // Generating tree: level-l ancestors sit at height K-l; the pair split
  // from instance i at level l+1 is {i, i + 2^l}.
  std::vector<Merge> merges;
  merges.reserve(n - 1);
  std::vector<int> node_of(n);
  for (int i = 0; i < n; ++i) node_of[i] = i;
  int next_node = n;
  for (int l = K - 1; l >= 0; --l) {
    const int width = 1 << l;
    for (int i = 0; i < width; ++i) {
      merges.push_back({node_of[i], node_of[i + width],
                        static_cast<double>(K - l)});
      node_of[i] = next_node++;
    }
  }

  return TreeSimResult{FeatureMatrix(n, std::move(features)),
                       Dendrogram(n, std::move(merges))};
}

TwoGaussiansResult simulate_two_gaussians(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("simulate: n must be >= 2");
  std::vector<double> x1(n), x2(n);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t base =
        derive_key(seed, static_cast<std::uint64_t>(i));
    const int y =
        bits_to_unit(splitmix64(base ^ 0xa5a5a5a5a5a5a5a5ULL)) <= 0.5 ? 1 : 0;
    labels[i] = y;
    x1[i] = 2.0 * y + normal_from_key(derive_key(base, 1));
    x2[i] = 2.0 * y + normal_from_key(derive_key(base, 2));
  }
  TwoGaussiansResult result;
  std::vector<Feature> features;
  features.push_back(make_continuous("X1", std::move(x1)));
  features.push_back(make_continuous("X2", std::move(x2)));
  result.data = FeatureMatrix(n, std::move(features));
  result.labels = std::move(labels);
  return result;
}

}  // namespace dendroevo
