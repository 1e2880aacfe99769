// Synthetic data generators: a recursive-doubling tree process with
// per-feature noise scales, and a labeled 2-Gaussian mixture.
//
// All randomness flows through counter-based splitmix64 substreams keyed by
// (seed, indices), so output is identical across platforms and thread
// counts. Draws use Box-Muller on 53-bit uniforms.

#pragma once

#include <cstdint>
#include <vector>

#include "dendroevo/dendrogram.hpp"
#include "dendroevo/feature_matrix.hpp"

namespace dendroevo {

// splitmix64 mixing function (Steele, Lea & Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);
// Uniform double in (0,1] from 64 random bits.
double bits_to_unit(std::uint64_t bits);
// Standard normal from a keyed substream; `key` selects the draw.
double normal_from_key(std::uint64_t key);
// Chains keys: derive_key(seed, i, j, ...) via repeated mixing.
std::uint64_t derive_key(std::uint64_t seed);
template <typename... Rest>
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t head, Rest... rest) {
  return derive_key(splitmix64(seed ^ (head + 0x9e3779b97f4a7c15ULL)), rest...);
}

struct SimConfig {
  int depth = 7;                          // K; 2^K leaves
  int n_features = 6;
  std::vector<double> sigma;              // default 2^(j-3), j = 1..6
  std::uint64_t seed = 0;
  bool noise_scale_is_variance = true;    // sigma_j^k is a variance
};

SimConfig default_sim_config();

struct TreeSimResult {
  FeatureMatrix data;       // 2^K rows, n_features continuous columns
  Dendrogram truth;         // the generating binary tree; level-l nodes at height K-l
};

// Recursive doubling: level k duplicates each level-(k-1) value into two
// children, each perturbed by independent N(0, sigma_j^k) noise; leaves are
// the level-K values.
TreeSimResult simulate_tree_data(const SimConfig& cfg);

struct TwoGaussiansResult {
  FeatureMatrix data;       // columns X1, X2
  std::vector<int> labels;  // 0/1
};

// Y ~ Bernoulli(0.5); (X1,X2)|Y ~ N((2Y,2Y), I).
TwoGaussiansResult simulate_two_gaussians(int n, std::uint64_t seed);

}  // namespace dendroevo
