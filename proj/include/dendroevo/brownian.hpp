// Brownian-motion trait model on an ultrametric tree.
//
// The leaf covariance of a BM process started at the root is
// C[i,i'] = sigma^2 * depth(mrca(i,i')), so all conditional means are
// expressible through C and the GLS estimates:
//   mu_hat     = (1' C^-1 y) / (1' C^-1 1)
//   sigma2_hat = (y - mu 1)' C^-1 (y - mu 1) / n
// Leave-one-out predictions use the closed-form identity
//   yhat_i = y_i - [C^-1 (y - mu 1)]_i / [C^-1]_ii
// with (mu_hat, sigma2_hat) held fixed across folds; sigma^2 cancels from
// every conditional mean, so only the unscaled C enters.

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "dendroevo/dendrogram.hpp"

namespace dendroevo {

struct BrownianFit {
  UltrametricTree tree;
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  Eigen::MatrixXd cov;              // unscaled leaf covariance C
  Eigen::LLT<Eigen::MatrixXd> cov_llt;  // cached lower-triangular factor
  bool sigma2_floored = false;      // constant-input degeneracy hit
};

struct AncestralStates {
  // Conditional mean per node; leaves carry their observed values.
  std::vector<double> node_mean;
  // Per non-root node: (position in [0,1] along the parent->node edge,
  // interpolated mean). Linear in depth -- the Brownian-bridge expectation.
  std::vector<std::vector<std::pair<double, double>>> edge_samples;
};

// Unscaled BM leaf covariance: entry (i,i') = depth of mrca(i,i'),
// diagonal = leaf depth.
Eigen::MatrixXd bm_covariance(const UltrametricTree& tree);

// Maximum-likelihood GLS fit. Throws "degenerate covariance" when the
// Cholesky factorization fails; sigma2 is floored at 1e-12 for constant y.
BrownianFit bm_fit(const UltrametricTree& tree, const Eigen::VectorXd& y);

// Gaussian conditional mean of each leaf given all others, closed form.
Eigen::VectorXd loo_predict(const BrownianFit& fit, const Eigen::VectorXd& y);

// Conditional expectation at every internal node given all leaves, plus
// linearly interpolated means along each edge.
AncestralStates ancestral_states(const BrownianFit& fit,
                                 const Eigen::VectorXd& y,
                                 int samples_per_edge);

}  // namespace dendroevo
