// Equal-rates continuous-time Markov chain for categorical traits on an
// ultrametric tree: Felsenstein pruning likelihood, ML rate estimation and
// exact marginal ancestral posteriors (up-pass + down-pass).
//
// The ER transition kernel has the closed form
//   P[s,s'](t) = (1-u)/m + u * [s == s'],   u = exp(-m q t), m = |states|
// so applying P(t) to a vector costs O(m).

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dendroevo/dendrogram.hpp"

namespace dendroevo {

struct CtmcFit {
  std::vector<std::string> states;  // ordered category labels
  double q_hat = 0.0;               // per-pair transition intensity
  Eigen::VectorXd root_prior;       // uniform
  double log_lik = 0.0;
};

// Per-node probability vectors over states (rows sum to 1).
struct StatePosteriors {
  Eigen::MatrixXd probs;  // n_nodes x n_states
};

// Log-likelihood of leaf labels under rate q. Labels are codes into the
// state list; -1 marks a missing leaf (all-ones partial). Root prior is
// uniform. Throws when every label is missing or fewer than 2 states.
double pruning_loglik(const UltrametricTree& tree, std::span<const int> labels,
                      int n_states, double q);

// ML rate by golden-section search over q in [1e-8, 1e4/tree_height]
// (relative tolerance 1e-6).
CtmcFit fit_rate(const UltrametricTree& tree, std::span<const int> labels,
                 std::vector<std::string> states);

// Exact marginal posterior state distribution at every node. Observed
// leaves come out as point masses.
StatePosteriors marginal_posteriors(const CtmcFit& fit,
                                    const UltrametricTree& tree,
                                    std::span<const int> labels);

// Posterior at leaf `leaf` with its own label masked; the fitted rate is
// reused rather than refit per mask.
Eigen::VectorXd holdout_leaf_posterior(const CtmcFit& fit,
                                       const UltrametricTree& tree,
                                       std::span<const int> labels, int leaf);

// |A|^-1 sum_a (I[truth==a] - pi_a)^2.
double brier(const Eigen::VectorXd& posterior, int truth);

}  // namespace dendroevo
