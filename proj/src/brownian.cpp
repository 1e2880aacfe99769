#include "dendroevo/brownian.hpp"

#include <cmath>
#include <stdexcept>

namespace dendroevo {

Eigen::MatrixXd bm_covariance(const UltrametricTree& t) {
  const int n = t.n_leaves;
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i) c(i, i) = t.node_depth[i];

  // Union walk over internal nodes in id order (a valid bottom-up order):
  // leaves joining at node u share covariance depth(u).
  std::vector<std::vector<int>> members(t.n_nodes());
  for (int i = 0; i < n; ++i) members[i] = {i};
  for (int u = n; u < t.n_nodes(); ++u) {
    auto& left = members[t.children[u][0]];
    auto& right = members[t.children[u][1]];
    for (int a : left)
      for (int b : right) {
        c(a, b) = t.node_depth[u];
        c(b, a) = t.node_depth[u];
      }
    auto& target = members[u];
    target = std::move(left);
    target.insert(target.end(), right.begin(), right.end());
    right.clear();
    right.shrink_to_fit();
  }
  return c;
}

BrownianFit bm_fit(const UltrametricTree& tree, const Eigen::VectorXd& y) {
  const int n = tree.n_leaves;
  if (n < 2) throw std::invalid_argument("bm_fit: need at least 2 leaves");
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("bm_fit: y size does not match leaf count");
  if (!y.allFinite()) throw std::invalid_argument("bm_fit: y must be finite");
  if (!(tree.tree_height > 0.0))
    throw std::invalid_argument("bm_fit: tree height must be > 0");

  BrownianFit fit;
  fit.tree = tree;
  fit.cov = bm_covariance(tree);
  fit.cov_llt.compute(fit.cov);
  if (fit.cov_llt.info() != Eigen::Success)
    throw std::runtime_error("degenerate covariance");

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd ci_ones = fit.cov_llt.solve(ones);
  const double denom = ones.dot(ci_ones);
  if (!(denom > 0.0)) throw std::runtime_error("degenerate covariance");
  fit.mu_hat = y.dot(ci_ones) / denom;

  const Eigen::VectorXd resid = y.array() - fit.mu_hat;
  fit.sigma2_hat = resid.dot(fit.cov_llt.solve(resid)) / n;
  if (fit.sigma2_hat < 1e-12) {
    fit.sigma2_hat = 1e-12;
    fit.sigma2_floored = true;
  }
  return fit;
}

Eigen::VectorXd loo_predict(const BrownianFit& fit, const Eigen::VectorXd& y) {
  const int n = fit.tree.n_leaves;
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("loo_predict: y size does not match fit");
  const Eigen::MatrixXd cov_inv =
      fit.cov_llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::VectorXd resid = y.array() - fit.mu_hat;
  const Eigen::VectorXd ci_resid = cov_inv * resid;
  Eigen::VectorXd pred(n);
  for (int i = 0; i < n; ++i) pred(i) = y(i) - ci_resid(i) / cov_inv(i, i);
  return pred;
}

AncestralStates ancestral_states(const BrownianFit& fit,
                                 const Eigen::VectorXd& y,
                                 int samples_per_edge) {
  const UltrametricTree& t = fit.tree;
  const int n = t.n_leaves;
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("ancestral_states: y size does not match fit");
  if (samples_per_edge < 2)
    throw std::invalid_argument("ancestral_states: samples_per_edge >= 2");

  const Eigen::VectorXd resid = y.array() - fit.mu_hat;
  const Eigen::VectorXd ci_resid = fit.cov_llt.solve(resid);

  // Leaf membership per internal node, plus a representative leaf whose
  // covariance row doubles as the outside cross-covariance.
  std::vector<std::vector<int>> members(t.n_nodes());
  for (int i = 0; i < n; ++i) members[i] = {i};
  std::vector<char> under(n, 0);

  AncestralStates asr;
  asr.node_mean.assign(t.n_nodes(), 0.0);
  for (int i = 0; i < n; ++i) asr.node_mean[i] = y(i);

  Eigen::VectorXd cross(n);
  for (int u = n; u < t.n_nodes(); ++u) {
    auto& left = members[t.children[u][0]];
    auto& right = members[t.children[u][1]];
    members[u] = std::move(left);
    members[u].insert(members[u].end(), right.begin(), right.end());
    right.clear();
    right.shrink_to_fit();

    std::fill(under.begin(), under.end(), 0);
    for (int leaf : members[u]) under[leaf] = 1;
    const int rep = members[u].front();
    for (int i = 0; i < n; ++i)
      cross(i) = under[i] ? t.node_depth[u] : fit.cov(rep, i);
    asr.node_mean[u] = fit.mu_hat + cross.dot(ci_resid);
  }

  // Conditional means along an edge interpolate linearly in depth between
  // the endpoint means (Brownian-bridge expectation given the endpoints).
  asr.edge_samples.assign(t.n_nodes(), {});
  for (int u = 0; u < t.n_nodes(); ++u) {
    if (t.parent[u] == -1) continue;
    const double from = asr.node_mean[t.parent[u]];
    const double to = asr.node_mean[u];
    auto& samples = asr.edge_samples[u];
    samples.reserve(samples_per_edge);
    for (int s = 0; s < samples_per_edge; ++s) {
      const double pos = static_cast<double>(s) / (samples_per_edge - 1);
      samples.emplace_back(pos, from + pos * (to - from));
    }
  }
  return asr;
}

}  // namespace dendroevo
