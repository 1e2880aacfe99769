#include "dendroevo/ctmc.hpp"

#include <cmath>
#include <stdexcept>

namespace dendroevo {

namespace {

// (P(t) v)[s] = (1-u)/m * sum(v) + u * v[s], u = exp(-m q t). The ER kernel
// is symmetric, so the same form serves both pass directions.
Eigen::VectorXd apply_er_kernel(const Eigen::VectorXd& v, int m, double q,
                                double t) {
  const double u = std::exp(-static_cast<double>(m) * q * t);
  const double mix = (1.0 - u) / m * v.sum();
  return (u * v.array() + mix).matrix();
}

struct PruningResult {
  Eigen::MatrixXd partial;  // n_nodes x m, rescaled per node
  double log_scale = 0.0;
  double log_lik = 0.0;
};

PruningResult prune(const UltrametricTree& tree, std::span<const int> labels,
                    int m, double q) {
  const int n_nodes = tree.n_nodes();
  PruningResult r;
  r.partial.resize(n_nodes, m);
  for (int u = 0; u < n_nodes; ++u) {
    Eigen::VectorXd part(m);
    if (tree.is_leaf(u)) {
      const int code = labels[u];
      if (code < 0) {
        part.setOnes();
      } else {
        part.setZero();
        part(code) = 1.0;
      }
    } else {
      part.setOnes();
      for (int c : tree.children[u])
        part.array() *=
            apply_er_kernel(r.partial.row(c).transpose(), m, q,
                            tree.edge_length[c])
                .array();
    }
    const double mx = part.maxCoeff();
    if (!(mx > 0.0)) throw std::runtime_error("pruning: zero likelihood");
    part /= mx;
    r.log_scale += std::log(mx);
    r.partial.row(u) = part.transpose();
  }
  const double root_sum = r.partial.row(tree.root()).sum() / m;  // uniform prior
  r.log_lik = std::log(root_sum) + r.log_scale;
  return r;
}

void check_inputs(const UltrametricTree& tree, std::span<const int> labels,
                  int n_states) {
  if (n_states < 2) throw std::invalid_argument("ctmc: need >= 2 states");
  if (static_cast<int>(labels.size()) != tree.n_leaves)
    throw std::invalid_argument("ctmc: label count does not match leaves");
  bool any = false;
  for (int code : labels) {
    if (code >= n_states) throw std::invalid_argument("ctmc: label code out of range");
    any = any || code >= 0;
  }
  if (!any) throw std::invalid_argument("ctmc: all labels missing");
}

}  // namespace

double pruning_loglik(const UltrametricTree& tree, std::span<const int> labels,
                      int n_states, double q) {
  check_inputs(tree, labels, n_states);
  if (!(q > 0.0)) throw std::invalid_argument("ctmc: rate must be > 0");
  return prune(tree, labels, n_states, q).log_lik;
}

CtmcFit fit_rate(const UltrametricTree& tree, std::span<const int> labels,
                 std::vector<std::string> states) {
  const int m = static_cast<int>(states.size());
  check_inputs(tree, labels, m);
  if (!(tree.tree_height > 0.0))
    throw std::invalid_argument("fit_rate: tree height must be > 0");

  const double q_lo = 1e-8;
  const double q_hi = 1e4 / tree.tree_height;
  auto objective = [&](double log_q) {
    return prune(tree, labels, m, std::exp(log_q)).log_lik;
  };

  // Golden-section on log q; the log transform makes the relative
  // tolerance uniform across the bracket.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(q_lo), b = std::log(q_hi);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > 1e-6) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  const double q_hat = std::exp(0.5 * (a + b));

  CtmcFit fit;
  fit.states = std::move(states);
  fit.q_hat = q_hat;
  fit.root_prior = Eigen::VectorXd::Constant(m, 1.0 / m);
  fit.log_lik = prune(tree, labels, m, q_hat).log_lik;
  if (!std::isfinite(fit.log_lik))
    throw std::runtime_error("fit_rate: non-finite likelihood");
  return fit;
}

StatePosteriors marginal_posteriors(const CtmcFit& fit,
                                    const UltrametricTree& tree,
                                    std::span<const int> labels) {
  const int m = static_cast<int>(fit.states.size());
  check_inputs(tree, labels, m);
  const double q = fit.q_hat;
  const PruningResult up = prune(tree, labels, m, q);

  // Down-pass: outside probability of each node, normalized per node to
  // dodge underflow (posteriors are renormalized anyway).
  const int n_nodes = tree.n_nodes();
  Eigen::MatrixXd outside(n_nodes, m);
  outside.row(tree.root()) = fit.root_prior.transpose();
  for (int u = n_nodes - 1; u >= tree.n_leaves; --u) {
    const auto [left, right] = tree.children[u];
    for (int c : {left, right}) {
      const int sib = (c == left) ? right : left;
      const Eigen::VectorXd sib_msg =
          apply_er_kernel(up.partial.row(sib).transpose(), m, q,
                          tree.edge_length[sib]);
      const Eigen::VectorXd at_parent =
          (outside.row(u).transpose().array() * sib_msg.array()).matrix();
      Eigen::VectorXd down = apply_er_kernel(at_parent, m, q, tree.edge_length[c]);
      const double mx = down.maxCoeff();
      if (mx > 0.0) down /= mx;
      outside.row(c) = down.transpose();
    }
  }

  StatePosteriors post;
  post.probs.resize(n_nodes, m);
  for (int u = 0; u < n_nodes; ++u) {
    const Eigen::VectorXd p =
        (outside.row(u).array() * up.partial.row(u).array()).matrix().transpose();
    const double total = p.sum();
    if (!(total > 0.0))
      throw std::runtime_error("marginal_posteriors: zero posterior mass");
    post.probs.row(u) = p.transpose() / total;
  }
  return post;
}

Eigen::VectorXd holdout_leaf_posterior(const CtmcFit& fit,
                                       const UltrametricTree& tree,
                                       std::span<const int> labels, int leaf) {
  if (leaf < 0 || leaf >= tree.n_leaves)
    throw std::invalid_argument("holdout_leaf_posterior: no such leaf");
  std::vector<int> masked(labels.begin(), labels.end());
  masked[leaf] = -1;
  const StatePosteriors post = marginal_posteriors(fit, tree, masked);
  return post.probs.row(leaf).transpose();
}

double brier(const Eigen::VectorXd& posterior, int truth) {
  const int m = static_cast<int>(posterior.size());
  if (truth < 0 || truth >= m)
    throw std::invalid_argument("brier: truth out of range");
  if (std::abs(posterior.sum() - 1.0) > 1e-8)
    throw std::invalid_argument("brier: posterior must sum to 1");
  double acc = 0.0;
  for (int a = 0; a < m; ++a) {
    const double diff = (a == truth ? 1.0 : 0.0) - posterior(a);
    acc += diff * diff;
  }
  return acc / m;
}

}  // namespace dendroevo
