#include "dendroevo/dendrogram.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace dendroevo {

Dendrogram::Dendrogram(int n_leaves, std::vector<Merge> merges,
                       std::vector<std::string> leaf_labels)
    : n_leaves_(n_leaves),
      merges_(std::move(merges)),
      leaf_labels_(std::move(leaf_labels)) {
  if (n_leaves_ < 1) throw std::invalid_argument("dendrogram needs >= 1 leaf");
  if (static_cast<int>(merges_.size()) != n_leaves_ - 1)
    throw std::invalid_argument("dendrogram needs exactly n-1 merges");
  std::vector<char> used(n_nodes(), 0);
  for (std::size_t m = 0; m < merges_.size(); ++m) {
    const Merge& mg = merges_[m];
    const int limit = n_leaves_ + static_cast<int>(m);  // earlier nodes only
    for (int child : {mg.left, mg.right}) {
      if (child < 0 || child >= limit)
        throw std::invalid_argument("merge child out of range");
      if (used[child]) throw std::invalid_argument("node merged twice");
      used[child] = 1;
    }
    if (mg.left == mg.right)
      throw std::invalid_argument("merge joins a node with itself");
    if (!(mg.height >= 0.0))
      throw std::invalid_argument("merge height must be >= 0");
  }
  if (leaf_labels_.empty()) {
    leaf_labels_.reserve(n_leaves_);
    for (int i = 0; i < n_leaves_; ++i) leaf_labels_.push_back(std::to_string(i));
  } else if (static_cast<int>(leaf_labels_.size()) != n_leaves_) {
    throw std::invalid_argument("leaf label count does not match n_leaves");
  }
}

double Dendrogram::max_height() const {
  double h = 0.0;
  for (const Merge& m : merges_) h = std::max(h, m.height);
  return h;
}

UltrametricTree to_ultrametric(const Dendrogram& d, double eps) {
  if (d.n_leaves() < 2) throw std::invalid_argument("degenerate tree");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");

  UltrametricTree t;
  t.n_leaves = d.n_leaves();
  t.leaf_labels = d.leaf_labels();
  t.tree_height = d.max_height();
  const int n_nodes = t.n_nodes();
  t.parent.assign(n_nodes, -1);
  t.children.assign(n_nodes, {-1, -1});
  t.edge_length.assign(n_nodes, 0.0);
  t.node_depth.assign(n_nodes, 0.0);

  const int n = d.n_leaves();
  for (int m = 0; m < n - 1; ++m) {
    const Merge& mg = d.merges()[m];
    t.parent[mg.left] = n + m;
    t.parent[mg.right] = n + m;
    t.children[n + m] = {mg.left, mg.right};
  }

  // Top-down: each node targets depth root_height - height(node); an edge
  // that would come out shorter than eps is clamped and only that node is
  // displaced (its descendants re-anchor to their own targets).
  const double root_h = d.root_height();
  t.node_depth[t.root()] = root_h - d.node_height(t.root());  // = 0
  for (int m = n - 2; m >= 0; --m) {
    const int node = n + m;
    for (int child : t.children[node]) {
      const double target = root_h - d.node_height(child);
      const double edge = std::max(target - t.node_depth[node], eps);
      t.edge_length[child] = edge;
      t.node_depth[child] = t.node_depth[node] + edge;
    }
  }
  return t;
}

Eigen::MatrixXd cophenetic_matrix(const Dendrogram& d) {
  const int n = d.n_leaves();
  Eigen::MatrixXd coph = Eigen::MatrixXd::Zero(n, n);
  // members[v] = leaves currently rooted at active node v
  std::vector<std::vector<int>> members(d.n_nodes());
  for (int i = 0; i < n; ++i) members[i] = {i};
  for (int m = 0; m < n - 1; ++m) {
    const Merge& mg = d.merges()[m];
    auto& left = members[mg.left];
    auto& right = members[mg.right];
    for (int a : left)
      for (int b : right) {
        coph(a, b) = mg.height;
        coph(b, a) = mg.height;
      }
    auto& target = members[d.n_leaves() + m];
    target = std::move(left);
    target.insert(target.end(), right.begin(), right.end());
    right.clear();
    right.shrink_to_fit();
  }
  return coph;
}

Partition cut(const Dendrogram& d, int k) {
  const int n = d.n_leaves();
  if (k < 1 || k > n) throw std::invalid_argument("cut: k out of range");

  // Merges with index >= n-k are undone; every remaining node whose parent
  // is undone (or absent) roots a cluster.
  std::vector<int> parent(d.n_nodes(), -1);
  for (int m = 0; m < n - 1; ++m) {
    parent[d.merges()[m].left] = n + m;
    parent[d.merges()[m].right] = n + m;
  }
  const int first_undone = n + (n - k);
  auto cluster_root = [&](int node) {
    while (parent[node] != -1 && parent[node] < first_undone) node = parent[node];
    return node;
  };

  Partition p;
  p.assignment.assign(n, -1);
  std::vector<int> root_to_cluster(d.n_nodes(), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = cluster_root(i);
    if (root_to_cluster[r] == -1) root_to_cluster[r] = next++;
    p.assignment[i] = root_to_cluster[r];
  }
  p.k = next;
  return p;
}

namespace {

bool needs_quoting(const std::string& label) {
  if (label.empty()) return true;
  return label.find_first_of(" \t()[]:;,'\"") != std::string::npos;
}

std::string newick_label(const std::string& label) {
  if (!needs_quoting(label)) return label;
  std::string out = "'";
  for (char c : label) {
    out += c;
    if (c == '\'') out += '\'';  // Newick doubles embedded quotes
  }
  out += '\'';
  return out;
}

std::string format_length(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_newick(const UltrametricTree& t, int node, std::string& out) {
  if (t.is_leaf(node)) {
    out += newick_label(t.leaf_labels[node]);
  } else {
    out += '(';
    write_newick(t, t.children[node][0], out);
    out += ',';
    write_newick(t, t.children[node][1], out);
    out += ')';
  }
  if (t.parent[node] != -1) {
    out += ':';
    out += format_length(t.edge_length[node]);
  }
}

}  // namespace

std::string to_newick(const UltrametricTree& t) {
  std::string out;
  write_newick(t, t.root(), out);
  out += ';';
  return out;
}

}  // namespace dendroevo
