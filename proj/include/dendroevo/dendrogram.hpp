// Canonical dendrogram representation: merge sequences, ultrametric edge
// lengths, cophenetic distances and horizontal cuts.
//
// Node ids are stable across the library: leaves are 0..n-1, the internal
// node created by merge m is n+m, the root is the last merge (node 2n-2).

#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dendroevo {

struct Merge {
  int left = -1;
  int right = -1;
  double height = 0.0;
};

// Rooted binary merge tree over n leaves with per-merge heights.
// Immutable after construction; the constructor validates the merge
// sequence (each node a child of exactly one later merge, heights >= 0).
class Dendrogram {
 public:
  Dendrogram(int n_leaves, std::vector<Merge> merges,
             std::vector<std::string> leaf_labels = {});

  int n_leaves() const { return n_leaves_; }
  int n_nodes() const { return 2 * n_leaves_ - 1; }
  int root() const { return n_nodes() - 1; }
  bool is_leaf(int node) const { return node < n_leaves_; }

  const std::vector<Merge>& merges() const { return merges_; }
  const Merge& merge_of(int internal_node) const {
    return merges_[internal_node - n_leaves_];
  }
  // Height of a node: 0 for leaves, merge height for internal nodes.
  double node_height(int node) const {
    return is_leaf(node) ? 0.0 : merges_[node - n_leaves_].height;
  }
  double root_height() const { return merges_.back().height; }
  double max_height() const;

  const std::vector<std::string>& leaf_labels() const { return leaf_labels_; }

 private:
  int n_leaves_ = 0;
  std::vector<Merge> merges_;
  std::vector<std::string> leaf_labels_;
};

// Rooted tree with explicit edge lengths, derived from a Dendrogram.
// Depths are measured from the root; leaf depths equal the root height
// (up to eps slop when height inversions had to be clamped).
struct UltrametricTree {
  int n_leaves = 0;
  std::vector<int> parent;                    // -1 for the root
  std::vector<std::array<int, 2>> children;   // {-1,-1} for leaves
  std::vector<double> edge_length;            // to parent; 0 for the root
  std::vector<double> node_depth;             // distance from the root
  double tree_height = 0.0;                   // max merge height
  std::vector<std::string> leaf_labels;

  int n_nodes() const { return 2 * n_leaves - 1; }
  int root() const { return n_nodes() - 1; }
  bool is_leaf(int node) const { return node < n_leaves; }
};

// Flat partition of the instances into k clusters, indices 0..k-1.
struct Partition {
  std::vector<int> assignment;
  int k = 0;
};

// Converts merge heights into edge lengths. Negative or zero edge lengths
// (height inversions under median/centroid linkage, tied heights) are
// clamped to eps; descendants of a clamped edge are re-anchored so leaf
// depths stay at the root height. Throws "degenerate tree" for n < 2.
UltrametricTree to_ultrametric(const Dendrogram& d, double eps = 1e-9);

// Symmetric n x n matrix of MRCA merge heights; zero diagonal.
Eigen::MatrixXd cophenetic_matrix(const Dendrogram& d);

// Undoes the last k-1 merges; cluster indices follow first leaf appearance.
Partition cut(const Dendrogram& d, int k);

// Newick serialization with edge lengths (12 significant digits); labels
// containing spaces or Newick metacharacters are single-quoted.
std::string to_newick(const UltrametricTree& t);

}  // namespace dendroevo
