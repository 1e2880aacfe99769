#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dendroevo/dendrogram.hpp"
#include "dendroevo/distance.hpp"
#include "dendroevo/linkage.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace dendroevo;

namespace {

Dendrogram three_leaf_tree() {
  // (a,b)@1 then (ab,c)@2
  return Dendrogram(3, {{0, 1, 1.0}, {3, 2, 2.0}}, {"a", "b", "c"});
}

}  // namespace

TEST_CASE("dendrogram validates its merge sequence") {
  CHECK_THROWS(Dendrogram(3, {{0, 1, 1.0}}));                 // too few merges
  CHECK_THROWS(Dendrogram(3, {{0, 1, 1.0}, {0, 2, 2.0}}));    // 0 used twice
  CHECK_THROWS(Dendrogram(3, {{0, 4, 1.0}, {3, 2, 2.0}}));    // forward ref
  CHECK_THROWS(Dendrogram(3, {{0, 1, -1.0}, {3, 2, 2.0}}));   // negative height
  CHECK_THROWS(Dendrogram(2, {{1, 1, 1.0}}));                 // self merge
  CHECK_NOTHROW(three_leaf_tree());
}

TEST_CASE("to_ultrametric reproduces height differences") {
  const UltrametricTree t = to_ultrametric(three_leaf_tree(), 1e-9);
  CHECK(t.edge_length[0] == doctest::Approx(1.0));
  CHECK(t.edge_length[1] == doctest::Approx(1.0));
  CHECK(t.edge_length[2] == doctest::Approx(2.0));
  CHECK(t.edge_length[3] == doctest::Approx(1.0));
  CHECK(t.tree_height == doctest::Approx(2.0));
  CHECK(t.node_depth[0] == doctest::Approx(2.0));
  CHECK(t.node_depth[4] == 0.0);
}

TEST_CASE("to_ultrametric clamps zero-height merges") {
  const Dendrogram d(2, {{0, 1, 0.0}});
  const UltrametricTree t = to_ultrametric(d, 1e-9);
  CHECK(t.edge_length[0] == doctest::Approx(1e-9));
  CHECK(t.edge_length[1] == doctest::Approx(1e-9));
}

TEST_CASE("to_ultrametric rejects degenerate input") {
  CHECK_THROWS_WITH(to_ultrametric(Dendrogram(1, {}), 1e-9),
                    doctest::Contains("degenerate tree"));
}

TEST_CASE("centroid-linkage inversions clamp only the offending edge") {
  // scan random 4-point sets until centroid linkage produces an inversion
  std::mt19937_64 rng(31u);
  bool found = false;
  for (int trial = 0; trial < 2000 && !found; ++trial) {
    const Eigen::MatrixXd pts = helpers::random_points(rng, 4, 2);
    const Dendrogram d =
        agglomerate(distances(pts, DistanceMetric::euclidean),
                    LinkageMethod::centroid);
    // inversion: some child internal node is higher than its parent
    int bad_child = -1;
    for (int m = 0; m < 3; ++m) {
      for (int c : {d.merges()[m].left, d.merges()[m].right})
        if (!d.is_leaf(c) && d.node_height(c) > d.merges()[m].height)
          bad_child = c;
    }
    if (bad_child < 0) continue;
    found = true;

    const double eps = 1e-9;
    const UltrametricTree t = to_ultrametric(d, eps);
    CHECK(t.edge_length[bad_child] == doctest::Approx(eps));
    // every other node sits at its nominal depth
    const double root_h = d.root_height();
    for (int u = 0; u < t.n_nodes(); ++u) {
      if (u == bad_child || u == t.root()) continue;
      CHECK(t.node_depth[u] ==
            doctest::Approx(root_h - d.node_height(u)).epsilon(1e-12));
    }
  }
  CHECK(found);
}

TEST_CASE("cophenetic matrix matches the definition") {
  const Dendrogram d = three_leaf_tree();
  const Eigen::MatrixXd c = cophenetic_matrix(d);
  CHECK(c(0, 1) == doctest::Approx(1.0));
  CHECK(c(0, 2) == doctest::Approx(2.0));
  CHECK(c(1, 2) == doctest::Approx(2.0));
  CHECK(c.diagonal().isZero());

  const Dendrogram pair(2, {{0, 1, 0.7}});
  const Eigen::MatrixXd cp = cophenetic_matrix(pair);
  CHECK(cp(0, 1) == doctest::Approx(0.7));
  CHECK(cp(1, 0) == doctest::Approx(0.7));
}

TEST_CASE("cophenetic matrix equals brute-force MRCA heights") {
  std::mt19937_64 rng(7u);
  for (int trial = 0; trial < 20; ++trial) {
    const Dendrogram d = helpers::random_tree(rng, 8);
    const Eigen::MatrixXd fast = cophenetic_matrix(d);
    const Eigen::MatrixXd brute = oracles::brute_cophenetic(d);
    CHECK((fast - brute).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("cophenetic distances are ultrametric for monotone trees") {
  std::mt19937_64 rng(11u);
  const Dendrogram d = helpers::random_tree(rng, 12);
  const Eigen::MatrixXd c = cophenetic_matrix(d);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      for (int l = 0; l < 12; ++l)
        CHECK(c(i, j) <= std::max(c(i, l), c(j, l)) + 1e-12);
}

TEST_CASE("cut") {
  const Dendrogram d = three_leaf_tree();
  SUBCASE("k=1 puts everything together") {
    const Partition p = cut(d, 1);
    CHECK(p.k == 1);
    CHECK(p.assignment == std::vector<int>{0, 0, 0});
  }
  SUBCASE("k=2 separates the last merge") {
    const Partition p = cut(d, 2);
    CHECK(p.k == 2);
    CHECK(p.assignment[0] == p.assignment[1]);
    CHECK(p.assignment[0] != p.assignment[2]);
    CHECK(p.assignment[0] == 0);  // first leaf appearance order
  }
  SUBCASE("k=n gives singletons") {
    const Partition p = cut(d, 3);
    CHECK(p.k == 3);
    CHECK(p.assignment == std::vector<int>{0, 1, 2});
  }
  SUBCASE("k out of range") {
    CHECK_THROWS(cut(d, 0));
    CHECK_THROWS(cut(d, 4));
  }
}

TEST_CASE("cuts are nested: k+1 refines k") {
  std::mt19937_64 rng(23u);
  const Dendrogram d = helpers::random_tree(rng, 14);
  for (int k = 1; k < 14; ++k) {
    const Partition coarse = cut(d, k);
    const Partition fine = cut(d, k + 1);
    for (int i = 0; i < 14; ++i)
      for (int j = 0; j < 14; ++j)
        if (fine.assignment[i] == fine.assignment[j])
          CHECK(coarse.assignment[i] == coarse.assignment[j]);
  }
}

TEST_CASE("edge lengths sum to the tree height along every root path") {
  std::mt19937_64 rng(5u);
  for (int trial = 0; trial < 10; ++trial) {
    const Dendrogram d = helpers::random_tree(rng, 20);
    const UltrametricTree t = to_ultrametric(d);
    for (int leaf = 0; leaf < 20; ++leaf) {
      double total = 0.0;
      for (int u = leaf; t.parent[u] != -1; u = t.parent[u])
        total += t.edge_length[u];
      CHECK(std::abs(total - t.tree_height) < 1e-12);
    }
  }
}

TEST_CASE("newick export quotes awkward labels and keeps precision") {
  const Dendrogram d(3, {{0, 1, 1.0}, {3, 2, 2.0}},
                     {"plain", "with space", "qu'ote"});
  const std::string nwk = to_newick(to_ultrametric(d));
  CHECK(nwk.find("plain:") != std::string::npos);
  CHECK(nwk.find("'with space'") != std::string::npos);
  CHECK(nwk.find("'qu''ote'") != std::string::npos);
  CHECK(nwk.back() == ';');

  const Dendrogram tiny(2, {{0, 1, 1.0 / 3.0}});
  const std::string nwk2 = to_newick(to_ultrametric(tiny));
  CHECK(nwk2.find("0.333333333333") != std::string::npos);
}
