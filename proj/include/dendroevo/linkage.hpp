// Dendrogram construction: Lance-Williams agglomerative linkages and the
// Kaufman-Rousseeuw divisive method (DIANA).

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dendroevo/dendrogram.hpp"
#include "dendroevo/distance.hpp"
#include "dendroevo/feature_matrix.hpp"

namespace dendroevo {

// The agnes-flavoured entries are documented aliases: weighted_agnes is
// mcquitty, average_agnes is average, ward_agnes is ward_d2. They exist so
// the usual 11-method comparison grids are expressible verbatim.
enum class LinkageMethod {
  single,
  complete,
  average,
  mcquitty,
  ward_d,
  ward_d2,
  median,
  centroid,
  weighted_agnes,
  average_agnes,
  ward_agnes,
  diana,
};

// Resolves aliases to the linkage actually executed.
LinkageMethod canonical_linkage(LinkageMethod m);
// Accepts both the enum spellings and the R names (ward.D, ward.D2, ...).
LinkageMethod parse_linkage(std::string_view name);
std::string linkage_name(LinkageMethod m);

// Agglomerative clustering via the Lance-Williams recurrence. Merge height
// is the inter-cluster dissimilarity at merge time; ward_d2, centroid and
// median run on squared dissimilarities and report sqrt heights. Ties are
// broken towards the lexicographically lowest active pair. Rejects diana.
Dendrogram agglomerate(const DistanceMatrix& dm, LinkageMethod method,
                       std::vector<std::string> leaf_labels = {});

// Divisive analysis: repeatedly splits the cluster of largest diameter by
// splinter-group formation; node height = cluster diameter at split.
Dendrogram diana(const DistanceMatrix& dm,
                 std::vector<std::string> leaf_labels = {});

// Dispatch over the full method enum (including diana).
Dendrogram build_dendrogram(const DistanceMatrix& dm, LinkageMethod method,
                            std::vector<std::string> leaf_labels = {});

// Transforms each continuous column to sample mean 0 / variance 1
// (divisor n-1). Zero-variance continuous columns are dropped and reported
// through `warnings`. Categorical columns pass through unchanged.
FeatureMatrix standardize(const FeatureMatrix& x,
                          std::vector<std::string>* warnings = nullptr);

}  // namespace dendroevo
