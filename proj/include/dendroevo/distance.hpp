#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "dendroevo/feature_matrix.hpp"

namespace dendroevo {

enum class DistanceMetric { euclidean, manhattan, canberra };

DistanceMetric parse_metric(std::string_view name);
std::string metric_name(DistanceMetric m);

// Symmetric nonnegative dissimilarity matrix with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix(Eigen::MatrixXd entries, DistanceMetric metric);

  int n() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  DistanceMetric metric() const { return metric_; }

 private:
  Eigen::MatrixXd entries_;
  DistanceMetric metric_;
};

// Pairwise distances over the continuous columns of x (categorical columns
// do not enter distance computation). The canberra term |a-b|/(|a|+|b|)
// contributes 0 when both coordinates are exactly 0.
DistanceMatrix distances(const FeatureMatrix& x, DistanceMetric metric);

// Same on a raw points matrix (rows = instances).
DistanceMatrix distances(const Eigen::MatrixXd& points, DistanceMetric metric);

}  // namespace dendroevo
