#include "dendroevo/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace dendroevo {

DistanceMetric parse_metric(std::string_view name) {
  if (name == "euclidean") return DistanceMetric::euclidean;
  if (name == "manhattan") return DistanceMetric::manhattan;
  if (name == "canberra") return DistanceMetric::canberra;
  throw std::invalid_argument("unknown distance metric: " + std::string(name));
}

std::string metric_name(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::euclidean: return "euclidean";
    case DistanceMetric::manhattan: return "manhattan";
    case DistanceMetric::canberra: return "canberra";
  }
  return "?";
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd entries, DistanceMetric metric)
    : entries_(std::move(entries)), metric_(metric) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("distance matrix must be square");
  for (int i = 0; i < entries_.rows(); ++i) {
    if (entries_(i, i) != 0.0)
      throw std::invalid_argument("distance matrix diagonal must be zero");
    for (int j = i + 1; j < entries_.cols(); ++j) {
      if (!(entries_(i, j) >= 0.0) || !std::isfinite(entries_(i, j)))
        throw std::invalid_argument("distances must be finite and >= 0");
      if (entries_(i, j) != entries_(j, i))
        throw std::invalid_argument("distance matrix must be symmetric");
    }
  }
}

namespace {

double pair_distance(const Eigen::MatrixXd& x, int a, int b,
                     DistanceMetric metric) {
  const int p = static_cast<int>(x.cols());
  double acc = 0.0;
  switch (metric) {
    case DistanceMetric::euclidean:
      for (int j = 0; j < p; ++j) {
        const double d = x(a, j) - x(b, j);
        acc += d * d;
      }
      return std::sqrt(acc);
    case DistanceMetric::manhattan:
      for (int j = 0; j < p; ++j) acc += std::abs(x(a, j) - x(b, j));
      return acc;
    case DistanceMetric::canberra:
      for (int j = 0; j < p; ++j) {
        const double denom = std::abs(x(a, j)) + std::abs(x(b, j));
        if (denom > 0.0) acc += std::abs(x(a, j) - x(b, j)) / denom;
      }
      return acc;
  }
  return acc;
}

}  // namespace

DistanceMatrix distances(const Eigen::MatrixXd& points, DistanceMetric metric) {
  const int n = static_cast<int>(points.rows());
  if (n < 2) throw std::invalid_argument("distances: need at least 2 rows");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = pair_distance(points, i, j, metric);
      d(i, j) = v;
      d(j, i) = v;
    }
  return DistanceMatrix(std::move(d), metric);
}

DistanceMatrix distances(const FeatureMatrix& x, DistanceMetric metric) {
  if (x.n_rows() < 2) throw std::invalid_argument("distances: need at least 2 rows");
  if (x.continuous_indices().empty())
    throw std::invalid_argument("distances: no continuous features");
  return distances(x.continuous_block(), metric);
}

}  // namespace dendroevo
