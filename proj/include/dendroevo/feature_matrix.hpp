#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dendroevo {

enum class FeatureKind { continuous, categorical };

// One column of a dataset. Continuous columns carry doubles; categorical
// columns carry integer codes into a sorted list of level names.
struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::continuous;
  std::vector<double> values;        // continuous
  std::vector<int> codes;            // categorical
  std::vector<std::string> levels;   // categorical, sorted lexicographically

  std::size_t size() const {
    return kind == FeatureKind::continuous ? values.size() : codes.size();
  }
};

// n x p table of instance feature values with per-column kind and names.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t n_rows, std::vector<Feature> features);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_features() const { return features_.size(); }
  const Feature& feature(std::size_t j) const { return features_[j]; }
  const std::vector<Feature>& features() const { return features_; }

  FeatureMatrix without_feature(std::size_t j) const;

  std::vector<std::size_t> continuous_indices() const;
  // Dense matrix of the continuous columns, in column order.
  Eigen::MatrixXd continuous_block() const;

 private:
  std::size_t n_rows_ = 0;
  std::vector<Feature> features_;
};

// Helpers used across modules.
Feature make_continuous(std::string name, std::vector<double> values);
Feature make_categorical(std::string name,
                         const std::vector<std::string>& raw_values);

}  // namespace dendroevo
