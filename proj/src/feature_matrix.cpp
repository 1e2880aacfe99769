#include "dendroevo/feature_matrix.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dendroevo {

FeatureMatrix::FeatureMatrix(std::size_t n_rows, std::vector<Feature> features)
    : n_rows_(n_rows), features_(std::move(features)) {
  for (const Feature& f : features_) {
    if (f.size() != n_rows_)
      throw std::invalid_argument("feature '" + f.name + "' has " +
                                  std::to_string(f.size()) + " rows, expected " +
                                  std::to_string(n_rows_));
    if (f.kind == FeatureKind::categorical) {
      for (int code : f.codes)
        if (code < 0 || code >= static_cast<int>(f.levels.size()))
          throw std::invalid_argument("categorical code out of range in '" +
                                      f.name + "'");
    }
  }
}

FeatureMatrix FeatureMatrix::without_feature(std::size_t j) const {
  if (j >= features_.size())
    throw std::invalid_argument("feature index out of range");
  std::vector<Feature> rest;
  rest.reserve(features_.size() - 1);
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (i != j) rest.push_back(features_[i]);
  return FeatureMatrix(n_rows_, std::move(rest));
}

std::vector<std::size_t> FeatureMatrix::continuous_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < features_.size(); ++j)
    if (features_[j].kind == FeatureKind::continuous) idx.push_back(j);
  return idx;
}

Eigen::MatrixXd FeatureMatrix::continuous_block() const {
  const auto idx = continuous_indices();
  Eigen::MatrixXd block(n_rows_, idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c)
    for (std::size_t i = 0; i < n_rows_; ++i)
      block(i, c) = features_[idx[c]].values[i];
  return block;
}

Feature make_continuous(std::string name, std::vector<double> values) {
  Feature f;
  f.name = std::move(name);
  f.kind = FeatureKind::continuous;
  f.values = std::move(values);
  return f;
}

Feature make_categorical(std::string name,
                         const std::vector<std::string>& raw_values) {
  Feature f;
  f.name = std::move(name);
  f.kind = FeatureKind::categorical;
  std::vector<std::string> levels(raw_values);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::map<std::string, int> code_of;
  for (std::size_t i = 0; i < levels.size(); ++i)
    code_of[levels[i]] = static_cast<int>(i);
  f.codes.reserve(raw_values.size());
  for (const std::string& v : raw_values) f.codes.push_back(code_of[v]);
  f.levels = std::move(levels);
  return f;
}

}  // namespace dendroevo
