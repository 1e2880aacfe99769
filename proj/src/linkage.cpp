#include "dendroevo/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dendroevo {

LinkageMethod canonical_linkage(LinkageMethod m) {
  switch (m) {
    case LinkageMethod::weighted_agnes: return LinkageMethod::mcquitty;
    case LinkageMethod::average_agnes: return LinkageMethod::average;
    case LinkageMethod::ward_agnes: return LinkageMethod::ward_d2;
    default: return m;
  }
}

LinkageMethod parse_linkage(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "single") return LinkageMethod::single;
  if (s == "complete") return LinkageMethod::complete;
  if (s == "average") return LinkageMethod::average;
  if (s == "mcquitty") return LinkageMethod::mcquitty;
  if (s == "ward.d" || s == "ward_d") return LinkageMethod::ward_d;
  if (s == "ward.d2" || s == "ward_d2") return LinkageMethod::ward_d2;
  if (s == "median") return LinkageMethod::median;
  if (s == "centroid") return LinkageMethod::centroid;
  if (s == "weighted_agnes" || s == "agnes.weighted")
    return LinkageMethod::weighted_agnes;
  if (s == "average_agnes" || s == "agnes.average")
    return LinkageMethod::average_agnes;
  if (s == "ward_agnes" || s == "agnes.ward") return LinkageMethod::ward_agnes;
  if (s == "diana") return LinkageMethod::diana;
  throw std::invalid_argument("unknown linkage method: " + std::string(name));
}

std::string linkage_name(LinkageMethod m) {
  switch (m) {
    case LinkageMethod::single: return "single";
    case LinkageMethod::complete: return "complete";
    case LinkageMethod::average: return "average";
    case LinkageMethod::mcquitty: return "mcquitty";
    case LinkageMethod::ward_d: return "ward.D";
    case LinkageMethod::ward_d2: return "ward.D2";
    case LinkageMethod::median: return "median";
    case LinkageMethod::centroid: return "centroid";
    case LinkageMethod::weighted_agnes: return "weighted_agnes";
    case LinkageMethod::average_agnes: return "average_agnes";
    case LinkageMethod::ward_agnes: return "ward_agnes";
    case LinkageMethod::diana: return "diana";
  }
  return "?";
}

namespace {

bool uses_squared_distances(LinkageMethod m) {
  return m == LinkageMethod::ward_d2 || m == LinkageMethod::centroid ||
         m == LinkageMethod::median;
}

// Lance-Williams update d(i+j, k) from d(i,k), d(j,k), d(i,j).
double lw_update(LinkageMethod m, double dik, double djk, double dij,
                 double ni, double nj, double nk) {
  switch (m) {
    case LinkageMethod::single:
      return 0.5 * dik + 0.5 * djk - 0.5 * std::abs(dik - djk);
    case LinkageMethod::complete:
      return 0.5 * dik + 0.5 * djk + 0.5 * std::abs(dik - djk);
    case LinkageMethod::average:
      return (ni * dik + nj * djk) / (ni + nj);
    case LinkageMethod::mcquitty:
      return 0.5 * dik + 0.5 * djk;
    case LinkageMethod::ward_d:
    case LinkageMethod::ward_d2: {
      const double s = ni + nj + nk;
      return ((ni + nk) * dik + (nj + nk) * djk - nk * dij) / s;
    }
    case LinkageMethod::centroid: {
      const double s = ni + nj;
      return (ni * dik + nj * djk) / s - ni * nj * dij / (s * s);
    }
    case LinkageMethod::median:
      return 0.5 * dik + 0.5 * djk - 0.25 * dij;
    default:
      throw std::logic_error("lw_update: not an agglomerative method");
  }
}

}  // namespace

Dendrogram agglomerate(const DistanceMatrix& dm, LinkageMethod method,
                       std::vector<std::string> leaf_labels) {
  method = canonical_linkage(method);
  if (method == LinkageMethod::diana)
    throw std::invalid_argument("agglomerate: diana is a divisive method");
  const int n = dm.n();
  const bool squared = uses_squared_distances(method);

  Eigen::MatrixXd d = dm.entries();
  if (squared) d = d.array().square().matrix();

  std::vector<char> active(n, 1);
  std::vector<double> size(n, 1.0);
  std::vector<int> node_id(n);
  for (int i = 0; i < n; ++i) node_id[i] = i;

  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (int step = 0; step < n - 1; ++step) {
    // lowest lexicographic pair among the minimal dissimilarities
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (d(i, j) < best) {
          best = d(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    const double height = squared ? std::sqrt(std::max(best, 0.0)) : best;
    merges.push_back({node_id[bi], node_id[bj], height});

    const double dij = d(bi, bj);
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double v =
          lw_update(method, d(bi, k), d(bj, k), dij, size[bi], size[bj], size[k]);
      d(bi, k) = v;
      d(k, bi) = v;
    }
    size[bi] += size[bj];
    node_id[bi] = n + step;
    active[bj] = 0;
  }
  return Dendrogram(n, std::move(merges), std::move(leaf_labels));
}

namespace {

double cluster_diameter(const DistanceMatrix& dm, const std::vector<int>& c) {
  double diam = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b)
      diam = std::max(diam, dm(c[a], c[b]));
  return diam;
}

double mean_dissim(const DistanceMatrix& dm, int i, const std::vector<int>& group,
                   bool exclude_self) {
  double acc = 0.0;
  int cnt = 0;
  for (int j : group) {
    if (exclude_self && j == i) continue;
    acc += dm(i, j);
    ++cnt;
  }
  return cnt == 0 ? 0.0 : acc / cnt;
}

// One Kaufman-Rousseeuw split: seed the splinter with the object of maximal
// average dissimilarity, then move objects while some remainder object is
// on average closer to the splinter than to the rest of the remainder.
std::pair<std::vector<int>, std::vector<int>> diana_split(
    const DistanceMatrix& dm, const std::vector<int>& cluster) {
  std::vector<int> rest = cluster;
  std::vector<int> splinter;

  int seed_pos = 0;
  double seed_score = -1.0;
  for (std::size_t p = 0; p < rest.size(); ++p) {
    const double s = mean_dissim(dm, rest[p], rest, true);
    if (s > seed_score) {
      seed_score = s;
      seed_pos = static_cast<int>(p);
    }
  }
  splinter.push_back(rest[seed_pos]);
  rest.erase(rest.begin() + seed_pos);

  while (rest.size() > 1) {
    int move_pos = -1;
    double move_gain = 0.0;
    for (std::size_t p = 0; p < rest.size(); ++p) {
      const double gain = mean_dissim(dm, rest[p], rest, true) -
                          mean_dissim(dm, rest[p], splinter, false);
      if (gain > move_gain) {
        move_gain = gain;
        move_pos = static_cast<int>(p);
      }
    }
    if (move_pos < 0) break;
    splinter.push_back(rest[move_pos]);
    rest.erase(rest.begin() + move_pos);
  }
  return {std::move(rest), std::move(splinter)};
}

}  // namespace

Dendrogram diana(const DistanceMatrix& dm, std::vector<std::string> leaf_labels) {
  const int n = dm.n();
  if (n < 2) throw std::invalid_argument("diana: need at least 2 instances");

  struct ClusterRec {
    std::vector<int> items;
    double diameter = 0.0;
    int split_index = -1;  // which split produced its children
  };
  std::vector<ClusterRec> clusters;
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  clusters.push_back({std::move(all), 0.0, -1});
  clusters[0].diameter = cluster_diameter(dm, clusters[0].items);

  struct SplitRec {
    int parent_cluster;
    int child_a, child_b;  // indices into `clusters`
    double height;
  };
  std::vector<SplitRec> splits;
  splits.reserve(n - 1);

  // Splittable clusters by (creation order); each step picks the largest
  // diameter, first-created on ties.
  std::vector<int> open;
  if (clusters[0].items.size() > 1) open.push_back(0);
  while (!open.empty()) {
    int pick_pos = 0;
    for (std::size_t p = 1; p < open.size(); ++p)
      if (clusters[open[p]].diameter > clusters[open[pick_pos]].diameter)
        pick_pos = static_cast<int>(p);
    const int ci = open[pick_pos];
    open.erase(open.begin() + pick_pos);

    auto [a, b] = diana_split(dm, clusters[ci].items);
    ClusterRec ra{std::move(a), 0.0, -1};
    ClusterRec rb{std::move(b), 0.0, -1};
    ra.diameter = cluster_diameter(dm, ra.items);
    rb.diameter = cluster_diameter(dm, rb.items);
    const int ia = static_cast<int>(clusters.size());
    clusters.push_back(std::move(ra));
    const int ib = static_cast<int>(clusters.size());
    clusters.push_back(std::move(rb));
    clusters[ci].split_index = static_cast<int>(splits.size());
    splits.push_back({ci, ia, ib, clusters[ci].diameter});
    if (clusters[ia].items.size() > 1) open.push_back(ia);
    if (clusters[ib].items.size() > 1) open.push_back(ib);
  }

  // Reverse split order is a valid merge order (children split later than
  // their parent, and diameters shrink down the tree).
  const int n_splits = static_cast<int>(splits.size());
  auto node_of_cluster = [&](int ci) {
    const ClusterRec& c = clusters[ci];
    if (c.items.size() == 1) return c.items[0];
    return n + (n_splits - 1 - c.split_index);
  };
  std::vector<Merge> merges(n_splits);
  for (int s = 0; s < n_splits; ++s) {
    const SplitRec& sp = splits[s];
    int a = node_of_cluster(sp.child_a);
    int b = node_of_cluster(sp.child_b);
    if (a > b) std::swap(a, b);
    merges[n_splits - 1 - s] = {a, b, sp.height};
  }
  return Dendrogram(n, std::move(merges), std::move(leaf_labels));
}

Dendrogram build_dendrogram(const DistanceMatrix& dm, LinkageMethod method,
                            std::vector<std::string> leaf_labels) {
  if (canonical_linkage(method) == LinkageMethod::diana)
    return diana(dm, std::move(leaf_labels));
  return agglomerate(dm, method, std::move(leaf_labels));
}

FeatureMatrix standardize(const FeatureMatrix& x,
                          std::vector<std::string>* warnings) {
  const std::size_t n = x.n_rows();
  std::vector<Feature> out;
  out.reserve(x.n_features());
  for (const Feature& f : x.features()) {
    if (f.kind != FeatureKind::continuous) {
      out.push_back(f);
      continue;
    }
    double mean = 0.0;
    for (double v : f.values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : f.values) ss += (v - mean) * (v - mean);
    const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    if (!(var > 0.0)) {
      if (warnings)
        warnings->push_back("feature '" + f.name +
                            "' has zero variance; excluded");
      continue;
    }
    const double sd = std::sqrt(var);
    Feature g = f;
    for (double& v : g.values) v = (v - mean) / sd;
    out.push_back(std::move(g));
  }
  return FeatureMatrix(n, std::move(out));
}

}  // namespace dendroevo
