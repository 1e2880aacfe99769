#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "dendroevo/brownian.hpp"
#include "dendroevo/ctmc.hpp"
#include "dendroevo/render.hpp"
#include "test_helpers.hpp"
#include "xml_check.hpp"

using namespace dendroevo;

namespace {

std::set<std::string> attribute_values(const std::string& svg,
                                       const std::string& attr) {
  std::set<std::string> out;
  const std::string needle = attr + "=\"";
  std::size_t pos = 0;
  while ((pos = svg.find(needle, pos)) != std::string::npos) {
    pos += needle.size();
    const auto end = svg.find('"', pos);
    out.insert(svg.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

struct ContinuousScene {
  Dendrogram tree;
  AncestralStates asr;
  std::vector<double> y;
};

ContinuousScene continuous_scene(std::mt19937_64& rng, int n_leaves) {
  Dendrogram tree = helpers::random_tree(rng, n_leaves);
  const UltrametricTree ultra = to_ultrametric(tree);
  Eigen::VectorXd y = helpers::random_vector(rng, n_leaves);
  const BrownianFit fit = bm_fit(ultra, y);
  AncestralStates asr = ancestral_states(fit, y, 16);
  std::vector<double> yv(y.data(), y.data() + n_leaves);
  return {std::move(tree), std::move(asr), std::move(yv)};
}

}  // namespace

TEST_CASE("continuous render: well-formed, deterministic XML") {
  std::mt19937_64 rng(101u);
  RenderSpec spec;
  for (int trial = 0; trial < 5; ++trial) {
    const ContinuousScene scene = continuous_scene(rng, 12);
    const std::string svg =
        render_continuous(scene.tree, scene.asr, scene.y, spec);
    CHECK(xmlcheck::xml_well_formed(svg));
    CHECK(render_continuous(scene.tree, scene.asr, scene.y, spec) == svg);
  }
  // horizontal orientation too
  RenderSpec horizontal;
  horizontal.orientation = Orientation::horizontal;
  const ContinuousScene scene = continuous_scene(rng, 9);
  CHECK(xmlcheck::xml_well_formed(
      render_continuous(scene.tree, scene.asr, scene.y, horizontal)));
}

TEST_CASE("constant trait renders in a single mid-scale color") {
  const Dendrogram tree(3, {{0, 1, 1.0}, {3, 2, 2.0}});
  const UltrametricTree ultra = to_ultrametric(tree);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(3, 4.2);
  const BrownianFit fit = bm_fit(ultra, y);
  const AncestralStates asr = ancestral_states(fit, y, 8);
  RenderSpec spec;
  spec.legend = false;  // keep the legend's gradient out of the count
  const std::string svg =
      render_continuous(tree, asr, {4.2, 4.2, 4.2}, spec);
  const std::set<std::string> strokes = attribute_values(svg, "stroke");
  CHECK(strokes.size() == 1);
  CHECK(*strokes.begin() == rgb_hex(colormap_color(spec.colormap, 0.5)));
}

TEST_CASE("two-leaf extremes hit the scale endpoints") {
  const Dendrogram tree(2, {{0, 1, 1.0}});
  const UltrametricTree ultra = to_ultrametric(tree);
  Eigen::VectorXd y(2);
  y << 0.0, 1.0;
  const BrownianFit fit = bm_fit(ultra, y);
  const AncestralStates asr = ancestral_states(fit, y, 8);
  RenderSpec spec;
  const std::string svg = render_continuous(tree, asr, {0.0, 1.0}, spec);
  const std::set<std::string> fills = attribute_values(svg, "fill");
  CHECK(fills.count(rgb_hex(colormap_color(spec.colormap, 0.0))));
  CHECK(fills.count(rgb_hex(colormap_color(spec.colormap, 1.0))));
}

TEST_CASE("colormap index is strictly monotone") {
  std::mt19937_64 rng(311u);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(colormap_index(a, -5.0, 5.0) < colormap_index(b, -5.0, 5.0));
  }
  CHECK(colormap_index(1.0, 2.0, 2.0) == 0.5);  // degenerate scale
}

TEST_CASE("pie angles always total 360 degrees") {
  std::mt19937_64 rng(313u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + trial % 5;
    Eigen::VectorXd p(m);
    for (int s = 0; s < m; ++s) p(s) = u(rng) + 1e-6;
    p /= p.sum();
    const std::vector<double> angles = pie_angles(p);
    double total = 0.0;
    for (double a : angles) total += a;
    CHECK(total == doctest::Approx(360.0).epsilon(1e-9));
  }
}

TEST_CASE("categorical render: pies, legend, and the palette limit") {
  std::mt19937_64 rng(317u);
  const Dendrogram tree = helpers::random_tree(rng, 10);
  const UltrametricTree ultra = to_ultrametric(tree);
  std::vector<int> labels = {0, 1, 2, 0, 1, 2, 0, 1, 2, 0};
  const CtmcFit fit = fit_rate(ultra, labels, {"a", "b", "c"});
  const StatePosteriors post = marginal_posteriors(fit, ultra, labels);

  RenderSpec spec;
  const std::string svg =
      render_categorical(tree, post, labels, {"a", "b", "c"}, spec);
  CHECK(xmlcheck::xml_well_formed(svg));
  CHECK(render_categorical(tree, post, labels, {"a", "b", "c"}, spec) == svg);
  CHECK(svg.find("<path") != std::string::npos);

  SUBCASE("single-state clade renders a full disk") {
    std::vector<int> uniform(10, 1);
    const CtmcFit f2 = fit_rate(ultra, uniform, {"a", "b"});
    const StatePosteriors p2 = marginal_posteriors(f2, ultra, uniform);
    const std::string uni =
        render_categorical(tree, p2, uniform, {"a", "b"}, spec);
    CHECK(xmlcheck::xml_well_formed(uni));
    CHECK(uni.find("<path") == std::string::npos);  // circles only
  }

  SUBCASE("more than 12 categories exhaust the palette") {
    StatePosteriors wide;
    wide.probs = Eigen::MatrixXd::Constant(tree.n_nodes(), 13, 1.0 / 13);
    std::vector<std::string> many;
    for (int s = 0; s < 13; ++s) many.push_back("s" + std::to_string(s));
    CHECK_THROWS_WITH(
        render_categorical(tree, wide, labels, many, spec),
        doctest::Contains("palette exhausted"));
  }
}

TEST_CASE("symmetric two-leaf disagreement splits the root pie 50/50") {
  const Dendrogram tree(2, {{0, 1, 1.0}});
  const UltrametricTree ultra = to_ultrametric(tree);
  CtmcFit fit;
  fit.states = {"a", "b"};
  fit.q_hat = 0.6;
  fit.root_prior = Eigen::VectorXd::Constant(2, 0.5);
  const StatePosteriors post =
      marginal_posteriors(fit, ultra, std::vector<int>{0, 1});
  const std::vector<double> angles = pie_angles(post.probs.row(2).transpose());
  CHECK(angles[0] == doctest::Approx(180.0).epsilon(1e-9));
  CHECK(angles[1] == doctest::Approx(180.0).epsilon(1e-9));
}

TEST_CASE("bar chart renders well-formed XML") {
  RenderSpec spec;
  const std::string svg = render_bar_chart(
      {"alpha", "beta", "gamma & co"}, {0.9, -0.2, 0.4}, "importance", spec);
  CHECK(xmlcheck::xml_well_formed(svg));
  CHECK(svg.find("gamma &amp; co") != std::string::npos);
}

TEST_CASE("render spec validation") {
  const Dendrogram tree(2, {{0, 1, 1.0}});
  AncestralStates asr;
  asr.node_mean = {0.0, 1.0, 0.5};
  asr.edge_samples.assign(3, {{0.0, 0.5}, {1.0, 0.5}});
  RenderSpec bad;
  bad.samples_per_edge = 1;
  CHECK_THROWS(render_continuous(tree, asr, {0.0, 1.0}, bad));
}
