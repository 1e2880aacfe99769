// SVG emitters for evolutionary dendrograms: continuous traits colored
// along edges, categorical traits as node pie charts. Output is
// deterministic byte-for-byte for fixed inputs.

#pragma once

#include <string>
#include <vector>

#include "dendroevo/brownian.hpp"
#include "dendroevo/ctmc.hpp"
#include "dendroevo/dendrogram.hpp"

namespace dendroevo {

enum class Colormap { viridis, magma, grayscale };
enum class Orientation { horizontal, vertical };

Colormap parse_colormap(std::string_view name);

struct RenderSpec {
  int width = 900;
  int height = 640;
  Colormap colormap = Colormap::viridis;
  Orientation orientation = Orientation::vertical;
  int samples_per_edge = 16;
  bool legend = true;
  double label_font_size = 9.0;
};

struct Rgb {
  double r = 0, g = 0, b = 0;  // in [0,1]
};

// Normalized position of `value` on the [lo,hi] color scale; 0.5 when the
// scale is degenerate. Strictly increasing in value.
double colormap_index(double value, double lo, double hi);
Rgb colormap_color(Colormap map, double t);
std::string rgb_hex(const Rgb& c);

// Dendrogram with each edge drawn as samples_per_edge segments colored by
// the interpolated BM mean; leaf tips colored by observed values; scale
// normalized jointly over leaves and node means.
std::string render_continuous(const Dendrogram& d, const AncestralStates& asr,
                              const std::vector<double>& y,
                              const RenderSpec& spec);

// Slice angles (degrees) of a pie over a probability vector; sums to 360.
std::vector<double> pie_angles(const Eigen::VectorXd& probs);

// Dendrogram with a pie chart of the marginal state posterior at each
// internal node and solid disks at observed leaves. Throws "palette
// exhausted" beyond 12 categories.
std::string render_categorical(const Dendrogram& d, const StatePosteriors& post,
                               const std::vector<int>& labels,
                               const std::vector<std::string>& states,
                               const RenderSpec& spec);

// Horizontal bar chart (used for feature-importance tables).
std::string render_bar_chart(const std::vector<std::string>& names,
                             const std::vector<double>& values,
                             const std::string& title, const RenderSpec& spec);

}  // namespace dendroevo
