#include "dendroevo/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace dendroevo {

namespace {

constexpr double kViridis[16][3] = {
    {0.267, 0.005, 0.329}, {0.283, 0.100, 0.421}, {0.277, 0.185, 0.490},
    {0.254, 0.265, 0.530}, {0.222, 0.339, 0.549}, {0.191, 0.407, 0.556},
    {0.164, 0.471, 0.558}, {0.140, 0.534, 0.555}, {0.122, 0.595, 0.543},
    {0.135, 0.659, 0.518}, {0.208, 0.719, 0.473}, {0.328, 0.773, 0.407},
    {0.478, 0.821, 0.318}, {0.647, 0.858, 0.210}, {0.825, 0.885, 0.106},
    {0.993, 0.906, 0.144}};

constexpr double kMagma[16][3] = {
    {0.001, 0.000, 0.014}, {0.044, 0.033, 0.141}, {0.123, 0.067, 0.295},
    {0.232, 0.060, 0.438}, {0.341, 0.081, 0.493}, {0.445, 0.122, 0.507},
    {0.550, 0.161, 0.506}, {0.658, 0.196, 0.488}, {0.767, 0.233, 0.457},
    {0.868, 0.287, 0.409}, {0.944, 0.378, 0.365}, {0.981, 0.498, 0.369},
    {0.997, 0.621, 0.431}, {0.998, 0.745, 0.537}, {0.995, 0.867, 0.673},
    {0.987, 0.991, 0.750}};

// 12-color categorical palette (beyond that the renderer refuses).
constexpr const char* kCategoryColors[12] = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#1f77b4", "#8c564b"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Geometry shared by the dendrogram renderers: leaves evenly spaced in
// display order (left subtree first), internal nodes at merge heights.
struct Layout {
  std::vector<double> slot;      // per node, in leaf-order units
  std::vector<double> rel_h;     // per node, height / max height
  std::vector<int> leaf_order;   // display order of leaves
  double plot_x0, plot_x1, plot_y0, plot_y1;
  bool vertical;

  // slot/height -> pixel position. Vertical: leaves at the bottom.
  std::pair<double, double> at(int node) const {
    const double frac =
        slot[node] / (leaf_order.size() > 1 ? leaf_order.size() - 1.0 : 1.0);
    if (vertical) {
      const double x = plot_x0 + frac * (plot_x1 - plot_x0);
      const double y = plot_y1 - rel_h[node] * (plot_y1 - plot_y0);
      return {x, y};
    }
    const double y = plot_y0 + frac * (plot_y1 - plot_y0);
    const double x = plot_x1 - rel_h[node] * (plot_x1 - plot_x0);
    return {x, y};
  }
};

Layout make_layout(const Dendrogram& d, const RenderSpec& spec) {
  Layout lay;
  const int n = d.n_leaves();
  lay.slot.assign(d.n_nodes(), 0.0);
  lay.rel_h.assign(d.n_nodes(), 0.0);
  lay.vertical = spec.orientation == Orientation::vertical;

  // In-order leaf positions via an explicit stack.
  lay.leaf_order.reserve(n);
  std::vector<int> stack = {d.root()};
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    if (d.is_leaf(node)) {
      lay.slot[node] = static_cast<double>(lay.leaf_order.size());
      lay.leaf_order.push_back(node);
    } else {
      const Merge& m = d.merge_of(node);
      stack.push_back(m.right);
      stack.push_back(m.left);
    }
  }
  const double max_h = std::max(d.max_height(), 1e-300);
  for (int m = 0; m < n - 1; ++m) {
    const Merge& mg = d.merges()[m];
    lay.slot[n + m] = 0.5 * (lay.slot[mg.left] + lay.slot[mg.right]);
    lay.rel_h[n + m] = d.merges()[m].height / max_h;
  }

  const double margin = 24.0;
  const double label_space = 60.0;
  const double legend_space = 78.0;
  if (lay.vertical) {
    lay.plot_x0 = margin;
    lay.plot_x1 = spec.width - margin - legend_space;
    lay.plot_y0 = margin;
    lay.plot_y1 = spec.height - label_space;
  } else {
    lay.plot_x0 = margin;
    lay.plot_x1 = spec.width - margin - label_space - legend_space;
    lay.plot_y0 = margin;
    lay.plot_y1 = spec.height - margin;
  }
  return lay;
}

void check_spec(const RenderSpec& spec) {
  if (spec.samples_per_edge < 2)
    throw std::invalid_argument("render: samples_per_edge must be >= 2");
  if (spec.width <= 0 || spec.height <= 0)
    throw std::invalid_argument("render: dimensions must be positive");
}

std::string svg_open(const RenderSpec& spec) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) +
         "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  return out;
}

void add_line(std::string& out, double x1, double y1, double x2, double y2,
              const std::string& color, double width) {
  out += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) +
         "\" y2=\"" + fmt(y2) + "\" stroke=\"" + color + "\" stroke-width=\"" +
         fmt(width) + "\" stroke-linecap=\"round\"/>\n";
}

void add_circle(std::string& out, double cx, double cy, double r,
                const std::string& fill) {
  out += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) +
         "\" fill=\"" + fill + "\"/>\n";
}

void add_text(std::string& out, double x, double y, const std::string& text,
              double size, const std::string& extra = "") {
  out += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" +
         fmt(size) + "\" font-family=\"sans-serif\"" +
         (extra.empty() ? "" : " " + extra) + ">" + xml_escape(text) +
         "</text>\n";
}

void add_leaf_labels(std::string& out, const Dendrogram& d, const Layout& lay,
                     const RenderSpec& spec) {
  if (d.n_leaves() > 64) return;  // unreadable beyond this
  for (int leaf : lay.leaf_order) {
    const auto [x, y] = lay.at(leaf);
    const std::string& label = d.leaf_labels()[leaf];
    if (lay.vertical) {
      add_text(out, x, y + 10.0, label, spec.label_font_size,
               "text-anchor=\"end\" transform=\"rotate(-90 " + fmt(x) + " " +
                   fmt(y + 10.0) + ")\"");
    } else {
      add_text(out, x + 8.0, y + 3.0, label, spec.label_font_size);
    }
  }
}

void add_scale_legend(std::string& out, const RenderSpec& spec, double lo,
                      double hi) {
  const double bar_x = spec.width - 60.0;
  const double bar_y0 = 30.0;
  const double bar_h = std::max(spec.height * 0.45, 120.0);
  const double bar_w = 12.0;
  const int steps = 64;
  for (int s = 0; s < steps; ++s) {
    const double t0 = static_cast<double>(s) / steps;
    const double y = bar_y0 + (1.0 - static_cast<double>(s + 1) / steps) * bar_h;
    out += "<rect x=\"" + fmt(bar_x) + "\" y=\"" + fmt(y) + "\" width=\"" +
           fmt(bar_w) + "\" height=\"" + fmt(bar_h / steps + 0.5) +
           "\" fill=\"" +
           rgb_hex(colormap_color(spec.colormap, t0 + 0.5 / steps)) + "\"/>\n";
  }
  for (int tick = 0; tick <= 4; ++tick) {
    const double t = tick / 4.0;
    const double y = bar_y0 + (1.0 - t) * bar_h;
    add_text(out, bar_x + bar_w + 4.0, y + 3.0, fmt_tick(lo + t * (hi - lo)),
             spec.label_font_size);
  }
}

}  // namespace

Colormap parse_colormap(std::string_view name) {
  if (name == "viridis") return Colormap::viridis;
  if (name == "magma") return Colormap::magma;
  if (name == "grayscale") return Colormap::grayscale;
  throw std::invalid_argument("unknown colormap: " + std::string(name));
}

double colormap_index(double value, double lo, double hi) {
  if (!(hi > lo)) return 0.5;
  return (value - lo) / (hi - lo);
}

Rgb colormap_color(Colormap map, double t) {
  t = std::clamp(t, 0.0, 1.0);
  if (map == Colormap::grayscale) return {t, t, t};
  const auto& table = map == Colormap::viridis ? kViridis : kMagma;
  const double pos = t * 15.0;
  const int i = std::min(static_cast<int>(pos), 14);
  const double f = pos - i;
  return {table[i][0] + f * (table[i + 1][0] - table[i][0]),
          table[i][1] + f * (table[i + 1][1] - table[i][1]),
          table[i][2] + f * (table[i + 1][2] - table[i][2])};
}

std::string rgb_hex(const Rgb& c) {
  auto byte = [](double v) {
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
  return buf;
}

std::string render_continuous(const Dendrogram& d, const AncestralStates& asr,
                              const std::vector<double>& y,
                              const RenderSpec& spec) {
  check_spec(spec);
  const int n = d.n_leaves();
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("render_continuous: y size mismatch");
  if (static_cast<int>(asr.node_mean.size()) != d.n_nodes())
    throw std::invalid_argument("render_continuous: ancestral states mismatch");

  // Color scale over observed values and node means jointly. A span that
  // is pure rounding noise counts as constant (single mid-scale color).
  double lo = y[0], hi = y[0];
  for (double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (int u = n; u < d.n_nodes(); ++u) {
    lo = std::min(lo, asr.node_mean[u]);
    hi = std::max(hi, asr.node_mean[u]);
  }
  if (hi - lo <= 1e-12 * std::max({std::abs(lo), std::abs(hi), 1.0})) hi = lo;
  auto color_of = [&](double v) {
    return rgb_hex(colormap_color(spec.colormap, colormap_index(v, lo, hi)));
  };

  const Layout lay = make_layout(d, spec);
  std::string out = svg_open(spec);

  for (int m = 0; m < n - 1; ++m) {
    const int node = n + m;
    const auto [px, py] = lay.at(node);
    for (int child : {d.merges()[m].left, d.merges()[m].right}) {
      const auto [cx, cy] = lay.at(child);
      // crossbar at the parent height, colored by the parent mean
      if (lay.vertical)
        add_line(out, px, py, cx, py, color_of(asr.node_mean[node]), 1.6);
      else
        add_line(out, px, py, px, cy, color_of(asr.node_mean[node]), 1.6);
      // descent: samples_per_edge - 1 segments of the interpolated mean
      const auto& samples = asr.edge_samples[child];
      for (std::size_t s = 0; s + 1 < samples.size(); ++s) {
        const double v = 0.5 * (samples[s].second + samples[s + 1].second);
        const double p0 = samples[s].first, p1 = samples[s + 1].first;
        if (lay.vertical) {
          add_line(out, cx, py + p0 * (cy - py), cx, py + p1 * (cy - py),
                   color_of(v), 1.6);
        } else {
          add_line(out, px + p0 * (cx - px), cy, px + p1 * (cx - px), cy,
                   color_of(v), 1.6);
        }
      }
    }
  }
  for (int leaf = 0; leaf < n; ++leaf) {
    const auto [x, yy] = lay.at(leaf);
    add_circle(out, x, yy, 3.0, color_of(y[leaf]));
  }
  add_leaf_labels(out, d, lay, spec);
  if (spec.legend) add_scale_legend(out, spec, lo, hi);
  out += "</svg>\n";
  return out;
}

std::vector<double> pie_angles(const Eigen::VectorXd& probs) {
  std::vector<double> angles(probs.size());
  double total = probs.sum();
  if (!(total > 0.0)) throw std::invalid_argument("pie_angles: empty distribution");
  for (int i = 0; i < probs.size(); ++i) angles[i] = 360.0 * probs(i) / total;
  return angles;
}

namespace {

// slivers below this are invisible at plot scale and are not emitted
constexpr double kMinArcDegrees = 0.01;

void add_pie(std::string& out, double cx, double cy, double r,
             const Eigen::VectorXd& probs) {
  const std::vector<double> angles = pie_angles(probs);
  double start = -90.0;
  for (std::size_t s = 0; s < angles.size(); ++s) {
    if (angles[s] < kMinArcDegrees) continue;
    if (angles[s] >= 360.0 - kMinArcDegrees) {
      add_circle(out, cx, cy, r, kCategoryColors[s]);
      return;
    }
    const double end = start + angles[s];
    const double a0 = start * std::numbers::pi / 180.0;
    const double a1 = end * std::numbers::pi / 180.0;
    const double x0 = cx + r * std::cos(a0), y0 = cy + r * std::sin(a0);
    const double x1 = cx + r * std::cos(a1), y1 = cy + r * std::sin(a1);
    const int large = angles[s] > 180.0 ? 1 : 0;
    out += "<path d=\"M " + fmt(cx) + " " + fmt(cy) + " L " + fmt(x0) + " " +
           fmt(y0) + " A " + fmt(r) + " " + fmt(r) + " 0 " +
           std::to_string(large) + " 1 " + fmt(x1) + " " + fmt(y1) +
           " Z\" fill=\"" + kCategoryColors[s] + "\"/>\n";
    start = end;
  }
}

}  // namespace

std::string render_categorical(const Dendrogram& d, const StatePosteriors& post,
                               const std::vector<int>& labels,
                               const std::vector<std::string>& states,
                               const RenderSpec& spec) {
  check_spec(spec);
  const int n = d.n_leaves();
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("render_categorical: labels size mismatch");
  if (post.probs.rows() != d.n_nodes() ||
      post.probs.cols() != static_cast<Eigen::Index>(states.size()))
    throw std::invalid_argument("render_categorical: posterior shape mismatch");
  if (states.size() > 12) throw std::invalid_argument("palette exhausted");

  const Layout lay = make_layout(d, spec);
  std::string out = svg_open(spec);

  for (int m = 0; m < n - 1; ++m) {
    const auto [px, py] = lay.at(n + m);
    for (int child : {d.merges()[m].left, d.merges()[m].right}) {
      const auto [cx, cy] = lay.at(child);
      if (lay.vertical) {
        add_line(out, px, py, cx, py, "#777777", 1.2);
        add_line(out, cx, py, cx, cy, "#777777", 1.2);
      } else {
        add_line(out, px, py, px, cy, "#777777", 1.2);
        add_line(out, px, cy, cx, cy, "#777777", 1.2);
      }
    }
  }

  const double pie_r =
      std::clamp((lay.plot_x1 - lay.plot_x0) / (3.0 * n), 3.5, 11.0);
  for (int u = n; u < d.n_nodes(); ++u) {
    const auto [x, yy] = lay.at(u);
    add_pie(out, x, yy, pie_r, post.probs.row(u).transpose());
  }
  for (int leaf = 0; leaf < n; ++leaf) {
    const auto [x, yy] = lay.at(leaf);
    if (labels[leaf] >= 0)
      add_circle(out, x, yy, 3.0, kCategoryColors[labels[leaf]]);
  }
  add_leaf_labels(out, d, lay, spec);

  if (spec.legend) {
    const double lx = spec.width - 70.0;
    double ly = 30.0;
    for (std::size_t s = 0; s < states.size(); ++s) {
      add_circle(out, lx, ly, 5.0, kCategoryColors[s]);
      add_text(out, lx + 10.0, ly + 3.5, states[s], spec.label_font_size);
      ly += 16.0;
    }
  }
  out += "</svg>\n";
  return out;
}

std::string render_bar_chart(const std::vector<std::string>& names,
                             const std::vector<double>& values,
                             const std::string& title, const RenderSpec& spec) {
  check_spec(spec);
  if (names.size() != values.size())
    throw std::invalid_argument("render_bar_chart: size mismatch");
  std::string out = svg_open(spec);
  add_text(out, 24.0, 20.0, title, spec.label_font_size + 3.0,
           "font-weight=\"bold\"");

  double lo = 0.0, hi = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double x0 = 140.0, x1 = spec.width - 30.0;
  const double row_h =
      std::min(26.0, (spec.height - 50.0) / std::max<std::size_t>(names.size(), 1));
  auto x_of = [&](double v) { return x0 + (v - lo) / (hi - lo) * (x1 - x0); };

  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = 40.0 + i * row_h;
    add_text(out, x0 - 6.0, y + row_h * 0.55, names[i], spec.label_font_size,
             "text-anchor=\"end\"");
    if (std::isnan(values[i])) continue;
    const double xa = x_of(std::min(0.0, values[i]));
    const double xb = x_of(std::max(0.0, values[i]));
    out += "<rect x=\"" + fmt(xa) + "\" y=\"" + fmt(y) + "\" width=\"" +
           fmt(std::max(xb - xa, 0.5)) + "\" height=\"" + fmt(row_h * 0.72) +
           "\" fill=\"#4e79a7\"/>\n";
    add_text(out, xb + 4.0, y + row_h * 0.55, fmt_tick(values[i]),
             spec.label_font_size);
  }
  add_line(out, x_of(0.0), 34.0, x_of(0.0), 40.0 + names.size() * row_h,
           "#444444", 1.0);
  out += "</svg>\n";
  return out;
}

}  // namespace dendroevo
