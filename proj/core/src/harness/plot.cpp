#include "qinterf/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "qinterf/harness/experiment.hpp"

namespace qinterf::harness {

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "scatter") return PlotKind::scatter;
  if (name == "curves") return PlotKind::curves;
  if (name == "per_run") return PlotKind::per_run;
  if (name == "tworoom") return PlotKind::tworoom;
  throw std::invalid_argument("unknown plot kind '" + std::string(name) + "' (expected scatter|curves|per_run|tworoom)");
}

std::vector<double> moving_average(const std::vector<double>& values, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - static_cast<std::size_t>(window)];
    out[i] = sum / static_cast<double>(std::min(i + 1, static_cast<std::size_t>(window)));
  }
  return out;
}

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

class Svg {
 public:
  Svg(int width, int height) : width_(width), height_(height) {
    out_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  void raw(const std::string& s) { out_ += s; }
  void text(double x, double y, const std::string& s, const char* anchor = "middle", const std::string& extra = "") {
    out_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" +
            escape(s) + "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width,
            const std::string& extra = "") {
    out_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
            "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"" + extra + "/>\n";
  }
  std::string finish() { return out_ + "</svg>\n"; }
  [[nodiscard]] int width() const { return width_; }

 private:
  int width_, height_;
  std::string out_;
};

// One set of axes mapping data to a pixel rectangle.
class Panel {
 public:
  Panel(double left, double top, double width, double height) : l_(left), t_(top), w_(width), h_(height) {}

  void fit(const std::vector<Series>& series, bool include_zero_y = false) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = include_zero_y ? 0.0 : INFINITY, y1 = include_zero_y ? 0.0 : -INFINITY;
    for (const auto& s : series) {
      for (double v : s.x) {
        if (std::isfinite(v)) x0 = std::min(x0, v), x1 = std::max(x1, v);
      }
      for (double v : s.y) {
        if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
      }
    }
    if (!std::isfinite(x0) || !std::isfinite(y0)) throw std::invalid_argument("plot: no finite data");
    set_range(x0, x1, y0, y1);
  }

  void set_range(double x0, double x1, double y0, double y1) {
    if (x1 <= x0) x0 -= 0.5, x1 += 0.5;
    if (y1 <= y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    x0_ = x0, x1_ = x1, y0_ = y0 - pad, y1_ = y1 + pad;
  }

  [[nodiscard]] double px(double x) const { return l_ + (x - x0_) / (x1_ - x0_) * w_; }
  [[nodiscard]] double py(double y) const { return t_ + h_ - (y - y0_) / (y1_ - y0_) * h_; }
  [[nodiscard]] double x_max() const { return x1_; }

  void axes(Svg& svg, const std::string& title, const std::string& xlabel, const std::string& ylabel) const {
    svg.raw("<rect x=\"" + num(l_) + "\" y=\"" + num(t_) + "\" width=\"" + num(w_) + "\" height=\"" + num(h_) +
            "\" fill=\"none\" stroke=\"black\"/>\n");
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
      const double fx = x0_ + (x1_ - x0_) * i / kTicks;
      const double fy = y0_ + (y1_ - y0_) * i / kTicks;
      svg.line(px(fx), t_ + h_, px(fx), t_ + h_ + 4, "black", 1);
      svg.text(px(fx), t_ + h_ + 16, tick_label(fx));
      svg.line(l_ - 4, py(fy), l_, py(fy), "black", 1);
      svg.text(l_ - 6, py(fy) + 4, tick_label(fy), "end");
    }
    svg.text(l_ + w_ / 2, t_ - 8, title, "middle", " font-size=\"14\"");
    svg.text(l_ + w_ / 2, t_ + h_ + 34, xlabel);
    const double cx = l_ - 48, cy = t_ + h_ / 2;
    svg.text(cx, cy, ylabel, "middle", " transform=\"rotate(-90 " + num(cx) + " " + num(cy) + ")\"");
  }

  void polyline(Svg& svg, const Series& s, const std::string& stroke, double width, double opacity) const {
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(px(s.x[i])) + "," + num(py(s.y[i]));
    }
    svg.raw("<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
            "\" stroke-opacity=\"" + num(opacity) + "\" points=\"" + pts + "\"/>\n");
  }

  void legend(Svg& svg, const std::vector<std::string>& labels) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double y = t_ + 14 + 16 * static_cast<double>(i);
      svg.raw("<rect x=\"" + num(l_ + w_ + 12) + "\" y=\"" + num(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
              color(i) + "\"/>\n");
      svg.text(l_ + w_ + 28, y, labels[i], "start");
    }
  }

 private:
  double l_, t_, w_, h_;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
};

CsvTable merge(const std::vector<CsvTable>& inputs, const std::vector<std::string>& required) {
  if (inputs.empty()) throw std::invalid_argument("plot: no input");
  CsvTable all;
  all.header = inputs.front().header;
  for (const auto& t : inputs) {
    if (t.header != all.header) throw std::invalid_argument("plot: inputs have different columns");
    all.rows.insert(all.rows.end(), t.rows.begin(), t.rows.end());
  }
  for (const auto& col : required) {
    if (!all.has_column(col)) throw std::invalid_argument("plot: input lacks column '" + col + "'");
  }
  if (all.rows.empty()) throw std::invalid_argument("plot: input has no rows");
  return all;
}

// Groups rows by `key`, keeping first-appearance order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> group_rows(const CsvTable& t, const std::string& key) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  std::map<std::string, std::size_t> index;
  const std::size_t c = t.column(key);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    auto [it, inserted] = index.emplace(t.rows[r][c], groups.size());
    if (inserted) groups.push_back({t.rows[r][c], {}});
    groups[it->second].second.push_back(r);
  }
  return groups;
}

Series column_series(const CsvTable& t, const std::vector<std::size_t>& rows, const std::string& x,
                     const std::string& y, const std::string& label) {
  Series s{label, {}, {}};
  const std::size_t cx = t.column(x), cy = t.column(y);
  for (std::size_t r : rows) {
    s.x.push_back(parse_double(t.rows[r][cx]));
    s.y.push_back(parse_double(t.rows[r][cy]));
  }
  return s;
}

std::string render_scatter(const CsvTable& t) {
  const std::size_t ci = t.column("interference_across_iters"), cd = t.column("degradation"),
                    cs = t.column("status");
  const bool by_hidden = t.has_column("hidden");
  std::vector<std::string> groups;
  std::vector<Series> series;
  for (const auto& row : t.rows) {
    if (row[cs] != kStatusOk) continue;
    const double x = parse_double(row[ci]), y = parse_double(row[cd]);
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    const std::string g = by_hidden ? "hidden " + row[t.column("hidden")] : "runs";
    auto it = std::find(groups.begin(), groups.end(), g);
    if (it == groups.end()) {
      groups.push_back(g);
      series.push_back({g, {}, {}});
      it = groups.end() - 1;
    }
    auto& s = series[static_cast<std::size_t>(it - groups.begin())];
    s.x.push_back(std::min(x, kScatterInterferenceClip));
    s.y.push_back(y);
  }
  if (series.empty()) throw std::invalid_argument("plot: no completed runs to scatter");
  Svg svg(720, 480);
  Panel p(80, 40, 480, 360);
  p.fit(series);
  double xmax = 0.0;
  for (const auto& s : series) xmax = std::max(xmax, *std::max_element(s.x.begin(), s.x.end()));
  double ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    ymin = std::min(ymin, *std::min_element(s.y.begin(), s.y.end()));
    ymax = std::max(ymax, *std::max_element(s.y.begin(), s.y.end()));
  }
  p.set_range(0.0, std::max(xmax, 1e-12), ymin, ymax);
  p.axes(svg, "Interference vs degradation", "Interference Across Iterations (clipped at 1)", "Degradation");
  for (std::size_t g = 0; g < series.size(); ++g) {
    for (std::size_t i = 0; i < series[g].x.size(); ++i) {
      svg.raw("<circle class=\"marker\" cx=\"" + num(p.px(series[g].x[i])) + "\" cy=\"" + num(p.py(series[g].y[i])) +
              "\" r=\"4\" fill=\"" + color(g) + "\" fill-opacity=\"0.8\"/>\n");
    }
  }
  p.legend(svg, groups);
  return svg.finish();
}

std::string render_curves(const CsvTable& t) {
  const auto groups = group_rows(t, "run_id");
  std::vector<Series> raw;
  std::vector<std::string> labels;
  const std::size_t cv = t.column("variant"), ch = t.column("hidden"), cs = t.column("seed");
  for (const auto& [id, rows] : groups) {
    const auto& first = t.rows[rows.front()];
    raw.push_back(column_series(t, rows, "iter", "return_disc", id));
    labels.push_back(first[cv] + " h" + first[ch] + " s" + first[cs]);
  }
  Svg svg(900, 480);
  Panel p(80, 40, 560, 360);
  p.fit(raw);
  p.axes(svg, "Learning curves (thin: raw, thick: moving average over " + std::to_string(kMovingAverageWindow) +
                  " iterations)",
         "Iteration", "Discounted return");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    p.polyline(svg, raw[i], color(i), 1.0, 0.35);
    Series ma = raw[i];
    ma.y = moving_average(raw[i].y, kMovingAverageWindow);
    p.polyline(svg, ma, color(i), 2.5, 1.0);
  }
  p.legend(svg, labels);
  return svg.finish();
}

std::string render_per_run(const CsvTable& t) {
  const auto groups = group_rows(t, "run_id");
  const double panel_h = 180;
  const double height = 60 + static_cast<double>(groups.size()) * (2 * panel_h + 110);
  Svg svg(760, static_cast<int>(height));
  double top = 40;
  for (const auto& [id, rows] : groups) {
    const auto& first = t.rows[rows.front()];
    const std::string name = first[t.column("variant")] + " hidden " + first[t.column("hidden")] + " buffer " +
                             first[t.column("buffer")] + " M " + first[t.column("M")] + " seed " +
                             first[t.column("seed")];
    for (const char* column : {"return_disc", "iter_interference"}) {
      const Series s = column_series(t, rows, "iter", column, id);
      Series ma = s;
      ma.y = moving_average(s.y, kMovingAverageWindow);
      Panel p(90, top, 560, panel_h);
      p.fit({s}, std::string(column) == "iter_interference");
      const bool ret = std::string(column) == "return_disc";
      p.axes(svg, (ret ? "Return: " : "Iteration Interference: ") + name, "Iteration",
             ret ? "Discounted return" : "Interference");
      p.polyline(svg, s, color(ret ? 0 : 1), 1.0, 0.35);
      p.polyline(svg, ma, color(ret ? 0 : 1), 2.5, 1.0);
      top += panel_h + 55;
    }
  }
  svg.text(svg.width() / 2.0, height - 12,
           "thin: raw, thick: moving average over " + std::to_string(kMovingAverageWindow) + " iterations");
  return svg.finish();
}

std::string render_tworoom(const CsvTable& t) {
  const auto groups = group_rows(t, "agent");
  const std::size_t cseed = t.column("seed"), croom = t.column("active_room"), cstep = t.column("step");
  std::vector<Series> all;
  std::vector<std::size_t> colors;
  double switch_step = -1;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::map<std::string, std::vector<std::size_t>> by_seed;
    for (std::size_t r : groups[g].second) by_seed[t.rows[r][cseed]].push_back(r);
    for (const auto& [seed, rows] : by_seed) {
      all.push_back(column_series(t, rows, "step", "room1_return_undisc", groups[g].first));
      colors.push_back(g);
      for (std::size_t r : rows) {
        if (t.rows[r][croom] == "0") switch_step = std::max(switch_step, parse_double(t.rows[r][cstep]));
      }
    }
  }
  Svg svg(860, 480);
  Panel p(80, 40, 560, 360);
  p.fit(all);
  p.axes(svg, "Two-Room: greedy return in room 1", "Training steps", "Room-1 return (undiscounted)");
  for (std::size_t i = 0; i < all.size(); ++i) p.polyline(svg, all[i], color(colors[i]), 1.5, 0.8);
  if (switch_step >= 0) {
    svg.line(p.px(switch_step), 40, p.px(switch_step), 400, "black", 1, " stroke-dasharray=\"4 3\"");
    svg.text(p.px(switch_step) + 4, 54, "moved to room 2", "start");
  }
  std::vector<std::string> labels;
  for (const auto& g : groups) labels.push_back(g.first);
  p.legend(svg, labels);
  return svg.finish();
}

}  // namespace

std::string render_plot(PlotKind kind, const std::vector<CsvTable>& inputs) {
  switch (kind) {
    case PlotKind::scatter:
      return render_scatter(merge(inputs, {"interference_across_iters", "degradation", "status"}));
    case PlotKind::curves:
      return render_curves(merge(inputs, iteration_csv_header()));
    case PlotKind::per_run:
      return render_per_run(merge(inputs, iteration_csv_header()));
    case PlotKind::tworoom:
      return render_tworoom(merge(inputs, {"step", "agent", "seed", "active_room", "room1_return_undisc"}));
  }
  throw std::logic_error("unhandled plot kind");
}

void emit_plot(PlotKind kind, const std::vector<std::string>& in_paths, const std::string& out_path) {
  std::vector<CsvTable> inputs;
  for (const auto& path : in_paths) inputs.push_back(read_csv(path));
  const std::string svg = render_plot(kind, inputs);
  write_file(out_path, svg);
}

}  // namespace qinterf::harness
