#include "biblio/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include <fmt/format.h>

namespace biblio::plots {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* colour(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string esc(std::string_view s) {
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

std::string shorten(std::string_view s, std::size_t n) {
  if (s.size() <= n) return std::string(s);
  return std::string(s.substr(0, n - 3)) + "...";
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

struct Svg {
  double width;
  double height;
  std::string body;

  Svg(double w, double h, const std::string& title) : width(w), height(h) {
    body = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        num(w), num(h));
    text(w / 2, 22, title, "middle", 14);
  }
  void text(double x, double y, std::string_view s, std::string_view anchor = "start", double size = 11,
            std::string_view extra = "") {
    body += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"{}\" font-size=\"{}\"{}>{}</text>\n", num(x), num(y),
                        anchor, num(size), extra, esc(s));
  }
  void line(double x1, double y1, double x2, double y2, std::string_view stroke = "#333", std::string_view extra = "") {
    body += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"{}/>\n", num(x1), num(y1), num(x2),
                        num(y2), stroke, extra);
  }
  std::string finish() { return body + "</svg>\n"; }
};

// Rounds an axis maximum up to 1, 2 or 5 times a power of ten.
double nice_max(double v) {
  if (v <= 0) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (v <= m * p) return m * p;
  return 10.0 * p;
}

std::string tick_label(double v) {
  if (std::abs(v - std::round(v)) < 1e-9) return fmt::format("{}", static_cast<long long>(std::llround(v)));
  return fmt::format("{:.2f}", v);
}

}  // namespace

std::optional<std::string> line_chart(const std::string& title, const std::vector<TimeSeries>& series) {
  int first = 0, last = 0;
  double top = 0.0;
  bool any = false;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      if (!any) first = last = p.year;
      any = true;
      first = std::min(first, p.year);
      last = std::max(last, p.year);
      top = std::max(top, p.value);
    }
  if (!any) return std::nullopt;
  top = nice_max(top);

  Svg svg(kWidth, kHeight, title);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto x = [&](int year) {
    return first == last ? kLeft + pw / 2 : kLeft + pw * (year - first) / static_cast<double>(last - first);
  };
  const auto y = [&](double v) { return kTop + ph * (1.0 - v / top); };

  svg.line(kLeft, kTop + ph, kLeft + pw, kTop + ph);
  svg.line(kLeft, kTop, kLeft, kTop + ph);
  const int step = std::max(1, (last - first) / 12 + 1);
  for (int year = first; year <= last; year += step) {
    svg.line(x(year), kTop + ph, x(year), kTop + ph + 4);
    svg.text(x(year), kTop + ph + 18, std::to_string(year), "middle");
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = top * i / 5.0;
    svg.line(kLeft - 4, y(v), kLeft, y(v));
    svg.text(kLeft - 8, y(v) + 4, tick_label(v), "end");
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].points.empty()) continue;
    std::string pts;
    for (const auto& p : series[i].points) {
      if (!pts.empty()) pts += ' ';
      pts += num(x(p.year)) + "," + num(y(p.value));
    }
    svg.body += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", colour(i), pts);
    const double ly = kTop + 10 + 16.0 * static_cast<double>(i);
    svg.line(kWidth - kRight + 12, ly, kWidth - kRight + 28, ly, colour(i), " stroke-width=\"2\"");
    svg.text(kWidth - kRight + 32, ly + 4, shorten(series[i].label, 22));
  }
  return svg.finish();
}

std::optional<std::string> bar_chart(const std::string& title, const std::vector<RankedCount>& bars) {
  if (bars.empty()) return std::nullopt;
  const double row = 18.0;
  const double label_w = 230.0;
  const double height = kTop + row * static_cast<double>(bars.size()) + 20.0;
  Svg svg(kWidth, height, title);
  double top = 0.0;
  for (const auto& b : bars) top = std::max(top, static_cast<double>(b.count));
  top = nice_max(top);
  const double pw = kWidth - label_w - 60.0;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double y = kTop + row * static_cast<double>(i);
    const double w = pw * static_cast<double>(bars[i].count) / top;
    svg.text(label_w - 6, y + 12, shorten(bars[i].name, 38), "end");
    svg.body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", num(label_w), num(y + 2),
                            num(w), num(row - 4), colour(0));
    svg.text(label_w + w + 4, y + 12, std::to_string(bars[i].count));
  }
  return svg.finish();
}

namespace {

struct ScatterPoint {
  std::string label;
  double x;
  double y;
  double radius;
  std::size_t group;
};

struct Frame {
  double x0, x1, y0, y1;
  double pw = kWidth - kLeft - kRight;
  double ph = kHeight - kTop - kBottom;
  double sx(double v) const { return kLeft + pw * (v - x0) / (x1 - x0); }
  double sy(double v) const { return kTop + ph * (1.0 - (v - y0) / (y1 - y0)); }
};

Frame frame_for(const std::vector<ScatterPoint>& pts) {
  Frame f{pts[0].x, pts[0].x, pts[0].y, pts[0].y};
  for (const auto& p : pts) {
    f.x0 = std::min(f.x0, p.x);
    f.x1 = std::max(f.x1, p.x);
    f.y0 = std::min(f.y0, p.y);
    f.y1 = std::max(f.y1, p.y);
  }
  const double padx = f.x1 > f.x0 ? 0.08 * (f.x1 - f.x0) : 1.0;
  const double pady = f.y1 > f.y0 ? 0.08 * (f.y1 - f.y0) : 1.0;
  f.x0 -= padx;
  f.x1 += padx;
  f.y0 -= pady;
  f.y1 += pady;
  return f;
}

void draw_points(Svg& svg, const Frame& f, const std::vector<ScatterPoint>& pts) {
  for (const auto& p : pts) {
    svg.body += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" fill-opacity=\"0.7\"/>\n", num(f.sx(p.x)),
                            num(f.sy(p.y)), num(p.radius), colour(p.group));
    svg.text(f.sx(p.x) + p.radius + 2, f.sy(p.y) + 4, shorten(p.label, 30));
  }
}

}  // namespace

std::optional<std::string> topic_scatter(const TopicMap& map) {
  if (map.points.empty()) return std::nullopt;
  std::vector<ScatterPoint> pts;
  for (const auto& p : map.points)
    pts.push_back({p.term, p.x, p.y, 4.0, static_cast<std::size_t>(std::max(p.cluster, 1) - 1)});
  const Frame f = frame_for(pts);
  Svg svg(kWidth, kHeight, fmt::format("Topic map ({})", to_string(map.field)));
  if (f.x0 < 0 && f.x1 > 0) svg.line(f.sx(0), kTop, f.sx(0), kTop + f.ph, "#999", " stroke-dasharray=\"4 3\"");
  if (f.y0 < 0 && f.y1 > 0) svg.line(kLeft, f.sy(0), kLeft + f.pw, f.sy(0), "#999", " stroke-dasharray=\"4 3\"");
  svg.text(kLeft + f.pw / 2, kHeight - 12, fmt::format("Dim 1 ({:.2f}%)", 100 * map.explained_dim1), "middle");
  svg.text(18, kTop + f.ph / 2, fmt::format("Dim 2 ({:.2f}%)", 100 * map.explained_dim2), "middle", 11,
           fmt::format(" transform=\"rotate(-90 18 {})\"", num(kTop + f.ph / 2)));
  draw_points(svg, f, pts);
  return svg.finish();
}

std::optional<std::string> thematic_scatter(const ThematicMap& map) {
  if (map.themes.empty()) return std::nullopt;
  std::vector<ScatterPoint> pts;
  for (std::size_t i = 0; i < map.themes.size(); ++i) {
    const auto& t = map.themes[i];
    pts.push_back({t.label, t.centrality, t.density, 4.0 + 30.0 * std::sqrt(t.doc_share), i});
  }
  const Frame f = frame_for(pts);
  Svg svg(kWidth, kHeight, "Thematic map");
  svg.line(f.sx(map.centrality_median), kTop, f.sx(map.centrality_median), kTop + f.ph, "#999",
           " stroke-dasharray=\"4 3\"");
  svg.line(kLeft, f.sy(map.density_median), kLeft + f.pw, f.sy(map.density_median), "#999", " stroke-dasharray=\"4 3\"");
  svg.text(kLeft + f.pw - 4, kTop + 14, "Motor themes", "end", 10);
  svg.text(kLeft + 4, kTop + 14, "Niche themes", "start", 10);
  svg.text(kLeft + 4, kTop + f.ph - 6, "Emerging or declining", "start", 10);
  svg.text(kLeft + f.pw - 4, kTop + f.ph - 6, "Basic themes", "end", 10);
  svg.text(kLeft + f.pw / 2, kHeight - 12, "Centrality", "middle");
  svg.text(18, kTop + f.ph / 2, "Density", "middle", 11, fmt::format(" transform=\"rotate(-90 18 {})\"", num(kTop + f.ph / 2)));
  draw_points(svg, f, pts);
  return svg.finish();
}

std::optional<std::string> dendrogram_tree(const Dendrogram& tree) {
  const auto& link = tree.linkage;
  if (link.leaves == 0) return std::nullopt;
  const double bottom = 140.0;
  Svg svg(kWidth, kHeight, fmt::format("Dendrogram ({})", to_string(tree.field)));
  const double pw = kWidth - kLeft - 40.0;
  const double ph = kHeight - kTop - bottom;
  double top = 0.0;
  for (const auto& m : link.merges) top = std::max(top, m.height);
  if (top <= 0) top = 1.0;
  const auto y = [&](double h) { return kTop + ph * (1.0 - h / top); };

  const auto order = link.leaf_order();
  std::vector<double> xs(link.leaves + link.merges.size());
  std::vector<double> hs(xs.size(), 0.0);
  const double gap = pw / static_cast<double>(link.leaves);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t leaf = order[i];
    xs[leaf] = kLeft + gap * (static_cast<double>(i) + 0.5);
    const double lx = xs[leaf];
    const double ly = kTop + ph + 8;
    svg.text(lx, ly, shorten(leaf < tree.labels.size() ? tree.labels[leaf] : std::to_string(leaf), 24), "end", 10,
             fmt::format(" transform=\"rotate(-60 {} {})\"", num(lx), num(ly)));
  }
  const auto colours = tree.partition;
  for (std::size_t i = 0; i < link.merges.size(); ++i) {
    const auto& m = link.merges[i];
    const std::size_t node = link.leaves + i;
    xs[node] = (xs[m.left] + xs[m.right]) / 2.0;
    hs[node] = m.height;
    std::string path = fmt::format("M{},{} V{} H{} V{}", num(xs[m.left]), num(y(hs[m.left])), num(y(m.height)),
                                   num(xs[m.right]), num(y(hs[m.right])));
    svg.body += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"#333\"/>\n", path);
  }
  for (std::size_t leaf = 0; leaf < link.leaves && leaf < colours.size(); ++leaf)
    svg.body += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n", num(xs[leaf]), num(y(0)),
                            colour(static_cast<std::size_t>(std::max(colours[leaf], 1) - 1)));
  if (tree.cut_k > 1 && tree.cut_k <= link.leaves && !link.merges.empty()) {
    const std::size_t applied = link.leaves - tree.cut_k;
    const double below = applied == 0 ? 0.0 : link.merges[applied - 1].height;
    const double above = link.merges[applied].height;
    const double cut = (below + above) / 2.0;
    svg.line(kLeft, y(cut), kLeft + pw, y(cut), "#d62728", " stroke-dasharray=\"5 3\"");
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = top * i / 4.0;
    svg.text(kLeft - 6, y(v) + 4, fmt::format("{:.2f}", v), "end", 10);
  }
  return svg.finish();
}

std::optional<std::string> sankey(const FlowDiagram& diagram) {
  if (diagram.links.empty()) return std::nullopt;
  const std::size_t stages = diagram.stages.size();
  const double node_w = 14.0;
  const double gap = 6.0;
  const double pw = kWidth - 2 * 150.0;
  const double ph = kHeight - kTop - 30.0;

  // Node height follows the larger of inbound and outbound band totals.
  std::vector<std::vector<double>> in(stages), out(stages), value(stages);
  for (std::size_t s = 0; s < stages; ++s) {
    in[s].assign(diagram.nodes[s].size(), 0.0);
    out[s].assign(diagram.nodes[s].size(), 0.0);
  }
  for (const auto& l : diagram.links) {
    out[l.stage][l.from] += static_cast<double>(l.weight);
    in[l.stage + 1][l.to] += static_cast<double>(l.weight);
  }
  double scale = 1e300;
  for (std::size_t s = 0; s < stages; ++s) {
    double total = 0.0;
    for (std::size_t i = 0; i < diagram.nodes[s].size(); ++i) {
      value[s].push_back(std::max({in[s][i], out[s][i], 1.0}));
      total += value[s].back();
    }
    const double avail = ph - gap * static_cast<double>(diagram.nodes[s].size() - 1);
    scale = std::min(scale, avail / total);
  }
  scale = std::max(scale, 0.1);

  Svg svg(kWidth, kHeight, "Flow");
  std::vector<std::vector<double>> ny(stages);
  const auto nx = [&](std::size_t s) { return 150.0 + pw * static_cast<double>(s) / static_cast<double>(stages - 1); };
  for (std::size_t s = 0; s < stages; ++s) {
    double y = kTop;
    svg.text(nx(s) + node_w / 2, kTop - 8, to_string(diagram.stages[s]), "middle", 12);
    for (std::size_t i = 0; i < diagram.nodes[s].size(); ++i) {
      ny[s].push_back(y);
      y += value[s][i] * scale + gap;
    }
  }
  std::vector<std::vector<double>> out_off(stages), in_off(stages);
  for (std::size_t s = 0; s < stages; ++s) {
    out_off[s].assign(diagram.nodes[s].size(), 0.0);
    in_off[s].assign(diagram.nodes[s].size(), 0.0);
  }
  for (const auto& l : diagram.links) {
    const double w = static_cast<double>(l.weight) * scale;
    const double x0 = nx(l.stage) + node_w;
    const double x1 = nx(l.stage + 1);
    const double y0 = ny[l.stage][l.from] + out_off[l.stage][l.from] + w / 2;
    const double y1 = ny[l.stage + 1][l.to] + in_off[l.stage + 1][l.to] + w / 2;
    out_off[l.stage][l.from] += w;
    in_off[l.stage + 1][l.to] += w;
    const double xm = (x0 + x1) / 2;
    svg.body += fmt::format(
        "<path d=\"M{},{} C{},{} {},{} {},{}\" fill=\"none\" stroke=\"{}\" stroke-opacity=\"0.35\" stroke-width=\"{}\"/>\n",
        num(x0), num(y0), num(xm), num(y0), num(xm), num(y1), num(x1), num(y1), colour(l.from), num(w));
  }
  for (std::size_t s = 0; s < stages; ++s)
    for (std::size_t i = 0; i < diagram.nodes[s].size(); ++i) {
      const double h = value[s][i] * scale;
      svg.body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#555\"/>\n", num(nx(s)),
                              num(ny[s][i]), num(node_w), num(h));
      const bool left = s + 1 == stages;
      svg.text(left ? nx(s) + node_w + 4 : nx(s) - 4, ny[s][i] + h / 2 + 4, shorten(diagram.nodes[s][i].label, 22),
               left ? "start" : "end", 10);
    }
  return svg.finish();
}

std::optional<std::string> word_cloud(const std::vector<WeightedTerm>& terms) {
  if (terms.empty()) return std::nullopt;
  double top = 0.0;
  for (const auto& t : terms) top = std::max(top, t.weight);
  if (top <= 0) top = 1.0;
  Svg svg(kWidth, kHeight, "Word cloud");
  // Row-wise packing in weight order with an estimated glyph width.
  double x = 20.0;
  double y = kTop + 10.0;
  double row_h = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double size = 10.0 + 30.0 * terms[i].weight / top;
    const double w = 0.6 * size * static_cast<double>(terms[i].term.size());
    if (x + w > kWidth - 20.0 && x > 20.0) {
      x = 20.0;
      y += row_h + 6.0;
      row_h = 0.0;
    }
    row_h = std::max(row_h, size);
    if (y + row_h > kHeight - 10.0) break;
    svg.text(x, y + size, terms[i].term, "start", size, fmt::format(" fill=\"{}\"", colour(i)));
    x += w + 12.0;
  }
  return svg.finish();
}

std::optional<std::string> bubble_timeline(const std::vector<Timeline>& lines) {
  int first = 0, last = 0;
  bool any = false;
  std::int64_t most = 1;
  for (const auto& l : lines)
    for (const auto& b : l.bubbles) {
      if (!any) first = last = b.year;
      any = true;
      first = std::min(first, b.year);
      last = std::max(last, b.year);
      most = std::max(most, b.doc_count);
    }
  if (!any) return std::nullopt;
  const double row = 26.0;
  const double label_w = 200.0;
  const double height = kTop + row * static_cast<double>(lines.size()) + 40.0;
  Svg svg(kWidth, height, "Production over time");
  const double pw = kWidth - label_w - 40.0;
  const auto x = [&](int year) {
    return first == last ? label_w + pw / 2 : label_w + pw * (year - first) / static_cast<double>(last - first);
  };
  for (int year = first; year <= last; ++year)
    svg.text(x(year), height - 14, std::to_string(year), "middle", 10);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double y = kTop + row * (static_cast<double>(i) + 0.5);
    svg.text(label_w - 16, y + 4, shorten(lines[i].entity, 30), "end", 10);
    svg.line(label_w, y, label_w + pw, y, "#ddd");
    for (const auto& b : lines[i].bubbles) {
      const double r = 2.0 + 9.0 * std::sqrt(static_cast<double>(b.doc_count) / static_cast<double>(most));
      svg.body += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" fill-opacity=\"0.7\"><title>{} docs, {} citations</title></circle>\n",
                              num(x(b.year)), num(y), num(r), colour(0), b.doc_count, b.citations);
    }
  }
  return svg.finish();
}

RenderResult render_plots(const std::vector<PlotArtifact>& artifacts, const std::filesystem::path& out_dir) {
  using Renderer = std::function<std::optional<std::string>(const nlohmann::json&)>;
  static const std::map<std::string, Renderer> renderers = {
      {"production_growth", [](const nlohmann::json& j) { return line_chart("Annual production", {j.get<TimeSeries>()}); }},
      {"citation_series", [](const nlohmann::json& j) { return line_chart("Citations per year", {j.get<TimeSeries>()}); }},
      {"word_trends", [](const nlohmann::json& j) { return line_chart("Word trends", j.get<std::vector<TimeSeries>>()); }},
      {"production_distribution",
       [](const nlohmann::json& j) { return bar_chart("Production", j.get<std::vector<RankedCount>>()); }},
      {"citation_distribution",
       [](const nlohmann::json& j) { return bar_chart("Most cited documents", j.get<std::vector<RankedCount>>()); }},
      {"frequent_words", [](const nlohmann::json& j) { return bar_chart("Frequent words", j.get<std::vector<RankedCount>>()); }},
      {"timelines", [](const nlohmann::json& j) { return bubble_timeline(j.get<std::vector<Timeline>>()); }},
      {"word_cloud", [](const nlohmann::json& j) { return word_cloud(j.get<std::vector<WeightedTerm>>()); }},
      {"topic_map", [](const nlohmann::json& j) { return topic_scatter(j.get<TopicMap>()); }},
      {"thematic_map", [](const nlohmann::json& j) { return thematic_scatter(j.get<ThematicMap>()); }},
      {"dendrogram", [](const nlohmann::json& j) { return dendrogram_tree(j.get<Dendrogram>()); }},
      {"flow", [](const nlohmann::json& j) { return sankey(j.get<FlowDiagram>()); }},
  };

  RenderResult result;
  for (const auto& a : artifacts) {
    auto it = renderers.find(a.analysis);
    if (it == renderers.end()) continue;
    std::ifstream in(out_dir / a.source);
    if (!in) {
      result.warnings.push_back(fmt::format("{}: artifact {} missing, plot skipped", a.analysis, a.source));
      continue;
    }
    std::optional<std::string> svg;
    try {
      svg = it->second(nlohmann::json::parse(in));
    } catch (const std::exception& e) {
      result.warnings.push_back(fmt::format("{}: unreadable artifact {} ({})", a.analysis, a.source, e.what()));
      continue;
    }
    if (!svg) {
      result.warnings.push_back(fmt::format("{}: nothing to plot", a.analysis));
      continue;
    }
    const std::string rel = "plots/" + std::filesystem::path(a.source).stem().string() + ".svg";
    std::filesystem::create_directories(out_dir / "plots");
    std::ofstream(out_dir / rel, std::ios::binary) << *svg;
    result.files.push_back(rel);
  }
  return result;
}

}  // namespace biblio::plots
