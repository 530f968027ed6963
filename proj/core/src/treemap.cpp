// Copyright 2026 The testmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Squarified treemap layout (greedy row building that minimizes the worst
// aspect ratio) and deterministic SVG output.

#include "testmap/treemap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "testmap/errors.hpp"

namespace testmap {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  // Avoid the "-0.00" artifact.
  if (std::string(buf) == "-0.00") return "0.00";
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
      default: out += c;
    }
  }
  return out;
}

double worst_ratio(const std::vector<double>& areas, size_t begin, size_t end,
                   double side) {
  double sum = 0;
  double lo = 1e300, hi = 0;
  for (size_t i = begin; i < end; ++i) {
    sum += areas[i];
    lo = std::min(lo, areas[i]);
    hi = std::max(hi, areas[i]);
  }
  if (sum <= 0 || side <= 0) return 1e300;
  double s2 = sum * sum;
  double l2 = side * side;
  return std::max(l2 * hi / s2, s2 / (l2 * lo));
}

void lay_children(const std::vector<const MapNode*>& children, const Rect& rect,
                  int depth, const LayoutOptions& options,
                  std::vector<LayoutBox>& out);

void lay_node(const MapNode& node, const Rect& rect, int depth,
              const LayoutOptions& options, std::vector<LayoutBox>& out) {
  out.push_back(LayoutBox{node.id, rect, depth, node.is_leaf(), &node});
  if (node.is_leaf()) return;

  Rect inner = rect;
  if (options.gutter > 0) {
    double g = std::min({options.gutter, rect.w / 2, rect.h / 2});
    inner = Rect{rect.x + g, rect.y + g, rect.w - 2 * g, rect.h - 2 * g};
  }

  std::vector<const MapNode*> children;
  children.reserve(node.children.size());
  for (const auto& c : node.children) children.push_back(&c);
  std::sort(children.begin(), children.end(),
            [](const MapNode* a, const MapNode* b) {
              if (a->weight != b->weight) return a->weight > b->weight;
              return a->id < b->id;
            });
  lay_children(children, inner, depth + 1, options, out);
}

void lay_children(const std::vector<const MapNode*>& children, const Rect& rect,
                  int depth, const LayoutOptions& options,
                  std::vector<LayoutBox>& out) {
  double total = 0;
  for (const auto* c : children) total += c->weight;
  if (total <= 0 || rect.w <= 0 || rect.h <= 0) {
    for (const auto* c : children) {
      lay_node(*c, Rect{rect.x, rect.y, 0, 0}, depth, options, out);
    }
    return;
  }
  double scale = rect.area() / total;
  std::vector<double> areas(children.size());
  for (size_t i = 0; i < children.size(); ++i) {
    areas[i] = children[i]->weight * scale;
  }

  Rect pos = rect;
  size_t i = 0;
  while (i < children.size()) {
    double side = std::min(pos.w, pos.h);
    size_t j = i + 1;
    double best = worst_ratio(areas, i, j, side);
    while (j < children.size()) {
      double cand = worst_ratio(areas, i, j + 1, side);
      if (cand <= best) {
        best = cand;
        ++j;
      } else {
        break;
      }
    }
    double row_sum = 0;
    for (size_t k = i; k < j; ++k) row_sum += areas[k];

    bool vertical = pos.w >= pos.h;  // row along the shorter (vertical) edge
    double length = vertical ? pos.h : pos.w;
    double thickness = row_sum / length;
    bool last_row = j == children.size();
    if (last_row) thickness = vertical ? pos.w : pos.h;

    // Cumulative boundaries keep the row tiling exact.
    double consumed = 0;
    double offset = 0;
    for (size_t k = i; k < j; ++k) {
      consumed += areas[k];
      double next = k + 1 == j ? length : length * (consumed / row_sum);
      Rect r;
      if (vertical) {
        r = Rect{pos.x, pos.y + offset, thickness, next - offset};
      } else {
        r = Rect{pos.x + offset, pos.y, next - offset, thickness};
      }
      lay_node(*children[k], r, depth, options, out);
      offset = next;
    }
    if (vertical) {
      pos.x += thickness;
      pos.w -= thickness;
    } else {
      pos.y += thickness;
      pos.h -= thickness;
    }
    if (last_row) break;
    i = j;
  }
}

}  // namespace

std::vector<LayoutBox> squarify_layout(const MapNode& root, const Rect& canvas,
                                       const LayoutOptions& options) {
  if (canvas.w <= 0 || canvas.h <= 0) {
    throw DegenerateCanvas("treemap canvas has zero area");
  }
  std::vector<LayoutBox> out;
  lay_node(root, canvas, 0, options, out);
  return out;
}

// --- palette -------------------------------------------------------------

std::string testable_color() { return "#1a9850"; }
std::string trivial_color() { return "#fdd835"; }
std::string excluded_color() { return "#bdbdbd"; }
std::string unknown_coverage_color() { return "#bdbdbd"; }

std::string reason_color(const std::string& reason_key) {
  if (reason_key == "file-system") return "#99000d";
  if (reason_key == "network") return "#cb181d";
  if (reason_key == "time") return "#ef3b2c";
  if (reason_key == "random") return "#fb6a4a";
  if (reason_key == "threading") return "#fc9272";
  if (reason_key == "process-env") return "#fcbba1";
  if (reason_key == "console") return "#fd8d3c";
  if (reason_key == "other-non-determinism") return "#a63603";
  if (reason_key == "observability") return "#67001f";
  return "#cb181d";
}

namespace {

std::string lerp_color(double t, int r0, int g0, int b0, int r1, int g1,
                       int b1) {
  t = std::clamp(t, 0.0, 1.0);
  int r = static_cast<int>(std::lround(r0 + t * (r1 - r0)));
  int g = static_cast<int>(std::lround(g0 + t * (g1 - g0)));
  int b = static_cast<int>(std::lround(b0 + t * (b1 - b0)));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string complexity_color(uint32_t complexity, uint32_t max_complexity) {
  if (max_complexity < 2) max_complexity = 2;
  uint32_t c = std::clamp<uint32_t>(complexity, 1, max_complexity);
  double t = double(c - 1) / double(max_complexity - 1);
  // #1a9850 -> #d73027
  return lerp_color(t, 0x1a, 0x98, 0x50, 0xd7, 0x30, 0x27);
}

std::string coverage_color(double ratio) {
  // #d73027 at 0 -> #1a9850 at 1
  return lerp_color(std::clamp(ratio, 0.0, 1.0), 0xd7, 0x30, 0x27, 0x1a, 0x98,
                    0x50);
}

std::string paint(const ReportMethod& m, PaintMode mode,
                  const std::optional<double>& coverage_ratio,
                  uint32_t max_complexity) {
  switch (mode) {
    case PaintMode::Testability:
      if (m.classification == "excluded") return excluded_color();
      if (m.classification == "trivial") return trivial_color();
      if (m.classification == "testable") return testable_color();
      // Shade by the first reason in sorted order.
      return m.reasons.empty() ? reason_color("") : reason_color(m.reasons[0]);
    case PaintMode::Complexity:
      return complexity_color(m.complexity == 0 ? 1 : m.complexity,
                              max_complexity);
    case PaintMode::Coverage:
      return coverage_ratio ? coverage_color(*coverage_ratio)
                            : unknown_coverage_color();
  }
  return excluded_color();
}

MapNode build_map_tree(const Report& report, const RenderOptions& options,
                       const std::map<MethodId, double>& coverage) {
  MapNode root;
  root.id = "(root)";
  root.label = "(root)";

  std::map<std::string, std::map<std::string, std::vector<const ReportMethod*>>>
      groups;
  for (const auto& m : report.methods) {
    if (m.classification == "excluded") continue;
    std::string scope;
    switch (options.scope) {
      case ScopeKind::Repository: scope = "(all)"; break;
      case ScopeKind::Module: scope = m.module; break;
      case ScopeKind::Package:
        scope = m.package.empty() ? "(default)" : m.package;
        break;
    }
    groups[scope][m.id.owner].push_back(&m);
  }

  for (const auto& [scope, classes] : groups) {
    MapNode scope_node;
    scope_node.id = scope;
    scope_node.label = scope;
    for (const auto& [cls, methods] : classes) {
      MapNode class_node;
      class_node.id = scope + "/" + cls;
      class_node.label = cls;
      for (const ReportMethod* m : methods) {
        MapNode leaf;
        leaf.id = class_node.id + "/" + m->id.name + m->id.descriptor;
        leaf.label = m->id.name;
        leaf.weight = std::max<uint32_t>(1, m->loc);
        std::optional<double> ratio;
        if (auto it = coverage.find(m->id); it != coverage.end()) {
          ratio = it->second;
        }
        leaf.fill = paint(*m, options.mode, ratio, options.max_complexity);
        std::string tip = m->id.display() + " - " + m->classification;
        if (!m->reasons.empty()) {
          tip += " [";
          for (size_t i = 0; i < m->reasons.size(); ++i) {
            if (i) tip += ", ";
            tip += m->reasons[i];
          }
          tip += "]";
        }
        if (options.mode == PaintMode::Complexity) {
          tip += " complexity=" + std::to_string(m->complexity);
        } else if (options.mode == PaintMode::Coverage) {
          tip += ratio ? " coverage=" + fmt(*ratio) : " coverage=unknown";
        }
        leaf.tooltip = tip;
        class_node.weight += leaf.weight;
        class_node.children.push_back(std::move(leaf));
      }
      scope_node.weight += class_node.weight;
      scope_node.children.push_back(std::move(class_node));
    }
    root.weight += scope_node.weight;
    root.children.push_back(std::move(scope_node));
  }
  return root;
}

namespace {

struct LegendEntry {
  std::string color;
  std::string label;
};

std::vector<LegendEntry> legend_entries(const RenderOptions& options) {
  std::vector<LegendEntry> out;
  switch (options.mode) {
    case PaintMode::Testability:
      out.push_back({testable_color(), "testable"});
      out.push_back({trivial_color(), "trivial"});
      for (const char* key :
           {"file-system", "network", "time", "random", "threading",
            "process-env", "console", "other-non-determinism",
            "observability"}) {
        out.push_back({reason_color(key), std::string("not-testable: ") + key});
      }
      break;
    case PaintMode::Complexity: {
      uint32_t max = options.max_complexity;
      out.push_back({complexity_color(1, max), "complexity 1"});
      out.push_back({complexity_color((max + 1) / 2, max), "mid"});
      out.push_back({complexity_color(max, max),
                     "complexity >= " + std::to_string(max)});
      break;
    }
    case PaintMode::Coverage:
      out.push_back({coverage_color(0.0), "0%"});
      out.push_back({coverage_color(0.5), "50%"});
      out.push_back({coverage_color(1.0), "100%"});
      out.push_back({unknown_coverage_color(), "unknown"});
      break;
  }
  return out;
}

}  // namespace

std::string render_svg(const MapNode& root, const RenderOptions& options) {
  double legend_h = options.legend ? 28.0 : 0.0;
  Rect canvas{0, 0, options.width, options.height - legend_h};
  std::vector<LayoutBox> layout = squarify_layout(root, canvas);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         fmt(options.width) + "\" height=\"" + fmt(options.height) +
         "\" viewBox=\"0 0 " + fmt(options.width) + " " + fmt(options.height) +
         "\">\n";
  svg += "<rect class=\"bg\" x=\"0\" y=\"0\" width=\"" + fmt(options.width) +
         "\" height=\"" + fmt(options.height) + "\" fill=\"#ffffff\"/>\n";

  svg += "<g class=\"cells\">\n";
  for (const auto& box : layout) {
    if (!box.leaf || box.depth == 0 || box.rect.w <= 0 || box.rect.h <= 0) {
      continue;
    }
    svg += "<rect class=\"m\" x=\"" + fmt(box.rect.x) + "\" y=\"" +
           fmt(box.rect.y) + "\" width=\"" + fmt(box.rect.w) + "\" height=\"" +
           fmt(box.rect.h) + "\" fill=\"" + box.node->fill +
           "\" stroke=\"#ffffff\" stroke-width=\"0.50\">";
    svg += "<title>" + xml_escape(box.node->tooltip) + "</title>";
    svg += "</rect>\n";
  }
  svg += "</g>\n";

  svg += "<g class=\"groups\" fill=\"none\">\n";
  for (const auto& box : layout) {
    if (box.leaf || box.depth == 0 || box.rect.w <= 0 || box.rect.h <= 0) {
      continue;
    }
    double width = box.depth == 1 ? 2.0 : 1.0;
    svg += "<rect x=\"" + fmt(box.rect.x) + "\" y=\"" + fmt(box.rect.y) +
           "\" width=\"" + fmt(box.rect.w) + "\" height=\"" + fmt(box.rect.h) +
           "\" stroke=\"#333333\" stroke-width=\"" + fmt(width) + "\">";
    svg += "<title>" + xml_escape(box.node->label) + "</title>";
    svg += "</rect>\n";
  }
  svg += "</g>\n";

  if (options.legend) {
    svg += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    double x = 4;
    double y = options.height - legend_h + 7;
    for (const auto& e : legend_entries(options)) {
      svg += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
             "\" width=\"12\" height=\"12\" fill=\"" + e.color + "\"/>\n";
      svg += "<text x=\"" + fmt(x + 16) + "\" y=\"" + fmt(y + 10) + "\">" +
             xml_escape(e.label) + "</text>\n";
      x += 18 + 7.0 * e.label.size() + 16;
    }
    svg += "</g>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace testmap
