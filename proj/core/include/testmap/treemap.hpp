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
// Squarified treemap layout and SVG rendering of testability, complexity
// and coverage maps.

#ifndef TESTMAP_TREEMAP_HPP_
#define TESTMAP_TREEMAP_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testmap/report.hpp"

namespace testmap {

struct MapNode {
  std::string id;      // unique path, e.g. "module/class/method"
  std::string label;
  double weight = 0;   // leaves: clamped LOC; groups: sum of children
  std::vector<MapNode> children;
  // Leaf paint inputs.
  std::string fill;    // resolved color, set before rendering
  std::string tooltip;

  bool is_leaf() const { return children.empty(); }
};

struct Rect {
  double x = 0, y = 0, w = 0, h = 0;
  double area() const { return w * h; }
};

struct LayoutBox {
  std::string id;
  Rect rect;
  int depth = 0;
  bool leaf = false;
  const MapNode* node = nullptr;
};

struct LayoutOptions {
  double gutter = 0.0;  // inset per nesting level, layout units
};

// Squarified layout: siblings in descending weight (ties by id), rows chosen
// greedily to minimize the worst aspect ratio. Children tile their parent
// exactly up to the configured gutter. Throws DegenerateCanvas.
std::vector<LayoutBox> squarify_layout(const MapNode& root, const Rect& canvas,
                                       const LayoutOptions& options = {});

enum class PaintMode { Testability, Complexity, Coverage };

// Documented palette. Every not-testable reason gets its own shade.
std::string testable_color();
std::string trivial_color();
std::string reason_color(const std::string& reason_key);
std::string excluded_color();
std::string unknown_coverage_color();

// Continuous green-to-red ramp; value clamped to [1, max].
std::string complexity_color(uint32_t complexity, uint32_t max_complexity = 15);

// Green at 1.0, red at 0.0.
std::string coverage_color(double ratio);

// Leaf color for one report method under the given mode.
std::string paint(const ReportMethod& m, PaintMode mode,
                  const std::optional<double>& coverage_ratio,
                  uint32_t max_complexity = 15);

struct RenderOptions {
  double width = 1200;
  double height = 800;
  bool legend = true;
  PaintMode mode = PaintMode::Testability;
  ScopeKind scope = ScopeKind::Module;
  uint32_t max_complexity = 15;
};

// Builds the scope -> class -> method tree from a report. Excluded methods
// are omitted; zero-LOC leaves are clamped to weight 1.
MapNode build_map_tree(const Report& report, const RenderOptions& options,
                       const std::map<MethodId, double>& coverage = {});

// Standalone SVG 1.1 document; byte-deterministic for identical inputs.
// Every method leaf becomes one rect with class="m" and a title tooltip.
std::string render_svg(const MapNode& root, const RenderOptions& options);

}  // namespace testmap

#endif  // TESTMAP_TREEMAP_HPP_
