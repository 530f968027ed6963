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

#include "testmap/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "testmap/analyzer.hpp"
#include "testmap/coverage.hpp"
#include "testmap/errors.hpp"
#include "testmap/treemap.hpp"
#include "testmap/version.hpp"

namespace fs = std::filesystem;

namespace testmap {

namespace {

constexpr int kOk = 0;
constexpr int kInternalError = 1;
constexpr int kInvalidInput = 2;

ScopeKind parse_scope(const std::string& s) {
  if (s == "repo" || s == "repository") return ScopeKind::Repository;
  if (s == "package") return ScopeKind::Package;
  return ScopeKind::Module;
}

void print_segmentation_table(const Report& report, ScopeKind scope,
                              std::ostream& out) {
  out << "  scope                                     LOC  not-testable  "
         "trivial  testable\n";
  for (const auto& seg : report.segmentations) {
    if (seg.kind != ScopeKind::Repository && seg.kind != scope) continue;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "  %-38s %6llu       %3d%%      %3d%%      %3d%%\n",
                  seg.id.c_str(),
                  static_cast<unsigned long long>(seg.loc_total),
                  seg.not_testable.pct, seg.trivial.pct, seg.testable.pct);
    out << line;
  }
}

int cmd_analyze(const std::vector<std::string>& app_paths,
                const std::vector<std::string>& dep_paths,
                const std::string& kb_path, const std::string& out_dir,
                int threads, const std::string& scope, int max_class_version,
                std::ostream& out, std::ostream& err) {
  std::vector<InputSpec> inputs;
  for (const auto& p : app_paths) {
    inputs.push_back(InputSpec{p, InputRole::Application});
  }
  for (const auto& p : dep_paths) {
    inputs.push_back(InputSpec{p, InputRole::Dependency});
  }

  AnalyzeOptions options;
  if (!kb_path.empty()) options.kb_path = kb_path;
  options.threads = threads;
  if (max_class_version > 0) {
    options.parse.max_major_version = static_cast<uint16_t>(max_class_version);
  }

  AnalysisResult result = analyze(inputs, options);

  for (const auto& d : result.diagnostics) {
    err << "warning: " << d.input_path;
    if (!d.entry.empty()) err << " (" << d.entry << ")";
    err << ": " << d.message << "\n";
  }

  fs::create_directories(out_dir);
  std::string report_path = (fs::path(out_dir) / "report.json").string();
  write_report(result.report, report_path);

  out << "analyzed " << result.pool.size() << " classes, "
      << result.report.methods.size() << " methods\n";
  print_segmentation_table(result.report, parse_scope(scope), out);
  out << "report: " << report_path << "\n";
  return kOk;
}

int cmd_map(const std::string& report_path, const std::string& out_dir,
            const std::vector<std::string>& modes,
            const std::string& coverage_path, const std::string& scope,
            bool no_legend, double width, double height, int max_complexity,
            std::ostream& out, std::ostream& err) {
  Report report = load_report(report_path);
  std::map<MethodId, double> coverage;

  std::vector<std::string> effective_modes =
      modes.empty() ? std::vector<std::string>{"testability"} : modes;
  for (const auto& mode : effective_modes) {
    if (mode == "coverage" && coverage_path.empty()) {
      err << "error: --mode coverage requires --coverage <xml>\n";
      return kInvalidInput;
    }
  }
  if (!coverage_path.empty()) {
    coverage = ingest_coverage_file(coverage_path);
  }

  fs::create_directories(out_dir);
  for (const auto& mode : effective_modes) {
    RenderOptions options;
    options.width = width;
    options.height = height;
    options.legend = !no_legend;
    options.scope = parse_scope(scope);
    options.max_complexity = static_cast<uint32_t>(max_complexity);
    if (mode == "testability") {
      options.mode = PaintMode::Testability;
    } else if (mode == "complexity") {
      options.mode = PaintMode::Complexity;
    } else if (mode == "coverage") {
      options.mode = PaintMode::Coverage;
    } else {
      err << "error: unknown map mode \"" << mode << "\"\n";
      return kInvalidInput;
    }
    MapNode tree = build_map_tree(report, options, coverage);
    std::string svg = render_svg(tree, options);
    std::string path = (fs::path(out_dir) / (mode + ".svg")).string();
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path);
    file << svg;
    out << "map: " << path << "\n";
  }
  return kOk;
}

int cmd_explain(const std::string& report_path, const std::string& method_spec,
                std::ostream& out, std::ostream& err) {
  Report report = load_report(report_path);

  // Accepted forms: the exact display form "owner.name(args)ret", or
  // "owner.name" to match every overload.
  std::vector<const ReportMethod*> matches;
  for (const auto& m : report.methods) {
    std::string display = m.id.display();
    std::string short_form = m.id.owner + "." + m.id.name;
    if (display == method_spec || short_form == method_spec) {
      matches.push_back(&m);
    }
  }
  if (matches.empty()) {
    err << "error: no method matches \"" << method_spec << "\"\n";
    return kInvalidInput;
  }

  for (const ReportMethod* m : matches) {
    out << m->id.display() << "\n";
    out << "  classification: " << m->classification;
    if (!m->reasons.empty()) {
      out << " [";
      for (size_t i = 0; i < m->reasons.size(); ++i) {
        if (i) out << ", ";
        out << m->reasons[i];
      }
      out << "]";
    }
    out << "\n";
    if (!m->trivial_kind.empty()) {
      out << "  trivial kind: " << m->trivial_kind << "\n";
    }
    if (!m->excluded_reason.empty()) {
      out << "  excluded: " << m->excluded_reason << "\n";
    }
    out << "  loc: " << m->loc;
    if (m->complexity > 0) out << ", complexity: " << m->complexity;
    out << "\n";
    if (m->trace) {
      if (m->trace->receiver_field) {
        out << "  non-injectable receiver field: " << *m->trace->receiver_field
            << "\n";
      }
      out << "  root cause (" << m->trace->category_key << "):\n";
      for (size_t i = 0; i < m->trace->chain.size(); ++i) {
        const auto& hop = m->trace->chain[i];
        out << "    " << (i == 0 ? "" : "-> ") << hop.method.display();
        if (hop.line > 0) out << "  line " << hop.line;
        out << "\n";
      }
    } else if (m->classification == "testable") {
      out << "  no testability issues found\n";
    }
  }
  return kOk;
}

int cmd_diff(const std::string& before_path, const std::string& after_path,
             const std::string& out_dir, std::ostream& out, std::ostream&) {
  Report before = load_report(before_path);
  Report after = load_report(after_path);
  DiffReport diff = diff_reports(before, after);

  for (const auto& d : diff.deltas) {
    char line[384];
    std::snprintf(line, sizeof(line),
                  "%s %s: not-testable %+lld LOC (%+d pp), trivial %+lld LOC "
                  "(%+d pp), testable %+lld LOC (%+d pp)\n",
                  scope_kind_key(d.kind), d.id.c_str(),
                  static_cast<long long>(d.not_testable_loc),
                  d.not_testable_pct, static_cast<long long>(d.trivial_loc),
                  d.trivial_pct, static_cast<long long>(d.testable_loc),
                  d.testable_pct);
    out << line;
  }
  if (!diff.transitions.empty()) {
    out << "transitions:\n";
    for (const auto& t : diff.transitions) {
      out << "  " << t.id.display() << ": " << t.before << " -> " << t.after
          << "\n";
    }
  }
  for (const auto& id : diff.removed) {
    out << "removed: " << id.display() << "\n";
  }
  for (const auto& id : diff.added) {
    out << "added: " << id.display() << "\n";
  }

  fs::create_directories(out_dir);
  std::string path = (fs::path(out_dir) / "diff.json").string();
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path);
  file << diff_to_json(diff);
  out << "diff: " << path << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"testmap: unit-testability analysis for JVM bytecode"};
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  // analyze
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Analyze class files and write a report");
  std::vector<std::string> app_paths, dep_paths;
  std::string kb_path, out_dir = "out", scope = "module";
  int threads = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));
  int max_class_version = 0;
  analyze_cmd->add_option("--app", app_paths,
                          "Application classes: dir, .class or .jar")
      ->required();
  analyze_cmd->add_option("--dep", dep_paths,
                          "Dependency classes: dir, .class or .jar");
  analyze_cmd->add_option("--kb", kb_path, "Knowledge base TOML config")
      ->envname("TESTMAP_KB");
  analyze_cmd->add_option("--out", out_dir, "Output directory");
  analyze_cmd->add_option("--threads", threads, "Worker threads")
      ->check(CLI::Range(1, 1024));
  analyze_cmd->add_option("--scope", scope, "Summary granularity")
      ->check(CLI::IsMember({"repo", "module", "package"}));
  analyze_cmd->add_option("--max-class-version", max_class_version,
                          "Cap on accepted class-file major versions");

  // map
  auto* map_cmd = app.add_subcommand("map", "Render treemaps from a report");
  std::string report_path, coverage_path;
  std::vector<std::string> modes;
  bool no_legend = false;
  double width = 1200, height = 800;
  int max_complexity = 15;
  std::string map_out = "out", map_scope = "module";
  map_cmd->add_option("--report", report_path, "Report JSON path")->required();
  map_cmd->add_option("--out", map_out, "Output directory");
  map_cmd->add_option("--mode", modes,
                      "testability | complexity | coverage (repeatable)");
  map_cmd->add_option("--coverage", coverage_path, "Coverage XML input");
  map_cmd->add_option("--scope", map_scope, "Grouping granularity")
      ->check(CLI::IsMember({"repo", "module", "package"}));
  map_cmd->add_flag("--no-legend", no_legend, "Omit the legend block");
  map_cmd->add_option("--width", width, "SVG width");
  map_cmd->add_option("--height", height, "SVG height");
  map_cmd->add_option("--max-complexity", max_complexity,
                      "Complexity ramp saturation point");

  // explain
  auto* explain_cmd =
      app.add_subcommand("explain", "Explain one method's verdict");
  std::string explain_report, method_spec;
  explain_cmd->add_option("--report", explain_report, "Report JSON path")
      ->required();
  explain_cmd
      ->add_option("method", method_spec,
                   "Method id: owner.name or owner.name(descriptor)")
      ->required();

  // diff
  auto* diff_cmd = app.add_subcommand("diff", "Compare two reports");
  std::string before_path, after_path, diff_out = "out";
  diff_cmd->add_option("before", before_path, "Older report")->required();
  diff_cmd->add_option("after", after_path, "Newer report")->required();
  diff_cmd->add_option("--out", diff_out, "Output directory");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << app.version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (analyze_cmd->parsed()) {
      return cmd_analyze(app_paths, dep_paths, kb_path, out_dir, threads,
                         scope, max_class_version, out, err);
    }
    if (map_cmd->parsed()) {
      return cmd_map(report_path, map_out, modes, coverage_path, map_scope,
                     no_legend, width, height, max_complexity, out, err);
    }
    if (explain_cmd->parsed()) {
      return cmd_explain(explain_report, method_spec, out, err);
    }
    if (diff_cmd->parsed()) {
      return cmd_diff(before_path, after_path, diff_out, out, err);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ConfigSyntax& e) {
    err << "error: knowledge base config: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ConfigSemantic& e) {
    err << "error: knowledge base config: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const SchemaMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const MalformedCoverage& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace testmap
