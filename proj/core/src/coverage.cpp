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

#include "testmap/coverage.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <fstream>
#include <sstream>

#include "testmap/errors.hpp"

namespace testmap {

namespace {

namespace pt = boost::property_tree;

// LINE counter of one element, when present.
std::optional<std::pair<long, long>> line_counter(const pt::ptree& node) {
  for (const auto& [key, child] : node) {
    if (key != "counter") continue;
    auto type = child.get_optional<std::string>("<xmlattr>.type");
    if (!type || *type != "LINE") continue;
    auto missed = child.get_optional<long>("<xmlattr>.missed");
    auto covered = child.get_optional<long>("<xmlattr>.covered");
    if (!missed || !covered || *missed < 0 || *covered < 0) {
      throw MalformedCoverage("LINE counter needs missed/covered attributes");
    }
    return std::make_pair(*covered, *missed);
  }
  return std::nullopt;
}

}  // namespace

std::map<MethodId, double> ingest_coverage(const std::string& xml_text) {
  pt::ptree tree;
  std::istringstream in(xml_text);
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw MalformedCoverage(std::string("coverage XML: ") + e.what());
  }
  auto report = tree.get_child_optional("report");
  if (!report) throw MalformedCoverage("coverage XML: no <report> root");

  std::map<MethodId, double> out;
  for (const auto& [pkey, package] : *report) {
    if (pkey != "package") continue;
    for (const auto& [ckey, cls] : package) {
      if (ckey != "class") continue;
      auto class_name = cls.get_optional<std::string>("<xmlattr>.name");
      if (!class_name) {
        throw MalformedCoverage("coverage XML: class without a name");
      }
      for (const auto& [mkey, method] : cls) {
        if (mkey != "method") continue;
        auto name = method.get_optional<std::string>("<xmlattr>.name");
        auto desc = method.get_optional<std::string>("<xmlattr>.desc");
        if (!name || !desc) {
          throw MalformedCoverage("coverage XML: method without name/desc");
        }
        auto counter = line_counter(method);
        if (!counter) continue;  // no line data: unknown coverage
        auto [covered, missed] = *counter;
        if (covered + missed == 0) continue;
        MethodId id{*class_name, *name, *desc};
        out[id] = double(covered) / double(covered + missed);
      }
    }
  }
  return out;
}

std::map<MethodId, double> ingest_coverage_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read coverage file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ingest_coverage(buffer.str());
}

}  // namespace testmap
