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

#ifndef TESTMAP_COVERAGE_HPP_
#define TESTMAP_COVERAGE_HPP_

#include <map>
#include <string>

#include "testmap/classfile.hpp"

namespace testmap {

// Parses a line-counter coverage XML document (the de-facto JVM coverage
// report dialect: report/package/class/method with LINE counters) into
// covered-line ratios. Methods absent from the document are simply absent
// from the map (unknown coverage). Throws MalformedCoverage.
std::map<MethodId, double> ingest_coverage(const std::string& xml_text);

std::map<MethodId, double> ingest_coverage_file(const std::string& path);

}  // namespace testmap

#endif  // TESTMAP_COVERAGE_HPP_
