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

#include <gtest/gtest.h>

#include "testmap/coverage.hpp"
#include "testmap/errors.hpp"

namespace testmap {
namespace {

TEST(CoverageTest, RatioDefinition) {
  std::string xml = R"(<?xml version="1.0" encoding="UTF-8"?>
<report name="demo">
  <package name="com/example">
    <class name="com/example/App" sourcefilename="App.java">
      <method name="send" desc="(Lcom/example/Message;)V" line="12">
        <counter type="INSTRUCTION" missed="9" covered="1"/>
        <counter type="LINE" missed="5" covered="5"/>
      </method>
    </class>
  </package>
</report>)";
  auto ratios = ingest_coverage(xml);
  ASSERT_EQ(ratios.size(), 1u);
  MethodId id{"com/example/App", "send", "(Lcom/example/Message;)V"};
  ASSERT_TRUE(ratios.count(id));
  EXPECT_DOUBLE_EQ(ratios[id], 0.5);
}

TEST(CoverageTest, EmptyReportLeavesEverythingUnknown) {
  auto ratios = ingest_coverage("<report name=\"empty\"/>");
  EXPECT_TRUE(ratios.empty());
}

// Three methods with hand-computed ratios.
TEST(CoverageTest, ThreeMethodSample) {
  std::string xml = R"(<report name="s">
  <package name="p">
    <class name="p/A" sourcefilename="A.java">
      <method name="full" desc="()V" line="3">
        <counter type="LINE" missed="0" covered="4"/>
      </method>
      <method name="partial" desc="(I)I" line="9">
        <counter type="LINE" missed="3" covered="1"/>
      </method>
      <method name="untouched" desc="()Z" line="15">
        <counter type="LINE" missed="7" covered="0"/>
      </method>
      <method name="nodata" desc="()J" line="20"/>
    </class>
  </package>
</report>)";
  auto ratios = ingest_coverage(xml);
  EXPECT_EQ(ratios.size(), 3u);
  EXPECT_DOUBLE_EQ((ratios[{"p/A", "full", "()V"}]), 1.0);
  EXPECT_DOUBLE_EQ((ratios[{"p/A", "partial", "(I)I"}]), 0.25);
  EXPECT_DOUBLE_EQ((ratios[{"p/A", "untouched", "()Z"}]), 0.0);
  EXPECT_FALSE(ratios.count(MethodId{"p/A", "nodata", "()J"}));
}

TEST(CoverageTest, MalformedXmlRejected) {
  EXPECT_THROW(ingest_coverage("<report><package></report>"),
               MalformedCoverage);
  EXPECT_THROW(ingest_coverage("not xml at all"), MalformedCoverage);
}

TEST(CoverageTest, MissingRootRejected) {
  EXPECT_THROW(ingest_coverage("<coverage/>"), MalformedCoverage);
}

TEST(CoverageTest, CounterWithoutAttributesRejected) {
  std::string xml = R"(<report name="s">
  <package name="p">
    <class name="p/A">
      <method name="m" desc="()V">
        <counter type="LINE" covered="3"/>
      </method>
    </class>
  </package>
</report>)";
  EXPECT_THROW(ingest_coverage(xml), MalformedCoverage);
}

TEST(CoverageTest, MissingFileIsIoError) {
  EXPECT_THROW(ingest_coverage_file("/nonexistent/coverage.xml"), IoError);
}

}  // namespace
}  // namespace testmap
