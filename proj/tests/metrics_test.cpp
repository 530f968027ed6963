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
// Triviality and complexity tests against a hand-labeled fixture class plus
// the independent E-N+2 oracle over the derived control-flow graph.

#include <gtest/gtest.h>

#include "support/cfg_oracle.hpp"
#include "support/class_builder.hpp"
#include "support/corpora.hpp"
#include "testmap/classfile.hpp"
#include "testmap/metrics.hpp"
#include "testmap/opcodes.hpp"

namespace testmap {
namespace {

using fixtures::ClassBuilder;
using fixtures::CodeAsm;
using fixtures::Label;
using fixtures::LabeledMethod;

class MetricsFixtureTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    labels_ = new std::vector<LabeledMethod>();
    auto set = fixtures::metrics_corpus(*labels_);
    model_ = new ClassModel(parse_class(set.classes[0].second));
  }
  static void TearDownTestSuite() {
    delete labels_;
    delete model_;
    labels_ = nullptr;
    model_ = nullptr;
  }

  static const MethodModel& method(const LabeledMethod& label) {
    const MethodModel* m = model_->find_method(label.name, label.descriptor);
    EXPECT_NE(m, nullptr) << label.name << label.descriptor;
    return *m;
  }

  static std::vector<LabeledMethod>* labels_;
  static ClassModel* model_;
};

std::vector<LabeledMethod>* MetricsFixtureTest::labels_ = nullptr;
ClassModel* MetricsFixtureTest::model_ = nullptr;

TEST_F(MetricsFixtureTest, FixtureHasEnoughMethods) {
  EXPECT_GE(labels_->size(), 20u);
}

// Zero disagreements against the hand-labeled triviality table.
TEST_F(MetricsFixtureTest, TrivialityMatchesHandLabels) {
  for (const auto& label : *labels_) {
    TrivialityVerdict v = detect_trivial(method(label));
    EXPECT_EQ(v.is_trivial, label.trivial)
        << label.name << label.descriptor;
    EXPECT_EQ(v.kind, label.kind) << label.name << label.descriptor;
  }
}

// Exact agreement with the hand-assigned complexities.
TEST_F(MetricsFixtureTest, ComplexityMatchesHandLabels) {
  for (const auto& label : *labels_) {
    EXPECT_EQ(cyclomatic_complexity(method(label)), label.complexity)
        << label.name << label.descriptor;
  }
}

// Exact agreement with the independent CFG E-N+2 oracle.
TEST_F(MetricsFixtureTest, ComplexityMatchesCfgOracle) {
  for (const auto& label : *labels_) {
    const MethodModel& m = method(label);
    EXPECT_EQ(cyclomatic_complexity(m), fixtures::complexity_by_cfg(m))
        << label.name << label.descriptor;
  }
}

// Triviality forces complexity 1.
TEST_F(MetricsFixtureTest, TrivialImpliesComplexityOne) {
  for (const auto& label : *labels_) {
    if (!label.trivial) continue;
    EXPECT_EQ(cyclomatic_complexity(method(label)), 1u) << label.name;
  }
}

TEST(DetectTrivialTest, InvariantKindMatchesFlag) {
  std::vector<LabeledMethod> labels;
  auto set = fixtures::metrics_corpus(labels);
  ClassModel cls = parse_class(set.classes[0].second);
  for (const auto& m : cls.methods) {
    TrivialityVerdict v = detect_trivial(m);
    EXPECT_EQ(v.is_trivial, v.kind != TrivialKind::None);
  }
}

TEST(DetectTrivialTest, WallClockIsExpiredIsNotTrivial) {
  ClassModel cls = parse_class(fixtures::before_corpus().classes[0].second);
  const MethodModel* m = cls.find_method("isExpired", "()Z");
  ASSERT_NE(m, nullptr);
  EXPECT_FALSE(detect_trivial(*m).is_trivial);
}

TEST(DetectTrivialTest, GetterReportsAccessedField) {
  std::vector<LabeledMethod> labels;
  auto set = fixtures::metrics_corpus(labels);
  ClassModel cls = parse_class(set.classes[0].second);
  const MethodModel* getter = cls.find_method("getCount", "()I");
  ASSERT_NE(getter, nullptr);
  TrivialityVerdict v = detect_trivial(*getter);
  ASSERT_EQ(v.kind, TrivialKind::Getter);
  EXPECT_EQ(v.accessed_field.name, "count");
}

// Complexity ignores straight-line padding and line-table changes.
TEST(ComplexityTest, InvariantUnderNopInsertionAndLineChanges) {
  auto build = [&](bool with_nops, int line_base) {
    ClassBuilder b(0x0001, "inv/C");
    CodeAsm& c = b.add_method(0x0001, "f", "(I)I");
    Label other = c.new_label();
    c.line(static_cast<uint16_t>(line_base));
    if (with_nops) c.nop();
    c.iload(1);
    if (with_nops) c.nop();
    c.branch(op::ifle, other);
    c.line(static_cast<uint16_t>(line_base + 1));
    c.iconst(1);
    c.ireturn();
    c.mark(other);
    if (with_nops) c.nop();
    c.line(static_cast<uint16_t>(line_base + 7));
    c.iconst(0);
    c.ireturn();
    return parse_class(b.build());
  };
  ClassModel plain = build(false, 10);
  ClassModel padded = build(true, 90);
  EXPECT_EQ(cyclomatic_complexity(plain.methods[0]),
            cyclomatic_complexity(padded.methods[0]));
  EXPECT_EQ(cyclomatic_complexity(padded.methods[0]), 2u);
}

TEST(ComplexityTest, StraightLineIsOne) {
  ClassBuilder b(0x0001, "cc/S");
  CodeAsm& c = b.add_method(0x0001, "f", "(II)I");
  c.iload(1);
  c.iload(2);
  c.op(op::iadd);
  c.ireturn();
  ClassModel cls = parse_class(b.build());
  EXPECT_EQ(cyclomatic_complexity(cls.methods[0]), 1u);
  EXPECT_EQ(fixtures::complexity_by_cfg(cls.methods[0]), 1u);
}

TEST(ComplexityTest, ExceptionHandlersDoNotCount) {
  ClassBuilder b(0x0001, "cc/H");
  CodeAsm& c = b.add_method(0x0001, "f", "(I)I");
  Label start = c.new_label(), stop = c.new_label();
  Label handler = c.new_label(), end = c.new_label();
  c.mark(start);
  c.iload(1);
  c.pop();
  c.mark(stop);
  c.goto_(end);
  c.mark(handler);
  c.astore(2);
  c.mark(end);
  c.iload(1);
  c.ireturn();
  c.handler(start, stop, handler, "java/lang/Exception");
  ClassModel cls = parse_class(b.build());
  EXPECT_EQ(cyclomatic_complexity(cls.methods[0]), 1u);
}

}  // namespace
}  // namespace testmap
