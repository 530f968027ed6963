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

#include "testmap/classfile.hpp"

namespace testmap {
namespace {

TEST(DescriptorTest, ValidFieldDescriptors) {
  EXPECT_TRUE(is_valid_field_descriptor("I"));
  EXPECT_TRUE(is_valid_field_descriptor("J"));
  EXPECT_TRUE(is_valid_field_descriptor("Ljava/lang/String;"));
  EXPECT_TRUE(is_valid_field_descriptor("[I"));
  EXPECT_TRUE(is_valid_field_descriptor("[[Ljava/util/Map;"));
}

TEST(DescriptorTest, InvalidFieldDescriptors) {
  EXPECT_FALSE(is_valid_field_descriptor(""));
  EXPECT_FALSE(is_valid_field_descriptor("X"));
  EXPECT_FALSE(is_valid_field_descriptor("L;"));
  EXPECT_FALSE(is_valid_field_descriptor("Ljava/lang/String"));
  EXPECT_FALSE(is_valid_field_descriptor("II"));
  EXPECT_FALSE(is_valid_field_descriptor("["));
}

TEST(DescriptorTest, ValidMethodDescriptors) {
  EXPECT_TRUE(is_valid_method_descriptor("()V"));
  EXPECT_TRUE(is_valid_method_descriptor("(IJ)Ljava/lang/String;"));
  EXPECT_TRUE(is_valid_method_descriptor("([Ljava/lang/String;)V"));
  EXPECT_TRUE(is_valid_method_descriptor("(Ljava/time/Clock;)Ljava/time/LocalDateTime;"));
}

TEST(DescriptorTest, InvalidMethodDescriptors) {
  EXPECT_FALSE(is_valid_method_descriptor(""));
  EXPECT_FALSE(is_valid_method_descriptor("()"));
  EXPECT_FALSE(is_valid_method_descriptor("(V)V"));
  EXPECT_FALSE(is_valid_method_descriptor("I"));
  EXPECT_FALSE(is_valid_method_descriptor("()VV"));
  EXPECT_FALSE(is_valid_method_descriptor("(I"));
}

TEST(DescriptorTest, ArgSlots) {
  EXPECT_EQ(method_arg_slots("()V"), 0);
  EXPECT_EQ(method_arg_slots("(I)V"), 1);
  EXPECT_EQ(method_arg_slots("(IJ)V"), 3);
  EXPECT_EQ(method_arg_slots("(JD)V"), 4);
  EXPECT_EQ(method_arg_slots("(Ljava/lang/String;I)V"), 2);
  EXPECT_EQ(method_arg_slots("([J)V"), 1);  // arrays are references
}

TEST(DescriptorTest, ReturnSlots) {
  EXPECT_EQ(method_return_slots("()V"), 0);
  EXPECT_EQ(method_return_slots("()I"), 1);
  EXPECT_EQ(method_return_slots("()J"), 2);
  EXPECT_EQ(method_return_slots("()D"), 2);
  EXPECT_EQ(method_return_slots("()[J"), 1);
  EXPECT_TRUE(method_returns_void("(III)V"));
  EXPECT_FALSE(method_returns_void("()I"));
}

TEST(DescriptorTest, ArgTypes) {
  auto types = method_arg_types("(IJLjava/lang/String;[B)V");
  ASSERT_EQ(types.size(), 4u);
  EXPECT_EQ(types[0], "I");
  EXPECT_EQ(types[1], "J");
  EXPECT_EQ(types[2], "Ljava/lang/String;");
  EXPECT_EQ(types[3], "[B");
}

TEST(DescriptorTest, DottedName) {
  EXPECT_EQ(dotted_name("java/time/LocalDateTime"), "java.time.LocalDateTime");
  EXPECT_EQ(dotted_name("Simple"), "Simple");
}

}  // namespace
}  // namespace testmap
