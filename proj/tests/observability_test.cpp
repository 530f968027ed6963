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

#include "support/class_builder.hpp"
#include "support/corpora.hpp"
#include "testmap/observability.hpp"
#include "testmap/opcodes.hpp"

namespace testmap {
namespace {

using fixtures::ClassBuilder;
using fixtures::CodeAsm;
using fixtures::Label;

struct ObsFixture {
  ClassPool pool;
  TypeHierarchy hierarchy;
  CallGraph graph;
  KnowledgeBase kb;
  std::map<MethodId, SimResult> sims;
  InjectabilityMap injectability;
  ObservabilityContext ctx;

  explicit ObsFixture(const fixtures::FixtureSet& set) {
    kb = builtin_knowledge_base();
    for (const auto& [name, bytes] : set.classes) {
      pool.add(parse_class(bytes), nullptr);
    }
    hierarchy = TypeHierarchy::build(pool);
    for (const auto& cls : pool.classes()) {
      for (const auto& m : cls.methods) {
        if (m.has_body()) sims.emplace(m.id, simulate_receivers(m));
      }
    }
    graph = CallGraph::build(pool, hierarchy, sims);
    injectability = compute_injectability(pool, sims);
    ctx.pool = &pool;
    ctx.hierarchy = &hierarchy;
    ctx.graph = &graph;
    ctx.kb = &kb;
    ctx.injectability = &injectability;
  }

  std::set<ObservationPoint> effects_of(const MethodId& id) {
    for (const auto& cls : pool.classes()) {
      for (const auto& m : cls.methods) {
        if (m.id == id) return observable_effects(m, sims.at(id), ctx);
      }
    }
    ADD_FAILURE() << "method not found: " << id.display();
    return {};
  }
};

bool contains_kind(const std::set<ObservationPoint>& effects,
                   ObservationKind kind) {
  for (const auto& e : effects) {
    if (e.kind == kind) return true;
  }
  return false;
}

TEST(ObservableEffectsTest, NonVoidReturnIsObservable) {
  ObsFixture f(fixtures::before_corpus());
  auto effects = f.effects_of({"shop/Product", "isExpired", "()Z"});
  EXPECT_TRUE(contains_kind(effects, ObservationKind::ReturnValue));
}

// The shop App's send: void, exception swallowed into a sink, client owned by
// the object. Nothing to observe.
TEST(ObservableEffectsTest, OwnedClientSendHasNoEffects) {
  ObsFixture f(fixtures::before_corpus());
  auto effects = f.effects_of({"shop/App", "send", "(Lshop/Message;)V"});
  EXPECT_TRUE(effects.empty());
}

// After constructor injection the mocked client is an observation point.
TEST(ObservableEffectsTest, InjectedClientSendIsObservableThroughMock) {
  ObsFixture f(fixtures::after_corpus());
  auto effects = f.effects_of({"shop/App", "send", "(Lshop/Message;)V"});
  ASSERT_TRUE(contains_kind(effects, ObservationKind::MockableDependencyCall));
  bool found = false;
  for (const auto& e : effects) {
    if (e.kind == ObservationKind::MockableDependencyCall) {
      EXPECT_EQ(e.callee.name, "call");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(ComputeNonObservableTest, ShopSendMembership) {
  ObsFixture before(fixtures::before_corpus());
  auto non_obs =
      compute_nonobservable(before.pool, before.sims, before.ctx);
  EXPECT_TRUE(
      non_obs.count({"shop/App", "send", "(Lshop/Message;)V"}));
  // Non-void methods are never in the set.
  EXPECT_FALSE(non_obs.count({"shop/Product", "isExpired", "()Z"}));

  ObsFixture after(fixtures::after_corpus());
  auto non_obs_after =
      compute_nonobservable(after.pool, after.sims, after.ctx);
  EXPECT_FALSE(
      non_obs_after.count({"shop/App", "send", "(Lshop/Message;)V"}));
}

// Stores to fields with a trivial getter count as observable.
TEST(ObservableEffectsTest, FieldWithTrivialGetterIsReadable) {
  ClassBuilder b(0x0001, "obs/Bean");
  b.add_field(0x0002, "state", "I");
  CodeAsm& set = b.add_method(0x0001, "update", "(I)V");
  set.aload(0);
  set.iload(1);
  set.putfield("obs/Bean", "state", "I");
  set.vreturn();
  CodeAsm& get = b.add_method(0x0001, "getState", "()I");
  get.aload(0);
  get.getfield("obs/Bean", "state", "I");
  get.ireturn();
  fixtures::FixtureSet fs;
  fs.classes.emplace_back("obs/Bean", b.build());
  ObsFixture f(fs);
  auto effects = f.effects_of({"obs/Bean", "update", "(I)V"});
  EXPECT_TRUE(contains_kind(effects, ObservationKind::ReadableFieldWrite));
}

// A private field without a getter gives nothing to assert on.
TEST(ObservableEffectsTest, PrivateFieldWithoutGetterIsNotReadable) {
  ClassBuilder b(0x0001, "obs/Opaque");
  b.add_field(0x0002, "state", "I");
  CodeAsm& set = b.add_method(0x0001, "update", "(I)V");
  set.aload(0);
  set.iload(1);
  set.putfield("obs/Opaque", "state", "I");
  set.vreturn();
  fixtures::FixtureSet fs;
  fs.classes.emplace_back("obs/Opaque", b.build());
  ObsFixture f(fs);
  EXPECT_TRUE(f.effects_of({"obs/Opaque", "update", "(I)V"}).empty());
}

// Builder-style code: a store into a readable field of a parameter object
// is something the test can assert on afterwards.
TEST(ObservableEffectsTest, StoreIntoParameterObjectFieldCounts) {
  ClassBuilder data(0x0001, "obs/Data");
  data.add_field(0x0001, "value", "I");  // public
  ClassBuilder b(0x0001, "obs/Filler");
  CodeAsm& c = b.add_method(0x0001, "fill", "(Lobs/Data;)V");
  c.aload(1);
  c.iconst(5);
  c.putfield("obs/Data", "value", "I");
  c.vreturn();
  fixtures::FixtureSet fs;
  fs.classes.emplace_back("obs/Data", data.build());
  fs.classes.emplace_back("obs/Filler", b.build());
  ObsFixture f(fs);
  auto effects = f.effects_of({"obs/Filler", "fill", "(Lobs/Data;)V"});
  EXPECT_TRUE(contains_kind(effects, ObservationKind::ReadableFieldWrite));
  auto non_obs = compute_nonobservable(f.pool, f.sims, f.ctx);
  EXPECT_FALSE(non_obs.count({"obs/Filler", "fill", "(Lobs/Data;)V"}));
}

TEST(ObservableEffectsTest, UncaughtThrowEscapes) {
  ClassBuilder b(0x0001, "obs/Thrower");
  CodeAsm& c = b.add_method(0x0001, "boom", "()V");
  c.new_("java/lang/IllegalStateException");
  c.dup();
  c.invokespecial("java/lang/IllegalStateException", "<init>", "()V");
  c.athrow();
  fixtures::FixtureSet fs;
  fs.classes.emplace_back("obs/Thrower", b.build());
  ObsFixture f(fs);
  auto effects = f.effects_of({"obs/Thrower", "boom", "()V"});
  ASSERT_TRUE(contains_kind(effects, ObservationKind::EscapingException));
  for (const auto& e : effects) {
    if (e.kind == ObservationKind::EscapingException) {
      EXPECT_EQ(e.exception_type, "java/lang/IllegalStateException");
    }
  }
}

TEST(ObservableEffectsTest, RethrowingHandlerStillEscapes) {
  ClassBuilder b(0x0001, "obs/Rethrow");
  CodeAsm& c = b.add_method(0x0001, "boom", "()V");
  Label start = c.new_label(), stop = c.new_label();
  Label handler = c.new_label(), end = c.new_label();
  c.mark(start);
  c.new_("java/lang/IllegalStateException");
  c.dup();
  c.invokespecial("java/lang/IllegalStateException", "<init>", "()V");
  c.athrow();
  c.mark(stop);
  c.mark(handler);
  c.astore(1);
  c.aload(1);
  c.checkcast("java/lang/RuntimeException");
  c.athrow();
  c.mark(end);
  c.vreturn();
  c.handler(start, stop, handler, "java/lang/Exception");
  fixtures::FixtureSet fs;
  fs.classes.emplace_back("obs/Rethrow", b.build());
  ObsFixture f(fs);
  EXPECT_TRUE(contains_kind(f.effects_of({"obs/Rethrow", "boom", "()V"}),
                            ObservationKind::EscapingException));
}

TEST(ObservableEffectsTest, SwallowedThrowDoesNotEscape) {
  ClassBuilder b(0x0001, "obs/Swallow");
  CodeAsm& c = b.add_method(0x0001, "boom", "()I");
  Label start = c.new_label(), stop = c.new_label();
  Label handler = c.new_label();
  c.mark(start);
  c.new_("java/lang/IllegalStateException");
  c.dup();
  c.invokespecial("java/lang/IllegalStateException", "<init>", "()V");
  c.athrow();
  c.mark(stop);
  c.mark(handler);
  c.astore(1);
  c.iconst(0);
  c.ireturn();
  c.handler(start, stop, handler, "java/lang/Exception");
  fixtures::FixtureSet fs;
  fs.classes.emplace_back("obs/Swallow", b.build());
  ObsFixture f(fs);
  // The return value is observable; the swallowed exception is not.
  auto effects = f.effects_of({"obs/Swallow", "boom", "()I"});
  EXPECT_TRUE(contains_kind(effects, ObservationKind::ReturnValue));
  EXPECT_FALSE(contains_kind(effects, ObservationKind::EscapingException));
}

// A handler that persists the caught exception to a readable field keeps
// the failure observable.
TEST(ObservableEffectsTest, HandlerPersistingExceptionEscapes) {
  ClassBuilder b(0x0001, "obs/Keeper");
  b.add_field(0x0001, "lastError", "Ljava/lang/Throwable;");
  CodeAsm& c = b.add_method(0x0001, "boom", "()V");
  Label start = c.new_label(), stop = c.new_label();
  Label handler = c.new_label(), end = c.new_label();
  c.mark(start);
  c.new_("java/lang/IllegalStateException");
  c.dup();
  c.invokespecial("java/lang/IllegalStateException", "<init>", "()V");
  c.athrow();
  c.mark(stop);
  c.mark(handler);
  c.astore(1);
  c.aload(0);
  c.aload(1);
  c.putfield("obs/Keeper", "lastError", "Ljava/lang/Throwable;");
  c.mark(end);
  c.vreturn();
  c.handler(start, stop, handler, "java/lang/Exception");
  fixtures::FixtureSet fs;
  fs.classes.emplace_back("obs/Keeper", b.build());
  ObsFixture f(fs);
  auto effects = f.effects_of({"obs/Keeper", "boom", "()V"});
  EXPECT_TRUE(contains_kind(effects, ObservationKind::EscapingException));
  EXPECT_TRUE(contains_kind(effects, ObservationKind::ReadableFieldWrite));
}

TEST(ObservableEffectsTest, DeclaredExceptionEscapes) {
  ClassBuilder b(0x0001, "obs/Declared");
  CodeAsm& c = b.add_method(0x0001, "risky", "()V");
  c.vreturn();
  b.declare_exception("risky", "java/io/IOException");
  fixtures::FixtureSet fs;
  fs.classes.emplace_back("obs/Declared", b.build());
  ObsFixture f(fs);
  EXPECT_TRUE(contains_kind(f.effects_of({"obs/Declared", "risky", "()V"}),
                            ObservationKind::EscapingException));
}

// Adding a sink entry never adds observation points.
TEST(ObservableEffectsTest, SinksContributeNothing) {
  fixtures::FixtureSet set = fixtures::after_corpus();
  ObsFixture f(set);
  MethodId send{"shop/App", "send", "(Lshop/Message;)V"};
  auto base_effects = f.effects_of(send);

  KnowledgeBase extended = builtin_knowledge_base();
  extended.append(KnowledgeEntry{{"shop.Client", "call", "*"},
                                 {CalleeKind::Sink, Category::Network},
                                 "test"});
  ObsFixture g(set);
  g.kb = extended;
  g.ctx.kb = &g.kb;
  auto sink_effects = g.effects_of(send);
  // The sink entry removed the only observation point and added none.
  for (const auto& e : sink_effects) {
    EXPECT_TRUE(base_effects.count(e));
  }
  EXPECT_LT(sink_effects.size(), base_effects.size());
}

// Making a receiver injectable never shrinks the effect set.
TEST(ObservableEffectsTest, MonotoneInInjectability) {
  fixtures::FixtureSet set = fixtures::before_corpus();
  ObsFixture base(set);
  MethodId send{"shop/App", "send", "(Lshop/Message;)V"};
  auto before = base.effects_of(send);

  ObsFixture flipped(set);
  flipped.injectability["shop/App.client:Lshop/Client;"] =
      Injectability::Injectable;
  auto after = flipped.effects_of(send);
  for (const auto& e : before) {
    EXPECT_TRUE(after.count(e));
  }
  EXPECT_GE(after.size(), before.size());
}

}  // namespace
}  // namespace testmap
