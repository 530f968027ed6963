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

#include <random>

#include "support/class_builder.hpp"
#include "support/corpora.hpp"
#include "testmap/hierarchy.hpp"
#include "testmap/knowledge.hpp"
#include "testmap/mockability.hpp"
#include "testmap/opcodes.hpp"

namespace testmap {
namespace {

using fixtures::ClassBuilder;
using fixtures::CodeAsm;

struct Analysis {
  ClassPool pool;
  TypeHierarchy hierarchy;
  CallGraph graph;
  KnowledgeBase kb;
  std::map<MethodId, SimResult> sims;
  MockabilityResult result;
};

Analysis analyze_fixture(const fixtures::FixtureSet& set,
                         const InjectabilityMap& overrides = {}) {
  Analysis a;
  a.kb = builtin_knowledge_base();
  for (const auto& [name, bytes] : set.classes) {
    a.pool.add(parse_class(bytes), nullptr);
  }
  a.hierarchy = TypeHierarchy::build(a.pool);
  for (const auto& cls : a.pool.classes()) {
    for (const auto& m : cls.methods) {
      if (m.has_body()) a.sims.emplace(m.id, simulate_receivers(m));
    }
  }
  a.graph = CallGraph::build(a.pool, a.hierarchy, a.sims);
  InjectabilityMap injectability = compute_injectability(a.pool, a.sims);
  a.result = compute_nonmockable(a.graph, a.kb, a.pool, a.hierarchy,
                                 injectability, overrides);
  return a;
}

// --- receiver provenance ---------------------------------------------------

TEST(SimulateReceiversTest, ParameterReceiver) {
  ClassBuilder b(0x0001, "sim/P");
  CodeAsm& c = b.add_method(0x0001, "f", "(Lsim/Dep;)V");
  c.aload(1);
  c.invokevirtual("sim/Dep", "run", "()V");
  c.vreturn();
  ClassModel cls = parse_class(b.build());
  SimResult sim = simulate_receivers(cls.methods[0]);
  ASSERT_EQ(sim.call_receivers.size(), 1u);
  const Provenance& p = sim.call_receivers.begin()->second;
  EXPECT_EQ(p.kind, ProvenanceKind::Parameter);
  EXPECT_EQ(p.param_index, 1);
}

TEST(SimulateReceiversTest, OwnedClientConstructorStoresNewInstance) {
  ClassModel app = parse_class(fixtures::before_corpus().classes[3].second);
  const MethodModel* ctor = app.find_method("<init>", "()V");
  ASSERT_NE(ctor, nullptr);
  SimResult sim = simulate_receivers(*ctor);
  bool found = false;
  for (const auto& store : sim.stores) {
    if (store.field.name != "client") continue;
    found = true;
    EXPECT_EQ(store.value.kind, ProvenanceKind::NewInstance);
    EXPECT_EQ(store.value.type_name, "shop/Client");
    EXPECT_EQ(store.receiver.kind, ProvenanceKind::ThisRef);
  }
  EXPECT_TRUE(found);
}

TEST(SimulateReceiversTest, SendReadsClientField) {
  ClassModel app = parse_class(fixtures::before_corpus().classes[3].second);
  const MethodModel* send = app.find_method("send", "(Lshop/Message;)V");
  ASSERT_NE(send, nullptr);
  SimResult sim = simulate_receivers(*send);
  bool client_call = false, logger_call = false;
  for (const auto& ins : send->instructions) {
    if (!ins.is_invoke()) continue;
    const Provenance& p = sim.call_receivers.at(ins.offset);
    if (ins.callee.name == "call") {
      client_call = true;
      EXPECT_EQ(p.kind, ProvenanceKind::FieldRead);
      EXPECT_EQ(p.field.name, "client");
    } else if (ins.callee.name == "error") {
      logger_call = true;
      EXPECT_EQ(p.kind, ProvenanceKind::StaticFieldRead);
      EXPECT_EQ(p.field.name, "logger");
    }
  }
  EXPECT_TRUE(client_call);
  EXPECT_TRUE(logger_call);
}

TEST(SimulateReceiversTest, CheckcastPreservesIdentity) {
  ClassBuilder b(0x0001, "sim/Cast");
  CodeAsm& c = b.add_method(0x0001, "f", "(Ljava/lang/Object;)V");
  c.aload(1);
  c.checkcast("sim/Dep");
  c.invokevirtual("sim/Dep", "run", "()V");
  c.vreturn();
  ClassModel cls = parse_class(b.build());
  SimResult sim = simulate_receivers(cls.methods[0]);
  ASSERT_EQ(sim.call_receivers.size(), 1u);
  EXPECT_EQ(sim.call_receivers.begin()->second.kind,
            ProvenanceKind::Parameter);
}

TEST(SimulateReceiversTest, CategoryTwoValuesKeepTheStackShapeStraight) {
  ClassBuilder b(0x0001, "sim/Wide");
  // f(J, Dep): the two-slot long argument must not shift the receiver slot.
  CodeAsm& c = b.add_method(0x0001, "f", "(JLsim/Dep;)J", 10, 8);
  c.aload(3);
  c.lload(1);
  c.invokevirtual("sim/Dep", "scale", "(J)J");
  c.lload(1);
  c.op(op::ladd);
  c.lreturn();
  ClassModel cls = parse_class(b.build());
  SimResult sim = simulate_receivers(cls.methods[0]);
  EXPECT_FALSE(sim.degraded);
  ASSERT_EQ(sim.call_receivers.size(), 1u);
  const Provenance& p = sim.call_receivers.begin()->second;
  EXPECT_EQ(p.kind, ProvenanceKind::Parameter);
  EXPECT_EQ(p.param_index, 3);
}

TEST(SimulateReceiversTest, JoinOfDifferentSourcesIsUnknown) {
  ClassBuilder b(0x0001, "sim/J");
  b.add_field(0x0002, "dep", "Lsim/Dep;");
  CodeAsm& c = b.add_method(0x0001, "f", "(ZLsim/Dep;)V", 8, 8);
  auto use_param = c.new_label();
  auto call = c.new_label();
  c.iload(1);
  c.branch(op::ifeq, use_param);
  c.aload(0);
  c.getfield("sim/J", "dep", "Lsim/Dep;");
  c.astore(3);
  c.goto_(call);
  c.mark(use_param);
  c.aload(2);
  c.astore(3);
  c.mark(call);
  c.aload(3);
  c.invokevirtual("sim/Dep", "run", "()V");
  c.vreturn();
  ClassModel cls = parse_class(b.build());
  SimResult sim = simulate_receivers(cls.methods[0]);
  ASSERT_EQ(sim.call_receivers.size(), 1u);
  EXPECT_EQ(sim.call_receivers.begin()->second.kind, ProvenanceKind::Unknown);
}

// --- field injectability ---------------------------------------------------

TEST(FieldInjectabilityTest, SetterMakesClockInjectable) {
  ClassPool pool;
  for (const auto& [name, bytes] : fixtures::after_corpus().classes) {
    pool.add(parse_class(bytes), nullptr);
  }
  const ClassModel* product = pool.find("shop/Product");
  ASSERT_NE(product, nullptr);
  const FieldModel* clock = product->find_field("clock");
  ASSERT_NE(clock, nullptr);
  EXPECT_EQ(field_injectability(*product, *clock, pool),
            Injectability::Injectable);
}

TEST(FieldInjectabilityTest, OwnedClientIsNonInjectable) {
  ClassPool pool;
  for (const auto& [name, bytes] : fixtures::before_corpus().classes) {
    pool.add(parse_class(bytes), nullptr);
  }
  const ClassModel* app = pool.find("shop/App");
  const FieldModel* client = app->find_field("client");
  ASSERT_NE(client, nullptr);
  EXPECT_EQ(field_injectability(*app, *client, pool),
            Injectability::NonInjectable);
}

TEST(FieldInjectabilityTest, ConstructorParameterMakesClientInjectable) {
  ClassPool pool;
  for (const auto& [name, bytes] : fixtures::after_corpus().classes) {
    pool.add(parse_class(bytes), nullptr);
  }
  const ClassModel* app = pool.find("shop/App");
  const FieldModel* client = app->find_field("client");
  ASSERT_NE(client, nullptr);
  EXPECT_EQ(field_injectability(*app, *client, pool),
            Injectability::Injectable);
}

TEST(FieldInjectabilityTest, PublicNonFinalFieldIsInjectable) {
  ClassBuilder b(0x0001, "fi/Open");
  b.add_field(0x0001, "value", "Lfi/Dep;");
  ClassPool pool;
  pool.add(parse_class(b.build()), nullptr);
  const ClassModel* cls = pool.find("fi/Open");
  EXPECT_EQ(field_injectability(*cls, cls->fields[0], pool),
            Injectability::Injectable);
}

// --- non-mockable fixed point ----------------------------------------------

TEST(ComputeNonMockableTest, WallClockProductIsNonMockable) {
  Analysis a = analyze_fixture(fixtures::before_corpus());
  MethodId add{"shop/Product", "addExpiryDate", "()V"};
  MethodId expired{"shop/Product", "isExpired", "()Z"};
  ASSERT_TRUE(a.result.is_non_mockable(add));
  ASSERT_TRUE(a.result.is_non_mockable(expired));
  EXPECT_EQ(a.result.verdicts.at(add).category, Category::Time);
  EXPECT_EQ(a.result.verdicts.at(expired).category, Category::Time);
}

TEST(ComputeNonMockableTest, InjectedClockProductIsMockable) {
  Analysis a = analyze_fixture(fixtures::after_corpus());
  EXPECT_FALSE(a.result.is_non_mockable(
      {"shop/Product", "addExpiryDate", "()V"}));
  EXPECT_FALSE(a.result.is_non_mockable({"shop/Product", "isExpired", "()Z"}));
}

TEST(ComputeNonMockableTest, SendThroughOwnedClientIsNetwork) {
  Analysis a = analyze_fixture(fixtures::before_corpus());
  MethodId send{"shop/App", "send", "(Lshop/Message;)V"};
  ASSERT_TRUE(a.result.is_non_mockable(send));
  EXPECT_EQ(a.result.verdicts.at(send).category, Category::Network);
  ASSERT_TRUE(a.result.verdicts.at(send).witness.has_value());
  EXPECT_EQ(a.result.verdicts.at(send).witness->declared.name, "call");
}

TEST(ComputeNonMockableTest, SendWithInjectedClientIsMockable) {
  Analysis a = analyze_fixture(fixtures::after_corpus());
  EXPECT_FALSE(
      a.result.is_non_mockable({"shop/App", "send", "(Lshop/Message;)V"}));
  // The client itself still talks to the network.
  EXPECT_TRUE(a.result.is_non_mockable(
      {"shop/Client", "call", "(Lshop/Message;)V"}));
}

TEST(ComputeNonMockableTest, EmptyBodyIsMockable) {
  ClassBuilder b(0x0001, "mm/Empty");
  CodeAsm& c = b.add_method(0x0001, "f", "()V");
  c.vreturn();
  fixtures::FixtureSet set;
  set.classes.emplace_back("mm/Empty", b.build());
  Analysis a = analyze_fixture(set);
  EXPECT_FALSE(a.result.is_non_mockable({"mm/Empty", "f", "()V"}));
}

TEST(ComputeNonMockableTest, StaticMockingSwitchCutsStaticChains) {
  fixtures::FixtureSet set = fixtures::before_corpus();
  Analysis a;
  a.kb = builtin_knowledge_base();
  a.kb.set_mock_static_methods(true);
  for (const auto& [name, bytes] : set.classes) {
    a.pool.add(parse_class(bytes), nullptr);
  }
  a.hierarchy = TypeHierarchy::build(a.pool);
  for (const auto& cls : a.pool.classes()) {
    for (const auto& m : cls.methods) {
      if (m.has_body()) a.sims.emplace(m.id, simulate_receivers(m));
    }
  }
  a.graph = CallGraph::build(a.pool, a.hierarchy, a.sims);
  InjectabilityMap injectability = compute_injectability(a.pool, a.sims);
  a.result = compute_nonmockable(a.graph, a.kb, a.pool, a.hierarchy,
                                 injectability);
  // With static mocking allowed, the wall-clock reads can be stubbed.
  EXPECT_FALSE(a.result.is_non_mockable(
      {"shop/Product", "addExpiryDate", "()V"}));
}

// Under-approximation: adding must-mock entries never shrinks the set.
TEST(ComputeNonMockableTest, KbMonotonicity) {
  fixtures::FixtureSet set = fixtures::before_corpus();
  for (const auto& [name, bytes] : fixtures::mail_corpus().classes) {
    set.classes.emplace_back(name, bytes);
  }
  Analysis base = analyze_fixture(set);

  std::set<MethodId> base_marked;
  for (const auto& [id, v] : base.result.verdicts) {
    if (v.non_mockable) base_marked.insert(id);
  }

  std::mt19937_64 rng(1234);
  std::vector<std::string> owners = {"shop.*", "mail.*", "java.util.*", "*",
                                     "shop.Client", "java.time.*"};
  std::vector<std::string> names = {"*", "call", "get*", "now", "ping"};
  for (int round = 0; round < 50; ++round) {
    KnowledgeBase kb = builtin_knowledge_base();
    KnowledgeEntry e;
    e.pattern.owner = owners[rng() % owners.size()];
    e.pattern.name = names[rng() % names.size()];
    e.pattern.descriptor = "*";
    e.classification.kind = CalleeKind::MustMock;
    e.classification.category = static_cast<Category>(rng() % kCategoryCount);
    e.provenance = "prop";
    kb.append(e);

    InjectabilityMap injectability =
        compute_injectability(base.pool, base.sims);
    MockabilityResult extended = compute_nonmockable(
        base.graph, kb, base.pool, base.hierarchy, injectability);
    for (const auto& id : base_marked) {
      EXPECT_TRUE(extended.is_non_mockable(id))
          << "entry " << e.pattern.owner << "#" << e.pattern.name
          << " removed verdict for " << id.display();
    }
  }
}

// Flipping one field to injectable never adds verdicts.
TEST(ComputeNonMockableTest, InjectabilityCutLaw) {
  fixtures::FixtureSet set = fixtures::before_corpus();
  Analysis base = analyze_fixture(set);
  std::set<std::string> field_keys;
  for (const auto& cls : base.pool.classes()) {
    for (const auto& f : cls.fields) {
      field_keys.insert(field_key(cls.internal_name, f));
    }
  }
  for (const auto& key : field_keys) {
    InjectabilityMap overrides{{key, Injectability::Injectable}};
    Analysis flipped = analyze_fixture(set, overrides);
    for (const auto& [id, v] : flipped.result.verdicts) {
      if (v.non_mockable) {
        EXPECT_TRUE(base.result.is_non_mockable(id))
            << "flipping " << key << " added verdict for " << id.display();
      }
    }
  }
  // And the specific chain: making the client injectable frees send.
  InjectabilityMap fix{{"shop/App.client:Lshop/Client;",
                        Injectability::Injectable}};
  Analysis fixed = analyze_fixture(set, fix);
  EXPECT_FALSE(
      fixed.result.is_non_mockable({"shop/App", "send", "(Lshop/Message;)V"}));
}

// Category propagation must follow witness chains even when the caller
// sorts before the intermediate hop (a/Top.go -> z/Mid.step -> z/Mid.io ->
// Files): a naive one-pass resolution in id order reads a placeholder.
TEST(ComputeNonMockableTest, CategoryResolvesThroughLaterSortingHops) {
  ClassBuilder mid(0x0001, "z/Mid");
  {
    auto& ctor = mid.add_method(0x0001, "<init>", "()V");
    ctor.aload(0);
    ctor.invokespecial("java/lang/Object", "<init>", "()V");
    ctor.vreturn();
    auto& io = mid.add_method(0x0001, "io", "()V");
    io.ldc_string("f");
    io.iconst(0);
    io.anewarray("java/lang/String");
    io.invokestatic("java/nio/file/Paths", "get",
                    "(Ljava/lang/String;[Ljava/lang/String;)Ljava/nio/file/Path;");
    io.invokestatic("java/nio/file/Files", "readAllBytes",
                    "(Ljava/nio/file/Path;)[B");
    io.pop();
    io.vreturn();
    auto& step = mid.add_method(0x0001, "step", "()V");
    step.aload(0);
    step.invokevirtual("z/Mid", "io", "()V");
    step.vreturn();
  }
  ClassBuilder top(0x0001, "a/Top");
  {
    auto& ctor = top.add_method(0x0001, "<init>", "()V");
    ctor.aload(0);
    ctor.invokespecial("java/lang/Object", "<init>", "()V");
    ctor.vreturn();
    auto& go = top.add_method(0x0001, "go", "()V");
    go.new_("z/Mid");
    go.dup();
    go.invokespecial("z/Mid", "<init>", "()V");
    go.invokevirtual("z/Mid", "step", "()V");
    go.vreturn();
  }
  fixtures::FixtureSet set;
  set.classes.emplace_back("a/Top", top.build());
  set.classes.emplace_back("z/Mid", mid.build());
  Analysis a = analyze_fixture(set);
  MethodId go{"a/Top", "go", "()V"};
  ASSERT_TRUE(a.result.is_non_mockable(go));
  EXPECT_EQ(a.result.verdicts.at(go).category, Category::FileSystem);
  EXPECT_EQ(a.result.verdicts.at({"z/Mid", "step", "()V"}).category,
            Category::FileSystem);
}

// The least fixed point does not depend on scheduling: feeding the pool in
// reversed class order changes every worklist seed order but not the map.
TEST(ComputeNonMockableTest, VerdictsIndependentOfPoolOrder) {
  fixtures::FixtureSet set = fixtures::before_corpus();
  for (const auto& [name, bytes] : fixtures::mail_corpus().classes) {
    set.classes.emplace_back(name, bytes);
  }
  fixtures::FixtureSet reversed;
  reversed.classes.assign(set.classes.rbegin(), set.classes.rend());

  Analysis forward = analyze_fixture(set);
  Analysis backward = analyze_fixture(reversed);
  ASSERT_EQ(forward.result.verdicts.size(), backward.result.verdicts.size());
  for (const auto& [id, v] : forward.result.verdicts) {
    auto it = backward.result.verdicts.find(id);
    ASSERT_NE(it, backward.result.verdicts.end()) << id.display();
    EXPECT_EQ(v.non_mockable, it->second.non_mockable) << id.display();
    EXPECT_EQ(v.category, it->second.category) << id.display();
    EXPECT_EQ(v.witness.has_value(), it->second.witness.has_value());
    if (v.witness && it->second.witness) {
      EXPECT_EQ(v.witness->offset, it->second.witness->offset);
      EXPECT_EQ(v.witness->declared, it->second.witness->declared);
    }
  }
}

// Every stored witness is a real violating edge under the final verdicts.
TEST(ComputeNonMockableTest, WitnessesAreWellFounded) {
  fixtures::FixtureSet set = fixtures::before_corpus();
  for (const auto& [name, bytes] : fixtures::mail_corpus().classes) {
    set.classes.emplace_back(name, bytes);
  }
  Analysis a = analyze_fixture(set);
  for (const auto& [id, v] : a.result.verdicts) {
    if (!v.non_mockable || !v.witness) continue;
    const CallSite& site = *v.witness;
    EXPECT_EQ(site.caller, id);
    bool declared_must_mock =
        classify_callee(site.declared, a.kb).is_must_mock();
    if (!declared_must_mock) {
      ASSERT_FALSE(site.resolved_targets.empty());
      EXPECT_FALSE(site.targets_unknown);
      for (const auto& t : site.resolved_targets) {
        EXPECT_TRUE(a.result.is_non_mockable(t) ||
                    classify_callee(t, a.kb).is_must_mock());
      }
    }
  }
}

// --- witness traces ----------------------------------------------------------

TEST(ExplainTraceTest, MailChainReachesFileSystemRoot) {
  Analysis a = analyze_fixture(fixtures::mail_corpus());
  MethodId test_connection{"mail/MailService", "testConnection", "()Z"};
  auto diag = explain_trace(test_connection, a.result, a.graph, a.kb, a.pool,
                            a.hierarchy);
  ASSERT_TRUE(diag.has_value());
  EXPECT_EQ(diag->category, Category::FileSystem);
  ASSERT_EQ(diag->chain.size(), 4u);
  EXPECT_EQ(diag->chain[0].method, test_connection);
  EXPECT_EQ(diag->chain[1].method.name, "getMailSender");
  EXPECT_EQ(diag->chain[2].method.name, "loadConfig");
  EXPECT_EQ(diag->chain[3].method,
            (MethodId{"java/nio/file/Files", "readAllBytes",
                      "(Ljava/nio/file/Path;)[B"}));
  // Per-hop lines point at the outgoing call.
  EXPECT_EQ(diag->chain[0].line, 6u);
  EXPECT_EQ(diag->chain[1].line, 10u);
  EXPECT_EQ(diag->chain[2].line, 16u);
}

TEST(ExplainTraceTest, DirectCallHasChainOfTwo) {
  Analysis a = analyze_fixture(fixtures::before_corpus());
  auto diag = explain_trace({"shop/Product", "addExpiryDate", "()V"}, a.result,
                            a.graph, a.kb, a.pool, a.hierarchy);
  ASSERT_TRUE(diag.has_value());
  ASSERT_EQ(diag->chain.size(), 2u);
  EXPECT_EQ(diag->chain[1].method.name, "now");
  EXPECT_EQ(diag->category, Category::Time);
}

TEST(ExplainTraceTest, MockableMethodIsNotApplicable) {
  Analysis a = analyze_fixture(fixtures::after_corpus());
  auto diag = explain_trace({"shop/Product", "isExpired", "()Z"}, a.result,
                            a.graph, a.kb, a.pool, a.hierarchy);
  EXPECT_FALSE(diag.has_value());
}

TEST(ExplainTraceTest, SendTraceNamesNonInjectableReceiverField) {
  Analysis a = analyze_fixture(fixtures::before_corpus());
  auto diag = explain_trace({"shop/App", "send", "(Lshop/Message;)V"}, a.result,
                            a.graph, a.kb, a.pool, a.hierarchy);
  ASSERT_TRUE(diag.has_value());
  ASSERT_TRUE(diag->receiver_field.has_value());
  EXPECT_EQ(diag->receiver_field->owner, "shop/App");
  EXPECT_EQ(diag->receiver_field->name, "client");
  EXPECT_EQ(diag->category, Category::Network);
}

}  // namespace
}  // namespace testmap
