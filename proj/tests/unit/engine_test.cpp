#include <gtest/gtest.h>

#include "nstore/engine.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

namespace nstore {
namespace {

using testing::palette_payload;
using testing::two_locality_params;

SearchParams cues(std::initializer_list<const char*> labels) {
  SearchParams p;
  for (const char* l : labels) p.cues.push_back(Cue::labelled(l));
  return p;
}

Engine quiet_engine(HiveParams p = two_locality_params()) {
  p.retention_period = 1000000;
  return Engine(Memory({std::move(p)}), false);
}

TEST(SearchOrder, SortsByWeight) {
  Engine e = quiet_engine();
  Memory& m = e.memory();
  const NeuronId d0 = m.add_data_neuron(0, 0, palette_payload(1));
  const NeuronId d1 = m.add_data_neuron(0, 0, palette_payload(2));
  const NeuronId wolf = m.add_cue_neuron(0, Cue::labelled("Wolf"));
  m.adjust_association(wolf, d0, -29.0);  // 30
  m.adjust_association(wolf, d1, -49.0);  // 50
  e.update_memory_search_order(0);

  auto order = e.get_search_order(0, cues({"Wolf"}).cues, 0.0, std::nullopt);
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0].dn, d1);
  EXPECT_EQ(order[1].dn, d0);

  order = e.get_search_order(0, cues({"Wolf"}).cues, 40.0, std::nullopt);
  ASSERT_EQ(order.size(), 1u);
  EXPECT_EQ(order[0].dn, d1);

  const NeuronId fox = m.add_cue_neuron(0, Cue::labelled("Fox"));
  m.adjust_association(fox, d1, -5.0);
  e.update_memory_search_order(0);
  order = e.get_search_order(0, cues({"Wolf", "Fox"}).cues, 0.0, std::nullopt);
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0].dn, d1);
  EXPECT_EQ(order[1].dn, d0);

  order = e.get_search_order(0, cues({"Wolf"}).cues, 0.0, std::size_t{1});
  EXPECT_EQ(order.size(), 1u);
}

TEST(SearchOrder, FixedPointWithoutChanges) {
  Engine e = quiet_engine();
  Memory& m = e.memory();
  m.add_data_neuron(0, 0, palette_payload(1));
  m.add_data_neuron(0, 1, palette_payload(2));
  e.update_memory_search_order(0);
  const auto before = m.hive(0).search_orders();
  e.update_memory_search_order(0);
  EXPECT_EQ(m.hive(0).search_orders(), before);
}

TEST(SearchOrder, NewDataNeuronReachableFromDefaultCue) {
  Engine e = quiet_engine();
  Memory& m = e.memory();
  const NeuronId d = m.add_data_neuron(0, 1, palette_payload(1));
  e.update_memory_search_order(0);
  const auto& order = m.hive(0).search_order(*m.hive(0).default_cue(1));
  ASSERT_EQ(order.size(), 1u);
  EXPECT_EQ(order[0].dn, d);
}

TEST(SearchOrder, FullModeMatchesOracle) {
  HiveParams p = two_locality_params();
  p.graph_mode = GraphMode::full;
  Engine e = quiet_engine(p);
  Memory& m = e.memory();
  const NeuronId a = m.add_cue_neuron(0, Cue::labelled("A"));
  const NeuronId b = m.add_cue_neuron(0, Cue::labelled("B"));
  const NeuronId d0 = m.add_data_neuron(0, 0, palette_payload(1));
  const NeuronId d1 = m.add_data_neuron(0, 1, palette_payload(2));
  m.adjust_association(a, b, -40.0);
  m.adjust_association(b, d1, -60.0);
  m.adjust_association(a, d0, -10.0);
  e.update_memory_search_order(0);
  EXPECT_EQ(m.hive(0).search_orders(), testing::brute_force_search_orders(m, 0));
  // A reaches d1 through B: (41 + 61) / 2 = 51 beats the direct 11 to d0.
  const auto& order = m.hive(0).search_order(a);
  ASSERT_GE(order.size(), 2u);
  EXPECT_EQ(order[0].dn, d1);
  EXPECT_EQ(order[0].path, (std::vector<NeuronId>{a, b, d1}));
  EXPECT_EQ(order[0].avg_weight, 51.0);
}

TEST(SelectLocality, MappingRules) {
  Engine e = quiet_engine();
  const FeatureVector f(64, 0.0);
  EXPECT_EQ(e.select_locality(0, "fox", f), 0u);
  EXPECT_EQ(e.select_locality(0, "wolf", f), 0u);
  EXPECT_EQ(e.select_locality(0, "tree", f), 1u);

  HiveParams p = two_locality_params();
  p.localities[1].mapping.labels = {"fox"};
  Engine both = quiet_engine(p);
  EXPECT_EQ(both.select_locality(0, "fox", f), 0u);
}

TEST(Elasticity, CeilingStep) {
  Engine e = quiet_engine();
  Memory& m = e.memory();
  const NeuronId d = m.add_data_neuron(0, 1, palette_payload(1, 1000));
  m.adjust_strength(d, 5.0);  // 95
  const auto freed = e.elasticity(0, 1, 0);
  ASSERT_TRUE(freed.has_value());
  EXPECT_EQ(m.data(d).strength, 80.0);
  EXPECT_EQ(*freed, 950u - 800u);
  EXPECT_FALSE(e.elasticity(0, 1, 9).has_value());
}

TEST(Elasticity, MultiplicativeMode) {
  HiveParams p = two_locality_params();
  p.elasticity_mode = ElasticityMode::multiplicative;
  Engine e = quiet_engine(p);
  const NeuronId d = e.memory().add_data_neuron(0, 1, palette_payload(1));
  e.memory().adjust_strength(d, 50.0);
  e.elasticity(0, 1, 0);
  EXPECT_EQ(e.memory().data(d).strength, 40.0);
}

TEST(Capacity, UnboundedIsNoOp) {
  Engine e = quiet_engine();
  const NeuronId d = e.memory().add_data_neuron(0, 1, palette_payload(1));
  e.ensure_capacity(0, 1u << 30);
  EXPECT_EQ(e.memory().data(d).strength, 100.0);
}

TEST(Capacity, SingleElasticityPassOnLeastImportantLocality) {
  HiveParams p = two_locality_params();
  p.capacity_bytes = 3000;
  Engine e = quiet_engine(p);
  Memory& m = e.memory();
  const NeuronId keep = m.add_data_neuron(0, 0, palette_payload(1, 1000));
  const NeuronId a = m.add_data_neuron(0, 1, palette_payload(2, 1000));
  const NeuronId b = m.add_data_neuron(0, 1, palette_payload(3, 1000));
  // 3000 used, 300 needed: the first pass caps locality 1 at 80, freeing 400.
  e.ensure_capacity(0, 300);
  EXPECT_EQ(m.data(keep).strength, 100.0);
  EXPECT_EQ(m.data(keep).size_bytes(), 1000u);
  EXPECT_EQ(m.data(a).size_bytes(), 800u);
  EXPECT_EQ(m.data(b).size_bytes(), 800u);
  EXPECT_EQ(m.total_bytes(), 2600u);
}

TEST(Capacity, ExhaustedScheduleIsStorageFull) {
  HiveParams p = two_locality_params();
  p.capacity_bytes = 1000;
  Engine e = quiet_engine(p);
  e.memory().add_data_neuron(0, 0, palette_payload(1, 1000));
  EXPECT_THROW(e.ensure_capacity(0, 995), StorageFull);
  EXPECT_THROW(e.ensure_capacity(0, 1001), StorageFull);
  EXPECT_NO_THROW(e.ensure_capacity(0, 990));
}

TEST(Reaction, SuccessRestoresAndStrengthens) {
  Engine e = quiet_engine();
  Memory& m = e.memory();
  const NeuronId d = m.add_data_neuron(0, 0, palette_payload(1));
  const NeuronId wolf = m.add_cue_neuron(0, Cue::labelled("Wolf"));
  m.adjust_association(wolf, d, -19.0);  // 20
  m.adjust_strength(d, 40.0);
  e.reaction(0, d, {wolf, d}, 20.0, true, cues({"Wolf"}).cues, true, false);
  EXPECT_EQ(*m.hive(0).graph().weight(wolf, d), 40.0);
  EXPECT_EQ(m.data(d).strength, 100.0);
}

TEST(Reaction, FailureUnderKZeroLeavesWeights) {
  Engine e = quiet_engine();
  Memory& m = e.memory();
  const NeuronId d = m.add_data_neuron(0, 0, palette_payload(1));
  const NeuronId wolf = m.add_cue_neuron(0, Cue::labelled("Wolf"));
  m.adjust_association(wolf, d, -19.0);
  e.reaction(0, d, {wolf, d}, 20.0, false, cues({"Wolf"}).cues, true, false);
  EXPECT_EQ(*m.hive(0).graph().weight(wolf, d), 20.0);
  e.reaction(0, d, {wolf, d}, 15.0, false, cues({"Wolf"}).cues, true, true);
  EXPECT_EQ(*m.hive(0).graph().weight(wolf, d), 5.0);
  e.reaction(0, d, {wolf, d}, 15.0, false, cues({"Wolf"}).cues, true, true);
  EXPECT_EQ(*m.hive(0).graph().weight(wolf, d), 1.0);
}

TEST(Reaction, DanglingPathIsConsistencyError) {
  Engine e = quiet_engine();
  Memory& m = e.memory();
  const NeuronId d = m.add_data_neuron(0, 0, palette_payload(1));
  const NeuronId wolf = m.add_cue_neuron(0, Cue::labelled("Wolf"));
  EXPECT_THROW(e.reaction(0, d, {wolf, d}, 20.0, true, {}, true, false), ConsistencyError);
  EXPECT_THROW(e.reaction(0, d, {NeuronId::cue(77), d}, 20.0, true, {}, true, false),
               ConsistencyError);
}

TEST(Store, EmptyMemoryCreatesNeuron) {
  Engine e = quiet_engine();
  SearchParams p = cues({"Wolf"});
  const OpOutcome out = e.store(palette_payload(1), "wolf", p, {});
  EXPECT_EQ(out.kind, OutcomeKind::new_neuron);
  EXPECT_EQ(out.cost, 0u);
  const NeuronId wolf = *e.memory().find_cue(0, Cue::labelled("Wolf"));
  EXPECT_EQ(*e.memory().hive(0).graph().weight(wolf, *out.dn), 21.0);
}

TEST(Store, SimilarPayloadMerges) {
  Engine e = quiet_engine();
  SearchParams p = cues({"Wolf"});
  const OpOutcome first = e.store(palette_payload(1, 2000), "wolf", p, {});
  Payload near = palette_payload(1, 2000);
  near.blob[0] ^= 1;
  const OpOutcome second = e.store(near, "wolf", p, {});
  EXPECT_EQ(second.kind, OutcomeKind::merged);
  EXPECT_EQ(second.dn, first.dn);
  EXPECT_EQ(second.cost, 1u);
  EXPECT_EQ(e.memory().data_neurons().size(), 1u);
}

TEST(Store, RequiresCueAndKnownModality) {
  Engine e = quiet_engine();
  EXPECT_THROW(e.store(palette_payload(1), "wolf", SearchParams{}, {}), ConfigError);
  Payload audio = palette_payload(1);
  audio.modality = "audio";
  EXPECT_THROW(e.store(audio, "wolf", cues({"Wolf"}), {}), ConfigError);
}

TEST(Retrieve, RoundTripCostOne) {
  Engine e = quiet_engine();
  const Payload payload = palette_payload(4);
  e.store(payload, "wolf", cues({"Wolf"}), {});
  SearchParams q = cues({"Wolf"});
  q.fine_cues = {e.memory().hive(0).extractor().extract(payload.blob)};
  const OpOutcome out = e.retrieve(q, {});
  EXPECT_EQ(out.kind, OutcomeKind::hit);
  EXPECT_EQ(out.cost, 1u);
  EXPECT_EQ(out.returned_payload->blob, payload.blob);
  EXPECT_EQ(e.examinations(), 1u);
}

TEST(Retrieve, EmptyMemoryMisses) {
  Engine e = quiet_engine();
  const OpOutcome out = e.retrieve(cues({"Wolf"}), {});
  EXPECT_EQ(out.kind, OutcomeKind::miss);
  EXPECT_EQ(out.cost, 0u);
  EXPECT_FALSE(out.dn.has_value());
}

TEST(Retrieve, SearchLimitBoundsCost) {
  Engine e = quiet_engine();
  for (std::uint64_t s = 1; s <= 5; ++s) e.store(palette_payload(s * 11), "tree", cues({"Tree"}), {});
  SearchParams q = cues({"Tree"});
  q.fine_cues = {FeatureVector(64, 0.0)};
  OpControls c;
  c.search_limit = 2;
  const OpOutcome out = e.retrieve(q, c);
  EXPECT_EQ(out.kind, OutcomeKind::miss);
  EXPECT_EQ(out.cost, 2u);
}

TEST(Retrieve, HitLeavesPathEdgesNoLower) {
  Engine e = quiet_engine();
  const Payload a = palette_payload(5);
  const Payload b = palette_payload(6);
  e.store(a, "wolf", cues({"Wolf"}), {});
  const NeuronId db = *e.store(b, "wolf", cues({"Wolf"}), {}).dn;
  e.memory().adjust_strength(db, 30.0);
  const MemoryState before = e.memory().snapshot();
  SearchParams q = cues({"Wolf"});
  q.fine_cues = {e.memory().hive(0).extractor().extract(b.blob)};
  const OpOutcome out = e.retrieve(q, {});
  ASSERT_EQ(out.kind, OutcomeKind::hit);
  EXPECT_EQ(out.dn, db);
  EXPECT_EQ(e.memory().data(db).strength, 100.0);
  const MemoryState after = e.memory().snapshot();
  for (std::size_t i = 0; i < before.adjacency.size(); ++i) {
    if (before.adjacency[i]) EXPECT_GE(*after.adjacency[i], *before.adjacency[i]);
  }
}

TEST(UpdateSemantics, NewCueAndIdempotence) {
  Engine e = quiet_engine();
  const Payload a = palette_payload(7);
  const NeuronId d = *e.store(a, "wolf", cues({"Wolf"}), {}).dn;
  const FeatureVector f = e.memory().hive(0).extractor().extract(a.blob);
  OpOutcome out = e.apply_update_semantics("image", f, Cue::labelled("Canis"), {});
  ASSERT_EQ(out.kind, OutcomeKind::hit);
  const NeuronId canis = *e.memory().find_cue(0, Cue::labelled("Canis"));
  EXPECT_EQ(*e.memory().hive(0).graph().weight(canis, d), 21.0);
  const auto edges = e.memory().hive(0).graph().size();
  e.apply_update_semantics("image", f, Cue::labelled("Canis"), {});
  EXPECT_EQ(*e.memory().hive(0).graph().weight(canis, d), 41.0);
  EXPECT_EQ(e.memory().hive(0).graph().size(), edges);
}

TEST(UpdateSemantics, MissCreatesNoCue) {
  Engine e = quiet_engine();
  e.store(palette_payload(8), "wolf", cues({"Wolf"}), {});
  const OpOutcome out =
      e.apply_update_semantics("image", FeatureVector(64, 0.0), Cue::labelled("Ghost"), {});
  EXPECT_EQ(out.kind, OutcomeKind::miss);
  EXPECT_FALSE(e.memory().find_cue(0, Cue::labelled("Ghost")).has_value());
}

TEST(Retention, PeriodOneDecaysIdleNeurons) {
  HiveParams p = two_locality_params();
  p.retention_period = 1;
  p.localities[0].memory_decay_rate = 10;
  p.localities[1].memory_decay_rate = 20;
  Engine e(Memory({p}));
  const NeuronId d0 = *e.store(palette_payload(1), "wolf", cues({"Wolf"}), {}).dn;
  EXPECT_EQ(e.memory().data(d0).strength, 100.0);
  const NeuronId d1 = *e.store(palette_payload(2), "tree", cues({"Tree"}), {}).dn;
  EXPECT_EQ(e.memory().data(d0).strength, 90.0);
  EXPECT_EQ(e.memory().data(d1).strength, 100.0);
  // A manual pass within the same operation spares what that operation touched.
  e.retention(1, false);
  EXPECT_EQ(e.memory().data(d0).strength, 80.0);
  EXPECT_EQ(e.memory().data(d1).strength, 100.0);
}

TEST(Retention, IdleEdgesDecayOnlyWhenAllowed) {
  HiveParams p = two_locality_params();
  p.localities[0].association_decay_rate = 5;
  Engine e = quiet_engine(p);
  const NeuronId d = *e.store(palette_payload(1), "wolf", cues({"Wolf"}), {}).dn;
  const NeuronId wolf = *e.memory().find_cue(0, Cue::labelled("Wolf"));
  e.memory().begin_operation();
  e.memory().begin_operation();
  e.retention(1, false);
  EXPECT_EQ(*e.memory().hive(0).graph().weight(wolf, d), 21.0);
  e.retention(1, true);
  EXPECT_EQ(*e.memory().hive(0).graph().weight(wolf, d), 16.0);
}

TEST(Retention, ZeroPeriodRejected) {
  Engine e = quiet_engine();
  EXPECT_THROW(e.retention(0, false), ConfigError);
}

TEST(Retention, PhiZeroRemovesData) {
  HiveParams p = two_locality_params();
  p.phi = 0;
  p.localities[1].memory_decay_rate = 60;
  Engine e = quiet_engine(p);
  const NeuronId d = *e.store(palette_payload(1), "tree", cues({"Tree"}), {}).dn;
  e.memory().begin_operation();
  e.retention(1, false);
  e.memory().begin_operation();
  e.retention(1, false);
  EXPECT_EQ(e.memory().data(d).strength, 0.0);
  EXPECT_EQ(e.memory().data(d).size_bytes(), 0u);
}

TEST(Priming, RepeatedRetrieveCostFallsToOne) {
  Engine e = quiet_engine();
  std::vector<Payload> ps;
  for (std::uint64_t s = 0; s < 8; ++s) {
    ps.push_back(palette_payload(100 + s));
    e.store(ps.back(), "wolf", cues({"Wolf"}), {});
  }
  SearchParams q = cues({"Wolf"});
  q.fine_cues = {e.memory().hive(0).extractor().extract(ps[5].blob)};
  std::uint64_t prev = ~0ULL;
  std::uint64_t last = 0;
  for (int r = 0; r < 10; ++r) {
    const auto out = e.retrieve(q, {});
    ASSERT_EQ(out.kind, OutcomeKind::hit);
    EXPECT_LE(out.cost, prev);
    prev = last = out.cost;
  }
  EXPECT_EQ(last, 1u);
}

}  // namespace
}  // namespace nstore
