#include <gtest/gtest.h>

#include <chrono>

#include "nstore/io.hpp"
#include "nstore/workload.hpp"

namespace nstore {
namespace {

const fs::path kGolden = fs::path(NSTORE_TEST_DATA_DIR) / "walkthrough_golden.jsonl";

TEST(Walkthrough, CorpusSeparatesSightings) {
  const Scenario s = walkthrough_scenario();
  HistogramProjectionExtractor x;
  auto f = [&](const char* id) { return x.extract(s.corpus.at(id).bytes); };
  EXPECT_GE(similarity(f("wolf-a1"), f("wolf-a2")), 0.95);
  EXPECT_LT(similarity(f("wolf-a1"), f("wolf-b1")), 0.95);
  EXPECT_LT(similarity(f("wolf-a1"), f("wolf-c1")), 0.95);
  EXPECT_LT(similarity(f("wolf-b1"), f("wolf-c1")), 0.95);
}

TEST(Walkthrough, MatchesHandWrittenLog) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario s = walkthrough_scenario();
  const JsonLines golden = parse_json_lines(read_text(kGolden), "ns-golden", 1, kGolden.string());
  ASSERT_EQ(golden.records.size(), s.trace.records.size());

  Engine engine(Memory({s.setup.hive}));
  std::size_t i = 0;
  auto check = [&](const TraceRecord&, const OpLogRecord& rec) {
    const Json& g = golden.records.at(i++);
    SCOPED_TRACE("seq " + std::to_string(rec.seq));
    EXPECT_EQ(rec.seq, g["seq"].get<std::uint64_t>());
    EXPECT_EQ(rec.op, g["op"].get<std::string>());
    EXPECT_EQ(rec.cues, g["cues"].get<std::vector<std::string>>());
    EXPECT_EQ(rec.outcome, g["outcome"].get<std::string>());
    EXPECT_EQ(rec.dn, g["dn"].get<std::string>());
    EXPECT_EQ(rec.cost, g["cost"].get<std::uint64_t>());
    EXPECT_EQ(rec.visited, g["visited"].get<std::vector<std::string>>());
    EXPECT_EQ(rec.total_bytes, g["total_bytes"].get<std::uint64_t>());

    const Memory& m = engine.memory();
    ASSERT_EQ(m.data_neurons().size(), g["strengths"].size());
    for (const auto& [id, strength] : g["strengths"].items()) {
      EXPECT_EQ(m.data(parse_neuron_id(id)).strength, strength.get<double>()) << id;
    }
    const AssociationGraph& graph = m.hive(0).graph();
    ASSERT_EQ(graph.size(), g["edges"].size());
    for (const auto& [key, weight] : g["edges"].items()) {
      const auto dash = key.find('-');
      const NeuronId a = parse_neuron_id(key.substr(0, dash));
      const NeuronId b = parse_neuron_id(key.substr(dash + 1));
      EXPECT_EQ(graph.weight(a, b), weight.get<double>()) << key;
    }
  };
  replay_ns(s.trace, s.corpus, s.setup, check, &engine);
  EXPECT_EQ(i, golden.records.size());

  // Named cues as they appear in the walkthrough.
  const Memory& m = engine.memory();
  EXPECT_EQ(m.find_cue(0, Cue::labelled("Wolf")), NeuronId::cue(1));
  EXPECT_EQ(m.find_cue(0, Cue::labelled("Tree")), NeuronId::cue(3));
  EXPECT_EQ(m.find_cue(0, Cue::labelled("Canis")), NeuronId::cue(4));
  EXPECT_EQ(m.data(NeuronId::data(3)).locality, 0u);
  EXPECT_EQ(m.data(NeuronId::data(2)).locality, 1u);
  EXPECT_EQ(m.data(NeuronId::data(0)).payload.origin, "wolf-a2");

  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 1.0);
}

TEST(Walkthrough, CanisCueAppearsOnlyOnSuccess) {
  const Scenario s = walkthrough_scenario();
  Engine engine(Memory({s.setup.hive}));
  Trace prefix;
  prefix.records.assign(s.trace.records.begin(), s.trace.records.begin() + 5);
  replay_ns(prefix, s.corpus, s.setup, {}, &engine);
  EXPECT_FALSE(engine.memory().find_cue(0, Cue::labelled("Canis")).has_value());
}

}  // namespace
}  // namespace nstore
