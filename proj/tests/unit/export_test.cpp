#include <gtest/gtest.h>

#include "nstore/export.hpp"
#include "nstore/workload.hpp"

namespace nstore {
namespace {

TEST(Snapshot, WalkthroughStateOne) {
  const Scenario s = walkthrough_scenario();
  Engine engine(Memory({s.setup.hive}));
  Trace first;
  first.records.assign(s.trace.records.begin(), s.trace.records.begin() + 3);
  replay_ns(first, s.corpus, s.setup, {}, &engine);
  const Json snap = snapshot_json(engine.memory());
  const Json& hive = snap["hives"][0];
  EXPECT_EQ(hive["data"].size(), 3u);
  EXPECT_EQ(hive["localities"][0]["members"], Json::array({"dn0", "dn1"}));
  EXPECT_EQ(hive["localities"][1]["members"], Json::array({"dn2"}));
  EXPECT_EQ(hive["data"][0]["strength"], 80.0);
  EXPECT_EQ(hive["data"][1]["strength"], 90.0);
  const std::string dot = render_dot(snap);
  EXPECT_NE(dot.find("h0_cn1 -- h0_dn0 [label=\"11\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("locality 1"), std::string::npos);
  EXPECT_NE(render_text(snap).find("order cn1: dn0(11) dn1(11)"), std::string::npos) << render_text(snap);
}

TEST(Snapshot, EmptyMemoryRendersEmptyGraph) {
  Memory m({walkthrough_scenario().setup.hive});
  const Json snap = snapshot_json(m);
  EXPECT_EQ(render_dot(snap), "graph nstore {\n}\n");
  EXPECT_EQ(render_dot(snap), render_dot(snapshot_json(m)));
}

TEST(Snapshot, VersionMismatchRejected) {
  Memory m({walkthrough_scenario().setup.hive});
  Json snap = snapshot_json(m);
  snap["version"] = 2;
  EXPECT_THROW(render_dot(snap), ConfigError);
  snap["version"] = 1;
  snap["format"] = "other";
  EXPECT_THROW(render_text(snap), ConfigError);
}

TEST(Snapshot, FileRoundTrip) {
  const Scenario s = walkthrough_scenario();
  Engine engine(Memory({s.setup.hive}));
  replay_ns(s.trace, s.corpus, s.setup, {}, &engine);
  const fs::path p = fs::temp_directory_path() / "nstore_test_snapshot.json";
  write_text(p, snapshot_json(engine.memory()).dump(2));
  const Json back = load_snapshot(p);
  EXPECT_EQ(render_dot(back), render_dot(snapshot_json(engine.memory())));
  fs::remove(p);
}

}  // namespace
}  // namespace nstore
