#include <gtest/gtest.h>

#include "nstore/config.hpp"

namespace nstore {
namespace {

std::string error_of(const Json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, DefaultsAreCaseStudyValues) {
  const RunConfig c = parse_config(Json::object());
  EXPECT_EQ(c.preset, "wildlife-deer");
  const HiveParams& h = c.setup.hive;
  EXPECT_EQ(h.eta, 20.0);
  EXPECT_EQ(h.phi, 1.0);
  EXPECT_EQ(h.retention_period, 500u);
  ASSERT_EQ(h.localities.size(), 2u);
  EXPECT_EQ(h.localities[0].memory_decay_rate, 0.5);
  EXPECT_EQ(h.localities[1].memory_decay_rate, 1.0);
  EXPECT_EQ(h.localities[0].elasticity_schedule,
            (std::vector<double>{80, 70, 60, 50, 40, 30, 20, 10, 1}));
  EXPECT_EQ(c.setup.options.match_thresh, 0.95);
  EXPECT_EQ(c.setup.options.assoc_thresh, 0.0);
  EXPECT_FALSE(c.setup.options.controls.k);
  EXPECT_TRUE(c.setup.options.controls.up);
  EXPECT_FALSE(c.setup.options.controls.search_limit.has_value());
  EXPECT_FALSE(c.workload.seed.has_value());
}

TEST(Config, DeerPresetRoutesDeerToLocalityZero) {
  const RunConfig c = preset_config("wildlife-deer");
  Engine e(Memory({c.setup.hive}));
  EXPECT_EQ(e.select_locality(0, "deer", FeatureVector(64, 0.0)), 0u);
  EXPECT_EQ(e.select_locality(0, "background", FeatureVector(64, 0.0)), 1u);
}

TEST(Config, FoxWolfPreset) {
  const RunConfig c = preset_config("wildlife-foxwolf");
  Engine e(Memory({c.setup.hive}));
  EXPECT_EQ(e.select_locality(0, "fox", FeatureVector(64, 0.0)), 0u);
  EXPECT_EQ(e.select_locality(0, "wolf", FeatureVector(64, 0.0)), 0u);
}

TEST(Config, EveryPresetValidates) {
  for (const auto& name : preset_names()) EXPECT_NO_THROW(preset_config(name).validate()) << name;
  EXPECT_THROW(preset_config("nope"), ConfigError);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_NE(error_of({{"hive", {{"etaa", 3}}}}).find("hive.etaa"), std::string::npos);
  EXPECT_NE(error_of({{"bogus", 1}}).find("bogus"), std::string::npos);
  EXPECT_NE(error_of({{"hive", {{"localities", {{{"decay", 1}}}}}}}).find("decay"), std::string::npos);
}

TEST(Config, RejectsWrongTypesAndInvalidParams) {
  EXPECT_NE(error_of({{"hive", {{"eta", "fast"}}}}).find("hive.eta"), std::string::npos);
  EXPECT_NE(error_of({{"hive", {{"phi", 150}}}}).find("phi"), std::string::npos);
  EXPECT_NE(error_of({{"controls", {{"match_thresh", 2}}}}).find("match_thresh"), std::string::npos);
  EXPECT_NE(error_of({{"engine", "tcam"}}).find("engine"), std::string::npos);
  EXPECT_NE(error_of({{"report", {{"cap_grid", {0.5, 0.2}}}}}).find("cap_grid"), std::string::npos);
}

TEST(Config, OverridesApply) {
  const RunConfig c = parse_config({{"preset", "uav-car"},
                                    {"hive", {{"eta", 5}, {"capacity_bytes", 1000}}},
                                    {"controls", {{"search_limit", 4}, {"k", true}}},
                                    {"cam", {{"policy", "lru"}, {"key", "label"}}},
                                    {"workload", {{"seed", 9}, {"n_items", 12}}}});
  EXPECT_EQ(c.setup.hive.eta, 5.0);
  EXPECT_EQ(c.setup.hive.capacity_bytes, 1000u);
  EXPECT_EQ(c.setup.options.controls.search_limit, 4u);
  EXPECT_TRUE(c.setup.options.controls.k);
  EXPECT_EQ(c.setup.cam.policy, ReplacementPolicy::lru);
  EXPECT_EQ(c.setup.options.cam_key, CamKey::label);
  EXPECT_EQ(c.workload.seed, 9u);
  EXPECT_EQ(c.workload.n_items, 12u);
  EXPECT_EQ(c.workload.class_labels, (std::vector<std::string>{"car", "background"}));
}

TEST(Config, JsonRoundTrip) {
  RunConfig c = preset_config("wildlife-foxwolf");
  c.workload.seed = 4;
  c.setup.hive.capacity_bytes = 12345;
  const Json j = to_json(c);
  EXPECT_EQ(to_json(parse_config(j)), j);
}

}  // namespace
}  // namespace nstore
