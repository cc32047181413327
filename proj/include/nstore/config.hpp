#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "nstore/io.hpp"
#include "nstore/workload.hpp"

namespace nstore {

struct ReportOptions {
  /// PSNR at which a returned payload counts as fully faithful.
  double psnr_ref = 30.0;
  /// Operations (by seq) excluded from the post-warmup retrieve cost.
  std::uint64_t warmup_ops = 500;
  /// Memory caps for the quality-factor curve, as fractions of corpus size.
  std::vector<double> cap_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2};
};

struct RunConfig {
  std::string preset;
  EngineSetup setup;
  /// "ns" or "cam" for `run`.
  std::string engine = "ns";
  WorkloadSpec workload;
  ReportOptions report;

  void validate() const {
    setup.hive.validate();
    if (engine != "ns" && engine != "cam") throw ConfigError("engine must be 'ns' or 'cam'");
    const auto& o = setup.options;
    if (!(o.match_thresh >= -1.0 && o.match_thresh <= 1.0)) {
      throw ConfigError("controls.match_thresh must lie in [-1, 1]");
    }
    if (o.controls.search_limit && *o.controls.search_limit == 0) {
      throw ConfigError("controls.search_limit must be positive");
    }
    if (setup.cam.capacity_entries && *setup.cam.capacity_entries == 0) {
      throw ConfigError("cam.capacity_entries must be >= 1");
    }
    if (!(report.psnr_ref > 0.0)) throw ConfigError("report.psnr_ref must be > 0");
    for (std::size_t i = 0; i < report.cap_grid.size(); ++i) {
      if (!(report.cap_grid[i] > 0.0)) throw ConfigError("report.cap_grid values must be > 0");
      if (i > 0 && !(report.cap_grid[i] > report.cap_grid[i - 1])) {
        throw ConfigError("report.cap_grid must be sorted ascending");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Presets

inline LocalityParams make_locality(double memory_decay, std::vector<std::string> labels) {
  LocalityParams l;
  l.memory_decay_rate = memory_decay;
  l.association_decay_rate = 0.0;
  l.mapping.labels = std::move(labels);
  l.elasticity_schedule = {80, 70, 60, 50, 40, 30, 20, 10, 1};
  return l;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"wildlife-deer", "wildlife-foxwolf", "uav-car",
                                                 "walkthrough"};
  return names;
}

/// Case-study defaults: eta 20, T2 0.95, phi 1, N 500, decay 0.5 / 1,
/// elasticity 80..1, k 0, up 1, T1 0, unbounded search. The seed is left
/// unset on purpose.
inline RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  HiveParams& h = c.setup.hive;
  h.modality = "image";
  h.eta = 20;
  h.epsilon = 1;
  h.phi = 1;
  h.retention_period = 500;
  c.setup.options.assoc_thresh = 0.0;
  c.setup.options.match_thresh = 0.95;
  c.setup.options.controls = OpControls{std::nullopt, true, false};
  if (name == "wildlife-deer") {
    h.localities = {make_locality(0.5, {"deer"}), make_locality(1.0, {})};
    c.workload.class_labels = {"deer", "background"};
    c.workload.priority_class = "deer";
  } else if (name == "wildlife-foxwolf") {
    h.localities = {make_locality(0.5, {"wolf", "fox"}), make_locality(1.0, {})};
    c.workload.class_labels = {"wolf", "fox", "background"};
    c.workload.priority_class = "wolf";
  } else if (name == "uav-car") {
    h.localities = {make_locality(0.5, {"car"}), make_locality(1.0, {})};
    c.workload.class_labels = {"car", "background"};
    c.workload.priority_class = "car";
  } else if (name == "walkthrough") {
    Scenario s = walkthrough_scenario();
    c.setup = s.setup;
    c.workload.kind = "walkthrough";
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline void reject_unknown(const Json& j, const std::string& where,
                           std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(fmt::format("unknown config key '{}{}'", where.empty() ? "" : where + ".", key));
  }
}

template <class T>
void read(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(fmt::format("config key '{}.{}' has the wrong type", where, key));
  }
}

template <class T>
void read_optional(const Json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(j, key, v, where);
  out = v;
}

}  // namespace detail

inline void apply_hive_json(HiveParams& h, const Json& j) {
  const std::string w = "hive";
  detail::reject_unknown(j, w,
                         {"modality", "eta", "epsilon", "phi", "retention_period", "matching_metric",
                          "codec", "extractor", "feature_dimension", "extractor_seed", "quality_map",
                          "graph_mode", "elasticity_mode", "capacity_bytes", "localities"});
  detail::read(j, "modality", h.modality, w);
  detail::read(j, "eta", h.eta, w);
  detail::read(j, "epsilon", h.epsilon, w);
  detail::read(j, "phi", h.phi, w);
  detail::read(j, "retention_period", h.retention_period, w);
  detail::read(j, "matching_metric", h.matching_metric, w);
  detail::read(j, "codec", h.codec, w);
  detail::read(j, "extractor", h.extractor, w);
  detail::read(j, "feature_dimension", h.feature_dimension, w);
  detail::read(j, "extractor_seed", h.extractor_seed, w);
  detail::read(j, "quality_map", h.quality_map, w);
  detail::read_optional(j, "capacity_bytes", h.capacity_bytes, w);
  if (j.contains("graph_mode")) {
    std::string m;
    detail::read(j, "graph_mode", m, w);
    if (m == "default_cue") h.graph_mode = GraphMode::default_cue;
    else if (m == "full") h.graph_mode = GraphMode::full;
    else throw ConfigError("hive.graph_mode must be 'default_cue' or 'full'");
  }
  if (j.contains("elasticity_mode")) {
    std::string m;
    detail::read(j, "elasticity_mode", m, w);
    if (m == "ceiling") h.elasticity_mode = ElasticityMode::ceiling;
    else if (m == "multiplicative") h.elasticity_mode = ElasticityMode::multiplicative;
    else throw ConfigError("hive.elasticity_mode must be 'ceiling' or 'multiplicative'");
  }
  if (j.contains("localities")) {
    if (!j["localities"].is_array()) throw ConfigError("hive.localities must be an array");
    h.localities.clear();
    std::size_t i = 0;
    for (const auto& lj : j["localities"]) {
      const std::string lw = fmt::format("hive.localities[{}]", i++);
      detail::reject_unknown(lj, lw,
                             {"memory_decay_rate", "association_decay_rate", "labels",
                              "elasticity_schedule", "min_similarity"});
      LocalityParams l;
      detail::read(lj, "memory_decay_rate", l.memory_decay_rate, lw);
      detail::read(lj, "association_decay_rate", l.association_decay_rate, lw);
      detail::read(lj, "labels", l.mapping.labels, lw);
      detail::read(lj, "min_similarity", l.mapping.min_similarity, lw);
      detail::read(lj, "elasticity_schedule", l.elasticity_schedule, lw);
      h.localities.push_back(std::move(l));
    }
  }
}

inline Json hive_to_json(const HiveParams& h) {
  Json j;
  j["modality"] = h.modality;
  j["eta"] = h.eta;
  j["epsilon"] = h.epsilon;
  j["phi"] = h.phi;
  j["retention_period"] = h.retention_period;
  j["matching_metric"] = h.matching_metric;
  j["codec"] = h.codec;
  j["extractor"] = h.extractor;
  j["feature_dimension"] = h.feature_dimension;
  j["extractor_seed"] = h.extractor_seed;
  j["quality_map"] = h.quality_map;
  j["graph_mode"] = h.graph_mode == GraphMode::full ? "full" : "default_cue";
  j["elasticity_mode"] = h.elasticity_mode == ElasticityMode::ceiling ? "ceiling" : "multiplicative";
  j["capacity_bytes"] = h.capacity_bytes ? Json(*h.capacity_bytes) : Json(nullptr);
  j["localities"] = Json::array();
  for (const auto& l : h.localities) {
    Json lj;
    lj["memory_decay_rate"] = l.memory_decay_rate;
    lj["association_decay_rate"] = l.association_decay_rate;
    lj["labels"] = l.mapping.labels;
    lj["min_similarity"] = l.mapping.min_similarity;
    lj["elasticity_schedule"] = l.elasticity_schedule;
    j["localities"].push_back(std::move(lj));
  }
  return j;
}

/// Applies a config document on top of `base` (normally a preset).
inline void apply_config_json(RunConfig& c, const Json& j) {
  detail::reject_unknown(j, "", {"preset", "hive", "controls", "engine", "cam", "workload", "report"});
  if (j.contains("hive")) apply_hive_json(c.setup.hive, j["hive"]);
  if (j.contains("controls")) {
    const Json& cj = j["controls"];
    const std::string w = "controls";
    detail::reject_unknown(cj, w, {"assoc_thresh", "match_thresh", "search_limit", "up", "k"});
    auto& o = c.setup.options;
    detail::read(cj, "assoc_thresh", o.assoc_thresh, w);
    detail::read(cj, "match_thresh", o.match_thresh, w);
    detail::read_optional(cj, "search_limit", o.controls.search_limit, w);
    detail::read(cj, "up", o.controls.up, w);
    detail::read(cj, "k", o.controls.k, w);
  }
  detail::read(j, "engine", c.engine, "");
  if (j.contains("cam")) {
    const Json& cj = j["cam"];
    const std::string w = "cam";
    detail::reject_unknown(cj, w, {"policy", "capacity_entries", "capacity_bytes", "key"});
    if (cj.contains("policy")) {
      std::string p;
      detail::read(cj, "policy", p, w);
      c.setup.cam.policy = parse_replacement_policy(p);
    }
    detail::read_optional(cj, "capacity_entries", c.setup.cam.capacity_entries, w);
    detail::read_optional(cj, "capacity_bytes", c.setup.cam.capacity_bytes, w);
    if (cj.contains("key")) {
      std::string k;
      detail::read(cj, "key", k, w);
      if (k == "item") c.setup.options.cam_key = CamKey::item;
      else if (k == "label") c.setup.options.cam_key = CamKey::label;
      else throw ConfigError("cam.key must be 'item' or 'label'");
    }
  }
  if (j.contains("workload")) {
    const Json& wj = j["workload"];
    const std::string w = "workload";
    detail::reject_unknown(wj, w,
                           {"kind", "n_items", "class_labels", "priority_class", "priority_bias",
                            "n_retrievals", "payload_size_min", "payload_size_max",
                            "frames_per_sighting", "retention_tail", "use_fine_cue", "seed"});
    auto& s = c.workload;
    detail::read(wj, "kind", s.kind, w);
    detail::read(wj, "n_items", s.n_items, w);
    detail::read(wj, "class_labels", s.class_labels, w);
    detail::read(wj, "priority_class", s.priority_class, w);
    detail::read(wj, "priority_bias", s.priority_bias, w);
    detail::read(wj, "n_retrievals", s.n_retrievals, w);
    detail::read(wj, "payload_size_min", s.payload_size_min, w);
    detail::read(wj, "payload_size_max", s.payload_size_max, w);
    detail::read(wj, "frames_per_sighting", s.frames_per_sighting, w);
    detail::read(wj, "retention_tail", s.retention_tail, w);
    detail::read(wj, "use_fine_cue", s.use_fine_cue, w);
    detail::read_optional(wj, "seed", s.seed, w);
  }
  if (j.contains("report")) {
    const Json& rj = j["report"];
    const std::string w = "report";
    detail::reject_unknown(rj, w, {"psnr_ref", "warmup_ops", "cap_grid"});
    detail::read(rj, "psnr_ref", c.report.psnr_ref, w);
    detail::read(rj, "warmup_ops", c.report.warmup_ops, w);
    detail::read(rj, "cap_grid", c.report.cap_grid, w);
  }
}

/// Parses a config document: its "preset" (default wildlife-deer) supplies
/// every value the document leaves out.
inline RunConfig parse_config(const Json& j) {
  std::string preset = "wildlife-deer";
  if (j.is_object() && j.contains("preset")) {
    if (!j["preset"].is_string()) throw ConfigError("config key 'preset' must be a string");
    preset = j["preset"].get<std::string>();
  }
  RunConfig c = preset_config(preset);
  apply_config_json(c, j);
  c.validate();
  return c;
}

inline RunConfig load_config(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

inline Json to_json(const RunConfig& c) {
  Json j;
  j["preset"] = c.preset;
  j["hive"] = hive_to_json(c.setup.hive);
  const auto& o = c.setup.options;
  j["controls"] = {{"assoc_thresh", o.assoc_thresh},
                   {"match_thresh", o.match_thresh},
                   {"search_limit", o.controls.search_limit ? Json(*o.controls.search_limit) : Json(nullptr)},
                   {"up", o.controls.up},
                   {"k", o.controls.k}};
  j["engine"] = c.engine;
  j["cam"] = {{"policy", to_string(c.setup.cam.policy)},
              {"capacity_entries",
               c.setup.cam.capacity_entries ? Json(*c.setup.cam.capacity_entries) : Json(nullptr)},
              {"capacity_bytes",
               c.setup.cam.capacity_bytes ? Json(*c.setup.cam.capacity_bytes) : Json(nullptr)},
              {"key", o.cam_key == CamKey::item ? "item" : "label"}};
  const auto& s = c.workload;
  j["workload"] = {{"kind", s.kind},
                   {"n_items", s.n_items},
                   {"class_labels", s.class_labels},
                   {"priority_class", s.priority_class},
                   {"priority_bias", s.priority_bias},
                   {"n_retrievals", s.n_retrievals},
                   {"payload_size_min", s.payload_size_min},
                   {"payload_size_max", s.payload_size_max},
                   {"frames_per_sighting", s.frames_per_sighting},
                   {"retention_tail", s.retention_tail},
                   {"use_fine_cue", s.use_fine_cue},
                   {"seed", s.seed ? Json(*s.seed) : Json(nullptr)}};
  j["report"] = {{"psnr_ref", c.report.psnr_ref},
                 {"warmup_ops", c.report.warmup_ops},
                 {"cap_grid", c.report.cap_grid}};
  return j;
}

}  // namespace nstore
