#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "nstore/cam.hpp"
#include "nstore/codec.hpp"
#include "nstore/engine.hpp"
#include "nstore/io.hpp"
#include "nstore/oplog.hpp"
#include "nstore/rng.hpp"

namespace nstore {

inline constexpr std::string_view kManifestFormat = "ns-manifest";
inline constexpr std::string_view kTraceFormat = "ns-trace";
inline constexpr int kManifestVersion = 1;
inline constexpr int kTraceVersion = 1;

// ---------------------------------------------------------------------------
// Corpus

struct ManifestItem {
  std::string item_id;
  /// Payload file, relative to the manifest's directory. Empty for inline items.
  std::string path;
  std::string class_label;
  bool priority = false;

  friend bool operator==(const ManifestItem&, const ManifestItem&) = default;
};

struct CorpusItem {
  ManifestItem meta;
  Bytes bytes;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<CorpusItem> items) {
    for (auto& it : items) add(std::move(it));
  }

  void add(CorpusItem item) {
    if (item.meta.item_id.empty()) throw ConfigError("manifest item without item_id");
    if (item.meta.class_label.empty()) {
      throw ConfigError("manifest item '" + item.meta.item_id + "' has an empty class_label");
    }
    if (!index_.emplace(item.meta.item_id, items_.size()).second) {
      throw ConfigError("duplicate manifest item_id '" + item.meta.item_id + "'");
    }
    items_.push_back(std::move(item));
  }

  const std::vector<CorpusItem>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(const std::string& id) const { return index_.contains(id); }
  const CorpusItem& at(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw ConfigError("unknown item_id '" + id + "'");
    return items_[it->second];
  }
  std::uint64_t total_bytes() const {
    std::uint64_t n = 0;
    for (const auto& it : items_) n += it.bytes.size();
    return n;
  }

 private:
  std::vector<CorpusItem> items_;
  std::map<std::string, std::size_t> index_;
};

struct WorkloadSpec {
  /// "synthetic" or "walkthrough" (the fixed seven-operation scenario).
  std::string kind = "synthetic";
  std::size_t n_items = 200;
  std::vector<std::string> class_labels = {"deer", "background"};
  std::string priority_class = "deer";
  double priority_bias = 0.9;
  std::size_t n_retrievals = 5000;
  std::size_t payload_size_min = 1500;
  std::size_t payload_size_max = 2500;
  /// Consecutive same-class items form one sighting and look alike.
  std::size_t frames_per_sighting = 5;
  /// Retention-only records appended after the retrievals.
  std::size_t retention_tail = 0;
  bool use_fine_cue = true;
  std::optional<std::uint64_t> seed;

  std::size_t n_classes() const { return class_labels.size(); }

  void validate() const {
    if (kind != "synthetic" && kind != "walkthrough") {
      throw ConfigError("workload.kind must be 'synthetic' or 'walkthrough'");
    }
    if (kind == "walkthrough") return;
    if (!seed) throw ConfigError("workload.seed is required");
    if (class_labels.empty()) throw ConfigError("workload.class_labels must not be empty");
    for (const auto& l : class_labels) {
      if (l.empty()) throw ConfigError("workload.class_labels contains an empty label");
      if (std::count(class_labels.begin(), class_labels.end(), l) > 1) {
        throw ConfigError("workload.class_labels contains '" + l + "' twice");
      }
    }
    if (!(priority_bias >= 0.0 && priority_bias <= 1.0)) {
      throw ConfigError("workload.priority_bias must lie in [0, 1]");
    }
    if (!priority_class.empty() &&
        std::find(class_labels.begin(), class_labels.end(), priority_class) == class_labels.end()) {
      throw ConfigError("workload.priority_class '" + priority_class + "' is not a class label");
    }
    if (payload_size_min == 0 || payload_size_min > payload_size_max) {
      throw ConfigError("workload.payload_size_min must be in [1, payload_size_max]");
    }
    if (frames_per_sighting == 0) throw ConfigError("workload.frames_per_sighting must be >= 1");
  }
};

namespace detail {

inline std::vector<std::uint8_t> seeded_palette(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> p(16);
  for (auto& v : p) v = static_cast<std::uint8_t>(80 + rng.below(96));
  return p;
}

inline std::uint64_t sub_seed(std::uint64_t seed, std::string_view tag, std::uint64_t i) {
  return mix_seed(fnv1a64(tag, mix_seed(seed)) ^ mix_seed(i + 1));
}

/// Bytes drawn half from the class palette and half from the sighting palette.
inline Bytes synth_frame(Rng& rng, std::size_t n, const std::vector<std::uint8_t>& cls,
                         const std::vector<std::uint8_t>& sighting, double class_share) {
  Bytes b(n);
  for (auto& x : b) {
    const auto& pal = rng.coin(class_share) ? cls : sighting;
    x = pal[rng.below(pal.size())];
  }
  return b;
}

}  // namespace detail

/// Deterministic synthetic corpus. Items are interleaved across classes in
/// manifest order; within a class, runs of `frames_per_sighting` items share
/// a sighting palette on top of the class palette.
inline Corpus generate_corpus(const WorkloadSpec& spec) {
  spec.validate();
  if (spec.kind == "walkthrough") throw ConfigError("walkthrough corpora come from walkthrough_scenario()");
  const std::uint64_t seed = *spec.seed;
  const std::size_t k = spec.n_classes();
  std::vector<std::vector<std::uint8_t>> class_palettes;
  for (std::size_t c = 0; c < k; ++c) {
    class_palettes.push_back(detail::seeded_palette(detail::sub_seed(seed, "class", c)));
  }
  Rng sizes(detail::sub_seed(seed, "size", 0));
  std::vector<std::size_t> class_count(k, 0);
  Corpus corpus;
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    const std::size_t c = i % k;
    const std::size_t j = class_count[c]++;
    const std::size_t sighting = j / spec.frames_per_sighting;
    const auto sighting_palette =
        detail::seeded_palette(detail::sub_seed(seed, "sighting", c * 1000003 + sighting));
    const auto n = static_cast<std::size_t>(
        sizes.between(static_cast<std::int64_t>(spec.payload_size_min),
                      static_cast<std::int64_t>(spec.payload_size_max)));
    Rng frame(detail::sub_seed(seed, "frame", i));
    CorpusItem item;
    item.meta.item_id = fmt::format("item-{:05d}", i);
    item.meta.path = "payloads/" + item.meta.item_id + ".bin";
    item.meta.class_label = spec.class_labels[c];
    item.meta.priority = !spec.priority_class.empty() && spec.class_labels[c] == spec.priority_class;
    item.bytes = detail::synth_frame(frame, n, class_palettes[c], sighting_palette, 0.5);
    corpus.add(std::move(item));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Manifest I/O

inline std::string dump_manifest(const Corpus& corpus) {
  std::vector<Json> rows;
  for (const auto& it : corpus.items()) {
    Json j;
    j["item_id"] = it.meta.item_id;
    if (it.meta.path.empty()) {
      std::string hex;
      hex.reserve(it.bytes.size() * 2);
      for (auto b : it.bytes) hex += fmt::format("{:02x}", b);
      j["inline_hex"] = hex;
    } else {
      j["path"] = it.meta.path;
    }
    j["label"] = it.meta.class_label;
    j["priority"] = it.meta.priority;
    rows.push_back(std::move(j));
  }
  return dump_json_lines(format_header(kManifestFormat, kManifestVersion), rows);
}

/// Writes manifest.jsonl and the payload files under `dir`. Returns the
/// manifest path.
inline fs::path write_corpus(const Corpus& corpus, const fs::path& dir) {
  for (const auto& it : corpus.items()) {
    if (!it.meta.path.empty()) write_bytes(dir / it.meta.path, it.bytes);
  }
  const fs::path manifest = dir / "manifest.jsonl";
  write_text(manifest, dump_manifest(corpus));
  return manifest;
}

inline Bytes parse_hex(const std::string& hex, const std::string& where) {
  if (hex.size() % 2 != 0) throw ConfigError(where + ": odd-length inline_hex");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    unsigned v = 0;
    for (std::size_t k = 0; k < 2; ++k) {
      const char c = hex[2 * i + k];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned>(c - 'A' + 10);
      else throw ConfigError(where + ": bad hex digit in inline_hex");
    }
    out[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

/// Reads a manifest; relative payload paths resolve against `base_dir`.
inline Corpus parse_manifest(std::string_view text, const fs::path& base_dir,
                             const std::string& where) {
  const JsonLines lines = parse_json_lines(text, kManifestFormat, kManifestVersion, where);
  Corpus corpus;
  std::size_t n = 0;
  for (const auto& j : lines.records) {
    const std::string at = fmt::format("{} record {}", where, n++);
    CorpusItem item;
    try {
      item.meta.item_id = j.at("item_id").get<std::string>();
      item.meta.class_label = j.at("label").get<std::string>();
      item.meta.priority = j.value("priority", false);
      if (j.contains("path")) {
        item.meta.path = j["path"].get<std::string>();
      } else if (j.contains("inline_hex")) {
        item.bytes = parse_hex(j["inline_hex"].get<std::string>(), at);
      } else {
        throw ConfigError(at + ": needs 'path' or 'inline_hex'");
      }
    } catch (const Json::exception& e) {
      throw ConfigError(at + ": " + e.what());
    }
    if (!item.meta.path.empty()) {
      const fs::path p = fs::path(item.meta.path).is_absolute() ? fs::path(item.meta.path)
                                                                 : base_dir / item.meta.path;
      item.bytes = read_bytes(p);
    }
    corpus.add(std::move(item));
  }
  return corpus;
}

inline Corpus load_manifest(const fs::path& path) {
  return parse_manifest(read_text(path), path.parent_path(), path.string());
}

// ---------------------------------------------------------------------------
// Traces

enum class TraceOp { store, retrieve, retention };

inline std::string_view to_string(TraceOp op) {
  switch (op) {
    case TraceOp::store: return "store";
    case TraceOp::retrieve: return "retrieve";
    case TraceOp::retention: return "retention";
  }
  return "?";
}

struct TraceRecord {
  std::uint64_t seq = 0;
  TraceOp op = TraceOp::store;
  std::string item_id;
  std::vector<std::string> coarse_cues;
  bool use_fine_cue = false;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Trace {
  std::vector<TraceRecord> records;
  /// Manifest path relative to the trace file, when known.
  std::string manifest;
};

/// Store phase over every item in manifest order, then `n_retrievals`
/// retrieves skewed toward priority items, then the retention tail.
inline Trace generate_trace(const Corpus& corpus, const WorkloadSpec& spec) {
  spec.validate();
  if (corpus.empty()) throw ConfigError("cannot generate a trace for an empty manifest");
  Trace trace;
  trace.manifest = "manifest.jsonl";
  std::uint64_t seq = 0;
  std::vector<const CorpusItem*> priority, other;
  for (const auto& it : corpus.items()) {
    trace.records.push_back(TraceRecord{seq++, TraceOp::store, it.meta.item_id,
                                        {it.meta.class_label}, false});
    (it.meta.priority ? priority : other).push_back(&it);
  }
  Rng rng(detail::sub_seed(*spec.seed, "trace", 0));
  for (std::size_t r = 0; r < spec.n_retrievals; ++r) {
    const bool pick_priority =
        other.empty() || (!priority.empty() && rng.coin(spec.priority_bias));
    const auto& pool = pick_priority ? priority : other;
    const CorpusItem* it = pool[rng.below(pool.size())];
    trace.records.push_back(TraceRecord{seq++, TraceOp::retrieve, it->meta.item_id,
                                        {it->meta.class_label}, spec.use_fine_cue});
  }
  for (std::size_t r = 0; r < spec.retention_tail; ++r) {
    trace.records.push_back(TraceRecord{seq++, TraceOp::retention, {}, {}, false});
  }
  return trace;
}

inline std::string dump_trace(const Trace& trace) {
  Json header = format_header(kTraceFormat, kTraceVersion);
  if (!trace.manifest.empty()) header["manifest"] = trace.manifest;
  std::vector<Json> rows;
  rows.reserve(trace.records.size());
  for (const auto& r : trace.records) {
    Json j;
    j["seq"] = r.seq;
    j["op"] = to_string(r.op);
    if (r.op != TraceOp::retention) {
      j["item_id"] = r.item_id;
      j["cues"] = r.coarse_cues;
      j["use_fine_cue"] = r.use_fine_cue;
    }
    rows.push_back(std::move(j));
  }
  return dump_json_lines(header, rows);
}

inline Trace parse_trace(std::string_view text, const std::string& where) {
  const JsonLines lines = parse_json_lines(text, kTraceFormat, kTraceVersion, where);
  Trace trace;
  if (lines.header.contains("manifest")) trace.manifest = lines.header["manifest"].get<std::string>();
  std::uint64_t expect = 0;
  for (const auto& j : lines.records) {
    TraceRecord r;
    const std::string at = fmt::format("{}: record seq {}", where, expect);
    try {
      r.seq = j.at("seq").get<std::uint64_t>();
      const auto op = j.at("op").get<std::string>();
      if (op == "store") r.op = TraceOp::store;
      else if (op == "retrieve") r.op = TraceOp::retrieve;
      else if (op == "retention") r.op = TraceOp::retention;
      else throw ConfigError(at + ": unknown op '" + op + "'");
      if (r.op != TraceOp::retention) {
        r.item_id = j.at("item_id").get<std::string>();
        r.coarse_cues = j.at("cues").get<std::vector<std::string>>();
        r.use_fine_cue = j.value("use_fine_cue", false);
      }
    } catch (const Json::exception& e) {
      throw ConfigError(at + ": " + e.what());
    }
    if (r.seq != expect) {
      throw ConfigError(fmt::format("{}: seq {} out of order", at, r.seq));
    }
    ++expect;
    trace.records.push_back(std::move(r));
  }
  return trace;
}

/// Checks that every record names a known item and that each item is stored
/// before it is retrieved. Throws ConfigError naming the record seq.
inline void check_trace(const Trace& trace, const Corpus& corpus) {
  std::set<std::string> stored;
  for (const auto& r : trace.records) {
    if (r.op == TraceOp::retention) continue;
    if (!corpus.contains(r.item_id)) {
      throw ConfigError(fmt::format("trace record seq {}: unknown item_id '{}'", r.seq, r.item_id));
    }
    if (r.coarse_cues.empty()) {
      throw ConfigError(fmt::format("trace record seq {}: no coarse cues", r.seq));
    }
    if (r.op == TraceOp::store) {
      stored.insert(r.item_id);
    } else if (!stored.contains(r.item_id)) {
      throw ConfigError(fmt::format("trace record seq {}: retrieve of '{}' before its store", r.seq,
                                    r.item_id));
    }
  }
}

// ---------------------------------------------------------------------------
// Replay

enum class CamKey { item, label };

struct ReplayOptions {
  double assoc_thresh = 0.0;
  double match_thresh = 0.95;
  OpControls controls;
  CamKey cam_key = CamKey::item;
};

/// Everything needed to build either engine for one run.
struct EngineSetup {
  HiveParams hive;
  CamParams cam;
  ReplayOptions options;
};

/// Full-quality features of every corpus item, computed once per run.
class FeatureCache {
 public:
  FeatureCache(const Corpus& corpus, const FeatureExtractor& extractor) {
    for (const auto& it : corpus.items()) features_.emplace(it.meta.item_id, extractor.extract(it.bytes));
  }
  const FeatureVector& at(const std::string& id) const { return features_.at(id); }

 private:
  std::map<std::string, FeatureVector> features_;
};

using ReplayObserver = std::function<void(const TraceRecord&, const OpLogRecord&)>;

namespace detail {

inline void fill_returned(OpLogRecord& rec, const Payload& returned, const FeatureVector& probe,
                          const FeatureVector& returned_feature, const Corpus& corpus,
                          const Codec& codec) {
  rec.similarity = similarity(probe, returned_feature);
  rec.returned_origin = returned.origin;
  rec.returned_quality = returned.quality;
  if (corpus.contains(returned.origin)) {
    const CorpusItem& src = corpus.at(returned.origin);
    const Payload original = make_payload(returned.modality, src.bytes, src.meta.item_id);
    rec.psnr_db = fidelity(original, returned, codec);
  }
}

}  // namespace detail

/// Replays `trace` on a fresh NS engine. Throws StorageFull naming the record
/// seq when a store cannot be accommodated.
inline std::vector<OpLogRecord> replay_ns(const Trace& trace, const Corpus& corpus,
                                          const EngineSetup& setup,
                                          const ReplayObserver& observer = {},
                                          Engine* engine_out = nullptr) {
  check_trace(trace, corpus);
  std::optional<Engine> owned;
  if (!engine_out) owned.emplace(Memory({setup.hive}));
  Engine& engine = engine_out ? *engine_out : *owned;
  const Hive& hive = engine.memory().hive(0);
  const FeatureCache features(corpus, hive.extractor());
  const ReplayOptions& opt = setup.options;
  std::vector<OpLogRecord> log;
  log.reserve(trace.records.size());

  for (const TraceRecord& r : trace.records) {
    OpLogRecord rec;
    rec.seq = r.seq;
    rec.engine = "ns";
    rec.op = std::string(to_string(r.op));
    rec.item_id = r.item_id;
    rec.cues = r.coarse_cues;
    SearchParams params;
    params.modality = hive.params().modality;
    params.assoc_thresh = opt.assoc_thresh;
    params.match_thresh = opt.match_thresh;
    for (const auto& c : r.coarse_cues) params.cues.push_back(Cue::labelled(c));

    if (r.op == TraceOp::retention) {
      engine.retention_op(opt.controls.k);
      rec.outcome = "aged";
    } else if (r.op == TraceOp::store) {
      const CorpusItem& item = corpus.at(r.item_id);
      const Payload payload = make_payload(params.modality, item.bytes, item.meta.item_id);
      OpOutcome out;
      try {
        out = engine.store(payload, item.meta.class_label, params, opt.controls);
      } catch (const StorageFull& e) {
        throw StorageFull(fmt::format("trace record seq {}: {}", r.seq, e.what()));
      }
      rec.outcome = std::string(to_string(out.kind));
      rec.cost = out.cost;
      for (NeuronId v : out.visited) rec.visited.push_back(to_string(v));
      rec.dn = to_string(*out.dn);
      rec.strength = engine.memory().data(*out.dn).strength;
    } else {
      const FeatureVector& original = features.at(r.item_id);
      if (r.use_fine_cue) params.fine_cues = {original};
      const OpOutcome out = engine.retrieve(params, opt.controls);
      rec.outcome = std::string(to_string(out.kind));
      rec.cost = out.cost;
      for (NeuronId v : out.visited) rec.visited.push_back(to_string(v));
      rec.hit = out.kind == OutcomeKind::hit;
      if (out.dn) {
        const DataNeuron& dn = engine.memory().data(*out.dn);
        rec.dn = to_string(*out.dn);
        rec.strength = dn.strength;
        detail::fill_returned(rec, *out.returned_payload, original,
                              hive.extractor().extract(out.returned_payload->blob), corpus,
                              hive.codec());
      }
    }
    rec.total_bytes = engine.memory().total_bytes();
    if (observer) observer(r, rec);
    log.push_back(std::move(rec));
  }
  return log;
}

/// Replays `trace` on a fresh CAM. Retention records are no-ops at cost 0.
inline std::vector<OpLogRecord> replay_cam(const Trace& trace, const Corpus& corpus,
                                           const EngineSetup& setup,
                                           const ReplayObserver& observer = {}) {
  check_trace(trace, corpus);
  Cam cam(setup.cam);
  const auto codec = PluginRegistry::instance().make_codec(setup.hive.codec);
  const auto extractor = PluginRegistry::instance().make_extractor(
      setup.hive.extractor, setup.hive.feature_dimension, setup.hive.extractor_seed);
  const FeatureCache features(corpus, *extractor);
  std::vector<OpLogRecord> log;
  log.reserve(trace.records.size());

  for (const TraceRecord& r : trace.records) {
    OpLogRecord rec;
    rec.seq = r.seq;
    rec.engine = "cam";
    rec.op = std::string(to_string(r.op));
    rec.item_id = r.item_id;
    if (r.op == TraceOp::retention) {
      rec.outcome = "aged";
    } else {
      const CorpusItem& item = corpus.at(r.item_id);
      const std::string key =
          setup.options.cam_key == CamKey::item ? item.meta.item_id : item.meta.class_label;
      rec.cues = {key};
      if (r.op == TraceOp::store) {
        const auto res = cam.store(key, make_payload(setup.hive.modality, item.bytes, item.meta.item_id));
        rec.cost = res.cost;
        rec.outcome = !res.stored ? "rejected" : res.overwritten ? "overwritten" : "stored";
        if (res.stored) rec.strength = kFullStrength;
      } else {
        const auto res = cam.retrieve(key);
        rec.cost = res.cost;
        rec.hit = res.data.has_value();
        rec.outcome = rec.hit ? "hit" : "miss";
        if (res.data) {
          rec.strength = kFullStrength;
          detail::fill_returned(rec, *res.data, features.at(r.item_id), extractor->extract(res.data->blob),
                                corpus, *codec);
        }
      }
    }
    rec.total_bytes = cam.total_bytes();
    if (observer) observer(r, rec);
    log.push_back(std::move(rec));
  }
  return log;
}

// ---------------------------------------------------------------------------
// The scripted seven-operation walkthrough

struct Scenario {
  Corpus corpus;
  Trace trace;
  EngineSetup setup;
};

/// Two localities (wolf/fox -> 0), eta 10, decay rates 10 and 20, retention
/// after every operation. Three setup stores build the initial state (two
/// wolf sightings and a background frame); the scripted operations follow.
inline Scenario walkthrough_scenario() {
  Scenario s;
  HiveParams& p = s.setup.hive;
  p.modality = "image";
  p.eta = 10;
  p.epsilon = 1;
  p.phi = 1;
  p.retention_period = 1;
  LocalityParams l0;
  l0.memory_decay_rate = 10;
  l0.mapping.labels = {"wolf", "fox"};
  l0.elasticity_schedule = {80, 70, 60, 50, 40, 30, 20, 10, 1};
  LocalityParams l1 = l0;
  l1.memory_decay_rate = 20;
  l1.mapping.labels.clear();
  p.localities = {l0, l1};

  const std::size_t n = 2000;
  auto frame = [&](const char* id, const char* label, std::uint64_t sighting, std::uint64_t f) {
    const auto pal = detail::seeded_palette(detail::sub_seed(11, "walkthrough", sighting));
    Rng rng(detail::sub_seed(11, "walkthrough-frame", sighting * 100 + f));
    CorpusItem it;
    it.meta.item_id = id;
    it.meta.path = std::string("payloads/") + id + ".bin";
    it.meta.class_label = label;
    it.meta.priority = std::string(label) == "wolf";
    it.bytes = detail::synth_frame(rng, n, pal, pal, 1.0);
    return it;
  };
  s.corpus.add(frame("wolf-a1", "wolf", 1, 1));
  s.corpus.add(frame("wolf-b1", "wolf", 2, 1));
  s.corpus.add(frame("tree-1", "background", 3, 1));
  s.corpus.add(frame("wolf-c1", "wolf", 4, 1));
  s.corpus.add(frame("wolf-a2", "wolf", 1, 2));

  auto rec = [&](TraceOp op, const char* id, const char* cue) {
    const auto seq = static_cast<std::uint64_t>(s.trace.records.size());
    s.trace.records.push_back(TraceRecord{seq, op, id, {cue}, op == TraceOp::retrieve});
  };
  rec(TraceOp::store, "wolf-a1", "Wolf");
  rec(TraceOp::store, "wolf-b1", "Wolf");
  rec(TraceOp::store, "tree-1", "Tree");
  rec(TraceOp::retrieve, "wolf-b1", "Wolf");
  rec(TraceOp::store, "wolf-c1", "Wolf");
  rec(TraceOp::retrieve, "wolf-b1", "Canis");
  rec(TraceOp::retrieve, "wolf-a1", "Wolf");
  rec(TraceOp::retrieve, "wolf-a1", "Wolf");
  rec(TraceOp::store, "wolf-a2", "Wolf");
  s.trace.manifest = "manifest.jsonl";
  return s;
}

struct Workload {
  Corpus corpus;
  Trace trace;
};

/// Corpus and trace described by `spec` (synthetic or the walkthrough).
inline Workload build_workload(const WorkloadSpec& spec) {
  spec.validate();
  if (spec.kind == "walkthrough") {
    Scenario s = walkthrough_scenario();
    return {std::move(s.corpus), std::move(s.trace)};
  }
  Corpus corpus = generate_corpus(spec);
  Trace trace = generate_trace(corpus, spec);
  return {std::move(corpus), std::move(trace)};
}

}  // namespace nstore
