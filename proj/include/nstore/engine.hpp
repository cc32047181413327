#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "nstore/codec.hpp"
#include "nstore/errors.hpp"
#include "nstore/memory.hpp"

namespace nstore {

struct SearchParams {
  /// Selects the hive.
  std::string modality = "image";
  /// Coarse-grained cues used to navigate the network.
  std::vector<Cue> cues;
  /// Fine-grained cues a candidate's data feature must match.
  std::vector<FeatureVector> fine_cues;
  /// Candidates need an average association weight strictly above this.
  double assoc_thresh = 0.0;
  /// Minimum similarity for a match.
  double match_thresh = 0.95;
};

struct OpControls {
  /// Maximum candidates examined; unbounded when empty.
  std::optional<std::size_t> search_limit;
  /// Allow search-order updates.
  bool up = true;
  /// Allow association decay on failures and during retention.
  bool k = false;
};

enum class OutcomeKind { merged, new_neuron, hit, miss };

inline std::string_view to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::merged: return "merged";
    case OutcomeKind::new_neuron: return "new_neuron";
    case OutcomeKind::hit: return "hit";
    case OutcomeKind::miss: return "miss";
  }
  return "?";
}

struct OpOutcome {
  OutcomeKind kind = OutcomeKind::miss;
  std::optional<NeuronId> dn;
  /// Search-section iterations: candidates examined.
  std::uint64_t cost = 0;
  std::optional<Payload> returned_payload;
  /// Quality of the returned payload.
  double returned_quality = 0.0;
  /// Candidates in the order they were examined.
  std::vector<NeuronId> visited;
  /// Retention passes fired automatically at the end of the operation.
  bool retention_fired = false;
};

struct RetentionSummary {
  std::vector<std::pair<NeuronId, NeuronId>> weakened_edges;
  std::vector<NeuronId> compressed;
  std::uint64_t bytes_freed = 0;
};

/// Store / retrieve / retention and their sub-procedures over one Memory.
///
/// Every store and retrieve advances the global operation counter; a hive's
/// retention pass fires automatically each time the counter reaches a
/// multiple of that hive's retention period (unless disabled).
class Engine {
 public:
  explicit Engine(Memory memory, bool auto_retention = true)
      : memory_(std::move(memory)), auto_retention_(auto_retention) {}

  const Memory& memory() const { return memory_; }
  Memory& memory() { return memory_; }

  /// Instrumented count of candidate examinations across all operations.
  std::uint64_t examinations() const { return examinations_; }

  // -------------------------------------------------------------------------
  // Store

  OpOutcome store(const Payload& payload, std::string_view label, const SearchParams& params,
                  const OpControls& controls) {
    if (params.cues.empty()) throw ConfigError("store needs at least one cue");
    const std::size_t h = require_hive(payload.modality);
    memory_.begin_operation();
    const Hive& hive = memory_.hive(h);
    const double eta = hive.params().eta;
    const FeatureVector feature = hive.extractor().extract(payload.blob);

    ensure_capacity(h, payload.size());
    const std::size_t locality = select_locality(h, label, feature);

    OpOutcome out;
    const auto candidates =
        get_search_order(h, params.cues, params.assoc_thresh, controls.search_limit, locality);
    for (const SearchEntry& cand : candidates) {
      const double sim = examine(out, cand.dn, feature);
      if (sim >= params.match_thresh) {
        reaction(h, cand.dn, cand.path, eta, true, params.cues, controls.up, controls.k);
        if (payload.quality > memory_.data(cand.dn).payload.quality) {
          memory_.refresh_payload(cand.dn, payload, feature);
        }
        out.kind = OutcomeKind::merged;
        out.dn = cand.dn;
        break;
      }
      reaction(h, cand.dn, cand.path, eta, false, params.cues, controls.up, controls.k);
    }

    if (!out.dn) {
      const NeuronId dn = memory_.add_data_neuron(h, locality, payload, feature);
      for (const Cue& c : params.cues) {
        const NeuronId cn = memory_.add_cue_neuron(h, c);
        memory_.adjust_association(cn, dn, -eta);
      }
      if (controls.up) update_memory_search_order(h);
      out.kind = OutcomeKind::new_neuron;
      out.dn = dn;
    }
    memory_.touch(*out.dn);
    finish(out, controls);
    return out;
  }

  // -------------------------------------------------------------------------
  // Retrieve

  OpOutcome retrieve(const SearchParams& params, const OpControls& controls) {
    if (params.cues.empty()) throw ConfigError("retrieve needs at least one coarse cue");
    const std::size_t h = require_hive(params.modality);
    memory_.begin_operation();
    const double eta = memory_.hive(h).params().eta;

    OpOutcome out;
    const auto candidates =
        get_search_order(h, params.cues, params.assoc_thresh, controls.search_limit);
    for (const SearchEntry& cand : candidates) {
      bool match = params.fine_cues.empty();
      if (match) {
        count_examination(out, cand.dn);
      } else {
        for (std::size_t i = 0; i < params.fine_cues.size() && !match; ++i) {
          const double sim = i == 0 ? examine(out, cand.dn, params.fine_cues[i])
                                    : similarity(params.fine_cues[i], memory_.data(cand.dn).feature);
          match = sim >= params.match_thresh;
        }
      }
      if (match) {
        out.returned_payload = memory_.data(cand.dn).payload;
        out.returned_quality = out.returned_payload->quality;
        reaction(h, cand.dn, cand.path, eta, true, params.cues, controls.up, controls.k);
        out.kind = OutcomeKind::hit;
        out.dn = cand.dn;
        break;
      }
      reaction(h, cand.dn, cand.path, eta, false, params.cues, controls.up, controls.k);
    }
    finish(out, controls);
    return out;
  }

  /// Associates `new_cue` with the data matching `target_fine_cue` by issuing
  /// a retrieve with that cue.
  OpOutcome apply_update_semantics(const std::string& modality,
                                   const FeatureVector& target_fine_cue, const Cue& new_cue,
                                   const OpControls& controls, double match_thresh = 0.95) {
    SearchParams params;
    params.modality = modality;
    params.cues = {new_cue};
    params.fine_cues = {target_fine_cue};
    params.match_thresh = match_thresh;
    return retrieve(params, controls);
  }

  // -------------------------------------------------------------------------
  // Retention

  /// Ages one hive: idle edges lose their locality's association decay rate
  /// (only when k allows it) and idle data neurons lose their locality's
  /// memory decay rate. "Idle" means not accessed in the last `n` operations.
  RetentionSummary retention_hive(std::size_t h, std::uint64_t n, bool k) {
    if (n < 1) throw ConfigError("retention period must be >= 1");
    RetentionSummary summary;
    const std::uint64_t now = memory_.op_counter();
    if (now < n) {
      update_memory_search_order(h);
      return summary;
    }
    const std::uint64_t horizon = now - n;
    Hive& hive = memory_.hive(h);
    const auto& locs = hive.params().localities;

    if (k) {
      double cue_cue_rate = 0.0;
      for (const auto& l : locs) cue_cue_rate = std::max(cue_cue_rate, l.association_decay_rate);
      for (auto& [key, edge] : hive.graph().mutable_edges()) {
        if (edge.last_access > horizon) continue;
        const double rate = edge_decay_rate(key, cue_cue_rate);
        if (rate <= 0.0 || edge.weight <= hive.graph().epsilon()) continue;
        edge.weight = std::max(hive.graph().epsilon(), edge.weight - rate);
        summary.weakened_edges.push_back(key);
      }
    }

    for (NeuronId id : hive.data_neurons()) {
      const DataNeuron& dn = memory_.data(id);
      if (dn.last_access_op > horizon) continue;
      const double rate = locs[dn.locality].memory_decay_rate;
      if (rate <= 0.0) continue;
      const auto before = dn.size_bytes();
      memory_.adjust_strength(id, rate);
      const auto after = memory_.data(id).size_bytes();
      if (after < before) {
        summary.compressed.push_back(id);
        summary.bytes_freed += before - after;
      }
    }
    update_memory_search_order(h);
    return summary;
  }

  /// Runs retention on every hive with period `n`.
  RetentionSummary retention(std::uint64_t n, bool k) {
    RetentionSummary all;
    for (std::size_t h = 0; h < memory_.hive_count(); ++h) merge_summary(all, retention_hive(h, n, k));
    return all;
  }

  /// Runs retention on every hive with that hive's configured period.
  RetentionSummary retention_configured(bool k) {
    RetentionSummary all;
    for (std::size_t h = 0; h < memory_.hive_count(); ++h) {
      merge_summary(all, retention_hive(h, memory_.hive(h).params().retention_period, k));
    }
    return all;
  }

  /// A standalone ageing operation: advances the operation counter and runs
  /// every hive's retention pass with its configured period.
  RetentionSummary retention_op(bool k) {
    memory_.begin_operation();
    return retention_configured(k);
  }

  // -------------------------------------------------------------------------
  // Reaction

  /// Rewards (flag) or penalises (!flag) the candidate reached through `path`.
  ///
  /// On success every path edge gains eta, the target returns to full
  /// strength and every cue is associated with it (a cue whose edge to the
  /// target was just strengthened as part of the path is not counted twice).
  /// On failure the path edges lose eta when k allows decay.
  void reaction(std::size_t h, NeuronId target, const std::vector<NeuronId>& path, double eta,
                bool flag, const std::vector<Cue>& cues, bool up, bool k) {
    check_path(h, target, path);
    bool changed = false;
    if (flag) {
      std::set<NeuronId> rewarded_cues;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        memory_.adjust_association(path[i], path[i + 1], -eta);
        if (path[i + 1] == target && path[i].is_cue()) rewarded_cues.insert(path[i]);
      }
      memory_.adjust_strength(target, -kFullStrength);
      memory_.touch(target);
      for (const Cue& c : cues) {
        const NeuronId cn = memory_.add_cue_neuron(h, c);
        if (rewarded_cues.insert(cn).second) memory_.adjust_association(cn, target, -eta);
      }
      changed = true;
    } else if (k) {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        memory_.adjust_association(path[i], path[i + 1], eta);
      }
      changed = true;
    } else {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        memory_.hive(h).graph().touch(path[i], path[i + 1], memory_.op_counter());
      }
    }
    if (up && changed) update_memory_search_order(h);
  }

  // -------------------------------------------------------------------------
  // Elasticity and capacity

  /// Applies the locality's `iteration`-th strength ceiling to all its data
  /// neurons. Returns bytes freed, or nullopt once the schedule is exhausted.
  std::optional<std::uint64_t> elasticity(std::size_t h, std::size_t locality,
                                          std::size_t iteration) {
    const Hive& hive = memory_.hive(h);
    if (locality >= hive.locality_count()) {
      throw ConfigError(fmt::format("hive '{}' has no locality {}", hive.params().modality, locality));
    }
    const auto& schedule = hive.params().localities[locality].elasticity_schedule;
    if (iteration >= schedule.size()) return std::nullopt;
    const double ef = schedule[iteration];
    const double phi = hive.params().phi;
    std::uint64_t freed = 0;
    for (NeuronId id : hive.locality_members(locality)) {
      const DataNeuron& dn = memory_.data(id);
      const double s = dn.strength;
      const double target = hive.params().elasticity_mode == ElasticityMode::ceiling
                                ? std::max(phi, std::min(s, ef))
                                : std::max(phi, s * ef / 100.0);
      if (target >= s) continue;
      const auto before = dn.size_bytes();
      memory_.adjust_strength(id, s - target);
      freed += before - memory_.data(id).size_bytes();
    }
    return freed;
  }

  /// Runs elasticity passes, least important locality (highest decay rate)
  /// first and escalating the iteration, until `bytes_needed` fit.
  void ensure_capacity(std::size_t h, std::uint64_t bytes_needed) {
    const Hive& hive = memory_.hive(h);
    const auto cap = hive.params().capacity_bytes;
    if (!cap) return;
    auto fits = [&] {
      const auto used = memory_.hive_bytes(h);
      return used <= *cap && *cap - used >= bytes_needed;
    };
    if (fits()) return;
    if (bytes_needed > *cap) {
      throw StorageFull(fmt::format("item of {} bytes exceeds hive capacity of {} bytes",
                                    bytes_needed, *cap));
    }
    std::vector<std::size_t> order(hive.locality_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto& locs = hive.params().localities;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (locs[a].memory_decay_rate != locs[b].memory_decay_rate) {
        return locs[a].memory_decay_rate > locs[b].memory_decay_rate;
      }
      return a > b;
    });
    std::size_t rounds = 0;
    for (const auto& l : locs) rounds = std::max(rounds, l.elasticity_schedule.size());
    for (std::size_t iter = 0; iter < rounds; ++iter) {
      for (std::size_t loc : order) {
        if (!elasticity(h, loc, iter)) continue;
        if (fits()) {
          update_memory_search_order(h);
          return;
        }
      }
    }
    throw StorageFull(fmt::format("hive '{}' full: {} of {} bytes used, {} needed",
                                  hive.params().modality, memory_.hive_bytes(h), *cap,
                                  bytes_needed));
  }

  // -------------------------------------------------------------------------
  // Search order

  /// Candidate list for `cues`: per-cue maintained orders concatenated in cue
  /// order, filtered on average weight > t1, de-duplicated (first occurrence
  /// wins) and truncated at `limit`. Unknown cues resolve to the default cue
  /// of `fallback_locality`, or to every locality's default cue in order.
  std::vector<SearchEntry> get_search_order(
      std::size_t h, const std::vector<Cue>& cues, double t1,
      std::optional<std::size_t> limit,
      std::optional<std::size_t> fallback_locality = std::nullopt) const {
    const Hive& hive = memory_.hive(h);
    std::vector<SearchEntry> out;
    std::set<NeuronId> seen;
    if (limit && *limit == 0) return out;
    for (NeuronId cue : resolve_cues(h, cues, fallback_locality)) {
      for (const SearchEntry& e : hive.search_order(cue)) {
        if (!(e.avg_weight > t1) || !seen.insert(e.dn).second) continue;
        out.push_back(e);
        if (limit && out.size() >= *limit) return out;
      }
    }
    return out;
  }

  void update_memory_search_order(std::size_t h) { memory_.rebuild_search_order(h); }

  /// First locality whose rule admits the label or feature; otherwise the
  /// last (catch-all) locality.
  std::size_t select_locality(std::size_t h, std::string_view label,
                              const FeatureVector& feature) const {
    const auto& locs = memory_.hive(h).params().localities;
    for (std::size_t i = 0; i < locs.size(); ++i) {
      const LocalityRule& rule = locs[i].mapping;
      if (std::find(rule.labels.begin(), rule.labels.end(), label) != rule.labels.end()) return i;
      for (const auto& proto : rule.features) {
        if (proto.size() == feature.size() && similarity(proto, feature) >= rule.min_similarity) {
          return i;
        }
      }
    }
    return locs.size() - 1;
  }

 private:
  std::size_t require_hive(std::string_view modality) const {
    const auto h = memory_.hive_for_modality(modality);
    if (!h) throw ConfigError("no hive for modality '" + std::string(modality) + "'");
    return *h;
  }

  std::vector<NeuronId> resolve_cues(std::size_t h, const std::vector<Cue>& cues,
                                     std::optional<std::size_t> fallback_locality) const {
    std::vector<NeuronId> ids;
    const Hive& hive = memory_.hive(h);
    for (const Cue& c : cues) {
      if (auto id = memory_.find_cue(h, c)) {
        ids.push_back(*id);
      } else if (fallback_locality) {
        if (auto dc = hive.default_cue(*fallback_locality)) ids.push_back(*dc);
      } else {
        const auto dcs = hive.default_cues();
        ids.insert(ids.end(), dcs.begin(), dcs.end());
      }
    }
    return ids;
  }

  void count_examination(OpOutcome& out, NeuronId dn) {
    ++examinations_;
    ++out.cost;
    out.visited.push_back(dn);
  }

  double examine(OpOutcome& out, NeuronId dn, const FeatureVector& probe) {
    count_examination(out, dn);
    return similarity(probe, memory_.data(dn).feature);
  }

  void check_path(std::size_t h, NeuronId target, const std::vector<NeuronId>& path) const {
    if (path.size() < 2 || path.back() != target) {
      throw ConsistencyError("reaction path does not end at " + to_string(target));
    }
    const AssociationGraph& g = memory_.hive(h).graph();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (!memory_.contains(path[i]) || !g.weight(path[i], path[i + 1])) {
        throw ConsistencyError("dangling reaction path at " + to_string(path[i]));
      }
    }
  }

  double edge_decay_rate(const AssociationGraph::Key& key, double cue_cue_rate) const {
    const auto& locs = memory_.hive(memory_.hive_of(key.first)).params().localities;
    double rate = -1.0;
    for (NeuronId end : {key.first, key.second}) {
      if (end.is_data()) rate = std::max(rate, locs[memory_.data(end).locality].association_decay_rate);
    }
    return rate < 0.0 ? cue_cue_rate : rate;
  }

  static void merge_summary(RetentionSummary& into, const RetentionSummary& part) {
    into.weakened_edges.insert(into.weakened_edges.end(), part.weakened_edges.begin(),
                               part.weakened_edges.end());
    into.compressed.insert(into.compressed.end(), part.compressed.begin(), part.compressed.end());
    into.bytes_freed += part.bytes_freed;
  }

  void finish(OpOutcome& out, const OpControls& controls) {
    if (!auto_retention_) return;
    const std::uint64_t now = memory_.op_counter();
    for (std::size_t h = 0; h < memory_.hive_count(); ++h) {
      const auto period = memory_.hive(h).params().retention_period;
      if (now % period == 0) {
        retention_hive(h, period, controls.k);
        out.retention_fired = true;
      }
    }
  }

  Memory memory_;
  bool auto_retention_ = true;
  std::uint64_t examinations_ = 0;
};

}  // namespace nstore
