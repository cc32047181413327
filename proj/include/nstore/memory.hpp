#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "nstore/association_graph.hpp"
#include "nstore/codec.hpp"
#include "nstore/errors.hpp"
#include "nstore/ids.hpp"

namespace nstore {

inline constexpr double kFullStrength = 100.0;

// ---------------------------------------------------------------------------
// Hyperparameters

/// Admits data into a locality when its label is listed, or when its feature
/// is at least `min_similarity` close to one of the listed prototypes.
struct LocalityRule {
  std::vector<std::string> labels;
  std::vector<FeatureVector> features;
  double min_similarity = 0.95;

  bool empty() const { return labels.empty() && features.empty(); }
};

struct LocalityParams {
  /// Strength percent lost per retention event.
  double memory_decay_rate = 0.0;
  /// Weight units lost per retention event.
  double association_decay_rate = 0.0;
  LocalityRule mapping;
  /// Strength ceilings for successive elasticity iterations.
  std::vector<double> elasticity_schedule;
};

enum class GraphMode {
  /// No cue-cue edges, length-1 paths, a default cue per locality.
  default_cue,
  /// Every neuron pair associated, absent edges read as epsilon.
  full,
};

enum class ElasticityMode { ceiling, multiplicative };

struct HiveParams {
  std::string modality = "image";
  std::vector<LocalityParams> localities;
  std::string matching_metric = "cosine";
  double eta = 20.0;
  double epsilon = 1.0;
  double phi = 1.0;
  std::uint64_t retention_period = 500;
  std::string codec = "truncation";
  std::string extractor = "histogram-projection";
  std::size_t feature_dimension = 64;
  std::uint64_t extractor_seed = 1;
  std::string quality_map = "identity";
  std::optional<std::uint64_t> capacity_bytes;
  GraphMode graph_mode = GraphMode::default_cue;
  ElasticityMode elasticity_mode = ElasticityMode::ceiling;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const {
    auto fail = [&](const std::string& what) {
      throw ConfigError(fmt::format("hive '{}': {}", modality, what));
    };
    if (localities.empty()) fail("num_localities must be at least 1");
    if (!(eta > 0.0)) fail("eta must be > 0");
    if (!(epsilon >= 0.0)) fail("epsilon must be >= 0");
    if (!(phi >= 0.0 && phi <= 100.0)) fail("phi must lie in [0, 100]");
    if (retention_period < 1) fail("retention_period must be >= 1");
    if (feature_dimension == 0) fail("feature_dimension must be >= 1");
    if (matching_metric != "cosine") fail("unknown matching_metric '" + matching_metric + "'");
    if (!is_known_quality_map(quality_map)) fail("unknown quality_map '" + quality_map + "'");
    if (!PluginRegistry::instance().has_codec(codec)) fail("unknown codec '" + codec + "'");
    if (!PluginRegistry::instance().has_extractor(extractor)) {
      fail("unknown extractor '" + extractor + "'");
    }
    for (std::size_t i = 0; i < localities.size(); ++i) {
      const auto& loc = localities[i];
      if (!(loc.memory_decay_rate >= 0.0)) fail(fmt::format("locality {}: memory_decay_rate < 0", i));
      if (!(loc.association_decay_rate >= 0.0)) {
        fail(fmt::format("locality {}: association_decay_rate < 0", i));
      }
      const auto& s = loc.elasticity_schedule;
      for (std::size_t j = 1; j < s.size(); ++j) {
        if (!(s[j] < s[j - 1])) {
          fail(fmt::format("locality {}: elasticity_schedule must be strictly decreasing", i));
        }
      }
      if (!s.empty() && (s.front() > 100.0 || s.back() < std::max(phi, 1.0))) {
        fail(fmt::format("locality {}: elasticity_schedule values must lie in [max(phi,1), 100]", i));
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Neurons

/// A search pattern. Labelled cues are identified by label; unlabelled cues by
/// exact vector equality.
struct Cue {
  std::string label;
  FeatureVector vector;

  static Cue labelled(std::string l) { return Cue{std::move(l), {}}; }
};

struct CueNeuron {
  NeuronId id;
  FeatureVector cue_vector;
  std::string label;
  std::size_t hive = 0;
  bool is_default = false;
  /// Set for default cues only.
  std::optional<std::size_t> locality;
};

struct DataNeuron {
  NeuronId id;
  Payload payload;
  FeatureVector feature;
  double strength = kFullStrength;
  std::size_t hive = 0;
  std::size_t locality = 0;
  std::uint64_t last_access_op = 0;

  std::uint64_t size_bytes() const { return payload.size(); }
};

/// One candidate in a cue's search order.
struct SearchEntry {
  std::vector<NeuronId> path;
  NeuronId dn;
  double avg_weight = 0.0;

  friend bool operator==(const SearchEntry&, const SearchEntry&) = default;
};

using SearchOrder = std::vector<SearchEntry>;

/// Non-increasing average weight, ties by ascending data neuron id.
inline bool search_entry_before(const SearchEntry& a, const SearchEntry& b) {
  if (a.avg_weight != b.avg_weight) return a.avg_weight > b.avg_weight;
  return a.dn < b.dn;
}

class Hive {
 public:
  Hive(std::size_t index, HiveParams params)
      : index_(index),
        params_(std::move(params)),
        graph_(params_.epsilon, params_.graph_mode == GraphMode::full),
        codec_(PluginRegistry::instance().make_codec(params_.codec)),
        extractor_(PluginRegistry::instance().make_extractor(
            params_.extractor, params_.feature_dimension, params_.extractor_seed)),
        default_cues_(params_.localities.size()),
        locality_members_(params_.localities.size()) {}

  std::size_t index() const { return index_; }
  const HiveParams& params() const { return params_; }
  HiveParams& mutable_params() { return params_; }
  const AssociationGraph& graph() const { return graph_; }
  AssociationGraph& graph() { return graph_; }
  const Codec& codec() const { return *codec_; }
  const FeatureExtractor& extractor() const { return *extractor_; }

  std::size_t locality_count() const { return params_.localities.size(); }
  /// Every cue neuron of the hive (default cues included), in creation order.
  const std::vector<NeuronId>& cue_bank() const { return cue_bank_; }
  /// Existing default cues in locality order.
  std::vector<NeuronId> default_cues() const {
    std::vector<NeuronId> out;
    for (const auto& dc : default_cues_) {
      if (dc) out.push_back(*dc);
    }
    return out;
  }
  /// Created with the locality's first data neuron.
  std::optional<NeuronId> default_cue(std::size_t locality) const {
    return default_cues_.at(locality);
  }
  const std::vector<NeuronId>& locality_members(std::size_t locality) const {
    return locality_members_.at(locality);
  }
  std::vector<NeuronId> data_neurons() const {
    std::vector<NeuronId> all;
    for (const auto& m : locality_members_) all.insert(all.end(), m.begin(), m.end());
    std::sort(all.begin(), all.end());
    return all;
  }

  const std::map<NeuronId, SearchOrder>& search_orders() const { return search_orders_; }
  const SearchOrder& search_order(NeuronId cue) const {
    static const SearchOrder empty;
    const auto it = search_orders_.find(cue);
    return it == search_orders_.end() ? empty : it->second;
  }

 private:
  friend class Memory;

  std::size_t index_;
  HiveParams params_;
  AssociationGraph graph_;
  std::shared_ptr<const Codec> codec_;
  std::shared_ptr<const FeatureExtractor> extractor_;
  std::vector<NeuronId> cue_bank_;
  std::vector<std::optional<NeuronId>> default_cues_;
  std::vector<std::vector<NeuronId>> locality_members_;
  std::map<NeuronId, SearchOrder> search_orders_;
};

// ---------------------------------------------------------------------------
// Learnable-parameter state S = {A, M}

/// Dense snapshot of the learnable parameters. `adjacency` is n x n row-major
/// over `neurons`; an empty optional marks "no association".
struct MemoryState {
  std::vector<NeuronId> neurons;
  std::vector<std::optional<double>> adjacency;
  std::vector<NeuronId> data_neurons;
  std::vector<double> strengths;
  /// Per neuron: owning hive and that hive's epsilon.
  std::vector<std::size_t> neuron_hive;
  std::vector<double> edge_floor;
  /// Per data neuron: phi of its hive.
  std::vector<double> strength_floor;

  std::size_t n() const { return neurons.size(); }
  std::size_t m() const { return data_neurons.size(); }
  const std::optional<double>& a(std::size_t i, std::size_t j) const {
    return adjacency[i * n() + j];
  }

  friend bool operator==(const MemoryState&, const MemoryState&) = default;
};

/// Signed adjustments: positive values decay, negative values strengthen.
struct StateDelta {
  std::vector<double> adjacency;  // n x n
  std::vector<double> strengths;  // m

  static StateDelta zero(const MemoryState& s) {
    return {std::vector<double>(s.n() * s.n(), 0.0), std::vector<double>(s.m(), 0.0)};
  }
};

inline void check_delta_shape(const MemoryState& s, const StateDelta& d) {
  if (d.adjacency.size() != s.n() * s.n() || d.strengths.size() != s.m()) {
    throw ConsistencyError(fmt::format(
        "state update dimension mismatch: state ({0}x{0}, 1x{1}), delta ({2} cells, 1x{3})",
        s.n(), s.m(), d.adjacency.size(), d.strengths.size()));
  }
  const std::size_t n = s.n();
  for (std::size_t i = 0; i < n; ++i) {
    if (d.adjacency[i * n + i] != 0.0) throw ConsistencyError("state update touches a self-edge");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d.adjacency[i * n + j] != d.adjacency[j * n + i]) {
        throw ConsistencyError("state update adjacency delta is not symmetric");
      }
      if (d.adjacency[i * n + j] != 0.0 && s.neuron_hive[i] != s.neuron_hive[j]) {
        throw ConsistencyError("state update links neurons of different hives");
      }
    }
  }
}

/// S' = { max(eps, a - da) ; min(100, max(phi, s - ds)) } element-wise.
/// An absent association touched by a non-zero delta starts from eps.
inline MemoryState apply_state_update(const MemoryState& s, const StateDelta& d) {
  check_delta_shape(s, d);
  MemoryState out = s;
  const std::size_t n = s.n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double delta = d.adjacency[i * n + j];
      if (i == j || delta == 0.0) continue;
      const double eps = s.edge_floor[i];
      const double old = s.a(i, j).value_or(eps);
      out.adjacency[i * n + j] = std::max(eps, old - delta);
    }
  }
  for (std::size_t k = 0; k < s.m(); ++k) {
    out.strengths[k] =
        std::min(kFullStrength, std::max(s.strength_floor[k], s.strengths[k] - d.strengths[k]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The neural memory network

class Memory {
 public:
  explicit Memory(std::vector<HiveParams> hives) {
    if (hives.empty()) throw ConfigError("memory needs at least one hive");
    for (auto& p : hives) {
      p.validate();
      for (const auto& h : hives_) {
        if (h.params().modality == p.modality) {
          throw ConfigError("duplicate hive modality '" + p.modality + "'");
        }
      }
      hives_.emplace_back(hives_.size(), std::move(p));
    }
  }

  std::size_t hive_count() const { return hives_.size(); }
  const Hive& hive(std::size_t i) const { return hives_.at(i); }
  Hive& hive(std::size_t i) { return hives_.at(i); }

  std::optional<std::size_t> hive_for_modality(std::string_view modality) const {
    for (const auto& h : hives_) {
      if (h.params().modality == modality) return h.index();
    }
    return std::nullopt;
  }

  const CueNeuron& cue(NeuronId id) const {
    if (!id.is_cue() || id.index >= cues_.size()) {
      throw ConsistencyError("unknown cue neuron " + to_string(id));
    }
    return cues_[id.index];
  }
  const DataNeuron& data(NeuronId id) const {
    if (!id.is_data() || id.index >= data_.size()) {
      throw ConsistencyError("unknown data neuron " + to_string(id));
    }
    return data_[id.index];
  }
  bool contains(NeuronId id) const {
    return id.is_cue() ? id.index < cues_.size() : id.index < data_.size();
  }
  std::size_t hive_of(NeuronId id) const { return id.is_cue() ? cue(id).hive : data(id).hive; }

  const std::vector<CueNeuron>& cue_neurons() const { return cues_; }
  const std::vector<DataNeuron>& data_neurons() const { return data_; }

  std::uint64_t op_counter() const { return op_counter_; }
  /// Advances the global operation counter; returns the new value.
  std::uint64_t begin_operation() { return ++op_counter_; }

  std::uint64_t total_bytes() const {
    std::uint64_t total = 0;
    for (const auto& dn : data_) total += dn.size_bytes();
    return total;
  }
  std::uint64_t hive_bytes(std::size_t hive) const {
    std::uint64_t total = 0;
    for (const auto& dn : data_) {
      if (dn.hive == hive) total += dn.size_bytes();
    }
    return total;
  }

  /// Non-default cue neuron matching `c`, if any.
  std::optional<NeuronId> find_cue(std::size_t hive_index, const Cue& c) const {
    for (NeuronId id : hive(hive_index).cue_bank()) {
      const CueNeuron& cn = cues_[id.index];
      if (cn.is_default) continue;
      if (!c.label.empty()) {
        if (cn.label == c.label) return id;
      } else if (cn.label.empty() && cn.cue_vector == c.vector) {
        return id;
      }
    }
    return std::nullopt;
  }

  /// Returns the existing neuron for a duplicate cue.
  NeuronId add_cue_neuron(std::size_t hive_index, const Cue& c) {
    if (c.label.empty() && c.vector.empty()) {
      throw ConfigError("cue needs a label or a vector");
    }
    if (auto existing = find_cue(hive_index, c)) return *existing;
    Hive& h = hive(hive_index);
    FeatureVector v = c.vector.empty() ? label_vector(c.label, h.params().feature_dimension)
                                       : c.vector;
    if (v.size() != h.params().feature_dimension) {
      throw ConfigError(fmt::format("cue vector has dimension {}, expected {}", v.size(),
                                    h.params().feature_dimension));
    }
    const NeuronId id = NeuronId::cue(static_cast<std::uint32_t>(cues_.size()));
    cues_.push_back(CueNeuron{id, std::move(v), c.label, hive_index, false, std::nullopt});
    h.cue_bank_.push_back(id);
    return id;
  }

  /// New data neuron at full strength. In default-cue mode it is linked to the
  /// locality's default cue at epsilon; in full mode the link is implicit.
  NeuronId add_data_neuron(std::size_t hive_index, std::size_t locality, Payload payload,
                           FeatureVector feature = {}) {
    Hive& h = hive(hive_index);
    if (locality >= h.locality_count()) {
      throw ConfigError(fmt::format("hive '{}' has no locality {}", h.params().modality, locality));
    }
    if (feature.empty()) feature = h.extractor().extract(payload.blob);
    if (feature.size() != h.params().feature_dimension) {
      throw ConfigError(fmt::format("feature has dimension {}, expected {}", feature.size(),
                                    h.params().feature_dimension));
    }
    const NeuronId default_cue = ensure_default_cue(hive_index, locality);
    const NeuronId id = NeuronId::data(static_cast<std::uint32_t>(data_.size()));
    DataNeuron dn;
    dn.id = id;
    dn.payload = std::move(payload);
    dn.feature = std::move(feature);
    dn.strength = kFullStrength;
    dn.hive = hive_index;
    dn.locality = locality;
    dn.last_access_op = op_counter_;
    data_.push_back(std::move(dn));
    h.locality_members_[locality].push_back(id);
    if (h.params().graph_mode == GraphMode::default_cue) {
      h.graph().connect(default_cue, id, op_counter_);
    }
    return id;
  }

  /// new = max(eps, old - delta); creates the association when absent.
  double adjust_association(NeuronId a, NeuronId b, double delta) {
    const std::size_t ha = hive_of(a);
    if (hive_of(b) != ha) {
      throw ConsistencyError("association across hives: " + to_string(a) + ", " + to_string(b));
    }
    return hive(ha).graph().adjust(a, b, delta, op_counter_);
  }

  /// new = min(100, max(phi, old - delta)). A drop below the payload's current
  /// quality recompresses it; a rise never restores discarded detail.
  double adjust_strength(NeuronId id, double delta) {
    DataNeuron& dn = mutable_data(id);
    const Hive& h = hive(dn.hive);
    dn.strength = std::min(kFullStrength, std::max(h.params().phi, dn.strength - delta));
    recompress_to_strength(dn);
    return dn.strength;
  }

  /// Marks a data neuron as accessed by the current operation.
  void touch(NeuronId id) { mutable_data(id).last_access_op = op_counter_; }

  /// Replaces a data neuron's payload with a fresher copy.
  void refresh_payload(NeuronId id, Payload payload, FeatureVector feature) {
    DataNeuron& dn = mutable_data(id);
    dn.payload = std::move(payload);
    dn.feature = std::move(feature);
    recompress_to_strength(dn);
  }

  void set_search_order(std::size_t hive_index, NeuronId cue, SearchOrder order) {
    hive(hive_index).search_orders_[cue] = std::move(order);
  }
  void clear_search_orders(std::size_t hive_index) { hive(hive_index).search_orders_.clear(); }

  /// Recomputes every cue's search order in the hive: for each reachable data
  /// neuron the path of highest average weight (length 1 in default-cue mode,
  /// up to 2 in full mode), sorted by non-increasing average weight.
  void rebuild_search_order(std::size_t hive_index) {
    Hive& h = hive(hive_index);
    const AssociationGraph& g = h.graph();
    std::map<NeuronId, SearchOrder> orders;
    const bool full = h.params().graph_mode == GraphMode::full;
    // Full mode works on a dense weight table over the hive's neurons in
    // ascending id order; NaN marks a missing edge, an implicit floor reads as
    // epsilon.
    std::vector<NeuronId> ids;
    std::map<NeuronId, std::size_t> index;
    std::vector<double> table;
    if (full) {
      ids = h.cue_bank();
      const auto dns = h.data_neurons();
      ids.insert(ids.end(), dns.begin(), dns.end());
      std::sort(ids.begin(), ids.end());
      for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
      table.assign(ids.size() * ids.size(), g.implicit_floor() ? g.epsilon()
                                                               : std::numeric_limits<double>::quiet_NaN());
      for (const auto& [key, edge] : g.edges()) {
        const auto a = index.find(key.first), b = index.find(key.second);
        if (a == index.end() || b == index.end()) continue;
        table[a->second * ids.size() + b->second] = edge.weight;
        table[b->second * ids.size() + a->second] = edge.weight;
      }
    }
    const std::size_t n = ids.size();
    for (NeuronId c : h.cue_bank()) {
      SearchOrder order;
      if (!full) {
        for (NeuronId nb : g.neighbours(c)) {
          if (!nb.is_data()) continue;
          order.push_back(SearchEntry{{c, nb}, nb, g.find(c, nb)->weight});
        }
      } else {
        const std::size_t ci = index.at(c);
        const double* row_c = &table[ci * n];
        for (std::size_t di = 0; di < n; ++di) {
          const NeuronId d = ids[di];
          if (!d.is_data() || std::isnan(row_c[di])) continue;
          SearchEntry best{{c, d}, d, row_c[di]};
          std::size_t best_via = n;
          const double* row_d = &table[di * n];
          for (std::size_t xi = 0; xi < n; ++xi) {
            if (xi == ci || xi == di || std::isnan(row_c[xi]) || std::isnan(row_d[xi])) continue;
            const double avg = (row_c[xi] + row_d[xi]) / 2.0;
            if (avg > best.avg_weight) {
              best.avg_weight = avg;
              best_via = xi;
            }
          }
          if (best_via != n) best.path = {c, ids[best_via], d};
          order.push_back(std::move(best));
        }
      }
      std::sort(order.begin(), order.end(), search_entry_before);
      orders.emplace(c, std::move(order));
    }
    h.search_orders_ = std::move(orders);
  }

  // -------------------------------------------------------------------------
  // State snapshots

  MemoryState snapshot() const {
    MemoryState s;
    for (const auto& c : cues_) {
      s.neurons.push_back(c.id);
      s.neuron_hive.push_back(c.hive);
    }
    for (const auto& d : data_) {
      s.neurons.push_back(d.id);
      s.neuron_hive.push_back(d.hive);
      s.data_neurons.push_back(d.id);
      s.strengths.push_back(d.strength);
      s.strength_floor.push_back(hives_[d.hive].params().phi);
    }
    const std::size_t n = s.neurons.size();
    for (std::size_t i = 0; i < n; ++i) {
      s.edge_floor.push_back(hives_[s.neuron_hive[i]].params().epsilon);
    }
    s.adjacency.assign(n * n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || s.neuron_hive[i] != s.neuron_hive[j]) continue;
        s.adjacency[i * n + j] = hives_[s.neuron_hive[i]].graph().weight(s.neurons[i], s.neurons[j]);
      }
    }
    return s;
  }

  /// Applies a learnt adjustment to the live memory through the same clamped
  /// primitives the operations use. `delta` is laid out over snapshot().
  void apply(const StateDelta& delta) {
    const MemoryState s = snapshot();
    check_delta_shape(s, delta);
    const std::size_t n = s.n();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = delta.adjacency[i * n + j];
        if (d != 0.0) adjust_association(s.neurons[i], s.neurons[j], d);
      }
    }
    for (std::size_t k = 0; k < s.m(); ++k) {
      if (delta.strengths[k] != 0.0) adjust_strength(s.data_neurons[k], delta.strengths[k]);
    }
  }

 private:
  DataNeuron& mutable_data(NeuronId id) {
    data(id);
    return data_[id.index];
  }

  NeuronId ensure_default_cue(std::size_t hive_index, std::size_t locality) {
    Hive& h = hive(hive_index);
    if (auto existing = h.default_cues_[locality]) return *existing;
    const NeuronId id = NeuronId::cue(static_cast<std::uint32_t>(cues_.size()));
    cues_.push_back(CueNeuron{id, {}, {}, hive_index, true, locality});
    h.cue_bank_.push_back(id);
    h.default_cues_[locality] = id;
    return id;
  }

  void recompress_to_strength(DataNeuron& dn) {
    const Hive& h = hive(dn.hive);
    const double target = quality_for_strength(h.params().quality_map, dn.strength);
    if (target < dn.payload.quality) {
      dn.payload = h.codec().compress(dn.payload, target);
      dn.feature = h.extractor().extract(dn.payload.blob);
    }
  }

  std::vector<Hive> hives_;
  std::vector<CueNeuron> cues_;
  std::vector<DataNeuron> data_;
  std::uint64_t op_counter_ = 0;
};

}  // namespace nstore
