#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "nstore/errors.hpp"
#include "nstore/ids.hpp"

namespace nstore {

/// Sparse symmetric weighted adjacency between neurons.
///
/// Edges are keyed by the ordered pair (min, max), so weight(a, b) and
/// weight(b, a) always read the same entry. Every stored weight is kept at or
/// above the floor `epsilon`. In implicit-floor mode (the fully connected
/// organisation) an absent edge reads as `epsilon`; otherwise it is absent.
class AssociationGraph {
 public:
  struct Edge {
    double weight = 0.0;
    std::uint64_t last_access = 0;
  };
  using Key = std::pair<NeuronId, NeuronId>;

  AssociationGraph() = default;
  AssociationGraph(double epsilon, bool implicit_floor)
      : epsilon_(epsilon), implicit_floor_(implicit_floor) {}

  double epsilon() const { return epsilon_; }
  bool implicit_floor() const { return implicit_floor_; }

  static Key key(NeuronId a, NeuronId b) { return a < b ? Key{a, b} : Key{b, a}; }

  /// Materialised edge, if any.
  const Edge* find(NeuronId a, NeuronId b) const {
    const auto it = edges_.find(key(a, b));
    return it == edges_.end() ? nullptr : &it->second;
  }

  /// Current weight: materialised value, epsilon in implicit-floor mode,
  /// nullopt when there is no association.
  std::optional<double> weight(NeuronId a, NeuronId b) const {
    if (a == b) return std::nullopt;
    if (const Edge* e = find(a, b)) return e->weight;
    if (implicit_floor_) return epsilon_;
    return std::nullopt;
  }

  /// Creates the edge at epsilon if absent. Returns the (possibly existing) weight.
  double connect(NeuronId a, NeuronId b, std::uint64_t op) {
    check_distinct(a, b);
    auto [it, inserted] = edges_.try_emplace(key(a, b), Edge{epsilon_, op});
    if (inserted) {
      neighbours_[a].insert(b);
      neighbours_[b].insert(a);
    } else {
      it->second.last_access = op;
    }
    return it->second.weight;
  }

  /// new = max(epsilon, old - delta). Positive delta decays, negative
  /// strengthens. Creates the edge (from epsilon or the implicit floor) when
  /// absent.
  double adjust(NeuronId a, NeuronId b, double delta, std::uint64_t op) {
    check_distinct(a, b);
    connect(a, b, op);
    Edge& e = edges_.at(key(a, b));
    e.weight = std::max(epsilon_, e.weight - delta);
    e.last_access = op;
    return e.weight;
  }

  /// Overwrites a weight, clamped at the floor. Used when importing state.
  void set(NeuronId a, NeuronId b, double weight, std::uint64_t op) {
    connect(a, b, op);
    Edge& e = edges_.at(key(a, b));
    e.weight = std::max(epsilon_, weight);
    e.last_access = op;
  }

  /// Ageing step: lowers a materialised weight without counting as an access.
  double decay(NeuronId a, NeuronId b, double delta) {
    Edge& e = edges_.at(key(a, b));
    e.weight = std::max(epsilon_, e.weight - delta);
    return e.weight;
  }

  void touch(NeuronId a, NeuronId b, std::uint64_t op) {
    auto it = edges_.find(key(a, b));
    if (it != edges_.end()) it->second.last_access = op;
  }

  /// Materialised neighbours in ascending id order.
  std::vector<NeuronId> neighbours(NeuronId a) const {
    const auto it = neighbours_.find(a);
    if (it == neighbours_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

  const std::map<Key, Edge>& edges() const { return edges_; }
  std::map<Key, Edge>& mutable_edges() { return edges_; }
  std::size_t size() const { return edges_.size(); }

 private:
  static void check_distinct(NeuronId a, NeuronId b) {
    if (a == b) throw ConsistencyError("self-edge rejected on " + to_string(a));
  }

  double epsilon_ = 0.0;
  bool implicit_floor_ = false;
  std::map<Key, Edge> edges_;
  std::map<NeuronId, std::set<NeuronId>> neighbours_;
};

}  // namespace nstore
