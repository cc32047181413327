#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include <fmt/format.h>

#include "nstore/errors.hpp"

namespace nstore {

enum class NeuronKind : std::uint8_t { cue = 0, data = 1 };

/// Identifies a neuron. Cue and data neurons have separate index spaces, so
/// the pair (kind, index) is unique across the whole memory.
struct NeuronId {
  NeuronKind kind = NeuronKind::data;
  std::uint32_t index = 0;

  static constexpr NeuronId cue(std::uint32_t i) { return {NeuronKind::cue, i}; }
  static constexpr NeuronId data(std::uint32_t i) { return {NeuronKind::data, i}; }

  constexpr bool is_cue() const { return kind == NeuronKind::cue; }
  constexpr bool is_data() const { return kind == NeuronKind::data; }

  friend constexpr auto operator<=>(const NeuronId&, const NeuronId&) = default;
};

inline std::string to_string(NeuronId id) {
  return fmt::format("{}{}", id.is_cue() ? "cn" : "dn", id.index);
}

/// Parses "cn3" / "dn12".
inline NeuronId parse_neuron_id(const std::string& text) {
  if (text.size() < 3 || (text.rfind("cn", 0) != 0 && text.rfind("dn", 0) != 0)) {
    throw ConfigError("malformed neuron id '" + text + "'");
  }
  try {
    std::size_t used = 0;
    const auto index = std::stoul(text.substr(2), &used);
    if (used != text.size() - 2) throw ConfigError("malformed neuron id '" + text + "'");
    return {text[0] == 'c' ? NeuronKind::cue : NeuronKind::data,
            static_cast<std::uint32_t>(index)};
  } catch (const std::logic_error&) {
    throw ConfigError("malformed neuron id '" + text + "'");
  }
}

}  // namespace nstore
