#pragma once

#include <vector>

#include "nstore/codec.hpp"
#include "nstore/memory.hpp"
#include "nstore/rng.hpp"

namespace nstore::testing {

/// Bytes drawn from a seeded 16-value palette in [80, 176).
inline Bytes palette_bytes(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<std::uint8_t> palette(16);
  for (auto& p : palette) p = static_cast<std::uint8_t>(80 + rng.below(96));
  Bytes b(n);
  for (auto& x : b) x = palette[rng.below(palette.size())];
  return b;
}

inline Payload palette_payload(std::uint64_t seed, std::size_t n = 1000) {
  return make_payload("image", palette_bytes(seed, n), "p" + std::to_string(seed));
}

/// Two localities: "wolf"/"fox" go to 0, everything else to 1.
inline HiveParams two_locality_params() {
  HiveParams p;
  p.modality = "image";
  LocalityParams l0;
  l0.memory_decay_rate = 0.5;
  l0.mapping.labels = {"wolf", "fox"};
  l0.elasticity_schedule = {80, 70, 60, 50, 40, 30, 20, 10, 1};
  LocalityParams l1;
  l1.memory_decay_rate = 1.0;
  l1.elasticity_schedule = {80, 70, 60, 50, 40, 30, 20, 10, 1};
  p.localities = {l0, l1};
  return p;
}

}  // namespace nstore::testing
