#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nstore/errors.hpp"
#include "nstore/rng.hpp"

namespace nstore {

using Bytes = std::vector<std::uint8_t>;
using FeatureVector = std::vector<double>;

/// A stored data unit. `blob` holds the current (possibly degraded) content;
/// `quality` is the percentage at which it currently stands.
struct Payload {
  std::string modality;
  Bytes blob;
  std::size_t original_size = 0;
  double quality = 100.0;
  /// Byte used to pad discarded content on reconstruction.
  std::uint8_t fill = 0;
  /// Identifier of the source item this payload descends from.
  std::string origin;

  std::size_t size() const { return blob.size(); }
  bool is_original() const { return quality >= 100.0 && blob.size() == original_size; }
};

/// Rounded mean byte; 0 for an empty sequence.
inline std::uint8_t mean_byte(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) return 0;
  const auto sum = std::accumulate(bytes.begin(), bytes.end(), std::uint64_t{0});
  return static_cast<std::uint8_t>((sum * 2 + bytes.size()) / (2 * bytes.size()));
}

inline Payload make_payload(std::string modality, Bytes bytes, std::string origin = {}) {
  Payload p;
  p.modality = std::move(modality);
  p.original_size = bytes.size();
  p.fill = mean_byte(bytes);
  p.blob = std::move(bytes);
  p.origin = std::move(origin);
  return p;
}

// ---------------------------------------------------------------------------
// Codecs

class Codec {
 public:
  virtual ~Codec() = default;
  virtual std::string id() const = 0;
  /// Degrades `payload` to `target_quality`. Up-compression is rejected.
  virtual Payload compress(const Payload& payload, double target_quality) const = 0;
  /// Rebuilds a byte sequence of the original length from a degraded payload.
  virtual Bytes reconstruct(const Payload& payload) const = 0;
};

/// Number of bytes the truncation codec keeps at `quality` percent.
inline std::size_t truncated_size(std::size_t original_size, double quality) {
  if (quality >= 100.0) return original_size;
  if (quality <= 0.0) return 0;
  const double exact = static_cast<double>(original_size) * quality / 100.0;
  const auto kept = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::min(kept, original_size);
}

/// Keeps the first ceil(q% * n) bytes; reconstruction pads with the mean byte.
/// Prefixes compose, so compress(compress(p, q1), q2) == compress(p, q2).
class TruncationCodec final : public Codec {
 public:
  std::string id() const override { return "truncation"; }

  Payload compress(const Payload& payload, double target_quality) const override {
    if (!(target_quality >= 0.0) || target_quality > payload.quality + 1e-12) {
      throw std::invalid_argument("compress: target quality " + std::to_string(target_quality) +
                                  " above current quality " + std::to_string(payload.quality));
    }
    Payload out = payload;
    out.quality = target_quality;
    out.blob.resize(std::min(payload.blob.size(),
                             truncated_size(payload.original_size, target_quality)));
    return out;
  }

  Bytes reconstruct(const Payload& payload) const override {
    Bytes out = payload.blob;
    out.resize(payload.original_size, payload.fill);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Feature extraction

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual FeatureVector extract(std::span<const std::uint8_t> bytes) const = 0;
};

inline void normalize_in_place(FeatureVector& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
}

/// Byte histogram (256 bins), centred on its mean bin count, projected through
/// a seeded +/-1 matrix and normalised to unit length.
class HistogramProjectionExtractor final : public FeatureExtractor {
 public:
  explicit HistogramProjectionExtractor(std::size_t dimension = 64, std::uint64_t seed = 1)
      : dimension_(dimension), projection_(dimension * 256) {
    if (dimension == 0) throw ConfigError("feature dimension must be positive");
    Rng rng(seed);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < projection_.size(); ++i) {
      if (i % 64 == 0) bits = rng.next();
      projection_[i] = (bits >> (i % 64)) & 1U ? 1 : -1;
    }
  }

  std::string id() const override { return "histogram-projection"; }
  std::size_t dimension() const override { return dimension_; }

  FeatureVector extract(std::span<const std::uint8_t> bytes) const override {
    FeatureVector out(dimension_, 0.0);
    if (bytes.empty()) return out;
    std::array<double, 256> hist{};
    for (auto b : bytes) hist[b] += 1.0;
    const double mean = static_cast<double>(bytes.size()) / 256.0;
    for (double& h : hist) h -= mean;
    for (std::size_t r = 0; r < dimension_; ++r) {
      const auto* row = &projection_[r * 256];
      double acc = 0.0;
      for (std::size_t c = 0; c < 256; ++c) acc += row[c] * hist[c];
      out[r] = acc;
    }
    normalize_in_place(out);
    return out;
  }

 private:
  std::size_t dimension_;
  std::vector<std::int8_t> projection_;
};

/// Deterministic unit vector for a textual cue.
inline FeatureVector label_vector(std::string_view label, std::size_t dimension) {
  Rng rng(fnv1a64(label));
  FeatureVector v(dimension);
  for (auto& x : v) x = (rng.next() & 1U) ? 1.0 : -1.0;
  normalize_in_place(v);
  return v;
}

// ---------------------------------------------------------------------------
// Metrics

/// Cosine similarity in [-1, 1]; 0 when either vector is zero.
inline double similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("similarity: dimension mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

/// PSNR in dB of `degraded` against its full-quality `original`;
/// +infinity when the reconstruction is exact.
inline double fidelity(const Payload& original, const Payload& degraded, const Codec& codec) {
  if (original.blob.size() != original.original_size ||
      degraded.original_size != original.original_size) {
    throw ConsistencyError("fidelity: payloads do not share a lineage (sizes " +
                           std::to_string(original.original_size) + " vs " +
                           std::to_string(degraded.original_size) + ")");
  }
  const Bytes rebuilt = codec.reconstruct(degraded);
  if (rebuilt.size() != original.blob.size()) {
    throw ConsistencyError("fidelity: reconstruction length mismatch");
  }
  if (rebuilt.empty()) return std::numeric_limits<double>::infinity();
  double sq = 0.0;
  for (std::size_t i = 0; i < rebuilt.size(); ++i) {
    const double d = static_cast<double>(rebuilt[i]) - static_cast<double>(original.blob[i]);
    sq += d * d;
  }
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sq / static_cast<double>(rebuilt.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

/// PSNR scaled into [0, 1] against a reference level.
inline double normalized_fidelity(double psnr_db, double reference_db) {
  if (std::isinf(psnr_db) && psnr_db > 0) return 1.0;
  return std::clamp(psnr_db / reference_db, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Strength -> quality maps

inline double quality_for_strength(std::string_view map, double strength) {
  if (map == "identity") return strength;
  if (map == "quadratic") return strength * strength / 100.0;
  throw ConfigError("unknown quality map '" + std::string(map) + "'");
}

inline bool is_known_quality_map(std::string_view map) {
  return map == "identity" || map == "quadratic";
}

// ---------------------------------------------------------------------------
// Plug-in registry. Codecs and extractors are selected by id string; new ones
// can be registered at start-up before any memory is built.

using CodecFactory = std::function<std::shared_ptr<const Codec>()>;
using ExtractorFactory =
    std::function<std::shared_ptr<const FeatureExtractor>(std::size_t dimension, std::uint64_t seed)>;

class PluginRegistry {
 public:
  static PluginRegistry& instance() {
    static PluginRegistry registry;
    return registry;
  }

  void register_codec(const std::string& id, CodecFactory factory) {
    codecs_[id] = std::move(factory);
  }
  void register_extractor(const std::string& id, ExtractorFactory factory) {
    extractors_[id] = std::move(factory);
  }

  bool has_codec(const std::string& id) const { return codecs_.contains(id); }
  bool has_extractor(const std::string& id) const { return extractors_.contains(id); }

  std::shared_ptr<const Codec> make_codec(const std::string& id) const {
    const auto it = codecs_.find(id);
    if (it == codecs_.end()) throw ConfigError("unknown codec '" + id + "'");
    return it->second();
  }

  std::shared_ptr<const FeatureExtractor> make_extractor(const std::string& id,
                                                         std::size_t dimension,
                                                         std::uint64_t seed) const {
    const auto it = extractors_.find(id);
    if (it == extractors_.end()) throw ConfigError("unknown feature extractor '" + id + "'");
    return it->second(dimension, seed);
  }

 private:
  PluginRegistry() {
    register_codec("truncation", [] { return std::make_shared<TruncationCodec>(); });
    register_extractor("histogram-projection", [](std::size_t dim, std::uint64_t seed) {
      return std::make_shared<HistogramProjectionExtractor>(dim, seed);
    });
  }

  std::map<std::string, CodecFactory> codecs_;
  std::map<std::string, ExtractorFactory> extractors_;
};

}  // namespace nstore
