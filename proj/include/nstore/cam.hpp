#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nstore/codec.hpp"
#include "nstore/errors.hpp"

namespace nstore {

enum class ReplacementPolicy { fifo, lru };

inline ReplacementPolicy parse_replacement_policy(std::string_view s) {
  if (s == "fifo") return ReplacementPolicy::fifo;
  if (s == "lru") return ReplacementPolicy::lru;
  throw ConfigError("unknown replacement policy '" + std::string(s) + "'");
}

inline std::string_view to_string(ReplacementPolicy p) {
  return p == ReplacementPolicy::fifo ? "fifo" : "lru";
}

struct CamParams {
  ReplacementPolicy policy = ReplacementPolicy::fifo;
  std::optional<std::size_t> capacity_entries;
  std::optional<std::uint64_t> capacity_bytes;
};

struct CamEntry {
  std::string tag;
  Payload data;
  std::uint64_t insert_seq = 0;
  std::uint64_t last_use = 0;
};

struct CamStoreResult {
  std::uint64_t cost = 0;
  bool overwritten = false;
  /// False when the item alone exceeds the byte capacity.
  bool stored = true;
  std::size_t evicted = 0;
};

struct CamRetrieveResult {
  std::optional<Payload> data;
  std::uint64_t cost = 0;
};

/// Traditional CAM: one entry per tag, exact match, linear scan in insertion
/// order, data always kept at full quality.
class Cam {
 public:
  explicit Cam(CamParams params = {}) : params_(params) {
    if (params_.capacity_entries && *params_.capacity_entries == 0) {
      throw ConfigError("cam capacity_entries must be >= 1");
    }
  }

  const CamParams& params() const { return params_; }
  const std::vector<CamEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t total_bytes() const { return bytes_; }

  CamStoreResult store(const std::string& tag, const Payload& data) {
    ++clock_;
    CamStoreResult out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      ++out.cost;
      if (entries_[i].tag != tag) continue;
      bytes_ -= entries_[i].data.size();
      entries_[i].data = data;
      entries_[i].last_use = clock_;
      bytes_ += data.size();
      out.overwritten = true;
      out.evicted = make_room(0, 0, i);
      return out;
    }
    if (params_.capacity_bytes && data.size() > *params_.capacity_bytes) {
      out.stored = false;
      return out;
    }
    out.evicted = make_room(1, data.size(), entries_.size());
    entries_.push_back(CamEntry{tag, data, clock_, clock_});
    bytes_ += data.size();
    return out;
  }

  CamRetrieveResult retrieve(const std::string& tag) {
    ++clock_;
    CamRetrieveResult out;
    for (auto& e : entries_) {
      ++out.cost;
      if (e.tag == tag) {
        e.last_use = clock_;
        out.data = e.data;
        return out;
      }
    }
    return out;
  }

 private:
  /// Evicts until `extra_entries` more entries of `extra_bytes` fit. The entry
  /// at `protect` (if any) is never chosen.
  std::size_t make_room(std::size_t extra_entries, std::uint64_t extra_bytes, std::size_t protect) {
    std::size_t evicted = 0;
    auto over = [&] {
      if (params_.capacity_entries && entries_.size() + extra_entries > *params_.capacity_entries) {
        return true;
      }
      return params_.capacity_bytes && bytes_ + extra_bytes > *params_.capacity_bytes;
    };
    while (over() && !entries_.empty()) {
      std::size_t victim = entries_.size();
      for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i == protect) continue;
        if (victim == entries_.size() || rank(entries_[i]) < rank(entries_[victim])) victim = i;
      }
      if (victim == entries_.size()) break;
      bytes_ -= entries_[victim].data.size();
      entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
      if (victim < protect) --protect;
      ++evicted;
    }
    return evicted;
  }

  std::uint64_t rank(const CamEntry& e) const {
    return params_.policy == ReplacementPolicy::fifo ? e.insert_seq : e.last_use;
  }

  CamParams params_;
  std::vector<CamEntry> entries_;
  std::uint64_t bytes_ = 0;
  std::uint64_t clock_ = 0;
};

}  // namespace nstore
