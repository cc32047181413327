#pragma once

#include <string>

#include <fmt/format.h>

#include "nstore/io.hpp"
#include "nstore/memory.hpp"

namespace nstore {

inline constexpr std::string_view kSnapshotFormat = "nstore-snapshot";
inline constexpr int kSnapshotVersion = 1;

/// Complete observable state: neurons, strengths, edges and search orders.
inline Json snapshot_json(const Memory& memory) {
  Json root = format_header(kSnapshotFormat, kSnapshotVersion);
  root["op_counter"] = memory.op_counter();
  root["hives"] = Json::array();
  for (std::size_t h = 0; h < memory.hive_count(); ++h) {
    const Hive& hive = memory.hive(h);
    Json hj;
    hj["modality"] = hive.params().modality;
    hj["localities"] = Json::array();
    for (std::size_t l = 0; l < hive.locality_count(); ++l) {
      Json lj;
      lj["index"] = l;
      lj["memory_decay_rate"] = hive.params().localities[l].memory_decay_rate;
      const auto dc = hive.default_cue(l);
      lj["default_cue"] = dc ? Json(to_string(*dc)) : Json(nullptr);
      lj["members"] = Json::array();
      for (NeuronId id : hive.locality_members(l)) lj["members"].push_back(to_string(id));
      hj["localities"].push_back(std::move(lj));
    }
    hj["cues"] = Json::array();
    for (NeuronId id : hive.cue_bank()) {
      const CueNeuron& c = memory.cue(id);
      Json cj;
      cj["id"] = to_string(id);
      cj["label"] = c.label;
      cj["default"] = c.is_default;
      cj["locality"] = c.locality ? Json(*c.locality) : Json(nullptr);
      hj["cues"].push_back(std::move(cj));
    }
    hj["data"] = Json::array();
    for (NeuronId id : hive.data_neurons()) {
      const DataNeuron& d = memory.data(id);
      Json dj;
      dj["id"] = to_string(id);
      dj["locality"] = d.locality;
      dj["strength"] = d.strength;
      dj["bytes"] = d.size_bytes();
      dj["original_bytes"] = d.payload.original_size;
      dj["quality"] = d.payload.quality;
      dj["origin"] = d.payload.origin;
      dj["last_access"] = d.last_access_op;
      hj["data"].push_back(std::move(dj));
    }
    hj["edges"] = Json::array();
    for (const auto& [key, edge] : hive.graph().edges()) {
      hj["edges"].push_back(
          {{"a", to_string(key.first)}, {"b", to_string(key.second)}, {"weight", edge.weight}});
    }
    hj["search_orders"] = Json::object();
    for (const auto& [cue, order] : hive.search_orders()) {
      Json oj = Json::array();
      for (const auto& e : order) {
        Json path = Json::array();
        for (NeuronId n : e.path) path.push_back(to_string(n));
        oj.push_back({{"dn", to_string(e.dn)}, {"avg_weight", e.avg_weight}, {"path", path}});
      }
      hj["search_orders"][to_string(cue)] = std::move(oj);
    }
    root["hives"].push_back(std::move(hj));
  }
  return root;
}

inline Json load_snapshot(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  check_header(j, kSnapshotFormat, kSnapshotVersion, path.string());
  return j;
}

namespace detail {

inline std::string fmt_num(const Json& v) {
  const double d = v.get<double>();
  if (d == static_cast<double>(static_cast<long long>(d))) return fmt::format("{}", static_cast<long long>(d));
  return fmt::format("{:.3f}", d);
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// Graphviz rendering of a snapshot document.
inline std::string render_dot(const Json& snap) {
  check_header(snap, kSnapshotFormat, kSnapshotVersion, "snapshot");
  std::string out = "graph nstore {\n";
  const auto& hives = snap.at("hives");
  for (std::size_t h = 0; h < hives.size(); ++h) {
    const Json& hj = hives[h];
    if (hj.at("cues").empty() && hj.at("data").empty()) continue;
    auto node = [&](const std::string& id) { return fmt::format("h{}_{}", h, id); };
    out += fmt::format("  subgraph cluster_h{} {{\n    label=\"{}\";\n", h,
                       detail::dot_escape(hj.at("modality").get<std::string>()));
    for (const auto& c : hj.at("cues")) {
      const std::string id = c.at("id").get<std::string>();
      const std::string label = c.at("default").get<bool>()
                                    ? fmt::format("default L{}", c.at("locality").get<std::size_t>())
                                    : c.at("label").get<std::string>();
      out += fmt::format("    {} [shape=ellipse, label=\"{}\\n{}\"];\n", node(id), id, detail::dot_escape(label));
    }
    for (const auto& l : hj.at("localities")) {
      if (l.at("members").empty()) continue;
      out += fmt::format("    subgraph cluster_h{}_l{} {{\n      label=\"locality {}\";\n", h,
                         l.at("index").get<std::size_t>(), l.at("index").get<std::size_t>());
      for (const auto& d : hj.at("data")) {
        if (d.at("locality") != l.at("index")) continue;
        const std::string id = d.at("id").get<std::string>();
        out += fmt::format("      {} [shape=box, label=\"{}\\ns={} {}B\"];\n", node(id), id,
                           detail::fmt_num(d.at("strength")), d.at("bytes").get<std::uint64_t>());
      }
      out += "    }\n";
    }
    for (const auto& e : hj.at("edges")) {
      out += fmt::format("    {} -- {} [label=\"{}\"];\n", node(e.at("a").get<std::string>()),
                         node(e.at("b").get<std::string>()), detail::fmt_num(e.at("weight")));
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

/// Plain-text rendering: neurons, edges and search orders.
inline std::string render_text(const Json& snap) {
  check_header(snap, kSnapshotFormat, kSnapshotVersion, "snapshot");
  std::string out = fmt::format("op_counter {}\n", snap.at("op_counter").get<std::uint64_t>());
  for (const auto& hj : snap.at("hives")) {
    out += fmt::format("hive {}: {} cue neurons, {} data neurons, {} edges\n",
                       hj.at("modality").get<std::string>(), hj.at("cues").size(), hj.at("data").size(),
                       hj.at("edges").size());
    for (const auto& l : hj.at("localities")) {
      out += fmt::format("  locality {}: {} data neurons\n", l.at("index").get<std::size_t>(),
                         l.at("members").size());
    }
    for (const auto& c : hj.at("cues")) {
      out += fmt::format("  {} {}\n", c.at("id").get<std::string>(),
                         c.at("default").get<bool>()
                             ? fmt::format("(default, locality {})", c.at("locality").get<std::size_t>())
                             : c.at("label").get<std::string>());
    }
    for (const auto& d : hj.at("data")) {
      out += fmt::format("  {} locality {} strength {} bytes {}\n", d.at("id").get<std::string>(),
                         d.at("locality").get<std::size_t>(), detail::fmt_num(d.at("strength")),
                         d.at("bytes").get<std::uint64_t>());
    }
    for (const auto& e : hj.at("edges")) {
      out += fmt::format("  {} -- {} : {}\n", e.at("a").get<std::string>(), e.at("b").get<std::string>(),
                         detail::fmt_num(e.at("weight")));
    }
    for (const auto& [cue, order] : hj.at("search_orders").items()) {
      out += "  order " + cue + ":";
      for (const auto& e : order) {
        out += fmt::format(" {}({})", e.at("dn").get<std::string>(), detail::fmt_num(e.at("avg_weight")));
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace nstore
