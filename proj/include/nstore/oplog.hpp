#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nstore/io.hpp"

namespace nstore {

inline constexpr std::string_view kOpLogFormat = "ns-oplog";
inline constexpr int kOpLogVersion = 1;

/// One executed operation, shared by the NS engine and the CAM baseline.
struct OpLogRecord {
  std::uint64_t seq = 0;
  std::string engine;    // "ns" | "cam"
  std::string op;        // "store" | "retrieve" | "retention"
  std::string item_id;
  std::vector<std::string> cues;
  std::string outcome;   // merged | new_neuron | hit | miss | stored | overwritten | rejected | aged
  std::uint64_t cost = 0;
  /// Candidates examined, in order (NS only).
  std::vector<std::string> visited;
  std::optional<std::string> dn;
  /// Strength of `dn` after the operation (CAM entries are always 100).
  std::optional<double> strength;
  std::uint64_t total_bytes = 0;
  bool hit = false;
  /// Retrieves that returned data: cosine similarity of the fine cue to the
  /// returned payload's feature, and PSNR of the payload against the
  /// full-quality item it descends from (+inf when exact).
  std::optional<double> similarity;
  std::optional<double> psnr_db;
  std::optional<std::string> returned_origin;
  std::optional<double> returned_quality;

  friend bool operator==(const OpLogRecord&, const OpLogRecord&) = default;
};

namespace detail {

inline Json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

inline double read_number_or_inf(const Json& j) {
  if (j.is_string()) {
    if (j == "inf") return std::numeric_limits<double>::infinity();
    if (j == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("expected a number, found " + j.dump());
  }
  return j.get<double>();
}

}  // namespace detail

inline Json to_json(const OpLogRecord& r) {
  Json j;
  j["seq"] = r.seq;
  j["engine"] = r.engine;
  j["op"] = r.op;
  j["item_id"] = r.item_id;
  j["cues"] = r.cues;
  j["outcome"] = r.outcome;
  j["cost"] = r.cost;
  j["visited"] = r.visited;
  j["dn"] = r.dn ? Json(*r.dn) : Json(nullptr);
  j["strength"] = r.strength ? Json(*r.strength) : Json(nullptr);
  j["total_bytes"] = r.total_bytes;
  j["hit"] = r.hit;
  j["similarity"] = r.similarity ? Json(*r.similarity) : Json(nullptr);
  j["psnr_db"] = r.psnr_db ? detail::number_or_inf(*r.psnr_db) : Json(nullptr);
  j["returned_origin"] = r.returned_origin ? Json(*r.returned_origin) : Json(nullptr);
  j["returned_quality"] = r.returned_quality ? Json(*r.returned_quality) : Json(nullptr);
  return j;
}

inline OpLogRecord oplog_record_from_json(const Json& j) {
  try {
    OpLogRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    r.engine = j.at("engine").get<std::string>();
    r.op = j.at("op").get<std::string>();
    r.item_id = j.at("item_id").get<std::string>();
    r.cues = j.at("cues").get<std::vector<std::string>>();
    r.outcome = j.at("outcome").get<std::string>();
    r.cost = j.at("cost").get<std::uint64_t>();
    r.visited = j.value("visited", std::vector<std::string>{});
    if (!j.at("dn").is_null()) r.dn = j["dn"].get<std::string>();
    if (!j.at("strength").is_null()) r.strength = j["strength"].get<double>();
    r.total_bytes = j.at("total_bytes").get<std::uint64_t>();
    r.hit = j.at("hit").get<bool>();
    if (!j.at("similarity").is_null()) r.similarity = j["similarity"].get<double>();
    if (!j.at("psnr_db").is_null()) r.psnr_db = detail::read_number_or_inf(j["psnr_db"]);
    if (!j.at("returned_origin").is_null()) r.returned_origin = j["returned_origin"].get<std::string>();
    if (!j.at("returned_quality").is_null()) r.returned_quality = j["returned_quality"].get<double>();
    return r;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed op log record: ") + e.what());
  }
}

inline std::string dump_oplog(const std::vector<OpLogRecord>& log) {
  std::vector<Json> rows;
  rows.reserve(log.size());
  for (const auto& r : log) rows.push_back(to_json(r));
  return dump_json_lines(format_header(kOpLogFormat, kOpLogVersion), rows);
}

inline std::vector<OpLogRecord> parse_oplog(std::string_view text, const std::string& where) {
  const JsonLines lines = parse_json_lines(text, kOpLogFormat, kOpLogVersion, where);
  std::vector<OpLogRecord> out;
  out.reserve(lines.records.size());
  for (const auto& j : lines.records) out.push_back(oplog_record_from_json(j));
  return out;
}

}  // namespace nstore
