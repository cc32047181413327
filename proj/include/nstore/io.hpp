#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "nstore/codec.hpp"
#include "nstore/errors.hpp"

namespace nstore {

using Json = nlohmann::ordered_json;

namespace fs = std::filesystem;

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Bytes read_bytes(const fs::path& path) {
  const std::string s = read_text(path);
  return Bytes(s.begin(), s.end());
}

inline void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

inline void write_bytes(const fs::path& path, const Bytes& bytes) {
  write_text(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

inline std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

inline Json format_header(std::string_view format, int version) {
  Json h;
  h["format"] = format;
  h["version"] = version;
  return h;
}

/// Throws ConfigError unless `header` names `format` at `version`.
inline void check_header(const Json& header, std::string_view format, int version,
                         const std::string& where) {
  if (!header.is_object() || !header.contains("format") || !header.contains("version")) {
    throw ConfigError(where + ": missing format header");
  }
  if (header["format"] != format) {
    throw ConfigError(fmt::format("{}: expected format '{}', found {}", where, format,
                                  header["format"].dump()));
  }
  if (header["version"] != version) {
    throw ConfigError(fmt::format("{}: unsupported {} version {} (expected {})", where, format,
                                  header["version"].dump(), version));
  }
}

/// Line-delimited JSON: a header line followed by one record per line.
struct JsonLines {
  Json header;
  std::vector<Json> records;
};

inline JsonLines parse_json_lines(std::string_view text, std::string_view format, int version,
                                  const std::string& where) {
  JsonLines out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ConfigError(fmt::format("{}:{}: malformed line: {}", where, line_no, e.what()));
    }
    if (!have_header) {
      check_header(j, format, version, where);
      out.header = std::move(j);
      have_header = true;
    } else {
      out.records.push_back(std::move(j));
    }
  }
  if (!have_header) throw ConfigError(where + ": empty file, missing format header");
  return out;
}

inline std::string dump_json_lines(const Json& header, const std::vector<Json>& records) {
  std::string out = header.dump() + "\n";
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

}  // namespace nstore
