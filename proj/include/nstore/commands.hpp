#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "nstore/config.hpp"
#include "nstore/export.hpp"
#include "nstore/metrics.hpp"
#include "nstore/workload.hpp"

namespace nstore {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitStorageFull = 3, kExitIo = 4 };

inline std::string file_hash(const fs::path& p) {
  const Bytes b = read_bytes(p);
  return hex64(fnv1a64(std::span<const std::uint8_t>(b)));
}

/// Writes the corpus, manifest and trace; reports each path with its hash.
inline Workload cmd_generate(const RunConfig& config, const fs::path& out_dir, std::ostream& out) {
  config.validate();
  Workload w = build_workload(config.workload);
  const fs::path manifest = write_corpus(w.corpus, out_dir);
  const fs::path trace = out_dir / "trace.jsonl";
  write_text(trace, dump_trace(w.trace));
  const fs::path resolved = out_dir / "config.resolved.json";
  write_text(resolved, to_json(config).dump(2) + "\n");
  Bytes all;
  for (const auto& it : w.corpus.items()) all.insert(all.end(), it.bytes.begin(), it.bytes.end());
  out << fmt::format("manifest {} {}\n", manifest.string(), file_hash(manifest));
  out << fmt::format("payloads {} items {} bytes {}\n", w.corpus.size(), w.corpus.total_bytes(),
                     hex64(fnv1a64(std::span<const std::uint8_t>(all))));
  out << fmt::format("trace {} {}\n", trace.string(), file_hash(trace));
  out << fmt::format("config {} {}\n", resolved.string(), file_hash(resolved));
  return w;
}

/// Trace plus the manifest it names (resolved next to the trace file).
inline Workload load_workload(const fs::path& trace_path) {
  Workload w;
  w.trace = parse_trace(read_text(trace_path), trace_path.string());
  const std::string manifest = w.trace.manifest.empty() ? "manifest.jsonl" : w.trace.manifest;
  w.corpus = load_manifest(trace_path.parent_path() / manifest);
  check_trace(w.trace, w.corpus);
  return w;
}

/// The trace at `trace_path`, or the one the config's workload describes.
inline Workload resolve_workload(const RunConfig& config, const std::optional<fs::path>& trace_path) {
  if (trace_path) return load_workload(*trace_path);
  return build_workload(config.workload);
}

struct RunResult {
  std::vector<OpLogRecord> log;
  Summary summary;
};

inline RunResult cmd_run(const RunConfig& config, const std::optional<fs::path>& trace_path,
                         const fs::path& out_dir, std::ostream& out) {
  config.validate();
  const Workload w = resolve_workload(config, trace_path);
  RunResult r;
  const std::string& e = config.engine;
  if (e == "ns") {
    Engine engine(Memory({config.setup.hive}));
    r.log = replay_ns(w.trace, w.corpus, config.setup, {}, &engine);
    write_text(out_dir / "snapshot.json", snapshot_json(engine.memory()).dump(2) + "\n");
  } else {
    r.log = replay_cam(w.trace, w.corpus, config.setup);
  }
  if (r.log.empty()) throw ConfigError("trace has no records");
  r.summary = summarize(r.log, config.report);
  const auto tl = space_timeline(r.log);
  write_text(out_dir / fmt::format("oplog_{}.jsonl", e), dump_oplog(r.log));
  write_text(out_dir / fmt::format("summary_{}.csv", e), summary_csv({r.summary}));
  write_text(out_dir / fmt::format("timeline_{}.csv", e), timeline_csv(tl));
  write_text(out_dir / fmt::format("timeline_{}.svg", e),
             line_chart_svg("Total space", "operation", "bytes", {timeline_series(e, tl)}));
  out << fmt::format("{}: {} ops, mean retrieve cost {}, final bytes {}, quality factor {}\n", e,
                     r.summary.ops, fmt_real(r.summary.retrieve.mean), r.summary.final_bytes,
                     fmt_real(r.summary.quality.value));
  out << fmt::format("wrote {}\n", (out_dir / fmt::format("oplog_{}.jsonl", e)).string());
  return r;
}

struct CompareResult {
  std::vector<OpLogRecord> ns_log;
  std::vector<OpLogRecord> cam_log;
  Summary ns;
  Summary cam;
  std::vector<QualityFactorPoint> ns_curve;
  std::vector<QualityFactorPoint> cam_curve;
  std::uint64_t corpus_bytes = 0;
  /// CSV files written, in a fixed order.
  std::vector<fs::path> csv_files;
};

inline CompareResult cmd_compare(const RunConfig& config, const std::optional<fs::path>& trace_path,
                                 const fs::path& out_dir, std::ostream& out) {
  config.validate();
  const Workload w = resolve_workload(config, trace_path);
  CompareResult r;
  r.corpus_bytes = w.corpus.total_bytes();
  r.ns_log = replay_ns(w.trace, w.corpus, config.setup);
  r.cam_log = replay_cam(w.trace, w.corpus, config.setup);
  if (r.ns_log.empty()) throw ConfigError("trace has no records");
  check_same_trace(r.ns_log, r.cam_log);
  r.ns = summarize(r.ns_log, config.report);
  r.cam = summarize(r.cam_log, config.report);
  r.ns_curve = quality_factor_curve(w.trace, w.corpus, config.setup, "ns", config.report);
  r.cam_curve = quality_factor_curve(w.trace, w.corpus, config.setup, "cam", config.report);

  const auto ns_tl = space_timeline(r.ns_log);
  const auto cam_tl = space_timeline(r.cam_log);
  auto csv = [&](const std::string& name, const std::string& body) {
    const fs::path p = out_dir / name;
    write_text(p, body);
    r.csv_files.push_back(p);
  };
  csv("summary.csv", summary_csv({r.ns, r.cam}));
  csv("comparison.csv", comparison_csv(config.preset, r.ns, r.cam));
  csv("timeline_ns.csv", timeline_csv(ns_tl));
  csv("timeline_cam.csv", timeline_csv(cam_tl));
  csv("qf_curve.csv", qf_curve_csv({{"ns", r.ns_curve}, {"cam", r.cam_curve}}));
  write_text(out_dir / "oplog_ns.jsonl", dump_oplog(r.ns_log));
  write_text(out_dir / "oplog_cam.jsonl", dump_oplog(r.cam_log));
  write_text(out_dir / "timeline.svg",
             line_chart_svg("Total space", "operation", "bytes",
                            {timeline_series("ns", ns_tl), timeline_series("cam", cam_tl)}));
  write_text(out_dir / "qf_curve.svg",
             line_chart_svg("Quality factor vs memory cap", "cap (% of corpus)", "quality factor",
                            {qf_series("ns", r.ns_curve), qf_series("cam", r.cam_curve)}));

  out << fmt::format("retrieve cost  ns {}  cam {}  ratio {}\n", fmt_real(r.ns.retrieve.mean),
                     fmt_real(r.cam.retrieve.mean), fmt_real(safe_ratio(r.ns.retrieve.mean, r.cam.retrieve.mean)));
  out << fmt::format("final bytes    ns {}  cam {}\n", r.ns.final_bytes, r.cam.final_bytes);
  out << fmt::format("quality factor ns {}  cam {}\n", fmt_real(r.ns.quality.value), fmt_real(r.cam.quality.value));
  for (const auto& p : r.csv_files) out << fmt::format("wrote {}\n", p.string());
  return r;
}

inline std::string cmd_inspect(const fs::path& snapshot, const std::string& format) {
  const Json snap = load_snapshot(snapshot);
  if (format == "dot") return render_dot(snap);
  if (format == "text") return render_text(snap);
  throw ConfigError("inspect format must be 'dot' or 'text'");
}

}  // namespace nstore
