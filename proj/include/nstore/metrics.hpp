#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "nstore/config.hpp"
#include "nstore/io.hpp"
#include "nstore/oplog.hpp"
#include "nstore/workload.hpp"

namespace nstore {

struct CostStats {
  std::string op;
  std::uint64_t count = 0;
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  std::uint64_t max = 0;
};

struct QualityFactor {
  double hit_rate = 0.0;
  double fidelity = 0.0;
  double value = 0.0;
};

struct Summary {
  std::string engine;
  std::uint64_t ops = 0;
  CostStats store;
  CostStats retrieve;
  /// Store and retrieve together.
  CostStats combined;
  /// Mean retrieve cost over records with seq >= warmup.
  double retrieve_mean_after_warmup = 0.0;
  std::uint64_t final_bytes = 0;
  std::uint64_t peak_bytes = 0;
  double mean_similarity = 0.0;
  QualityFactor quality;
};

/// Nearest-rank percentile of a sorted sample.
inline double percentile(const std::vector<std::uint64_t>& sorted, double pct) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(sorted.size())));
  return static_cast<double>(sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1]);
}

inline CostStats cost_stats(std::string op, std::vector<std::uint64_t> costs) {
  CostStats s;
  s.op = std::move(op);
  s.count = costs.size();
  if (costs.empty()) return s;
  std::sort(costs.begin(), costs.end());
  double sum = 0.0;
  for (auto c : costs) sum += static_cast<double>(c);
  s.mean = sum / static_cast<double>(costs.size());
  s.p50 = percentile(costs, 50);
  s.p95 = percentile(costs, 95);
  s.max = costs.back();
  return s;
}

/// Hit rate over retrieves times the mean normalised fidelity of what they
/// returned. Both factors lie in [0, 1].
inline QualityFactor quality_factor(const std::vector<OpLogRecord>& log, double psnr_ref) {
  QualityFactor q;
  std::uint64_t retrieves = 0, hits = 0;
  double fid = 0.0;
  for (const auto& r : log) {
    if (r.op != "retrieve") continue;
    ++retrieves;
    if (!r.hit) continue;
    ++hits;
    fid += r.psnr_db ? normalized_fidelity(*r.psnr_db, psnr_ref) : 0.0;
  }
  if (retrieves == 0) return q;
  q.hit_rate = static_cast<double>(hits) / static_cast<double>(retrieves);
  q.fidelity = hits ? fid / static_cast<double>(hits) : 0.0;
  q.value = q.hit_rate * q.fidelity;
  return q;
}

inline Summary summarize(const std::vector<OpLogRecord>& log, const ReportOptions& opt) {
  if (log.empty()) throw ConfigError("cannot summarise an empty log");
  Summary s;
  s.engine = log.front().engine;
  s.ops = log.size();
  std::vector<std::uint64_t> st, rt, all, rt_after;
  double sim = 0.0;
  std::uint64_t sim_n = 0;
  for (const auto& r : log) {
    if (r.engine != s.engine) throw ConfigError("log mixes engines '" + s.engine + "' and '" + r.engine + "'");
    if (r.op == "store") st.push_back(r.cost);
    if (r.op == "retrieve") {
      rt.push_back(r.cost);
      if (r.seq >= opt.warmup_ops) rt_after.push_back(r.cost);
      if (r.similarity) {
        sim += *r.similarity;
        ++sim_n;
      }
    }
    if (r.op != "retention") all.push_back(r.cost);
    s.peak_bytes = std::max(s.peak_bytes, r.total_bytes);
  }
  s.store = cost_stats("store", st);
  s.retrieve = cost_stats("retrieve", rt);
  s.combined = cost_stats("combined", all);
  s.retrieve_mean_after_warmup = cost_stats("retrieve", rt_after).mean;
  s.final_bytes = log.back().total_bytes;
  s.mean_similarity = sim_n ? sim / static_cast<double>(sim_n) : 0.0;
  s.quality = quality_factor(log, opt.psnr_ref);
  return s;
}

/// Logs compared side by side must come from the same trace.
inline void check_same_trace(const std::vector<OpLogRecord>& a, const std::vector<OpLogRecord>& b) {
  if (a.size() != b.size()) {
    throw ConfigError(fmt::format("logs come from different traces ({} vs {} records)", a.size(), b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].seq != b[i].seq || a[i].op != b[i].op || a[i].item_id != b[i].item_id) {
      throw ConfigError(fmt::format("logs come from different traces (record {} differs)", i));
    }
  }
}

inline double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

struct TimelinePoint {
  std::uint64_t seq = 0;
  std::uint64_t total_bytes = 0;
};

inline std::vector<TimelinePoint> space_timeline(const std::vector<OpLogRecord>& log) {
  std::vector<TimelinePoint> out;
  out.reserve(log.size());
  for (const auto& r : log) out.push_back({r.seq, r.total_bytes});
  return out;
}

// ---------------------------------------------------------------------------
// Quality factor against memory cap

struct QualityFactorPoint {
  double cap_fraction = 0.0;
  std::uint64_t memory_cap_bytes = 0;
  double quality_factor = 0.0;
  double hit_rate = 0.0;
  double fidelity = 0.0;
  /// Replay aborted (the point is recorded as 0).
  bool failed = false;
};

inline std::vector<QualityFactorPoint> quality_factor_curve(const Trace& trace, const Corpus& corpus,
                                                            const EngineSetup& setup,
                                                            const std::string& engine,
                                                            const ReportOptions& opt) {
  std::vector<QualityFactorPoint> out;
  const std::uint64_t full = corpus.total_bytes();
  for (double frac : opt.cap_grid) {
    QualityFactorPoint p;
    p.cap_fraction = frac;
    p.memory_cap_bytes = static_cast<std::uint64_t>(std::floor(frac * static_cast<double>(full)));
    EngineSetup capped = setup;
    capped.hive.capacity_bytes = p.memory_cap_bytes;
    capped.cam.capacity_bytes = p.memory_cap_bytes;
    try {
      const auto log = engine == "ns" ? replay_ns(trace, corpus, capped) : replay_cam(trace, corpus, capped);
      const QualityFactor q = quality_factor(log, opt.psnr_ref);
      p.quality_factor = q.value;
      p.hit_rate = q.hit_rate;
      p.fidelity = q.fidelity;
    } catch (const StorageFull&) {
      p.failed = true;
    }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV and SVG

inline std::string fmt_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.6f}", v);
}

inline constexpr std::string_view kSummaryCsvHeader =
    "engine,ops,store_count,store_mean_cost,retrieve_count,retrieve_mean_cost,retrieve_p50_cost,"
    "retrieve_p95_cost,retrieve_max_cost,retrieve_mean_cost_after_warmup,combined_mean_cost,"
    "final_bytes,peak_bytes,hit_rate,mean_similarity,mean_normalized_fidelity,quality_factor\n";

inline std::string summary_row(const Summary& s) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", s.engine, s.ops,
                     s.store.count, fmt_real(s.store.mean), s.retrieve.count, fmt_real(s.retrieve.mean),
                     fmt_real(s.retrieve.p50), fmt_real(s.retrieve.p95), s.retrieve.max,
                     fmt_real(s.retrieve_mean_after_warmup), fmt_real(s.combined.mean), s.final_bytes,
                     s.peak_bytes, fmt_real(s.quality.hit_rate), fmt_real(s.mean_similarity),
                     fmt_real(s.quality.fidelity), fmt_real(s.quality.value));
}

inline std::string summary_csv(const std::vector<Summary>& summaries) {
  std::string out(kSummaryCsvHeader);
  for (const auto& s : summaries) out += summary_row(s);
  return out;
}

/// One row per scenario with NS:CAM ratios.
inline std::string comparison_csv(const std::string& scenario, const Summary& ns, const Summary& cam) {
  std::string out =
      "scenario,ns_retrieve_mean_cost,cam_retrieve_mean_cost,retrieve_cost_ratio,"
      "retrieve_cost_ratio_after_warmup,combined_cost_ratio,ns_final_bytes,cam_final_bytes,"
      "space_ratio,ns_mean_similarity,cam_mean_similarity,fidelity_delta,ns_quality_factor,"
      "cam_quality_factor\n";
  out += fmt::format(
      "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", scenario, fmt_real(ns.retrieve.mean),
      fmt_real(cam.retrieve.mean), fmt_real(safe_ratio(ns.retrieve.mean, cam.retrieve.mean)),
      fmt_real(safe_ratio(ns.retrieve_mean_after_warmup, cam.retrieve_mean_after_warmup)),
      fmt_real(safe_ratio(ns.combined.mean, cam.combined.mean)), ns.final_bytes, cam.final_bytes,
      fmt_real(safe_ratio(static_cast<double>(ns.final_bytes), static_cast<double>(cam.final_bytes))),
      fmt_real(ns.mean_similarity), fmt_real(cam.mean_similarity),
      fmt_real(ns.quality.fidelity - cam.quality.fidelity), fmt_real(ns.quality.value),
      fmt_real(cam.quality.value));
  return out;
}

inline std::string timeline_csv(const std::vector<TimelinePoint>& series) {
  std::string out = "seq,total_bytes\n";
  for (const auto& p : series) out += fmt::format("{},{}\n", p.seq, p.total_bytes);
  return out;
}

inline std::string qf_curve_csv(const std::vector<std::pair<std::string, std::vector<QualityFactorPoint>>>& curves) {
  std::string out = "engine,cap_fraction,memory_cap_bytes,quality_factor,hit_rate,fidelity,failed\n";
  for (const auto& [engine, points] : curves) {
    for (const auto& p : points) {
      out += fmt::format("{},{},{},{},{},{},{}\n", engine, fmt_real(p.cap_fraction), p.memory_cap_bytes,
                         fmt_real(p.quality_factor), fmt_real(p.hit_rate), fmt_real(p.fidelity),
                         p.failed ? 1 : 0);
    }
  }
  return out;
}

struct SvgSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Fixed-layout line chart.
inline std::string line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label, const std::vector<SvgSeries>& series) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  static constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  y0 = std::min(y0, 0.0);
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{3}</text>\n",
      W, H, W / 2, title);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", L, H - B, W - R);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", L, T, H - B);
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.4g}</text>\n",
        px(xv), H - B + 16, xv);
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.4g}</text>\n",
        L - 6, py(yv) + 4, yv);
  }
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
      L + (W - L - R) / 2, H - 12, x_label);
  out += fmt::format(
      "<text x=\"16\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 16 {:.2f})\">{}</text>\n",
      T + (H - T - B) / 2, T + (H - T - B) / 2, y_label);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* colour = kColours[i % 4];
    std::string pts;
    for (const auto& [x, y] : series[i].points) pts += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
    if (!pts.empty()) pts.pop_back();
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", colour, pts);
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>\n",
        W - R - 90, T + 16 + 16.0 * static_cast<double>(i), colour, series[i].name);
  }
  out += "</svg>\n";
  return out;
}

inline SvgSeries timeline_series(const std::string& name, const std::vector<TimelinePoint>& tl) {
  SvgSeries s{name, {}};
  for (const auto& p : tl) s.points.emplace_back(static_cast<double>(p.seq), static_cast<double>(p.total_bytes));
  return s;
}

inline SvgSeries qf_series(const std::string& name, const std::vector<QualityFactorPoint>& pts) {
  SvgSeries s{name, {}};
  for (const auto& p : pts) s.points.emplace_back(p.cap_fraction * 100.0, p.quality_factor);
  return s;
}

}  // namespace nstore
