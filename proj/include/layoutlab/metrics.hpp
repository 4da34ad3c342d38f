// Copyright 2026 The LayoutLab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "layoutlab/core.hpp"
#include "layoutlab/detector.hpp"
#include "layoutlab/serialization.hpp"

namespace layoutlab {

struct GroundTruth {
  std::string image_id;
  int class_id = 0;
  BBox box;
};

inline std::vector<double> coco_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 9; ++i) t.push_back((50 + 5 * i) / 100.0);
  return t;
}

struct EvalOptions {
  std::vector<double> iou_thresholds = coco_iou_thresholds();
  std::size_t max_dets_per_image = 100;
};

struct ClassAp {
  double ap = 0.0;
  double ap50 = 0.0;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
};

struct EvalReport {
  double ap = 0.0;    // mean over IoU thresholds
  double ap50 = 0.0;  // IoU 0.50
  std::vector<double> thresholds;
  std::vector<double> ap_per_threshold;
  std::map<int, ClassAp> per_class;
  std::size_t n_images = 0;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
};

inline constexpr int kRecallPoints = 101;

namespace detail {

// Total order used for ranking: score descending, then a stable content key
// so that results never depend on input order.
inline bool ranks_before(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.image_id, a.box.x1, a.box.y1, a.box.x2, a.box.y2, a.class_id) <
         std::tie(b.image_id, b.box.x1, b.box.y1, b.box.x2, b.box.y2, b.class_id);
}

// 101-point interpolated precision, COCO style.
inline double interpolated_ap(const std::vector<bool>& is_tp, std::size_t n_gt) {
  const std::size_t n = is_tp.size();
  std::vector<double> recall(n), precision(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += is_tp[i] ? 1 : 0;
    recall[i] = static_cast<double>(tp) / static_cast<double>(n_gt);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0.0;
  for (int r = 0; r < kRecallPoints; ++r) {
    const double level = r / 100.0;
    auto it = std::lower_bound(recall.begin(), recall.end(), level);
    if (it == recall.end()) break;
    sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / kRecallPoints;
}

// AP of one class at one IoU threshold. `dets` must be sorted by ranks_before.
inline double class_ap(const std::vector<const Detection*>& dets,
                       const std::unordered_map<std::string, std::vector<BBox>>& gts,
                       std::size_t n_gt, double threshold) {
  std::unordered_map<std::string, std::vector<bool>> matched;
  std::vector<bool> is_tp;
  is_tp.reserve(dets.size());
  for (const Detection* d : dets) {
    auto g = gts.find(d->image_id);
    if (g == gts.end()) {
      is_tp.push_back(false);
      continue;
    }
    auto& used = matched[d->image_id];
    used.resize(g->second.size(), false);
    int best = -1;
    double best_iou = threshold;
    for (std::size_t k = 0; k < g->second.size(); ++k) {
      if (used[k]) continue;
      const double v = iou(d->box, g->second[k]);
      // Strict improvement keeps the lowest GT index on ties.
      if (v >= best_iou && (best < 0 || v > best_iou)) {
        best = static_cast<int>(k);
        best_iou = v;
      }
    }
    if (best >= 0) used[static_cast<std::size_t>(best)] = true;
    is_tp.push_back(best >= 0);
  }
  return interpolated_ap(is_tp, n_gt);
}

}  // namespace detail

// COCO-style box AP. Classes absent from the ground truth do not enter the
// class mean; detections beyond `max_dets_per_image` per image are dropped.
inline EvalReport average_precision(const std::vector<Detection>& detections,
                                    const std::vector<GroundTruth>& ground_truths,
                                    const EvalOptions& opts = {}) {
  if (ground_truths.empty()) {
    throw UndefinedMetricError("average precision is undefined without ground truth");
  }
  if (opts.iou_thresholds.empty()) throw InvalidArgument("no IoU thresholds");

  // Per-image cap.
  std::map<std::string, std::vector<const Detection*>> by_image;
  for (const auto& d : detections) by_image[d.image_id].push_back(&d);
  std::map<int, std::vector<const Detection*>> by_class;
  std::size_t kept = 0;
  for (auto& [id, dets] : by_image) {
    std::sort(dets.begin(), dets.end(),
              [](const Detection* a, const Detection* b) { return detail::ranks_before(*a, *b); });
    if (dets.size() > opts.max_dets_per_image) dets.resize(opts.max_dets_per_image);
    for (const Detection* d : dets) by_class[d->class_id].push_back(d);
    kept += dets.size();
  }

  std::map<int, std::unordered_map<std::string, std::vector<BBox>>> gt_by_class;
  std::map<int, std::size_t> gt_count;
  std::map<std::string, int> images;
  for (const auto& g : ground_truths) {
    gt_by_class[g.class_id][g.image_id].push_back(g.box);
    ++gt_count[g.class_id];
    images[g.image_id];
  }
  for (const auto& [id, dets] : by_image) images[id];

  std::vector<double> thresholds = opts.iou_thresholds;
  std::size_t idx50 = thresholds.size();
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (std::abs(thresholds[i] - 0.5) < 1e-12) idx50 = i;
  }
  if (idx50 == thresholds.size()) thresholds.push_back(0.5);

  EvalReport report;
  report.thresholds = opts.iou_thresholds;
  report.ap_per_threshold.assign(thresholds.size(), 0.0);
  report.n_images = images.size();
  report.n_gt = ground_truths.size();
  report.n_det = kept;

  for (const auto& [cls, gts] : gt_by_class) {
    auto& dets = by_class[cls];
    std::sort(dets.begin(), dets.end(),
              [](const Detection* a, const Detection* b) { return detail::ranks_before(*a, *b); });
    ClassAp c;
    c.n_gt = gt_count[cls];
    c.n_det = dets.size();
    double sum = 0.0;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const double v = detail::class_ap(dets, gts, c.n_gt, thresholds[t]);
      report.ap_per_threshold[t] += v;
      if (t < opts.iou_thresholds.size()) sum += v;
      if (t == idx50) c.ap50 = v;
    }
    c.ap = sum / static_cast<double>(opts.iou_thresholds.size());
    report.per_class[cls] = c;
  }

  const double n_classes = static_cast<double>(gt_by_class.size());
  for (auto& v : report.ap_per_threshold) v /= n_classes;
  report.ap50 = report.ap_per_threshold[idx50];
  report.ap_per_threshold.resize(opts.iou_thresholds.size());
  double total = 0.0;
  for (double v : report.ap_per_threshold) total += v;
  report.ap = total / static_cast<double>(report.ap_per_threshold.size());
  return report;
}

// ---------------------------------------------------------------------------
// Manifest-level evaluation
// ---------------------------------------------------------------------------

inline std::vector<GroundTruth> ground_truths(const std::vector<ManifestEntry>& manifest) {
  std::vector<GroundTruth> out;
  for (const auto& e : manifest) {
    const std::string id = e.image_id();
    for (const auto& o : e.scene.objects) out.push_back({id, o.class_id(), o.box});
  }
  return out;
}

inline EvalReport evaluate_run(const std::vector<ManifestEntry>& manifest,
                               const std::vector<Detection>& detections,
                               const EvalOptions& opts = {}) {
  std::map<std::string, int> ids;
  for (const auto& e : manifest) ids[e.image_id()];
  for (const auto& d : detections) {
    if (!ids.contains(d.image_id)) {
      throw ManifestMismatchError("detection for image '" + d.image_id +
                                  "' which is not in the manifest");
    }
  }
  auto gts = ground_truths(manifest);
  EvalReport r = average_precision(detections, gts, opts);
  r.n_images = manifest.size();
  return r;
}

// Pairs every layout with the detections of a different, uniformly chosen
// image from the same manifest.
inline EvalReport shuffled_baseline(const std::vector<ManifestEntry>& manifest,
                                    const std::vector<Detection>& detections,
                                    std::uint64_t seed, const EvalOptions& opts = {}) {
  if (manifest.size() < 2) throw InvalidArgument("shuffled baseline needs at least two images");
  std::map<std::string, std::vector<const Detection*>> by_image;
  for (const auto& d : detections) by_image[d.image_id].push_back(&d);
  std::mt19937_64 rng(seed);
  std::vector<Detection> shuffled;
  const int n = static_cast<int>(manifest.size());
  for (int i = 0; i < n; ++i) {
    int j = std::uniform_int_distribution<int>(0, n - 2)(rng);
    if (j >= i) ++j;
    for (const Detection* d : by_image[manifest[static_cast<std::size_t>(j)].image_id()]) {
      Detection moved = *d;
      moved.image_id = manifest[static_cast<std::size_t>(i)].image_id();
      shuffled.push_back(std::move(moved));
    }
  }
  return evaluate_run(manifest, shuffled, opts);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline json to_json(const Detection& d) {
  return {{"image_id", d.image_id}, {"class_id", d.class_id}, {"box", to_json(d.box)},
          {"score", d.score}};
}

inline Detection detection_from_json(const json& j) {
  Detection d;
  d.image_id = j.at("image_id").get<std::string>();
  d.class_id = j.at("class_id").get<int>();
  d.box = bbox_from_json(j.at("box"));
  d.score = j.at("score").get<double>();
  if (!(d.score >= 0.0 && d.score <= 1.0)) throw InvalidArgument("score outside [0,1]");
  if (d.box.x1 >= d.box.x2 || d.box.y1 >= d.box.y2) throw InvalidArgument("degenerate detection box");
  return d;
}

inline std::vector<Detection> read_detections(const std::string& path) {
  std::vector<Detection> out;
  for (const auto& j : read_jsonl(path)) out.push_back(detection_from_json(j));
  return out;
}

inline void write_detections(const std::string& path, const std::vector<Detection>& dets) {
  std::string text;
  for (const auto& d : dets) text += to_json(d).dump() + "\n";
  write_text_file(path, text);
}

inline json to_json(const EvalReport& r) {
  json per_class = json::array();
  for (const auto& [cls, c] : r.per_class) {
    per_class.push_back(
        {{"class_id", cls}, {"ap", c.ap}, {"ap50", c.ap50}, {"n_gt", c.n_gt}, {"n_det", c.n_det}});
  }
  return {{"ap", r.ap},
          {"ap50", r.ap50},
          {"thresholds", r.thresholds},
          {"ap_per_threshold", r.ap_per_threshold},
          {"per_class", per_class},
          {"n_images", r.n_images},
          {"n_gt", r.n_gt},
          {"n_det", r.n_det}};
}

inline EvalReport report_from_json(const json& j) {
  EvalReport r;
  r.ap = j.at("ap").get<double>();
  r.ap50 = j.at("ap50").get<double>();
  r.thresholds = j.value("thresholds", std::vector<double>{});
  r.ap_per_threshold = j.value("ap_per_threshold", std::vector<double>{});
  if (j.contains("per_class")) {
    for (const auto& c : j.at("per_class")) {
      r.per_class[c.at("class_id").get<int>()] = {c.at("ap").get<double>(),
                                                  c.at("ap50").get<double>(),
                                                  c.at("n_gt").get<std::size_t>(),
                                                  c.at("n_det").get<std::size_t>()};
    }
  }
  r.n_images = j.value("n_images", std::size_t{0});
  r.n_gt = j.value("n_gt", std::size_t{0});
  r.n_det = j.value("n_det", std::size_t{0});
  return r;
}

// ---------------------------------------------------------------------------
// Benchmark table
// ---------------------------------------------------------------------------

struct ReportKey {
  std::string method;
  std::string split;
  auto operator<=>(const ReportKey&) const = default;
};

struct RenderedTable {
  std::string text;
  std::string csv;
};

inline const std::vector<std::string>& table_columns() {
  static const std::vector<std::string> cols = {"few",  "many",  "center",     "boundary",
                                                "tiny", "large", "horizontal", "vertical"};
  return cols;
}

inline std::string percent_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * v);
  return buf;
}

// Rows are methods in key order; columns are the eight benchmark
// splits plus the average over the splits each method reports.
inline RenderedTable report_table(const std::map<ReportKey, EvalReport>& reports) {
  if (reports.empty()) throw InvalidArgument("report_table needs at least one report");
  std::vector<std::string> methods;
  for (const auto& [k, r] : reports) {
    if (std::find(methods.begin(), methods.end(), k.method) == methods.end()) {
      methods.push_back(k.method);
    }
  }
  const auto& cols = table_columns();
  std::vector<std::vector<std::string>> cells;  // [row][col], last col = Avg
  for (const auto& m : methods) {
    std::vector<std::string> row;
    double sum_ap = 0.0, sum_ap50 = 0.0;
    int n = 0;
    for (const auto& c : cols) {
      auto it = reports.find({m, c});
      if (it == reports.end()) {
        row.push_back("-");
        continue;
      }
      row.push_back(percent_cell(it->second.ap) + "/" + percent_cell(it->second.ap50));
      sum_ap += it->second.ap;
      sum_ap50 += it->second.ap50;
      ++n;
    }
    row.push_back(n ? percent_cell(sum_ap / n) + "/" + percent_cell(sum_ap50 / n) : "-");
    cells.push_back(std::move(row));
  }

  std::vector<std::string> header = {"Method"};
  header.insert(header.end(), cols.begin(), cols.end());
  header.push_back("Avg");
  std::vector<std::size_t> widths(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
  for (std::size_t r = 0; r < methods.size(); ++r) {
    widths[0] = std::max(widths[0], methods[r].size());
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      widths[c + 1] = std::max(widths[c + 1], cells[r][c].size());
    }
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };

  RenderedTable out;
  std::ostringstream text, csv;
  for (std::size_t c = 0; c < header.size(); ++c) {
    text << (c ? "  " : "") << pad(header[c], widths[c]);
  }
  text << '\n';
  csv << "method";
  for (const auto& c : cols) csv << ',' << c << "_ap," << c << "_ap50";
  csv << ",avg_ap,avg_ap50\n";
  for (std::size_t r = 0; r < methods.size(); ++r) {
    text << pad(methods[r], widths[0]);
    csv << methods[r];
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      text << "  " << pad(cells[r][c], widths[c + 1]);
      const auto slash = cells[r][c].find('/');
      if (slash == std::string::npos) {
        csv << ",,";
      } else {
        csv << ',' << cells[r][c].substr(0, slash) << ',' << cells[r][c].substr(slash + 1);
      }
    }
    text << '\n';
    csv << '\n';
  }
  out.text = text.str();
  out.csv = csv.str();
  return out;
}

}  // namespace layoutlab
