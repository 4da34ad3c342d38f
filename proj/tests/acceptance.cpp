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
// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "ap_oracle.hpp"
#include "layoutlab.hpp"
#include "sampler_oracle.hpp"
#include "test_util.hpp"

using namespace layoutlab;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kScenesPerSplit = 200;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

struct Bench {
  std::vector<BenchSplit> splits;
  std::vector<std::vector<ManifestEntry>> manifests;
  std::vector<ManifestEntry> pooled;
};

Bench make_bench() {
  Bench b;
  b.splits = select_splits(std::nullopt, std::nullopt);
  for (const auto& s : b.splits) {
    b.manifests.push_back(generate_split(s, kScenesPerSplit, 0));
    b.pooled.insert(b.pooled.end(), b.manifests.back().begin(), b.manifests.back().end());
  }
  return b;
}

// Per-split AP50 of a run; also returns the pooled detections.
std::vector<EvalReport> evaluate_splits(const Bench& b, const std::vector<std::vector<Image>>& images,
                                        unsigned threads, std::vector<Detection>* all = nullptr) {
  std::vector<EvalReport> out;
  for (std::size_t i = 0; i < b.splits.size(); ++i) {
    const auto dets = detect_all(b.manifests[i], images[i], threads);
    out.push_back(evaluate_run(b.manifests[i], dets));
    if (all) all->insert(all->end(), dets.begin(), dets.end());
  }
  return out;
}

std::string split_summary(const Bench& b, const std::vector<EvalReport>& reports) {
  std::string s;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    s += (i ? " " : "") + b.splits[i].split + "=" + fmt("%.3f", reports[i].ap50);
  }
  return s;
}

double mean_ap50(const std::vector<EvalReport>& reports) {
  double sum = 0;
  for (const auto& r : reports) sum += r.ap50;
  return sum / static_cast<double>(reports.size());
}

std::vector<std::vector<Image>> run_all(const Bench& b, const InpaintBackend& backend,
                                        const EngineOptions& opts) {
  std::vector<std::vector<Image>> out;
  for (const auto& m : b.manifests) out.push_back(run_manifest(m, backend, opts).images);
  return out;
}

EngineOptions e2e_options() {
  EngineOptions o;
  o.mode = Mode::kPaste;
  o.order = Order::kRandom;
  o.seed = 0;
  return o;
}

// --- criteria --------------------------------------------------------------

Outcome gt_oracle(const Bench& b, std::vector<Detection>& gt_dets, double& detect_s) {
  const auto t0 = Clock::now();
  std::vector<std::vector<Image>> images;
  for (const auto& m : b.manifests) images.push_back(render_manifest(m, 1));
  const auto reports = evaluate_splits(b, images, 1, &gt_dets);
  detect_s = seconds_since(t0);
  bool ok = detect_s < 60.0;
  for (const auto& r : reports) ok &= r.ap50 >= 0.99;
  return {ok, split_summary(b, reports) + fmt(" | %.1fs single-threaded (limit 60s)", detect_s)};
}

Outcome gt_shuffled(const Bench& b, const std::vector<Detection>& gt_dets, double detect_s) {
  const auto t0 = Clock::now();
  const auto r = shuffled_baseline(b.pooled, gt_dets, 0);
  const double total = detect_s + seconds_since(t0);
  const bool ok = b.pooled.size() >= 500 && r.ap <= 0.01 && r.ap50 <= 0.01 && total < 30.0;
  return {ok, fmt("%.0f images AP=%.4f AP50=%.4f | %.1fs incl. rendering and detection (limit 30s)",
                  static_cast<double>(b.pooled.size()), r.ap, r.ap50, total)};
}

Outcome end_to_end(std::vector<std::vector<Image>>& images,
                   std::vector<EvalReport>& reports) {
  const auto t0 = Clock::now();
  const Bench b = make_bench();  // generate-bench
  const ProceduralBackend backend;
  images = run_all(b, backend, e2e_options());
  reports = evaluate_splits(b, images, 0);
  const double s = seconds_since(t0);
  bool ok = s < 300.0;
  for (const auto& r : reports) ok &= r.ap50 >= 0.95;
  return {ok, split_summary(b, reports) + fmt(" | %.1fs (limit 300s)", s)};
}

Outcome jitter(const Bench& b, const std::vector<std::vector<Image>>& procedural_images,
               const std::vector<EvalReport>& procedural_reports) {
  const auto t0 = Clock::now();
  std::vector<double> avg;
  bool zero_identical = true;
  std::string detail;
  for (int j : {0, 26, 77}) {
    BackendConfig cfg;
    cfg.kind = BackendKind::kPerturb;
    cfg.jitter_px = j;
    const auto backend = make_backend(cfg);
    const auto images = run_all(b, *backend, e2e_options());
    const auto reports = evaluate_splits(b, images, 0);
    if (j == 0) {
      zero_identical = images == procedural_images;
      for (std::size_t i = 0; i < reports.size(); ++i) {
        zero_identical &= reports[i].ap == procedural_reports[i].ap &&
                          reports[i].ap50 == procedural_reports[i].ap50;
      }
    }
    avg.push_back(mean_ap50(reports));
    detail += fmt("j=%.0f avgAP50=%.4f ", j, avg.back());
  }
  const bool ok = zero_identical && avg[0] > avg[1] && avg[1] > avg[2];
  return {ok, detail + (zero_identical ? "| j=0 identical to procedural" : "| j=0 DIFFERS") +
                  fmt(" | %.1fs", seconds_since(t0))};
}

Outcome ap_oracle() {
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_ap_instance(rng);
    const auto want = testing::ApOracle::evaluate(inst.dets, inst.gts);
    const auto got = average_precision(inst.dets, inst.gts);
    worst = std::max({worst, std::abs(got.ap - want.ap), std::abs(got.ap50 - want.ap50)});
  }
  return {worst <= 1e-9, fmt("1000 instances, max |diff| = %.3g", worst)};
}

// Repaints every pixel so that only compositing can preserve context.
class NoiseBackend final : public InpaintBackend {
 public:
  Image inpaint(const Image& ctx, const std::string& prompt, const Mask&) const override {
    const auto h = detail::hash_text(prompt);
    return Image(ctx.canvas(), {static_cast<std::uint8_t>(h), static_cast<std::uint8_t>(h >> 8),
                                static_cast<std::uint8_t>(h >> 16)});
  }
};

Layout random_layout(std::mt19937_64& rng, bool disjoint) {
  const Canvas canvas{std::uniform_int_distribution<int>(64, 512)(rng),
                      std::uniform_int_distribution<int>(64, 512)(rng)};
  Layout l{canvas, {}};
  const int n = std::uniform_int_distribution<int>(0, 8)(rng);
  for (int tries = 0; static_cast<int>(l.regions.size()) < n && tries < 1000; ++tries) {
    const BBox b = testing::random_box(rng, canvas, 4);
    if (disjoint) {
      bool clash = false;
      for (const auto& r : l.regions) clash |= intersection_area(r.box, b) > 0;
      if (clash) continue;
    }
    const auto attrs = attributes_from_class_id(std::uniform_int_distribution<int>(0, 47)(rng));
    l.regions.push_back({attrs.caption(), b});
  }
  return l;
}

Outcome compositing() {
  std::mt19937_64 rng(99);
  const NoiseBackend noise;
  const ProceduralBackend procedural;
  int failures = 0;
  std::string first;
  auto fail = [&](const std::string& why) {
    if (!failures++) first = why;
  };
  for (int t = 0; t < 100; ++t) {
    // Random initial canvas so that "unchanged" is a strong statement.
    const Layout l = random_layout(rng, false);
    Image initial(l.canvas, {0, 0, 0});
    for (int y = 0; y < l.canvas.height; ++y) {
      for (int x = 0; x < l.canvas.width; ++x) {
        const auto v = rng();
        initial.set(x, y, {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                           static_cast<std::uint8_t>(v >> 16)});
      }
    }
    EngineOptions o;
    o.initial = initial;
    o.order = Order::kRandom;
    o.seed = static_cast<std::uint64_t>(t);
    const auto r = generate(l, noise, o);
    if (r.trace.size() != l.regions.size() + 1) fail("trace length");
    Mask seen(l.canvas);
    for (const auto& step : r.trace) {
      for (int y = 0; y < l.canvas.height; ++y) {
        for (int x = 0; x < l.canvas.width; ++x) {
          if (step.mask.at(x, y)) seen.set(x, y, true);
        }
      }
      for (int y = 0; y < l.canvas.height; ++y) {
        for (int x = 0; x < l.canvas.width; ++x) {
          if (!seen.at(x, y) && step.committed.at(x, y) != initial.at(x, y)) {
            fail("pixel outside masks changed at step " + std::to_string(step.step_index));
            y = l.canvas.height;
            break;
          }
        }
      }
    }

    const Layout d = random_layout(rng, true);
    const Image given = generate(d, procedural).image;
    for (auto order : {Order::kRandom, Order::kTopToBottom, Order::kBottomToTop}) {
      EngineOptions oo;
      oo.order = order;
      oo.seed = static_cast<std::uint64_t>(t);
      if (generate(d, procedural, oo).image != given) fail("order changed a disjoint layout");
    }
  }
  return {failures == 0, failures ? std::to_string(failures) + " failures, first: " + first
                                  : "100 layouts: |trace| = N+1, locality, order invariance"};
}

Outcome codec() {
  std::mt19937_64 rng(5);
  const Canvas c{512, 512};
  int worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const BBox b = testing::random_box(rng, c, 2);
    const BBox back = dequantize_box(quantize_box(b, c), c);
    worst = std::max({worst, std::abs(back.x1 - b.x1), std::abs(back.y1 - b.y1),
                      std::abs(back.x2 - b.x2), std::abs(back.y2 - b.y2)});
  }
  const std::string s = serialize_reco({{QuantizedBox{{20, 230, 492, 478}}, "cyan metal sphere"}});
  const bool ok = worst <= 1 && s == "<020> <230> <492> <478> cyan metal sphere";
  return {ok, fmt("10000 boxes, max error %.0f px; ", worst) + "\"" + s + "\""};
}

Outcome sampler() {
  std::size_t checked = 0;
  std::string first;
  for (const auto& split : kOodSplits) {
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      const Scene s = sample_scene(split.skill, split.split, seed);
      const auto why = testing::check_scene(s);
      if (!why.empty() && first.empty()) {
        first = std::string(split.split) + " seed " + std::to_string(seed) + ": " + why;
      }
      ++checked;
    }
  }
  return {first.empty(), fmt("%.0f scenes over 8 splits", static_cast<double>(checked)) +
                             (first.empty() ? "" : "; " + first)};
}

Outcome training() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("layoutlab_acceptance_train_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::vector<Scene> scenes;
  for (auto& e : generate_split({Skill::kId, std::string(kIdSplit)}, 1000, 0)) {
    scenes.push_back(std::move(e.scene));
  }
  ExportOptions opts;
  opts.n_examples = 10000;
  opts.fg_ratio = 0.3;
  opts.seed = 0;
  const auto path = export_manifest(scenes, opts, dir.string());
  const auto report = validate_manifest(path);
  std::filesystem::remove_all(dir);
  const double frac = static_cast<double>(report.n_foreground) / static_cast<double>(report.n_examples);
  const bool ok = report.n_examples == 10000 && frac >= 0.28 && frac <= 0.32 && report.ok();
  return {ok, fmt("n=%.0f fg=%.4f invalid=%.0f", static_cast<double>(report.n_examples), frac,
                  static_cast<double>(report.failures.size()))};
}

Outcome coco_generator() {
  using coco::Skill;
  using coco::split_size;
  const std::size_t n = split_size(Skill::kNumber), p = split_size(Skill::kPosition),
                    s = split_size(Skill::kSize), c = split_size(Skill::kCombination);
  std::size_t enumerated = 0;
  for (auto skill : {Skill::kNumber, Skill::kPosition, Skill::kSize, Skill::kCombination}) {
    for (std::size_t i = 0; i < split_size(skill); ++i) {
      coco::sample_coco_layout(skill, "all", i);
      ++enumerated;
    }
  }
  const bool ok = n == 720 && p == 320 && s == 720 && c == 360 && enumerated == 2120;
  return {ok, fmt("%.0f/%.0f/%.0f/%.0f", static_cast<double>(n), static_cast<double>(p),
                  static_cast<double>(s), static_cast<double>(c)) +
                  " total " + std::to_string(enumerated)};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-26s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  };

  const Bench bench = make_bench();
  std::vector<Detection> gt_dets;
  double detect_s = 0;
  std::vector<std::vector<Image>> e2e_images;
  std::vector<EvalReport> e2e_reports;

  report("gt-oracle-ap", [&] { return gt_oracle(bench, gt_dets, detect_s); });
  report("gt-shuffled-ap", [&] { return gt_shuffled(bench, gt_dets, detect_s); });
  report("end-to-end-procedural", [&] { return end_to_end(e2e_images, e2e_reports); });
  report("jitter-monotonicity", [&] { return jitter(bench, e2e_images, e2e_reports); });
  report("ap-oracle-equivalence", ap_oracle);
  report("compositing-contracts", compositing);
  report("codec", codec);
  report("sampler-conformance", sampler);
  report("training-export", training);
  report("coco-layout-generator", coco_generator);

  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
