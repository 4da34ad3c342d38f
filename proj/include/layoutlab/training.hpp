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
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "layoutlab/backends.hpp"
#include "layoutlab/codec.hpp"
#include "layoutlab/core.hpp"
#include "layoutlab/image_io.hpp"
#include "layoutlab/parallel.hpp"
#include "layoutlab/random.hpp"
#include "layoutlab/renderer.hpp"
#include "layoutlab/serialization.hpp"

namespace layoutlab {

enum class Task : std::uint8_t { kForeground, kBackground };

inline constexpr std::array<std::string_view, 2> kTaskNames = {"foreground", "background"};
inline std::string_view to_string(Task t) { return kTaskNames[static_cast<int>(t)]; }
inline Task parse_task(std::string_view s) { return detail::parse_enum<Task>(s, kTaskNames, "task"); }

struct TrainingExample {
  Image context;
  Mask mask;
  std::string prompt;
  Image target;
  Task task = Task::kForeground;
};

// Target drawn uniformly; every other object joins the context independently
// with probability 1/2. The target is rendered last.
inline TrainingExample make_fg_example(const Scene& scene, std::mt19937_64& rng) {
  if (scene.objects.empty()) throw NoObjectError("foreground example needs at least one object");
  const auto n = scene.objects.size();
  const auto t = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  std::vector<ObjectSpec> shown;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == t) continue;
    if (std::uniform_int_distribution<int>(0, 1)(rng)) shown.push_back(scene.objects[i]);
  }
  TrainingExample ex;
  ex.task = Task::kForeground;
  ex.context = render_objects(scene.canvas, shown);
  ex.target = ex.context;
  draw_object(ex.target, scene.objects[t]);
  ex.mask = mask_from_box(scene.objects[t].box, scene.canvas);
  ex.prompt = iterinpaint_prompt(scene.objects[t].caption());
  return ex;
}

inline TrainingExample make_bg_example(const Scene& scene) {
  const Image full = render_scene(scene).image;
  return {full, background_mask(scene.layout()), std::string(kBackgroundPrompt), full,
          Task::kBackground};
}

// Empty when `ex` is well formed, otherwise the first violated invariant.
//  * context, mask and target share dimensions;
//  * foreground: the mask is one filled box, the prompt names an object and
//    context and target agree outside the mask;
//  * background: the prompt is the background prompt, context equals target
//    and every masked target pixel is background gray.
inline std::string validate_example(const TrainingExample& ex) {
  const Canvas c = ex.context.canvas();
  if (ex.target.canvas().width != c.width || ex.target.canvas().height != c.height ||
      ex.mask.width() != c.width || ex.mask.height() != c.height) {
    return "dimension mismatch";
  }
  const Rgb bg = Palette::background();
  if (ex.task == Task::kForeground) {
    PromptTarget parsed;
    try {
      parsed = parse_add_prompt(ex.prompt);
    } catch (const PromptParseError&) {
      return "unparseable prompt '" + ex.prompt + "'";
    }
    if (!std::holds_alternative<ObjectAttributes>(parsed)) return "foreground with background prompt";
    BBox box;
    try {
      box = bbox_of_mask(ex.mask);
    } catch (const EmptyMaskError&) {
      return "empty foreground mask";
    }
    if (ex.mask.popcount() != box.area()) return "foreground mask is not a single box";
    if (composite(ex.context, ex.target, ex.mask) != ex.target) {
      return "context and target differ outside the mask";
    }
    return {};
  }
  if (ex.prompt != kBackgroundPrompt) return "background with prompt '" + ex.prompt + "'";
  if (ex.context != ex.target) return "background context differs from target";
  for (int y = 0; y < c.height; ++y) {
    for (int x = 0; x < c.width; ++x) {
      if (ex.mask.at(x, y) && ex.target.at(x, y) != bg) return "object pixel under background mask";
    }
  }
  return {};
}

struct ExportOptions {
  std::size_t n_examples = 0;
  double fg_ratio = 0.3;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct ManifestRecord {
  std::string context;
  std::string mask;
  std::string target;
  std::string prompt;
  Task task = Task::kForeground;
};

inline json to_json(const ManifestRecord& r) {
  return {{"context", r.context}, {"mask", r.mask},           {"target", r.target},
          {"prompt", r.prompt},   {"task", to_string(r.task)}};
}

inline ManifestRecord manifest_record_from_json(const json& j) {
  return {j.at("context").get<std::string>(), j.at("mask").get<std::string>(),
          j.at("target").get<std::string>(), j.at("prompt").get<std::string>(),
          parse_task(j.at("task").get<std::string>())};
}

namespace detail {

inline TrainingExample draw_example(const std::vector<Scene>& scenes,
                                    const std::vector<std::size_t>& nonempty, double fg_ratio,
                                    std::uint64_t seed, std::size_t i) {
  std::mt19937_64 rng(stream_seed("train", splitmix64(seed) + i));
  const bool fg = std::bernoulli_distribution(fg_ratio)(rng);
  if (fg) {
    if (nonempty.empty()) throw NoObjectError("no scene has an object for a foreground example");
    const auto k = std::uniform_int_distribution<std::size_t>(0, nonempty.size() - 1)(rng);
    return make_fg_example(scenes[nonempty[k]], rng);
  }
  const auto k = std::uniform_int_distribution<std::size_t>(0, scenes.size() - 1)(rng);
  return make_bg_example(scenes[k]);
}

inline std::string example_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", i);
  return buf;
}

}  // namespace detail

// Writes {out_dir}/{context,mask,target}/{id}.png and {out_dir}/manifest.jsonl
// with paths relative to out_dir. Each example's task is foreground with
// probability fg_ratio. Output depends only on (scenes, options).
inline std::string export_manifest(const std::vector<Scene>& scenes, const ExportOptions& opts,
                                   const std::string& out_dir) {
  if (!(opts.fg_ratio >= 0.0 && opts.fg_ratio <= 1.0)) {
    throw InvalidArgument("fg_ratio must be in [0, 1]");
  }
  if (scenes.empty() && opts.n_examples > 0) throw InvalidArgument("no scenes to export from");
  namespace fs = std::filesystem;
  for (const char* sub : {"context", "mask", "target"}) {
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / sub, ec);
    if (ec) throw IoError("cannot create " + (fs::path(out_dir) / sub).string() + ": " + ec.message());
  }
  std::vector<std::size_t> nonempty;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    if (!scenes[i].objects.empty()) nonempty.push_back(i);
  }
  std::vector<ManifestRecord> records(opts.n_examples);
  detail::parallel_for(opts.n_examples, opts.threads, [&](std::size_t i) {
    const auto ex = detail::draw_example(scenes, nonempty, opts.fg_ratio, opts.seed, i);
    const std::string id = detail::example_id(i);
    ManifestRecord r{"context/" + id + ".png", "mask/" + id + ".png", "target/" + id + ".png",
                     ex.prompt, ex.task};
    write_png(out_dir + "/" + r.context, ex.context);
    write_png(out_dir + "/" + r.mask, ex.mask);
    write_png(out_dir + "/" + r.target, ex.target);
    records[i] = std::move(r);
  });
  std::string text;
  for (const auto& r : records) {
    text += to_json(r).dump();
    text += '\n';
  }
  const std::string path = out_dir + "/manifest.jsonl";
  write_text_file(path, text);
  return path;
}

struct ValidationReport {
  std::size_t n_examples = 0;
  std::size_t n_foreground = 0;
  std::vector<std::string> failures;  // "{line}: {reason}"

  bool ok() const { return failures.empty(); }
};

// Re-reads every triple named in the manifest and checks validate_example.
inline ValidationReport validate_manifest(const std::string& manifest_path, unsigned threads = 0) {
  const auto dir = std::filesystem::path(manifest_path).parent_path().string();
  const auto lines = read_jsonl(manifest_path);
  ValidationReport report;
  report.n_examples = lines.size();
  std::vector<std::string> reasons(lines.size());
  std::vector<char> fg(lines.size(), 0);
  detail::parallel_for(lines.size(), threads, [&](std::size_t i) {
    try {
      const auto r = manifest_record_from_json(lines[i]);
      fg[i] = r.task == Task::kForeground;
      const auto at = [&](const std::string& rel) { return dir.empty() ? rel : dir + "/" + rel; };
      TrainingExample ex{read_png_image(at(r.context)), read_png_mask(at(r.mask)), r.prompt,
                         read_png_image(at(r.target)), r.task};
      reasons[i] = validate_example(ex);
    } catch (const std::exception& e) {
      reasons[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < lines.size(); ++i) {
    report.n_foreground += fg[i];
    if (!reasons[i].empty()) report.failures.push_back(std::to_string(i + 1) + ": " + reasons[i]);
  }
  return report;
}

}  // namespace layoutlab
