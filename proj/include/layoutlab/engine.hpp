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
#include <filesystem>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "layoutlab/backends.hpp"
#include "layoutlab/codec.hpp"
#include "layoutlab/core.hpp"
#include "layoutlab/image_io.hpp"
#include "layoutlab/random.hpp"
#include "layoutlab/renderer.hpp"
#include "layoutlab/serialization.hpp"

namespace layoutlab {

enum class Mode : std::uint8_t { kPaste, kRepaint };
enum class Order : std::uint8_t { kGiven, kRandom, kTopToBottom, kBottomToTop };

inline constexpr std::array<std::string_view, 2> kModeNames = {"paste", "repaint"};
inline constexpr std::array<std::string_view, 4> kOrderNames = {"given", "random", "top", "bottom"};

inline std::string_view to_string(Mode m) { return kModeNames[static_cast<int>(m)]; }
inline std::string_view to_string(Order o) { return kOrderNames[static_cast<int>(o)]; }
inline Mode parse_mode(std::string_view s) { return detail::parse_enum<Mode>(s, kModeNames, "mode"); }
inline Order parse_order(std::string_view s) {
  return detail::parse_enum<Order>(s, kOrderNames, "order");
}

struct EngineOptions {
  Mode mode = Mode::kPaste;
  Order order = Order::kGiven;
  std::uint64_t seed = 0;  // random order only
  std::string background_prompt{kBackgroundPrompt};
  std::optional<Image> initial;  // uniform background gray when unset
};

struct StepTrace {
  std::size_t step_index = 0;
  std::string prompt;
  Mask mask;
  Image backend_output;
  Image committed;
};

struct GenerateResult {
  Image image;
  std::vector<StepTrace> trace;
};

// Permutation of region indices. Top-to-bottom sorts by (y1, x1, index);
// bottom-to-top is its exact reverse.
inline std::vector<std::size_t> order_regions(const Layout& layout, Order policy,
                                              std::uint64_t seed = 0) {
  std::vector<std::size_t> idx(layout.regions.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  switch (policy) {
    case Order::kGiven:
      break;
    case Order::kRandom: {
      std::mt19937_64 rng(detail::stream_seed("order", seed));
      for (std::size_t i = idx.size(); i > 1; --i) {
        const auto j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        std::swap(idx[i - 1], idx[j]);
      }
      break;
    }
    case Order::kTopToBottom:
    case Order::kBottomToTop: {
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& ba = layout.regions[a].box;
        const auto& bb = layout.regions[b].box;
        return std::tie(ba.y1, ba.x1, a) < std::tie(bb.y1, bb.x1, b);
      });
      if (policy == Order::kBottomToTop) std::reverse(idx.begin(), idx.end());
      break;
    }
  }
  return idx;
}

namespace detail {

inline Image initial_canvas(const Canvas& canvas, const EngineOptions& opts) {
  if (!opts.initial) return Image(canvas, Palette::background());
  if (opts.initial->width() != canvas.width || opts.initial->height() != canvas.height) {
    throw DimensionError("initial image does not match the layout canvas");
  }
  return *opts.initial;
}

// One backend call plus commit. Errors leave with the step index attached.
inline StepTrace run_step(const InpaintBackend& backend, const Image& prev, std::string prompt,
                          Mask mask, Mode mode, std::size_t step_index) {
  StepTrace t{step_index, std::move(prompt), std::move(mask), {}, {}};
  try {
    t.backend_output = backend.inpaint(prev, t.prompt, t.mask);
    if (t.backend_output.width() != prev.width() || t.backend_output.height() != prev.height()) {
      throw DimensionError("backend output dimensions differ from the context");
    }
  } catch (Error& e) {
    e.set_step(step_index);
    throw;
  }
  t.committed = mode == Mode::kPaste ? composite(prev, t.backend_output, t.mask) : t.backend_output;
  return t;
}

}  // namespace detail

// N foreground steps in the chosen order, then one background step over the
// complement of all boxes. An empty layout yields only the background step,
// whose mask is all ones. The trace has N + 1 entries.
inline GenerateResult generate(const Layout& layout, const InpaintBackend& backend,
                               const EngineOptions& opts = {}) {
  require_valid(layout);
  GenerateResult out;
  Image current = detail::initial_canvas(layout.canvas, opts);
  for (std::size_t i : order_regions(layout, opts.order, opts.seed)) {
    const auto& r = layout.regions[i];
    auto step = detail::run_step(backend, current, iterinpaint_prompt(r.caption),
                                 mask_from_box(r.box, layout.canvas), opts.mode, out.trace.size());
    current = step.committed;
    out.trace.push_back(std::move(step));
  }
  auto bg = detail::run_step(backend, current, opts.background_prompt, background_mask(layout),
                             opts.mode, out.trace.size());
  out.image = bg.committed;
  out.trace.push_back(std::move(bg));
  return out;
}

// Writes step_{k}.png, mask_{k}.png and trace.jsonl into `dir`.
inline void export_trace(const std::vector<StepTrace>& trace, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  std::string lines;
  for (const auto& t : trace) {
    const std::string k = std::to_string(t.step_index);
    const std::string image_file = "step_" + k + ".png";
    const std::string mask_file = "mask_" + k + ".png";
    write_png(dir + "/" + image_file, t.committed);
    write_png(dir + "/" + mask_file, t.mask);
    lines += json{{"step", t.step_index}, {"prompt", t.prompt}, {"mask_file", mask_file},
                  {"image_file", image_file}}
                 .dump();
    lines += '\n';
  }
  write_text_file(dir + "/trace.jsonl", lines);
}

// ---------------------------------------------------------------------------
// Interactive sessions
// ---------------------------------------------------------------------------

struct SessionEdit {
  StepTrace step;
  Image prior;
  std::vector<Region> prior_objects;
};

// Single-owner editing state. history.size() equals the number of applied
// edits; undo restores the image and object list from before the last edit.
struct Session {
  Image image;
  std::vector<Region> objects;
  std::vector<SessionEdit> history;
  Mode mode = Mode::kPaste;
  std::string background_prompt{kBackgroundPrompt};

  Canvas canvas() const { return image.canvas(); }
};

inline Session make_session(const Canvas& canvas = {}, Mode mode = Mode::kPaste) {
  Session s;
  s.image = Image(canvas, Palette::background());
  s.mode = mode;
  return s;
}

inline Session make_session(Image initial, Mode mode = Mode::kPaste) {
  Session s;
  s.image = std::move(initial);
  s.mode = mode;
  return s;
}

namespace detail {

// Strong guarantee: `s` is untouched when the backend throws.
inline void apply_edit(Session& s, const InpaintBackend& backend, std::string prompt, Mask mask,
                       std::vector<Region> next_objects) {
  auto step = run_step(backend, s.image, std::move(prompt), std::move(mask), s.mode,
                       s.history.size());
  s.history.push_back({std::move(step), std::move(s.image), std::move(s.objects)});
  s.image = s.history.back().step.committed;
  s.objects = std::move(next_objects);
}

}  // namespace detail

// In-place edits. Each either commits exactly one step or leaves `s`
// unchanged.
inline void add_object(Session& s, const std::string& caption, const BBox& box,
                       const InpaintBackend& backend) {
  require_valid(box, s.canvas());
  auto objects = s.objects;
  objects.push_back({caption, box});
  detail::apply_edit(s, backend, iterinpaint_prompt(caption), mask_from_box(box, s.canvas()),
                     std::move(objects));
}

// Background step over `box`. Objects whose boxes lie inside `box` leave the
// committed object list.
inline void remove_region(Session& s, const BBox& box, const InpaintBackend& backend) {
  require_valid(box, s.canvas());
  std::vector<Region> objects;
  for (const auto& r : s.objects) {
    if (intersection_area(r.box, box) != r.box.area()) objects.push_back(r);
  }
  detail::apply_edit(s, backend, s.background_prompt, mask_from_box(box, s.canvas()),
                     std::move(objects));
}

inline void undo(Session& s) {
  if (s.history.empty()) throw HistoryEmptyError("nothing to undo");
  auto& last = s.history.back();
  s.image = std::move(last.prior);
  s.objects = std::move(last.prior_objects);
  s.history.pop_back();
}

inline Session session_add(Session s, const std::string& caption, const BBox& box,
                           const InpaintBackend& backend) {
  add_object(s, caption, box, backend);
  return s;
}

inline Session session_remove(Session s, const BBox& box, const InpaintBackend& backend) {
  remove_region(s, box, backend);
  return s;
}

inline Session session_undo(Session s) {
  undo(s);
  return s;
}

}  // namespace layoutlab
