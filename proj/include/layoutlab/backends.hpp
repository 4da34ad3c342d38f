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
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "layoutlab/codec.hpp"
#include "layoutlab/core.hpp"
#include "layoutlab/random.hpp"
#include "layoutlab/renderer.hpp"

namespace layoutlab {

// inpaint(ctx, prompt, mask) -> image of the same dimensions as ctx.
// Implementations never modify ctx.
class InpaintBackend {
 public:
  virtual ~InpaintBackend() = default;
  virtual Image inpaint(const Image& ctx, const std::string& prompt, const Mask& mask) const = 0;
};

inline void require_same_dims(const Image& ctx, const Mask& mask) {
  if (ctx.width() != mask.width() || ctx.height() != mask.height()) {
    throw DimensionError("inpaint: ctx " + std::to_string(ctx.width()) + "x" +
                         std::to_string(ctx.height()) + " vs mask " +
                         std::to_string(mask.width()) + "x" + std::to_string(mask.height()));
  }
}

// Tightest box holding every set bit.
inline BBox bbox_of_mask(const Mask& mask) {
  int x1 = mask.width(), y1 = mask.height(), x2 = 0, y2 = 0;
  const auto bits = mask.bits();
  for (int y = 0; y < mask.height(); ++y) {
    const auto* row = bits.data() + static_cast<std::size_t>(y) * mask.width();
    for (int x = 0; x < mask.width(); ++x) {
      if (!row[x]) continue;
      x1 = std::min(x1, x);
      x2 = std::max(x2, x + 1);
      y1 = std::min(y1, y);
      y2 = y + 1;
    }
  }
  if (x2 == 0) throw EmptyMaskError("mask has no set pixels");
  return {x1, y1, x2, y2};
}

// Copies `patch` into `img` with its top-left corner at (box.x1, box.y1),
// skipping pixels that fall off the canvas.
inline void paste_patch(Image& img, const Image& patch, const BBox& box) {
  for (int py = 0; py < patch.height(); ++py) {
    const int y = box.y1 + py;
    if (y < 0 || y >= img.height()) continue;
    for (int px = 0; px < patch.width(); ++px) {
      const int x = box.x1 + px;
      if (x < 0 || x >= img.width()) continue;
      img.set(x, y, patch.at(px, py));
    }
  }
}

// Deterministic reference backend. An object prompt regenerates the mask's
// bounding box as a rendered patch; the background prompt paints every masked
// pixel background gray.
class ProceduralBackend final : public InpaintBackend {
 public:
  Image inpaint(const Image& ctx, const std::string& prompt, const Mask& mask) const override {
    require_same_dims(ctx, mask);
    const auto target = parse_add_prompt(prompt);
    if (std::holds_alternative<BackgroundMarker>(target)) {
      return composite(ctx, Image(ctx.canvas(), Palette::background()), mask);
    }
    const BBox box = bbox_of_mask(mask);
    Image out = ctx;
    paste_patch(out, render_object_patch(std::get<ObjectAttributes>(target), box), box);
    return out;
  }
};

// Moves the target region of object prompts by a fixed offset in
// [-jitter, +jitter] per axis before delegating. The offset is a function of
// (seed, prompt, mask box) only. Background prompts pass through unchanged.
class PerturbBackend final : public InpaintBackend {
 public:
  PerturbBackend(std::shared_ptr<const InpaintBackend> inner, int jitter_px, std::uint64_t seed)
      : inner_(std::move(inner)), jitter_(jitter_px), seed_(seed) {
    if (!inner_) throw InvalidArgument("perturb backend needs an inner backend");
    if (jitter_ < 0) throw InvalidArgument("jitter_px must be >= 0");
  }

  std::pair<int, int> offset(const std::string& prompt, const BBox& box) const {
    if (jitter_ == 0) return {0, 0};
    std::uint64_t h = detail::hash_text(prompt);
    for (int c : {box.x1, box.y1, box.x2, box.y2}) {
      h = detail::splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)));
    }
    std::mt19937_64 rng(detail::stream_seed("perturb", seed_ ^ h));
    const int dx = detail::uniform_int(rng, -jitter_, jitter_);
    const int dy = detail::uniform_int(rng, -jitter_, jitter_);
    return {dx, dy};
  }

  Image inpaint(const Image& ctx, const std::string& prompt, const Mask& mask) const override {
    require_same_dims(ctx, mask);
    if (jitter_ == 0 || std::holds_alternative<BackgroundMarker>(parse_add_prompt(prompt))) {
      return inner_->inpaint(ctx, prompt, mask);
    }
    const BBox box = bbox_of_mask(mask);
    const auto [dx, dy] = offset(prompt, box);
    const BBox moved{std::clamp(box.x1 + dx, 0, ctx.width()), std::clamp(box.y1 + dy, 0, ctx.height()),
                     std::clamp(box.x2 + dx, 0, ctx.width()), std::clamp(box.y2 + dy, 0, ctx.height())};
    if (moved.width() <= 0 || moved.height() <= 0) return ctx;
    return inner_->inpaint(ctx, prompt, mask_from_box(moved, ctx.canvas()));
  }

 private:
  std::shared_ptr<const InpaintBackend> inner_;
  int jitter_;
  std::uint64_t seed_;
};

enum class BackendKind : std::uint8_t { kProcedural, kRemote, kPerturb };

inline constexpr std::array<std::string_view, 3> kBackendKindNames = {"procedural", "remote",
                                                                      "perturb"};

inline std::string_view to_string(BackendKind k) { return kBackendKindNames[static_cast<int>(k)]; }
inline BackendKind parse_backend_kind(std::string_view s) {
  return detail::parse_enum<BackendKind>(s, kBackendKindNames, "backend");
}

struct BackendConfig {
  BackendKind kind = BackendKind::kProcedural;
  std::string endpoint;
  double guidance_scale = 4.0;
  int steps = 50;
  int jitter_px = 0;
  std::uint64_t seed = 0;  // perturb offsets
  int timeout_ms = 120000;
  int max_inflight = 4;

  void validate() const {
    if (!(guidance_scale > 0)) throw InvalidArgument("guidance_scale must be > 0");
    if (steps < 1) throw InvalidArgument("steps must be >= 1");
    if (jitter_px < 0) throw InvalidArgument("jitter_px must be >= 0");
    if (jitter_px != 0 && kind != BackendKind::kPerturb) {
      throw InvalidArgument("jitter_px applies to the perturb backend only");
    }
    if (kind == BackendKind::kRemote && endpoint.empty()) {
      throw InvalidArgument("remote backend needs an endpoint");
    }
    if (timeout_ms <= 0) throw InvalidArgument("timeout_ms must be > 0");
    if (max_inflight < 1) throw InvalidArgument("max_inflight must be >= 1");
  }
};

}  // namespace layoutlab
