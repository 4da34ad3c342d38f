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

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <unordered_map>
#include <vector>

#include "layoutlab/core.hpp"

namespace layoutlab {

// Which part of a drawn silhouette a pixel belongs to.
enum class PixelRole : std::uint8_t { kBody, kHighlight, kEdge };

// Fixed color table. Every (color, material, role) shade is unique and
// differs from the background, so a pixel value identifies its source.
class Palette {
 public:
  static constexpr Rgb background() { return {160, 160, 160}; }

  static constexpr Rgb base(Color c) {
    constexpr std::array<Rgb, kNumColors> kBase = {{
        {87, 87, 87},     // gray
        {173, 35, 35},    // red
        {42, 75, 215},    // blue
        {29, 105, 20},    // green
        {120, 80, 25},    // brown
        {129, 38, 192},   // purple
        {41, 208, 208},   // cyan
        {255, 238, 51},   // yellow
    }};
    return kBase[static_cast<int>(c)];
  }

  static Rgb shade(Color c, Material m, PixelRole role) {
    const Rgb b = base(c);
    auto scale = [&](double f) {
      return Rgb{static_cast<std::uint8_t>(std::lround(b.r * f)),
                 static_cast<std::uint8_t>(std::lround(b.g * f)),
                 static_cast<std::uint8_t>(std::lround(b.b * f))};
    };
    auto lift = [&](double f) {
      return Rgb{static_cast<std::uint8_t>(std::lround(b.r + (255 - b.r) * f)),
                 static_cast<std::uint8_t>(std::lround(b.g + (255 - b.g) * f)),
                 static_cast<std::uint8_t>(std::lround(b.b + (255 - b.b) * f))};
    };
    if (m == Material::kRubber) {
      return role == PixelRole::kEdge ? scale(0.6) : b;
    }
    switch (role) {
      case PixelRole::kBody: return scale(0.8);
      case PixelRole::kHighlight: return lift(0.5);
      case PixelRole::kEdge: return scale(0.45);
    }
    return b;
  }

  struct PixelSource {
    Color color;
    Material material;
    PixelRole role;
  };

  // Inverse lookup; nullopt for background and for off-palette values.
  static std::optional<PixelSource> identify(Rgb px) {
    static const std::unordered_map<std::uint32_t, PixelSource> table = [] {
      std::unordered_map<std::uint32_t, PixelSource> t;
      for (int c = 0; c < kNumColors; ++c) {
        for (int m = 0; m < kNumMaterials; ++m) {
          for (auto role : {PixelRole::kBody, PixelRole::kHighlight, PixelRole::kEdge}) {
            if (m == 0 && role == PixelRole::kHighlight) continue;
            const auto col = static_cast<Color>(c);
            const auto mat = static_cast<Material>(m);
            t.emplace(pack(shade(col, mat, role)), PixelSource{col, mat, role});
          }
        }
      }
      return t;
    }();
    auto it = table.find(pack(px));
    if (it == table.end()) return std::nullopt;
    return it->second;
  }

  static constexpr std::uint32_t pack(Rgb c) {
    return (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b;
  }
};

// Exact pixel-center membership tests, all in integer arithmetic.
inline bool silhouette_contains(Shape shape, const BBox& box, int x, int y) {
  if (x < box.x1 || x >= box.x2 || y < box.y1 || y >= box.y2) return false;
  const std::int64_t w = box.width();
  const std::int64_t h = box.height();
  switch (shape) {
    case Shape::kCube:
      return true;
    case Shape::kSphere: {
      // Twice the offset of the pixel center from the box center.
      const std::int64_t dx = 2 * std::int64_t{x} + 1 - box.x1 - box.x2;
      const std::int64_t dy = 2 * std::int64_t{y} + 1 - box.y1 - box.y2;
      return dx * dx * h * h + dy * dy * w * w <= w * w * h * h;
    }
    case Shape::kCylinder: {
      const std::int64_t r = std::max<std::int64_t>(1, std::min(w, h) / 4);
      std::int64_t cx = 0, cy = 0;
      if (x < box.x1 + r) cx = box.x1 + r;
      else if (x >= box.x2 - r) cx = box.x2 - r;
      else return true;
      if (y < box.y1 + r) cy = box.y1 + r;
      else if (y >= box.y2 - r) cy = box.y2 - r;
      else return true;
      const std::int64_t dx = 2 * std::int64_t{x} + 1 - 2 * cx;
      const std::int64_t dy = 2 * std::int64_t{y} + 1 - 2 * cy;
      return dx * dx + dy * dy <= 4 * r * r;
    }
  }
  return false;
}

// Half-open column range [first, second) of the silhouette on row `y`; every
// row of every shape is a single run. Empty rows give first == second.
inline std::pair<int, int> silhouette_row_span(Shape shape, const BBox& box, int y) {
  if (y < box.y1 || y >= box.y2) return {box.x1, box.x1};
  if (shape == Shape::kCube) return {box.x1, box.x2};
  const double cx = 0.5 * (box.x1 + box.x2);
  double half = 0.5 * box.width();
  if (shape == Shape::kSphere) {
    const double v = (2.0 * y + 1.0 - box.y1 - box.y2) / box.height();
    half *= std::sqrt(std::max(0.0, 1.0 - v * v));
  }
  auto inside = [&](int x) { return silhouette_contains(shape, box, x, y); };
  const int mid = static_cast<int>(std::floor(cx));
  int lo = std::clamp(static_cast<int>(std::floor(cx - half)), box.x1, box.x2 - 1);
  while (lo > box.x1 && inside(lo - 1)) --lo;
  while (lo <= mid && !inside(lo)) ++lo;
  if (lo > mid && !inside(lo)) return {box.x1, box.x1};
  int hi = std::clamp(static_cast<int>(std::ceil(cx + half)), box.x1 + 1, box.x2);
  while (hi < box.x2 && inside(hi)) ++hi;
  while (hi > lo && !inside(hi - 1)) --hi;
  return {lo, hi};
}

namespace detail {

inline bool in_highlight(const BBox& box, int x, int y) {
  // Disc at (0.38, 0.38) of the box with radius 0.22 of each side.
  const double u = (x + 0.5 - box.x1) / box.width();
  const double v = (y + 0.5 - box.y1) / box.height();
  const double du = (u - 0.38) / 0.22;
  const double dv = (v - 0.38) / 0.22;
  return du * du + dv * dv <= 1.0;
}

}  // namespace detail

// Draws the silhouette of `attrs` fitted to `box` onto `img`. Pixels outside
// the silhouette are left untouched; the box is clipped to the image.
inline void draw_object(Image& img, const ObjectAttributes& attrs, const BBox& box) {
  const int x_lo = std::max(box.x1, 0), x_hi = std::min(box.x2, img.width());
  const int y_lo = std::max(box.y1, 0), y_hi = std::min(box.y2, img.height());
  const Rgb body = Palette::shade(attrs.color, attrs.material, PixelRole::kBody);
  const Rgb edge = Palette::shade(attrs.color, attrs.material, PixelRole::kEdge);
  const Rgb high = Palette::shade(attrs.color, attrs.material, PixelRole::kHighlight);
  auto inside = [&](int x, int y) { return silhouette_contains(attrs.shape, box, x, y); };
  for (int y = y_lo; y < y_hi; ++y) {
    for (int x = x_lo; x < x_hi; ++x) {
      if (!inside(x, y)) continue;
      const bool boundary =
          !inside(x - 1, y) || !inside(x + 1, y) || !inside(x, y - 1) || !inside(x, y + 1);
      if (boundary) {
        img.set(x, y, edge);
      } else if (attrs.material == Material::kMetal && detail::in_highlight(box, x, y)) {
        img.set(x, y, high);
      } else {
        img.set(x, y, body);
      }
    }
  }
}

inline void draw_object(Image& img, const ObjectSpec& obj) { draw_object(img, obj.attrs, obj.box); }

// Box-sized patch: the silhouette over background gray.
inline Image render_object_patch(const ObjectAttributes& attrs, const BBox& target_box) {
  if (target_box.width() <= 0 || target_box.height() <= 0) {
    throw InvalidArgument("render_object_patch: empty target box");
  }
  Image patch(target_box.width(), target_box.height(), Palette::background());
  draw_object(patch, attrs, {0, 0, target_box.width(), target_box.height()});
  return patch;
}

struct RenderResult {
  Image image;
  Layout layout;
};

// Later objects occlude earlier ones.
inline RenderResult render_scene(const Scene& scene) {
  RenderResult out{Image(scene.canvas, Palette::background()), scene.layout()};
  for (const auto& obj : scene.objects) draw_object(out.image, obj);
  return out;
}

inline Image render_objects(const Canvas& canvas, const std::vector<ObjectSpec>& objects) {
  Image img(canvas, Palette::background());
  for (const auto& obj : objects) draw_object(img, obj);
  return img;
}

}  // namespace layoutlab
