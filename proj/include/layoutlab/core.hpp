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
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layoutlab/errors.hpp"

namespace layoutlab {

struct Canvas {
  int width = 512;
  int height = 512;

  std::int64_t area() const { return std::int64_t{width} * height; }
  bool operator==(const Canvas&) const = default;
};

// Half-open integer pixel rectangle [x1, x2) x [y1, y2).
struct BBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  std::int64_t area() const { return std::int64_t{width()} * height(); }
  bool operator==(const BBox&) const = default;
};

inline bool is_valid(const BBox& b, const Canvas& canvas) {
  return b.x1 < b.x2 && b.y1 < b.y2 && b.x1 >= 0 && b.y1 >= 0 &&
         b.x2 <= canvas.width && b.y2 <= canvas.height;
}

inline void require_valid(const BBox& b, const Canvas& canvas) {
  if (!is_valid(b, canvas)) {
    throw InvalidArgument("box [" + std::to_string(b.x1) + "," +
                          std::to_string(b.y1) + "," + std::to_string(b.x2) +
                          "," + std::to_string(b.y2) + "] is not valid on a " +
                          std::to_string(canvas.width) + "x" +
                          std::to_string(canvas.height) + " canvas");
  }
}

inline std::int64_t intersection_area(const BBox& a, const BBox& b) {
  const int w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const int h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0 || h <= 0) return 0;
  return std::int64_t{w} * h;
}

inline double iou(const BBox& a, const BBox& b) {
  const std::int64_t inter = intersection_area(a, b);
  const std::int64_t uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// ---------------------------------------------------------------------------
// Object attributes. Enum order fixes the class id layout:
//   class_id = color * 6 + material * 3 + shape
// ---------------------------------------------------------------------------

enum class Shape : std::uint8_t { kCube, kSphere, kCylinder };
enum class Material : std::uint8_t { kRubber, kMetal };
enum class Color : std::uint8_t {
  kGray, kRed, kBlue, kGreen, kBrown, kPurple, kCyan, kYellow
};

inline constexpr int kNumShapes = 3;
inline constexpr int kNumMaterials = 2;
inline constexpr int kNumColors = 8;
inline constexpr int kNumClasses = kNumShapes * kNumMaterials * kNumColors;

inline constexpr std::array<std::string_view, kNumShapes> kShapeNames = {
    "cube", "sphere", "cylinder"};
inline constexpr std::array<std::string_view, kNumMaterials> kMaterialNames = {
    "rubber", "metal"};
inline constexpr std::array<std::string_view, kNumColors> kColorNames = {
    "gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"};

inline std::string_view to_string(Shape s) { return kShapeNames[static_cast<int>(s)]; }
inline std::string_view to_string(Material m) { return kMaterialNames[static_cast<int>(m)]; }
inline std::string_view to_string(Color c) { return kColorNames[static_cast<int>(c)]; }

namespace detail {
template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::array<std::string_view, N>& names,
                std::string_view what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<Enum>(i);
  }
  throw InvalidArgument("unknown " + std::string(what) + " '" + std::string(text) + "'");
}
}  // namespace detail

inline Shape parse_shape(std::string_view s) {
  return detail::parse_enum<Shape>(s, kShapeNames, "shape");
}
inline Material parse_material(std::string_view s) {
  return detail::parse_enum<Material>(s, kMaterialNames, "material");
}
inline Color parse_color(std::string_view s) {
  return detail::parse_enum<Color>(s, kColorNames, "color");
}

struct ObjectAttributes {
  Shape shape = Shape::kCube;
  Material material = Material::kRubber;
  Color color = Color::kGray;

  int class_id() const {
    return static_cast<int>(color) * 6 + static_cast<int>(material) * 3 +
           static_cast<int>(shape);
  }
  std::string caption() const {
    std::string out(to_string(color));
    out += ' ';
    out += to_string(material);
    out += ' ';
    out += to_string(shape);
    return out;
  }
  bool operator==(const ObjectAttributes&) const = default;
};

inline ObjectAttributes attributes_from_class_id(int class_id) {
  if (class_id < 0 || class_id >= kNumClasses) {
    throw InvalidArgument("class id out of range: " + std::to_string(class_id));
  }
  return {static_cast<Shape>(class_id % 3),
          static_cast<Material>((class_id / 3) % 2),
          static_cast<Color>(class_id / 6)};
}

struct ObjectSpec {
  ObjectAttributes attrs;
  BBox box;

  int class_id() const { return attrs.class_id(); }
  std::string caption() const { return attrs.caption(); }
  bool operator==(const ObjectSpec&) const = default;
};

struct Region {
  std::string caption;
  BBox box;
  bool operator==(const Region&) const = default;
};

struct Layout {
  Canvas canvas;
  std::vector<Region> regions;
  bool operator==(const Layout&) const = default;
};

inline void require_valid(const Layout& layout) {
  for (const auto& r : layout.regions) require_valid(r.box, layout.canvas);
}

// ---------------------------------------------------------------------------
// Rasters
// ---------------------------------------------------------------------------

// Single-channel binary raster: 1 = update, 0 = preserve.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height),
        bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {}
  explicit Mask(const Canvas& c, std::uint8_t fill = 0) : Mask(c.width, c.height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  Canvas canvas() const { return {width_, height_}; }

  std::uint8_t at(int x, int y) const { return bits_[index(x, y)]; }
  void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }

  void fill_box(const BBox& b, bool v) {
    for (int y = b.y1; y < b.y2; ++y) {
      std::fill_n(bits_.begin() + index(b.x1, y), b.width(), v ? 1 : 0);
    }
  }

  std::int64_t popcount() const {
    return std::count(bits_.begin(), bits_.end(), std::uint8_t{1});
  }

  Mask complement() const {
    Mask out = *this;
    for (auto& b : out.bits_) b ^= 1;
    return out;
  }

  std::span<const std::uint8_t> bits() const { return bits_; }
  bool operator==(const Mask&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

// Packed 8-bit RGB, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height * 3) {
    for (std::size_t i = 0; i < data_.size(); i += 3) {
      data_[i] = fill.r;
      data_[i + 1] = fill.g;
      data_[i + 2] = fill.b;
    }
  }
  Image(const Canvas& c, Rgb fill) : Image(c.width, c.height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  Canvas canvas() const { return {width_, height_}; }

  Rgb at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }

  std::span<const std::uint8_t> bytes() const { return data_; }
  std::span<std::uint8_t> bytes() { return data_; }
  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// ---------------------------------------------------------------------------
// Scenes
// ---------------------------------------------------------------------------

enum class Skill : std::uint8_t { kNumber, kPosition, kSize, kShape, kId };

inline constexpr std::array<std::string_view, 5> kSkillNames = {
    "number", "position", "size", "shape", "id"};

inline std::string_view to_string(Skill s) { return kSkillNames[static_cast<int>(s)]; }
inline Skill parse_skill(std::string_view s) {
  return detail::parse_enum<Skill>(s, kSkillNames, "skill");
}

struct Scene {
  Canvas canvas;
  std::vector<ObjectSpec> objects;
  Skill skill = Skill::kId;
  std::string split;
  std::uint64_t seed = 0;

  Layout layout() const {
    Layout out{canvas, {}};
    out.regions.reserve(objects.size());
    for (const auto& o : objects) out.regions.push_back({o.caption(), o.box});
    return out;
  }
  bool operator==(const Scene&) const = default;
};

// ---------------------------------------------------------------------------
// Mask and compositing primitives
// ---------------------------------------------------------------------------

inline Mask mask_from_box(const BBox& box, const Canvas& canvas) {
  require_valid(box, canvas);
  Mask m(canvas);
  m.fill_box(box, true);
  return m;
}

inline Mask union_mask(const Layout& layout) {
  Mask m(layout.canvas);
  for (const auto& r : layout.regions) {
    require_valid(r.box, layout.canvas);
    m.fill_box(r.box, true);
  }
  return m;
}

// Complement of the union of all region boxes.
inline Mask background_mask(const Layout& layout) { return union_mask(layout).complement(); }

// Pixel-exact selection: gen where the mask is set, ctx elsewhere.
inline Image composite(const Image& ctx, const Image& gen, const Mask& m) {
  if (ctx.width() != gen.width() || ctx.height() != gen.height() ||
      ctx.width() != m.width() || ctx.height() != m.height()) {
    throw DimensionError("composite: ctx " + std::to_string(ctx.width()) + "x" +
                         std::to_string(ctx.height()) + ", gen " +
                         std::to_string(gen.width()) + "x" + std::to_string(gen.height()) +
                         ", mask " + std::to_string(m.width()) + "x" +
                         std::to_string(m.height()));
  }
  Image out = ctx;
  auto dst = out.bytes();
  const auto src = gen.bytes();
  const auto bits = m.bits();
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (bits[p]) {
      dst[3 * p] = src[3 * p];
      dst[3 * p + 1] = src[3 * p + 1];
      dst[3 * p + 2] = src[3 * p + 2];
    }
  }
  return out;
}

}  // namespace layoutlab
