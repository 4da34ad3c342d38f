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

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "layoutlab/core.hpp"
#include "layoutlab/random.hpp"

namespace layoutlab {

enum class Placement : std::uint8_t { kUniform, kCenter, kBoundary };

// Box aspect as width:height.
struct AspectRatio {
  int w = 1;
  int h = 1;
  bool operator==(const AspectRatio&) const = default;
};

struct SplitSpec {
  Skill skill = Skill::kId;
  std::string split;
  int min_count = 0;
  int max_count = 0;
  std::vector<double> size_set;
  std::vector<AspectRatio> aspect_set;
  Placement placement = Placement::kUniform;
  // Maximum pairwise IoU between boxes of one scene; nullopt = unconstrained.
  std::optional<double> overlap_cap = 0.3;
  // Maximum share of the smaller box that another box may cover.
  std::optional<double> cover_cap = 0.25;
};

inline constexpr double kOverlapCap = 0.3;
inline constexpr double kCoverCap = 0.25;
inline constexpr double kCenterCoverCap = 0.4;
inline constexpr int kMaxSceneRestarts = 20;
inline constexpr int kMaxPlacementRetries = 1000;
inline constexpr double kPixelsPerScale = 16.0;

struct SplitName {
  Skill skill;
  std::string_view split;
};

inline constexpr std::array<SplitName, 8> kOodSplits = {{
    {Skill::kNumber, "few"},
    {Skill::kNumber, "many"},
    {Skill::kPosition, "center"},
    {Skill::kPosition, "boundary"},
    {Skill::kSize, "tiny"},
    {Skill::kSize, "large"},
    {Skill::kShape, "horizontal"},
    {Skill::kShape, "vertical"},
}};

inline constexpr std::string_view kIdSplit = "clevr";

// Side length in pixels of a square object at `scale`.
inline int side_px(double scale) { return static_cast<int>(std::lround(scale * kPixelsPerScale)); }

// Width and height of an object box. Elongated boxes use half the square
// side as the short edge and an exact integer multiple as the long edge.
inline std::pair<int, int> box_dims(double scale, AspectRatio aspect) {
  const int side = side_px(scale);
  if (aspect.w == aspect.h) return {side, side};
  const int short_side = side / 2;
  if (aspect.w > aspect.h) return {short_side * aspect.w / aspect.h, short_side};
  return {short_side, short_side * aspect.h / aspect.w};
}

inline SplitSpec clevr_spec() {
  return {Skill::kId, std::string(kIdSplit), 3, 10, {3.5, 7.0}, {{1, 1}},
          Placement::kUniform, kOverlapCap, kCoverCap};
}

// The configuration of each benchmark split. Everything not named by the
// split stays at the CLEVR defaults.
inline SplitSpec split_spec(Skill skill, std::string_view split) {
  SplitSpec s = clevr_spec();
  s.skill = skill;
  s.split = std::string(split);
  switch (skill) {
    case Skill::kId:
      if (split == kIdSplit) return s;
      break;
    case Skill::kNumber:
      if (split == "few") { s.min_count = 0; s.max_count = 2; return s; }
      if (split == "many") { s.min_count = 11; s.max_count = 16; return s; }
      break;
    case Skill::kPosition:
      if (split == "center") {
        s.placement = Placement::kCenter;
        s.overlap_cap = std::nullopt;
        s.cover_cap = kCenterCoverCap;
        return s;
      }
      if (split == "boundary") { s.placement = Placement::kBoundary; return s; }
      break;
    case Skill::kSize:
      s.min_count = 3;
      s.max_count = 5;
      if (split == "tiny") { s.size_set = {2.0}; return s; }
      if (split == "large") { s.size_set = {9.0, 11.0, 13.0, 15.0}; return s; }
      break;
    case Skill::kShape:
      s.min_count = 3;
      s.max_count = 5;
      if (split == "horizontal") { s.aspect_set = {{2, 1}, {3, 1}}; return s; }
      if (split == "vertical") { s.aspect_set = {{1, 2}, {1, 3}}; return s; }
      break;
  }
  throw InvalidArgument("unknown split '" + std::string(split) + "' for skill '" +
                        std::string(to_string(skill)) + "'");
}

namespace detail {

inline BBox place_box(std::mt19937_64& rng, const Canvas& c, int w, int h, Placement p) {
  if (w > c.width || h > c.height) {
    throw PlacementError("object " + std::to_string(w) + "x" + std::to_string(h) +
                         " does not fit the canvas");
  }
  switch (p) {
    case Placement::kUniform: {
      const int x = uniform_int(rng, 0, c.width - w);
      const int y = uniform_int(rng, 0, c.height - h);
      return {x, y, x + w, y + h};
    }
    case Placement::kCenter: {
      // Box center inside the middle square holding a quarter of the canvas area.
      auto range = [](int dim, int size) {
        const int lo = std::max(0, dim / 2 - size + 1) / 2;
        const int hi = std::min(dim - size, (3 * dim / 2 - size) / 2);
        return std::pair{lo, hi};
      };
      const auto [xlo, xhi] = range(c.width, w);
      const auto [ylo, yhi] = range(c.height, h);
      if (xlo > xhi || ylo > yhi) throw PlacementError("object too large for center region");
      const int x = uniform_int(rng, xlo, xhi);
      const int y = uniform_int(rng, ylo, yhi);
      return {x, y, x + w, y + h};
    }
    case Placement::kBoundary: {
      // Snap to an edge, let up to half of the object hang off, clip.
      const int edge = uniform_int(rng, 0, 3);
      if (edge < 2) {
        const int overhang = uniform_int(rng, 0, w / 2);
        const int y = uniform_int(rng, 0, c.height - h);
        return edge == 0 ? BBox{0, y, w - overhang, y + h}
                         : BBox{c.width - w + overhang, y, c.width, y + h};
      }
      const int overhang = uniform_int(rng, 0, h / 2);
      const int x = uniform_int(rng, 0, c.width - w);
      return edge == 2 ? BBox{x, 0, x + w, h - overhang}
                       : BBox{x, c.height - h + overhang, x + w, c.height};
    }
  }
  return {};
}

// One placement pass; nullopt when some object could not be placed.
inline std::optional<Scene> try_sample(const SplitSpec& spec, int count, std::uint64_t seed,
                                       const Canvas& canvas, std::mt19937_64& rng) {
  Scene scene{canvas, {}, spec.skill, spec.split, seed};
  scene.objects.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    ObjectSpec obj;
    obj.attrs = attributes_from_class_id(uniform_int(rng, 0, kNumClasses - 1));
    const double scale = spec.size_set[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<int>(spec.size_set.size()) - 1))];
    const AspectRatio aspect = spec.aspect_set[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<int>(spec.aspect_set.size()) - 1))];
    const auto [w, h] = box_dims(scale, aspect);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementRetries && !placed; ++attempt) {
      obj.box = place_box(rng, canvas, w, h, spec.placement);
      placed = true;
      if (spec.overlap_cap) {
        for (const auto& other : scene.objects) {
          if (iou(obj.box, other.box) > *spec.overlap_cap) {
            placed = false;
            break;
          }
        }
      }
      if (placed && spec.cover_cap) {
        for (const auto& other : scene.objects) {
          const auto smaller = std::min(obj.box.area(), other.box.area());
          if (intersection_area(obj.box, other.box) > *spec.cover_cap * smaller) {
            placed = false;
            break;
          }
        }
      }
    }
    if (!placed) return std::nullopt;
    scene.objects.push_back(obj);
  }
  return scene;
}

inline Scene sample_with_spec(const SplitSpec& spec, int count, std::uint64_t seed,
                              const Canvas& canvas) {
  std::mt19937_64 rng(stream_seed(std::string(to_string(spec.skill)) + "/" + spec.split, seed));
  for (int restart = 0; restart < kMaxSceneRestarts; ++restart) {
    if (auto scene = try_sample(spec, count, seed, canvas, rng)) return std::move(*scene);
  }
  throw PlacementError("could not place " + std::to_string(count) + " objects for " +
                       spec.split + " within " + std::to_string(kMaxPlacementRetries) +
                       " attempts per object");
}

}  // namespace detail

inline Scene sample_with_spec(const SplitSpec& spec, std::uint64_t seed,
                              const Canvas& canvas = {}) {
  std::mt19937_64 count_rng(detail::stream_seed("count/" + spec.split, seed));
  const int count = detail::uniform_int(count_rng, spec.min_count, spec.max_count);
  return detail::sample_with_spec(spec, count, seed, canvas);
}

// Deterministic in (skill, split, seed).
inline Scene sample_scene(Skill skill, std::string_view split, std::uint64_t seed,
                          const Canvas& canvas = {}) {
  return sample_with_spec(split_spec(skill, split), seed, canvas);
}

// ---------------------------------------------------------------------------
// Fine-grained buckets: one pinned attribute value per bucket.
// ---------------------------------------------------------------------------

struct FineBucket {
  std::string name;
  bool in_distribution = false;
};

inline std::vector<FineBucket> fine_buckets(Skill skill) {
  switch (skill) {
    case Skill::kNumber: {
      std::vector<FineBucket> out;
      for (int k = 0; k <= 16; ++k) out.push_back({std::to_string(k), k >= 3 && k <= 10});
      return out;
    }
    case Skill::kPosition:
      return {{"uniform", true}, {"center", false}, {"boundary", false}};
    case Skill::kSize:
      return {{"2", false}, {"3.5", true}, {"7", true}, {"9", false},
              {"11", false}, {"13", false}, {"15", false}};
    case Skill::kShape:
      // Named after height:width.
      return {{"H1W1", true}, {"H2W1", false}, {"H3W1", false},
              {"H1W2", false}, {"H1W3", false}};
    case Skill::kId:
      return {{std::string(kIdSplit), true}};
  }
  return {};
}

inline SplitSpec fine_spec(Skill skill, std::string_view bucket) {
  bool known = false;
  for (const auto& b : fine_buckets(skill)) known = known || b.name == bucket;
  if (!known) {
    throw BucketError("unknown bucket '" + std::string(bucket) + "' for skill '" +
                      std::string(to_string(skill)) + "'");
  }
  SplitSpec s = clevr_spec();
  s.skill = skill;
  s.split = std::string(bucket);
  switch (skill) {
    case Skill::kId:
      break;
    case Skill::kNumber:
      s.min_count = s.max_count = std::stoi(std::string(bucket));
      break;
    case Skill::kPosition:
      if (bucket == "center") {
        s.placement = Placement::kCenter;
        s.overlap_cap = std::nullopt;
        s.cover_cap = kCenterCoverCap;
      }
      if (bucket == "boundary") s.placement = Placement::kBoundary;
      break;
    case Skill::kSize:
      s.min_count = 3;
      s.max_count = 5;
      s.size_set = {std::stod(std::string(bucket))};
      // Five 240 px boxes seldom admit a placement under the cover cap.
      if (side_px(s.size_set[0]) >= 240) s.max_count = 4;
      break;
    case Skill::kShape: {
      s.min_count = 3;
      s.max_count = 5;
      const int h = bucket[1] - '0';
      const int w = bucket[3] - '0';
      s.aspect_set = {{w, h}};
      break;
    }
  }
  return s;
}

inline Scene sample_fine(Skill skill, std::string_view bucket, std::uint64_t seed,
                         const Canvas& canvas = {}) {
  return sample_with_spec(fine_spec(skill, bucket), seed, canvas);
}

}  // namespace layoutlab
