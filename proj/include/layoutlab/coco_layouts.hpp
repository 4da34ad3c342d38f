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
#include <string>
#include <string_view>
#include <vector>

#include "layoutlab/core.hpp"

// Fixed layout pools and template captions for real-object layouts. Boxes
// are defined first without objects; every object of the vocabulary is then
// composed with every layout.
namespace layoutlab::coco {

enum class Skill : std::uint8_t { kNumber, kPosition, kSize, kCombination };

inline constexpr std::array<std::string_view, 4> kSkillNames = {"number", "position", "size",
                                                                "combination"};
inline std::string_view to_string(Skill s) { return kSkillNames[static_cast<int>(s)]; }
inline Skill parse_skill(std::string_view s) {
  return layoutlab::detail::parse_enum<Skill>(s, kSkillNames, "coco skill");
}

struct Object {
  std::string_view name;
  std::string_view plural;
};

// Default vocabulary; configurable through CocoLayoutSpec.
inline constexpr std::array<Object, 40> kDefaultVocabulary = {{
    {"person", "people"},          {"bicycle", "bicycles"},
    {"car", "cars"},               {"motorcycle", "motorcycles"},
    {"airplane", "airplanes"},     {"bus", "buses"},
    {"train", "trains"},           {"truck", "trucks"},
    {"boat", "boats"},             {"traffic light", "traffic lights"},
    {"fire hydrant", "fire hydrants"}, {"stop sign", "stop signs"},
    {"parking meter", "parking meters"}, {"bench", "benches"},
    {"bird", "birds"},             {"cat", "cats"},
    {"dog", "dogs"},               {"horse", "horses"},
    {"sheep", "sheep"},            {"cow", "cows"},
    {"elephant", "elephants"},     {"bear", "bears"},
    {"zebra", "zebras"},           {"giraffe", "giraffes"},
    {"backpack", "backpacks"},     {"umbrella", "umbrellas"},
    {"handbag", "handbags"},       {"suitcase", "suitcases"},
    {"bottle", "bottles"},         {"cup", "cups"},
    {"bowl", "bowls"},             {"banana", "bananas"},
    {"apple", "apples"},           {"orange", "oranges"},
    {"broccoli", "broccolis"},     {"carrot", "carrots"},
    {"pizza", "pizzas"},           {"chair", "chairs"},
    {"couch", "couches"},          {"clock", "clocks"},
}};

inline constexpr std::array<std::string_view, 3> kRelations = {"holding", "next to", "sitting on"};
inline constexpr int kPairsPerRelation = 20;

struct Pair {
  std::string_view a;
  std::string_view b;
};

// Illustrative defaults: 20 pairs per relation, relation order as kRelations.
inline constexpr std::array<std::array<Pair, kPairsPerRelation>, 3> kCommonPairs = {{
    {{{"person", "tennis racket"}, {"person", "umbrella"},   {"person", "cell phone"},
      {"person", "frisbee"},       {"person", "kite"},       {"person", "baseball bat"},
      {"person", "surfboard"},     {"person", "skateboard"}, {"person", "handbag"},
      {"person", "cup"},           {"person", "bottle"},     {"person", "book"},
      {"person", "remote"},        {"person", "knife"},      {"person", "banana"},
      {"person", "donut"},         {"person", "pizza"},      {"person", "teddy bear"},
      {"handbag", "cell phone"},   {"person", "toothbrush"}}},
    {{{"car", "truck"},         {"bus", "stop sign"},     {"bicycle", "motorcycle"},
      {"chair", "dining table"}, {"couch", "tv"},         {"laptop", "mouse"},
      {"keyboard", "mouse"},    {"cup", "bowl"},          {"fork", "knife"},
      {"sink", "toilet"},       {"oven", "refrigerator"}, {"person", "dog"},
      {"horse", "cow"},         {"sheep", "cow"},         {"zebra", "giraffe"},
      {"bottle", "wine glass"}, {"apple", "orange"},      {"banana", "apple"},
      {"toaster", "microwave"}, {"cat", "dog"}}},
    {{{"person", "chair"},     {"person", "bench"},     {"person", "couch"},
      {"cat", "couch"},        {"dog", "bed"},          {"bird", "bench"},
      {"person", "bed"},       {"cat", "chair"},        {"person", "motorcycle"},
      {"person", "bicycle"},   {"person", "horse"},     {"person", "toilet"},
      {"cup", "dining table"}, {"laptop", "dining table"}, {"vase", "dining table"},
      {"cat", "bed"},          {"dog", "couch"},        {"teddy bear", "bed"},
      {"person", "surfboard"}, {"person", "skateboard"}}},
}};

inline constexpr std::array<std::array<Pair, kPairsPerRelation>, 3> kUncommonPairs = {{
    {{{"elephant", "cell phone"}, {"giraffe", "tennis racket"}, {"cat", "baseball bat"},
      {"horse", "laptop"},        {"zebra", "umbrella"},        {"cow", "frisbee"},
      {"bear", "skateboard"},     {"sheep", "kite"},            {"bird", "surfboard"},
      {"dog", "hair drier"},      {"teddy bear", "knife"},      {"chair", "banana"},
      {"couch", "pizza"},         {"clock", "donut"},           {"toilet", "book"},
      {"bus", "cup"},             {"train", "remote"},          {"bench", "bottle"},
      {"fire hydrant", "scissors"}, {"airplane", "toothbrush"}}},
    {{{"parking meter", "clock"}, {"fire hydrant", "bed"},    {"elephant", "toaster"},
      {"giraffe", "microwave"},   {"zebra", "laptop"},        {"train", "teddy bear"},
      {"boat", "hair drier"},     {"bear", "sink"},           {"cow", "keyboard"},
      {"sheep", "tv"},            {"horse", "refrigerator"},  {"stop sign", "pizza"},
      {"surfboard", "oven"},      {"skis", "donut"},          {"kite", "toilet"},
      {"bus", "wine glass"},      {"truck", "scissors"},      {"motorcycle", "vase"},
      {"bird", "dining table"},   {"airplane", "spoon"}}},
    {{{"elephant", "banana"},   {"giraffe", "cup"},       {"bus", "donut"},
      {"cow", "laptop"},        {"bear", "apple"},        {"zebra", "toaster"},
      {"train", "orange"},      {"truck", "cake"},        {"airplane", "pizza"},
      {"refrigerator", "bird"}, {"couch", "cat"},         {"car", "skateboard"},
      {"bed", "mouse"},         {"horse", "remote"},      {"sheep", "cell phone"},
      {"dining table", "carrot"}, {"boat", "hot dog"},    {"oven", "sandwich"},
      {"motorcycle", "broccoli"}, {"tv", "spoon"}}},
}};

struct CocoLayoutSpec {
  Skill skill = Skill::kNumber;
  std::string split = "all";
  std::vector<Object> object_vocabulary{kDefaultVocabulary.begin(), kDefaultVocabulary.end()};
  std::string caption_template = "a photo of [N] [objects]";
};

struct CocoSample {
  std::string caption;
  Layout layout;
};

inline std::string render_caption(std::string_view tmpl, std::string_view n, std::string_view objects) {
  std::string out(tmpl);
  auto replace = [&](std::string_view key, std::string_view value) {
    for (auto pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos + value.size())) {
      out.replace(pos, key.size(), value);
    }
  };
  replace("[N]", n);
  replace("[objects]", objects);
  return out;
}

inline std::string relation_caption(std::string_view a, std::string_view relation, std::string_view b) {
  return std::string(a) + " is " + std::string(relation) + " " + std::string(b);
}

namespace detail {

inline constexpr int kDim = 512;

// Box of relative size `frac` centered in cell (col,row) of a cols x rows grid
// spanning `area`; `dy` shifts it by a fraction of the cell height.
inline BBox grid_box(const BBox& area, int cols, int rows, int col, int row, double frac,
                     double dy = 0.0) {
  const double cw = static_cast<double>(area.width()) / cols;
  const double ch = static_cast<double>(area.height()) / rows;
  const double cx = area.x1 + (col + 0.5) * cw;
  const double cy = area.y1 + (row + 0.5 + dy) * ch;
  const double hw = cw * frac / 2, hh = ch * frac / 2;
  return {static_cast<int>(std::lround(cx - hw)), static_cast<int>(std::lround(cy - hh)),
          static_cast<int>(std::lround(cx + hw)), static_cast<int>(std::lround(cy + hh))};
}

using Boxes = std::vector<BBox>;

// Variant 0: row-major grid. Variant 1: transposed grid, odd columns lowered.
inline Boxes number_layout(int n, int variant) {
  const int r = static_cast<int>(std::floor(std::sqrt(n)));
  int cols = (n + r - 1) / r, rows = r;
  if (variant == 1) std::swap(cols, rows);
  const BBox area{0, 0, kDim, kDim};
  Boxes out;
  for (int i = 0; i < n; ++i) {
    if (variant == 0) {
      out.push_back(grid_box(area, cols, rows, i % cols, i / cols, 0.7));
    } else {
      const int col = i / rows, row = i % rows;
      out.push_back(grid_box(area, cols, rows, col, row, 0.6, col % 2 ? 0.15 : -0.05));
    }
  }
  return out;
}

// n = 2..5 boxes crowded into the central square.
inline Boxes center_layout(int n) {
  const BBox area{176, 176, 336, 336};
  const int cols = static_cast<int>(std::ceil(std::sqrt(n)));
  const int rows = (n + cols - 1) / cols;
  Boxes out;
  for (int i = 0; i < n; ++i) out.push_back(grid_box(area, cols, rows, i % cols, i / cols, 1.2));
  return out;
}

// n = 2..5 boxes, each touching at least one canvas edge.
inline Boxes boundary_layout(int n) {
  constexpr int s = 112;
  const std::array<BBox, 5> anchors = {{{0, 0, s, s},
                                        {kDim - s, kDim - s, kDim, kDim},
                                        {kDim - s, 0, kDim, s},
                                        {0, kDim - s, s, kDim},
                                        {0, 200, s, 200 + s}}};
  return {anchors.begin(), anchors.begin() + n};
}

// n boxes of side `side` spread evenly along the main diagonal.
inline Boxes diagonal_layout(int n, int side) {
  Boxes out;
  const int step = n > 1 ? (kDim - side) / (n - 1) : 0;
  const int start = n > 1 ? 0 : (kDim - side) / 2;
  for (int i = 0; i < n; ++i) {
    const int o = start + i * step;
    out.push_back({o, o, o + side, o + side});
  }
  return out;
}

// n boxes of side `side` in a horizontal row at mid height.
inline Boxes row_layout(int n, int side) {
  Boxes out;
  const int y = (kDim - side) / 2;
  for (int i = 0; i < n; ++i) {
    const int cx = (2 * i + 1) * kDim / (2 * n);
    out.push_back({cx - side / 2, y, cx - side / 2 + side, y + side});
  }
  return out;
}

inline BBox mirror(const BBox& b) { return {kDim - b.x2, b.y1, kDim - b.x1, b.y2}; }

inline BBox shrink(const BBox& b, double f) {
  const double c = kDim / 2.0;
  auto t = [&](int v) { return static_cast<int>(std::lround(c + (v - c) * f)); };
  return {t(b.x1), t(b.y1), t(b.x2), t(b.y2)};
}

// Two boxes (subject, object) per relation; variants: base, mirrored, shrunk.
inline Boxes relation_layout(int relation, int variant) {
  static const std::array<std::array<BBox, 2>, 3> kBase = {{
      {{{128, 64, 320, 480}, {280, 200, 400, 320}}},  // holding
      {{{40, 160, 240, 400}, {272, 160, 472, 400}}},  // next to
      {{{176, 40, 336, 280}, {96, 200, 416, 480}}},   // sitting on
  }};
  Boxes out;
  for (const auto& b : kBase[relation]) {
    out.push_back(variant == 0 ? b : variant == 1 ? mirror(b) : shrink(b, 0.75));
  }
  return out;
}

struct PooledLayout {
  int n;
  Boxes boxes;
};

inline std::vector<PooledLayout> count_pool(Skill skill, std::string_view split) {
  std::vector<PooledLayout> pool;
  auto add = [&](Boxes b) { pool.push_back({static_cast<int>(b.size()), std::move(b)}); };
  switch (skill) {
    case Skill::kNumber: {
      int lo = 2, hi = 10;
      if (split == "few") { lo = 2; hi = 4; }
      else if (split == "mid") { lo = 5; hi = 7; }
      else if (split == "many") { lo = 8; hi = 10; }
      else if (split != "all") break;
      for (int n = lo; n <= hi; ++n) {
        for (int v = 0; v < 2; ++v) add(number_layout(n, v));
      }
      break;
    }
    case Skill::kPosition:
      if (split == "center" || split == "all") {
        for (int n = 2; n <= 5; ++n) add(center_layout(n));
      }
      if (split == "boundary" || split == "all") {
        for (int n = 2; n <= 5; ++n) add(boundary_layout(n));
      }
      break;
    case Skill::kSize:
      if (split == "tiny" || split == "all") {
        for (int n = 1; n <= 3; ++n) {
          for (int side : {16, 24, 32}) add(row_layout(n, side));
        }
      }
      if (split == "large" || split == "all") {
        for (int n = 1; n <= 3; ++n) {
          for (int side : {320, 384, 448}) add(diagonal_layout(n, side));
        }
      }
      break;
    case Skill::kCombination:
      break;
  }
  return pool;
}

}  // namespace detail

inline std::vector<std::string> coco_splits(Skill skill) {
  switch (skill) {
    case Skill::kNumber: return {"few", "mid", "many", "all"};
    case Skill::kPosition: return {"center", "boundary", "all"};
    case Skill::kSize: return {"tiny", "large", "all"};
    case Skill::kCombination: return {"common", "uncommon", "all"};
  }
  return {};
}

inline void require_split(Skill skill, std::string_view split) {
  for (const auto& s : coco_splits(skill)) {
    if (s == split) return;
  }
  throw InvalidArgument("unknown split '" + std::string(split) + "' for coco skill '" +
                        std::string(to_string(skill)) + "'");
}

inline std::size_t split_size(const CocoLayoutSpec& spec) {
  require_split(spec.skill, spec.split);
  if (spec.skill == Skill::kCombination) {
    const std::size_t per_split = kRelations.size() * 3 * kPairsPerRelation;
    return spec.split == "all" ? 2 * per_split : per_split;
  }
  return detail::count_pool(spec.skill, spec.split).size() * spec.object_vocabulary.size();
}

inline std::size_t split_size(Skill skill, std::string_view split = "all") {
  CocoLayoutSpec spec;
  spec.skill = skill;
  spec.split = std::string(split);
  return split_size(spec);
}

// Enumeration order: count skills go layout-major then object; combination
// goes split (common, uncommon), relation, layout variant, pair.
inline CocoSample sample_coco_layout(const CocoLayoutSpec& spec, std::size_t index) {
  const std::size_t size = split_size(spec);
  if (index >= size) {
    throw IndexOutOfRange("index " + std::to_string(index) + " >= " + std::to_string(size) +
                          " layouts in " + std::string(to_string(spec.skill)) + "/" + spec.split);
  }
  const Canvas canvas{detail::kDim, detail::kDim};
  CocoSample out{{}, Layout{canvas, {}}};
  if (spec.skill == Skill::kCombination) {
    const std::size_t per_split = kRelations.size() * 3 * kPairsPerRelation;
    bool uncommon = spec.split == "uncommon";
    if (spec.split == "all" && index >= per_split) {
      uncommon = true;
      index -= per_split;
    }
    const auto pair_idx = index % kPairsPerRelation;
    const auto variant = static_cast<int>(index / kPairsPerRelation % 3);
    const auto relation = static_cast<int>(index / (kPairsPerRelation * 3));
    const Pair pair = (uncommon ? kUncommonPairs : kCommonPairs)[relation][pair_idx];
    const auto boxes = detail::relation_layout(relation, variant);
    out.caption = relation_caption(pair.a, kRelations[relation], pair.b);
    out.layout.regions = {{std::string(pair.a), boxes[0]}, {std::string(pair.b), boxes[1]}};
    return out;
  }
  const auto pool = detail::count_pool(spec.skill, spec.split);
  const auto& entry = pool[index / spec.object_vocabulary.size()];
  const Object& obj = spec.object_vocabulary[index % spec.object_vocabulary.size()];
  out.caption = render_caption(spec.caption_template, std::to_string(entry.n),
                               entry.n == 1 ? obj.name : obj.plural);
  for (const auto& b : entry.boxes) out.layout.regions.push_back({std::string(obj.name), b});
  return out;
}

inline CocoSample sample_coco_layout(Skill skill, std::string_view split, std::size_t index) {
  CocoLayoutSpec spec;
  spec.skill = skill;
  spec.split = std::string(split);
  return sample_coco_layout(spec, index);
}

}  // namespace layoutlab::coco
