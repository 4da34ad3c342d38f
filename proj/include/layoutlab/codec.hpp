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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "layoutlab/core.hpp"

namespace layoutlab {

inline constexpr int kNumBins = 1000;

struct QuantizedBox {
  std::array<int, 4> bins{};  // x1, y1, x2, y2
  bool operator==(const QuantizedBox&) const = default;
};

inline int quantize_coord(int coord, int dim) {
  const std::int64_t bin = std::int64_t{coord} * kNumBins / dim;
  return static_cast<int>(std::clamp<std::int64_t>(bin, 0, kNumBins - 1));
}

// Center of the bin, rounded to the nearest pixel.
inline int dequantize_coord(int bin, int dim) {
  return static_cast<int>(std::lround((bin + 0.5) / kNumBins * dim));
}

inline QuantizedBox quantize_box(const BBox& box, const Canvas& canvas) {
  require_valid(box, canvas);
  return {{quantize_coord(box.x1, canvas.width), quantize_coord(box.y1, canvas.height),
           quantize_coord(box.x2, canvas.width), quantize_coord(box.y2, canvas.height)}};
}

inline BBox dequantize_box(const QuantizedBox& q, const Canvas& canvas) {
  for (int b : q.bins) {
    if (b < 0 || b >= kNumBins) throw InvalidArgument("bin out of range: " + std::to_string(b));
  }
  const BBox box{dequantize_coord(q.bins[0], canvas.width), dequantize_coord(q.bins[1], canvas.height),
                 dequantize_coord(q.bins[2], canvas.width), dequantize_coord(q.bins[3], canvas.height)};
  if (box.x1 >= box.x2 || box.y1 >= box.y2) {
    throw DegenerateBoxError("bins dequantize to an empty box");
  }
  return box;
}

inline std::string bin_token(int bin) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "<%03d>", bin);
  return buf;
}

inline std::string bin_tokens(const QuantizedBox& q) {
  std::string out;
  for (std::size_t i = 0; i < q.bins.size(); ++i) {
    if (i) out += ' ';
    out += bin_token(q.bins[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Region-caption serialization: "<020> <230> <492> <478> cyan metal sphere ..."
// ---------------------------------------------------------------------------

struct QuantizedRegion {
  QuantizedBox box;
  std::string caption;
  bool operator==(const QuantizedRegion&) const = default;
};

inline std::string serialize_reco(const std::vector<QuantizedRegion>& regions) {
  std::string out;
  for (const auto& r : regions) {
    if (!out.empty()) out += ' ';
    out += bin_tokens(r.box);
    out += ' ';
    out += r.caption;
  }
  return out;
}

inline std::vector<QuantizedRegion> quantize_layout(const Layout& layout) {
  std::vector<QuantizedRegion> out;
  for (const auto& r : layout.regions) {
    if (r.caption.find('<') != std::string::npos) {
      throw InvalidArgument("captions may not contain '<': " + r.caption);
    }
    out.push_back({quantize_box(r.box, layout.canvas), r.caption});
  }
  return out;
}

inline std::string serialize_reco(const Layout& layout) { return serialize_reco(quantize_layout(layout)); }

inline std::vector<QuantizedRegion> parse_reco(const std::string& text) {
  static const std::regex kRegion(R"(<(\d{3})> <(\d{3})> <(\d{3})> <(\d{3})> ([^<]*[^<\s]))");
  std::vector<QuantizedRegion> out;
  auto it = std::sregex_iterator(text.begin(), text.end(), kRegion);
  std::size_t consumed = 0;
  for (; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    const auto gap = text.substr(consumed, static_cast<std::size_t>(m.position()) - consumed);
    if (gap.find_first_not_of(' ') != std::string::npos) {
      throw InvalidArgument("unexpected text in region string: '" + gap + "'");
    }
    QuantizedRegion r;
    for (int i = 0; i < 4; ++i) r.box.bins[i] = std::stoi(m[i + 1].str());
    r.caption = m[5].str();
    out.push_back(std::move(r));
    consumed = static_cast<std::size_t>(m.position() + m.length());
  }
  if (text.substr(consumed).find_first_not_of(' ') != std::string::npos) {
    throw InvalidArgument("trailing text in region string");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Class-token serialization: "<020> <230> <492> <478> <cls23> ..."
// ---------------------------------------------------------------------------

using ClassMap = std::function<std::optional<int>(std::string_view caption)>;

// Caption "<color> <material> <shape>" to its class id.
inline std::optional<ObjectAttributes> parse_caption(std::string_view caption) {
  std::istringstream in{std::string(caption)};
  std::string color, material, shape, extra;
  if (!(in >> color >> material >> shape) || (in >> extra)) return std::nullopt;
  try {
    return ObjectAttributes{parse_shape(shape), parse_material(material), parse_color(color)};
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

inline ClassMap default_class_map() {
  return [](std::string_view caption) -> std::optional<int> {
    auto attrs = parse_caption(caption);
    if (!attrs || attrs->caption() != caption) return std::nullopt;
    return attrs->class_id();
  };
}

inline ClassMap class_map_from(std::map<std::string, int, std::less<>> table) {
  return [table = std::move(table)](std::string_view caption) -> std::optional<int> {
    auto it = table.find(caption);
    if (it == table.end()) return std::nullopt;
    return it->second;
  };
}

inline std::string class_token(int class_id) { return "<cls" + std::to_string(class_id) + ">"; }

inline std::string serialize_ldm(const Layout& layout, const ClassMap& class_map = default_class_map()) {
  std::string out;
  for (const auto& r : layout.regions) {
    const auto cls = class_map(r.caption);
    if (!cls) throw ClassMapError("no class id for caption '" + r.caption + "'");
    if (!out.empty()) out += ' ';
    out += bin_tokens(quantize_box(r.box, layout.canvas));
    out += ' ';
    out += class_token(*cls);
  }
  return out;
}

struct QuantizedClassRegion {
  QuantizedBox box;
  int class_id = 0;
  bool operator==(const QuantizedClassRegion&) const = default;
};

inline std::vector<QuantizedClassRegion> parse_ldm(const std::string& text) {
  static const std::regex kRegion(R"(^<(\d{3})> <(\d{3})> <(\d{3})> <(\d{3})> <cls(\d+)>$)");
  std::vector<QuantizedClassRegion> out;
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.size() % 5 != 0) throw InvalidArgument("class-token string has a partial region");
  for (std::size_t i = 0; i < tokens.size(); i += 5) {
    const std::string group = tokens[i] + " " + tokens[i + 1] + " " + tokens[i + 2] + " " +
                              tokens[i + 3] + " " + tokens[i + 4];
    std::smatch m;
    if (!std::regex_match(group, m, kRegion)) throw InvalidArgument("bad region '" + group + "'");
    QuantizedClassRegion r;
    for (int k = 0; k < 4; ++k) r.box.bins[k] = std::stoi(m[k + 1].str());
    r.class_id = std::stoi(m[5].str());
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-step inpainting prompts
// ---------------------------------------------------------------------------

inline constexpr std::string_view kBackgroundPrompt = "Add gray background";

inline std::string iterinpaint_prompt(std::string_view caption) {
  return "Add " + std::string(caption);
}

struct BackgroundMarker {
  bool operator==(const BackgroundMarker&) const = default;
};

using PromptTarget = std::variant<ObjectAttributes, BackgroundMarker>;

inline PromptTarget parse_add_prompt(std::string_view prompt) {
  if (prompt == kBackgroundPrompt) return BackgroundMarker{};
  constexpr std::string_view kPrefix = "Add ";
  if (prompt.substr(0, kPrefix.size()) == kPrefix) {
    const auto caption = prompt.substr(kPrefix.size());
    if (auto attrs = parse_caption(caption); attrs && attrs->caption() == caption) return *attrs;
  }
  throw PromptParseError("prompt does not match 'Add <color> <material> <shape>' or '" +
                         std::string(kBackgroundPrompt) + "': '" + std::string(prompt) + "'");
}

}  // namespace layoutlab
