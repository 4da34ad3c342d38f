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

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "layoutlab/core.hpp"

namespace layoutlab {

using json = nlohmann::json;

inline json to_json(const BBox& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

inline BBox bbox_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw InvalidArgument("box must be an array [x1,y1,x2,y2]");
  }
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

inline json to_json(const Canvas& c) { return {{"w", c.width}, {"h", c.height}}; }

inline Canvas canvas_from_json(const json& j) {
  return {j.at("w").get<int>(), j.at("h").get<int>()};
}

inline json to_json(const ObjectSpec& o) {
  return {{"shape", std::string(to_string(o.attrs.shape))},
          {"material", std::string(to_string(o.attrs.material))},
          {"color", std::string(to_string(o.attrs.color))},
          {"box", to_json(o.box)}};
}

inline ObjectSpec object_from_json(const json& j) {
  ObjectSpec o;
  o.attrs.shape = parse_shape(j.at("shape").get<std::string>());
  o.attrs.material = parse_material(j.at("material").get<std::string>());
  o.attrs.color = parse_color(j.at("color").get<std::string>());
  o.box = bbox_from_json(j.at("box"));
  return o;
}

// Scene body in the shared layout schema; skill/split/seed travel in the manifest line.
inline json to_json(const Scene& s) {
  json objects = json::array();
  for (const auto& o : s.objects) objects.push_back(to_json(o));
  return {{"canvas", to_json(s.canvas)}, {"objects", std::move(objects)}};
}

inline Scene scene_from_json(const json& j) {
  Scene s;
  s.canvas = canvas_from_json(j.at("canvas"));
  for (const auto& o : j.at("objects")) {
    s.objects.push_back(object_from_json(o));
    require_valid(s.objects.back().box, s.canvas);
  }
  return s;
}

inline json to_json(const Layout& l) {
  json regions = json::array();
  for (const auto& r : l.regions) {
    regions.push_back({{"caption", r.caption}, {"box", to_json(r.box)}});
  }
  return {{"canvas", to_json(l.canvas)}, {"regions", std::move(regions)}};
}

inline Layout layout_from_json(const json& j) {
  Layout l;
  if (j.contains("canvas")) l.canvas = canvas_from_json(j.at("canvas"));
  for (const auto& r : j.at("regions")) {
    l.regions.push_back({r.at("caption").get<std::string>(), bbox_from_json(r.at("box"))});
  }
  require_valid(l);
  return l;
}

// One line of a split manifest.
struct ManifestEntry {
  Scene scene;

  std::string image_id() const {
    return std::string(to_string(scene.skill)) + "_" + scene.split + "_" +
           std::to_string(scene.seed);
  }
};

inline json to_json(const ManifestEntry& e) {
  return {{"skill", std::string(to_string(e.scene.skill))},
          {"split", e.scene.split},
          {"seed", e.scene.seed},
          {"scene", to_json(e.scene)}};
}

inline ManifestEntry manifest_entry_from_json(const json& j) {
  ManifestEntry e;
  e.scene = scene_from_json(j.at("scene"));
  e.scene.skill = parse_skill(j.at("skill").get<std::string>());
  e.scene.split = j.at("split").get<std::string>();
  e.scene.seed = j.at("seed").get<std::uint64_t>();
  return e;
}

inline std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::vector<ManifestEntry> out;
  for (const auto& j : read_jsonl(path)) out.push_back(manifest_entry_from_json(j));
  return out;
}

inline void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& e : entries) out << to_json(e).dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace layoutlab
