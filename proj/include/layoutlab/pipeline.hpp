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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "layoutlab/backends.hpp"
#include "layoutlab/detector.hpp"
#include "layoutlab/engine.hpp"
#include "layoutlab/image_io.hpp"
#include "layoutlab/metrics.hpp"
#include "layoutlab/parallel.hpp"
#include "layoutlab/remote_backend.hpp"
#include "layoutlab/renderer.hpp"
#include "layoutlab/sampler.hpp"
#include "layoutlab/serialization.hpp"

// Batch stages shared by the command-line tool and the acceptance suite.
namespace layoutlab {

struct BenchSplit {
  Skill skill;
  std::string split;
  bool operator==(const BenchSplit&) const = default;
};

// Both unset: the eight OOD splits. Skill only: that skill's splits.
// Split only: the OOD split of that name.
inline std::vector<BenchSplit> select_splits(const std::optional<Skill>& skill,
                                             const std::optional<std::string>& split) {
  if (skill && *skill == Skill::kId) {
    if (split && *split != kIdSplit) {
      throw InvalidArgument("the id skill has only the '" + std::string(kIdSplit) + "' split");
    }
    return {{Skill::kId, std::string(kIdSplit)}};
  }
  std::vector<BenchSplit> out;
  for (const auto& s : kOodSplits) {
    if (skill && s.skill != *skill) continue;
    if (split && s.split != *split) continue;
    out.push_back({s.skill, std::string(s.split)});
  }
  if (out.empty()) {
    throw InvalidArgument("no benchmark split matches skill '" +
                          (skill ? std::string(to_string(*skill)) : std::string("*")) +
                          "' and split '" + split.value_or("*") + "'");
  }
  return out;
}

// Scene i uses seed + i.
inline std::vector<ManifestEntry> generate_split(const BenchSplit& s, std::size_t n,
                                                 std::uint64_t seed, const Canvas& canvas = {}) {
  std::vector<ManifestEntry> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].scene = sample_scene(s.skill, s.split, seed + i, canvas);
  return out;
}

inline std::string manifest_file_name(const BenchSplit& s) {
  return std::string(to_string(s.skill)) + "_" + s.split + ".jsonl";
}

inline std::shared_ptr<const InpaintBackend> make_backend(const BackendConfig& config) {
  config.validate();
  switch (config.kind) {
    case BackendKind::kProcedural:
      return std::make_shared<ProceduralBackend>();
    case BackendKind::kPerturb:
      return std::make_shared<PerturbBackend>(std::make_shared<ProceduralBackend>(),
                                              config.jitter_px, config.seed);
    case BackendKind::kRemote:
      return std::make_shared<RemoteBackend>(config);
  }
  throw InvalidArgument("unknown backend kind");
}

inline std::vector<Image> render_manifest(const std::vector<ManifestEntry>& manifest,
                                          unsigned threads = 0) {
  std::vector<Image> out(manifest.size());
  detail::parallel_for(manifest.size(), threads,
                       [&](std::size_t i) { out[i] = render_scene(manifest[i].scene).image; });
  return out;
}

struct RunOutput {
  std::vector<Image> images;
  std::vector<std::vector<StepTrace>> traces;  // empty unless requested
};

// generate() over every layout of the manifest. The random-order seed of
// entry i mixes opts.seed with the scene seed.
inline RunOutput run_manifest(const std::vector<ManifestEntry>& manifest,
                              const InpaintBackend& backend, const EngineOptions& opts,
                              bool keep_traces = false, unsigned threads = 0) {
  RunOutput out;
  out.images.resize(manifest.size());
  if (keep_traces) out.traces.resize(manifest.size());
  detail::parallel_for(manifest.size(), threads, [&](std::size_t i) {
    EngineOptions local = opts;
    local.seed = detail::splitmix64(opts.seed) ^ manifest[i].scene.seed;
    auto result = generate(manifest[i].scene.layout(), backend, local);
    out.images[i] = std::move(result.image);
    if (keep_traces) out.traces[i] = std::move(result.trace);
  });
  return out;
}

inline std::vector<Detection> detect_all(const std::vector<ManifestEntry>& manifest,
                                         const std::vector<Image>& images, unsigned threads = 0) {
  if (images.size() != manifest.size()) {
    throw ManifestMismatchError("manifest has " + std::to_string(manifest.size()) +
                                " entries but " + std::to_string(images.size()) + " images");
  }
  std::vector<std::vector<Detection>> per(images.size());
  detail::parallel_for(images.size(), threads, [&](std::size_t i) {
    per[i] = detect(images[i], manifest[i].image_id());
  });
  std::vector<Detection> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// {dir}/{image_id}.png for every entry.
inline void write_images(const std::vector<ManifestEntry>& manifest,
                         const std::vector<Image>& images, const std::string& dir,
                         unsigned threads = 0) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  detail::parallel_for(manifest.size(), threads, [&](std::size_t i) {
    write_png(dir + "/" + manifest[i].image_id() + ".png", images[i]);
  });
}

inline std::vector<Image> read_images(const std::vector<ManifestEntry>& manifest,
                                      const std::string& dir, unsigned threads = 0) {
  std::vector<Image> out(manifest.size());
  detail::parallel_for(manifest.size(), threads, [&](std::size_t i) {
    out[i] = read_png_image(dir + "/" + manifest[i].image_id() + ".png");
  });
  return out;
}

}  // namespace layoutlab
