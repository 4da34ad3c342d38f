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
#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <filesystem>

#include "layoutlab/sampler.hpp"
#include "layoutlab/training.hpp"
#include "test_util.hpp"

namespace layoutlab {
namespace {

const Canvas k512{512, 512};

Scene disjoint_scene(int n) {
  Scene s;
  s.canvas = k512;
  for (int i = 0; i < n; ++i) {
    s.objects.push_back({attributes_from_class_id(i * 7 % kNumClasses), {i * 120, 40, i * 120 + 100, 140}});
  }
  return s;
}

TEST(FgExample, SingleObjectSceneHasEmptyContext) {
  std::mt19937_64 rng(1);
  const Scene s = disjoint_scene(1);
  const auto ex = make_fg_example(s, rng);
  EXPECT_EQ(ex.context, Image(k512, Palette::background()));
  EXPECT_EQ(ex.mask, mask_from_box(s.objects[0].box, k512));
  EXPECT_EQ(ex.prompt, "Add " + s.objects[0].caption());
  EXPECT_EQ(ex.task, Task::kForeground);
  EXPECT_EQ(validate_example(ex), "");
}

TEST(FgExample, EmptySceneThrows) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(make_fg_example(disjoint_scene(0), rng), NoObjectError);
}

TEST(FgExample, ContextSizeIsBinomialThreeHalf) {
  std::mt19937_64 rng(2);
  const Scene s = disjoint_scene(4);
  std::array<int, 4> counts{};
  std::array<int, 4> target_counts{};
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const auto ex = make_fg_example(s, rng);
    const BBox target = bbox_of_mask(ex.mask);
    int shown = 0;
    for (std::size_t k = 0; k < s.objects.size(); ++k) {
      const BBox& b = s.objects[k].box;
      if (b == target) {
        ++target_counts[k];
        continue;
      }
      // Objects are disjoint, so a box's center pixel tells if it is drawn.
      shown += ex.context.at((b.x1 + b.x2) / 2, (b.y1 + b.y2) / 2) != Palette::background();
    }
    ++counts[static_cast<std::size_t>(shown)];
  }
  const boost::math::binomial binom(3, 0.5);
  double chi2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double e = kDraws * boost::math::pdf(binom, k);
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  EXPECT_GT(boost::math::cdf(boost::math::complement(boost::math::chi_squared(3), chi2)), 0.001)
      << "chi2 " << chi2;
  double chi2_target = 0.0;
  for (int c : target_counts) chi2_target += (c - kDraws / 4.0) * (c - kDraws / 4.0) / (kDraws / 4.0);
  EXPECT_GT(boost::math::cdf(boost::math::complement(boost::math::chi_squared(3), chi2_target)),
            0.001);
}

TEST(FgExample, TargetDiffersFromContextOnlyInsideMask) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto ex = make_fg_example(disjoint_scene(4), rng);
    for (int y = 0; y < 512; y += 2) {
      for (int x = 0; x < 512; x += 2) {
        if (!ex.mask.at(x, y)) ASSERT_EQ(ex.target.at(x, y), ex.context.at(x, y));
      }
    }
    EXPECT_EQ(validate_example(ex), "");
  }
}

TEST(BgExample, MaskIsComplementOfObjects) {
  const Scene s = sample_scene(Skill::kId, "clevr", 5);
  const auto ex = make_bg_example(s);
  EXPECT_EQ(ex.prompt, "Add gray background");
  EXPECT_EQ(ex.context, ex.target);
  EXPECT_EQ(ex.mask.popcount(), 512 * 512 - union_mask(s.layout()).popcount());
  EXPECT_EQ(validate_example(ex), "");
  EXPECT_EQ(make_bg_example(disjoint_scene(0)).mask.popcount(), 512 * 512);
}

TEST(Validator, FlagsBrokenExamples) {
  std::mt19937_64 rng(4);
  auto fg = make_fg_example(disjoint_scene(3), rng);
  auto broken = fg;
  broken.context.set(511, 511, {0, 0, 0});
  EXPECT_NE(validate_example(broken), "");
  broken = fg;
  broken.prompt = "Add gray background";
  EXPECT_NE(validate_example(broken), "");
  broken = fg;
  broken.mask.set(0, 511, true);
  EXPECT_NE(validate_example(broken), "");

  auto bg = make_bg_example(disjoint_scene(2));
  auto bad_bg = bg;
  bad_bg.mask = Mask(k512, 1);
  EXPECT_NE(validate_example(bad_bg), "");
  bad_bg = bg;
  bad_bg.target = Image(10, 10);
  EXPECT_EQ(validate_example(bad_bg), "dimension mismatch");
}

std::vector<Scene> some_scenes() {
  std::vector<Scene> scenes;
  for (std::uint64_t s = 0; s < 20; ++s) scenes.push_back(sample_scene(Skill::kNumber, "few", s));
  return scenes;
}

TEST(Export, WritesManifestAndFilesThatValidate) {
  testing::TempDir dir("export");
  ExportOptions o;
  o.n_examples = 60;
  o.seed = 5;
  const auto path = export_manifest(some_scenes(), o, dir.str());
  const auto lines = read_jsonl(path);
  ASSERT_EQ(lines.size(), 60u);
  for (const auto& l : lines) {
    EXPECT_EQ(l.size(), 5u);
    for (const char* key : {"context", "mask", "target"}) {
      EXPECT_TRUE(std::filesystem::exists(dir.path() / l.at(key).get<std::string>()));
    }
  }
  const auto report = validate_manifest(path);
  EXPECT_TRUE(report.ok()) << report.failures.front();
  EXPECT_EQ(report.n_examples, 60u);
}

TEST(Export, DeterministicBytes) {
  testing::TempDir a("export_a"), b("export_b");
  ExportOptions o;
  o.n_examples = 25;
  o.seed = 9;
  o.threads = 1;
  const auto pa = export_manifest(some_scenes(), o, a.str());
  o.threads = 4;
  const auto pb = export_manifest(some_scenes(), o, b.str());
  EXPECT_EQ(read_text_file(pa), read_text_file(pb));
  for (const auto& l : read_jsonl(pa)) {
    for (const char* key : {"context", "mask", "target"}) {
      const auto rel = l.at(key).get<std::string>();
      EXPECT_EQ(read_bytes(a.str() + "/" + rel), read_bytes(b.str() + "/" + rel));
    }
  }
}

TEST(Export, RatioExtremes) {
  testing::TempDir dir("ratio");
  ExportOptions o;
  o.n_examples = 30;
  o.fg_ratio = 0.0;
  auto report = validate_manifest(export_manifest(some_scenes(), o, dir.str() + "/zero"));
  EXPECT_EQ(report.n_foreground, 0u);
  o.fg_ratio = 1.0;
  report = validate_manifest(export_manifest(some_scenes(), o, dir.str() + "/one"));
  EXPECT_EQ(report.n_foreground, 30u);
  EXPECT_TRUE(report.ok());
  o.fg_ratio = 1.5;
  EXPECT_THROW(export_manifest(some_scenes(), o, dir.str() + "/bad"), InvalidArgument);
}

TEST(Export, EveryTenthRatioIsExpressible) {
  testing::TempDir dir("tenths");
  for (int k = 1; k <= 10; ++k) {
    ExportOptions o;
    o.n_examples = 4;
    o.fg_ratio = k / 10.0;
    EXPECT_NO_THROW(export_manifest(some_scenes(), o, dir.str() + "/" + std::to_string(k)));
  }
}

TEST(Export, UnwritableDirectoryIsIoError) {
  testing::TempDir dir("unwritable");
  write_text_file(dir.str() + "/file", "x");
  ExportOptions o;
  o.n_examples = 1;
  EXPECT_THROW(export_manifest(some_scenes(), o, dir.str() + "/file/sub"), IoError);
}

TEST(Export, ForegroundNeedsAnObject) {
  testing::TempDir dir("noobj");
  ExportOptions o;
  o.n_examples = 3;
  o.fg_ratio = 1.0;
  EXPECT_THROW(export_manifest({disjoint_scene(0)}, o, dir.str()), NoObjectError);
}

}  // namespace
}  // namespace layoutlab
