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

#include <array>
#include <boost/math/distributions/chi_squared.hpp>

#include "layoutlab/sampler.hpp"
#include "layoutlab/serialization.hpp"
#include "sampler_oracle.hpp"

namespace layoutlab {
namespace {

constexpr int kScenesPerSplit = 2000;

using testing::in_center_square;
using testing::touches_edge;

TEST(Sampler, SameSeedSameScene) {
  for (const auto& s : kOodSplits) {
    const Scene a = sample_scene(s.skill, s.split, 42);
    const Scene b = sample_scene(s.skill, s.split, 42);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  }
  EXPECT_NE(to_json(sample_scene(Skill::kId, "clevr", 1)).dump(),
            to_json(sample_scene(Skill::kId, "clevr", 2)).dump());
}

TEST(Sampler, SplitDefinitions) {
  EXPECT_EQ(split_spec(Skill::kNumber, "few").min_count, 0);
  EXPECT_EQ(split_spec(Skill::kNumber, "few").max_count, 2);
  EXPECT_EQ(split_spec(Skill::kNumber, "many").min_count, 11);
  EXPECT_EQ(split_spec(Skill::kNumber, "many").max_count, 16);
  EXPECT_EQ(split_spec(Skill::kSize, "tiny").size_set, std::vector<double>{2.0});
  EXPECT_EQ(split_spec(Skill::kSize, "large").size_set, (std::vector<double>{9, 11, 13, 15}));
  EXPECT_EQ(clevr_spec().size_set, (std::vector<double>{3.5, 7.0}));
  EXPECT_EQ(clevr_spec().min_count, 3);
  EXPECT_EQ(clevr_spec().max_count, 10);
  EXPECT_FALSE(split_spec(Skill::kPosition, "center").overlap_cap.has_value());
  EXPECT_THROW(split_spec(Skill::kNumber, "tiny"), InvalidArgument);
  EXPECT_THROW(sample_scene(Skill::kShape, "diagonal", 0), InvalidArgument);
}

TEST(Sampler, ScaleToPixels) {
  EXPECT_EQ(side_px(2.0), 32);
  EXPECT_EQ(side_px(3.5), 56);
  EXPECT_EQ(side_px(15.0), 240);
  EXPECT_EQ(box_dims(7.0, {1, 1}), (std::pair{112, 112}));
  EXPECT_EQ(box_dims(7.0, {3, 1}), (std::pair{168, 56}));
  EXPECT_EQ(box_dims(3.5, {1, 2}), (std::pair{28, 56}));
}

class SplitConformance : public ::testing::TestWithParam<SplitName> {};

TEST_P(SplitConformance, ScenesSatisfyTheirSpec) {
  const auto [skill, split] = GetParam();
  const SplitSpec spec = split_spec(skill, split);
  const Canvas canvas;
  for (int seed = 0; seed < kScenesPerSplit; ++seed) {
    const Scene s = sample_scene(skill, split, static_cast<std::uint64_t>(seed));
    ASSERT_EQ(testing::check_scene(s), "") << split << " seed " << seed;
    const int n = static_cast<int>(s.objects.size());
    ASSERT_GE(n, spec.min_count);
    ASSERT_LE(n, spec.max_count);
    for (std::size_t i = 0; i < s.objects.size(); ++i) {
      const BBox& b = s.objects[i].box;
      ASSERT_TRUE(is_valid(b, canvas));
      if (spec.placement == Placement::kBoundary) {
        ASSERT_TRUE(touches_edge(canvas, b));
        continue;
      }
      if (spec.placement == Placement::kCenter) ASSERT_TRUE(in_center_square(canvas, b));
      bool size_ok = false;
      for (double scale : spec.size_set) {
        for (const auto& a : spec.aspect_set) {
          const auto [w, h] = box_dims(scale, a);
          size_ok |= b.width() == w && b.height() == h;
        }
      }
      ASSERT_TRUE(size_ok) << split << " seed " << seed;
      for (std::size_t j = 0; j < i; ++j) {
        if (spec.overlap_cap) ASSERT_LE(iou(b, s.objects[j].box), *spec.overlap_cap);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllSplits, SplitConformance, ::testing::ValuesIn(kOodSplits),
                         [](const auto& info) { return std::string(info.param.split); });

TEST(Sampler, ShapeSplitAspectRatios) {
  for (int seed = 0; seed < 500; ++seed) {
    for (const auto* split : {"horizontal", "vertical"}) {
      for (const auto& o : sample_scene(Skill::kShape, split, seed).objects) {
        const int w = o.box.width(), h = o.box.height();
        if (std::string(split) == "horizontal") {
          EXPECT_TRUE(w == 2 * h || w == 3 * h);
        } else {
          EXPECT_TRUE(h == 2 * w || h == 3 * w);
        }
      }
    }
  }
}

TEST(Sampler, AllFortyEightClassesAreUniform) {
  std::array<int, kNumClasses> counts{};
  int total = 0;
  for (int seed = 0; total < 10000; ++seed) {
    for (const auto& o : sample_scene(Skill::kId, "clevr", seed).objects) {
      ++counts[static_cast<std::size_t>(o.class_id())];
      ++total;
    }
  }
  const double expected = static_cast<double>(total) / kNumClasses;
  double chi2 = 0.0;
  for (int c : counts) {
    EXPECT_GT(c, 0);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  const boost::math::chi_squared dist(kNumClasses - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001) << "chi2 " << chi2;
}

TEST(FineBuckets, PinTheirValue) {
  for (int seed = 0; seed < 50; ++seed) {
    for (const auto& o : sample_fine(Skill::kSize, "7", seed).objects) {
      EXPECT_EQ(o.box.width(), side_px(7.0));
      EXPECT_EQ(o.box.height(), side_px(7.0));
    }
    for (const auto& o : sample_fine(Skill::kShape, "H2W1", seed).objects) {
      EXPECT_EQ(o.box.height(), 2 * o.box.width());
    }
    EXPECT_EQ(sample_fine(Skill::kNumber, "1", seed).objects.size(), 1u);
    EXPECT_EQ(sample_fine(Skill::kNumber, "0", seed).objects.size(), 0u);
  }
}

TEST(FineBuckets, EveryListedBucketSamples) {
  for (auto skill : {Skill::kNumber, Skill::kPosition, Skill::kSize, Skill::kShape, Skill::kId}) {
    for (const auto& b : fine_buckets(skill)) {
      EXPECT_NO_THROW(sample_fine(skill, b.name, 3)) << to_string(skill) << "/" << b.name;
    }
  }
  EXPECT_TRUE(fine_buckets(Skill::kNumber)[3].in_distribution);
  EXPECT_FALSE(fine_buckets(Skill::kNumber)[11].in_distribution);
}

TEST(FineBuckets, UnknownBucketThrows) {
  EXPECT_THROW(sample_fine(Skill::kSize, "4", 0), BucketError);
  EXPECT_THROW(sample_fine(Skill::kShape, "H4W1", 0), BucketError);
  EXPECT_THROW(sample_fine(Skill::kNumber, "17", 0), BucketError);
}

TEST(Sampler, OverConstrainedSpecThrowsPlacementError) {
  SplitSpec spec = clevr_spec();
  spec.size_set = {15.0};
  spec.min_count = spec.max_count = 12;
  EXPECT_THROW(sample_with_spec(spec, 0), PlacementError);
}

TEST(Manifest, JsonRoundTrip) {
  ManifestEntry e{sample_scene(Skill::kSize, "large", 9)};
  EXPECT_EQ(e.image_id(), "size_large_9");
  const auto back = manifest_entry_from_json(to_json(e));
  EXPECT_EQ(back.scene, e.scene);
}

}  // namespace
}  // namespace layoutlab
