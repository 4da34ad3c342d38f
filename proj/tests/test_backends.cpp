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

#include <random>
#include <set>

#include "layoutlab/backends.hpp"
#include "layoutlab/renderer.hpp"
#include "test_util.hpp"

namespace layoutlab {
namespace {

const Canvas k512{512, 512};

TEST(BboxOfMask, InverseOfMaskFromBox) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const BBox b = testing::random_box(rng, {64, 48});
    EXPECT_EQ(bbox_of_mask(mask_from_box(b, {64, 48})), b);
  }
}

TEST(BboxOfMask, DisjointRegionsAndSinglePixel) {
  Mask m(50, 50);
  m.fill_box({2, 30, 5, 33}, true);
  m.fill_box({40, 3, 44, 9}, true);
  EXPECT_EQ(bbox_of_mask(m), (BBox{2, 3, 44, 33}));
  Mask one(10, 10);
  one.set(7, 2, true);
  EXPECT_EQ(bbox_of_mask(one), (BBox{7, 2, 8, 3}));
  EXPECT_THROW(bbox_of_mask(Mask(10, 10)), EmptyMaskError);
}

TEST(Procedural, ObjectPromptDrawsPatchIntoMaskBox) {
  const ProceduralBackend backend;
  Image ctx(k512, Palette::background());
  draw_object(ctx, {Shape::kCube, Material::kRubber, Color::kRed}, {0, 0, 100, 100});
  const BBox b{60, 40, 172, 152};
  const Image out = backend.inpaint(ctx, "Add cyan metal sphere", mask_from_box(b, k512));
  const Image patch =
      render_object_patch({Shape::kSphere, Material::kMetal, Color::kCyan}, b);
  for (int y = 0; y < k512.height; ++y) {
    for (int x = 0; x < k512.width; ++x) {
      const bool inside = x >= b.x1 && x < b.x2 && y >= b.y1 && y < b.y2;
      ASSERT_EQ(out.at(x, y), inside ? patch.at(x - b.x1, y - b.y1) : ctx.at(x, y));
    }
  }
}

TEST(Procedural, UsesBoundingBoxOfIrregularMask) {
  const ProceduralBackend backend;
  const Image ctx(k512, Palette::background());
  Mask m(k512);
  m.fill_box({10, 10, 20, 20}, true);
  m.fill_box({100, 60, 110, 70}, true);
  const Image a = backend.inpaint(ctx, "Add red rubber cube", m);
  const Image b = backend.inpaint(ctx, "Add red rubber cube", mask_from_box({10, 10, 110, 70}, k512));
  EXPECT_EQ(a, b);
}

TEST(Procedural, BackgroundPromptPaintsMaskedPixelsGray) {
  const ProceduralBackend backend;
  Image ctx(64, 64, Palette::background());
  draw_object(ctx, {Shape::kCube, Material::kMetal, Color::kBlue}, {0, 0, 64, 64});
  Mask m(64, 64);
  m.fill_box({8, 8, 30, 30}, true);
  const Image out = backend.inpaint(ctx, "Add gray background", m);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      EXPECT_EQ(out.at(x, y), m.at(x, y) ? Palette::background() : ctx.at(x, y));
    }
  }
}

TEST(Procedural, DeterministicAndRejectsBadPrompts) {
  const ProceduralBackend backend;
  const Image ctx(128, 128, Palette::background());
  const Mask m = mask_from_box({5, 5, 60, 90}, {128, 128});
  EXPECT_EQ(backend.inpaint(ctx, "Add green metal cylinder", m),
            backend.inpaint(ctx, "Add green metal cylinder", m));
  EXPECT_THROW(backend.inpaint(ctx, "Add a dog", m), PromptParseError);
  EXPECT_THROW(backend.inpaint(ctx, "Add green metal cylinder", Mask(128, 128)), EmptyMaskError);
  EXPECT_THROW(backend.inpaint(ctx, "Add green metal cylinder", Mask(64, 64, 1)), DimensionError);
}

TEST(Perturb, ZeroJitterIsIdentity) {
  auto inner = std::make_shared<ProceduralBackend>();
  const PerturbBackend perturb(inner, 0, 99);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    const Image ctx(k512, Palette::background());
    const Mask m = mask_from_box(testing::random_box(rng, k512, 4), k512);
    const std::string p = iterinpaint_prompt(attributes_from_class_id(i % kNumClasses).caption());
    EXPECT_EQ(perturb.inpaint(ctx, p, m), inner->inpaint(ctx, p, m));
  }
}

TEST(Perturb, OffsetsAreBoundedDeterministicAndCoverTheRange) {
  const PerturbBackend perturb(std::make_shared<ProceduralBackend>(), 5, 1);
  std::set<int> dxs;
  for (int i = 0; i < 400; ++i) {
    const BBox b{i % 300, 7, i % 300 + 50, 80};
    const auto [dx, dy] = perturb.offset("Add red rubber cube", b);
    EXPECT_GE(dx, -5);
    EXPECT_LE(dx, 5);
    EXPECT_GE(dy, -5);
    EXPECT_LE(dy, 5);
    EXPECT_EQ(perturb.offset("Add red rubber cube", b), (std::pair{dx, dy}));
    dxs.insert(dx);
  }
  EXPECT_EQ(dxs.size(), 11u);
}

TEST(Perturb, ShiftsTheDrawnObjectByItsOffset) {
  auto inner = std::make_shared<ProceduralBackend>();
  const PerturbBackend perturb(inner, 20, 3);
  const Image ctx(k512, Palette::background());
  const BBox b{200, 200, 260, 240};
  const std::string p = "Add yellow rubber cube";
  const auto [dx, dy] = perturb.offset(p, b);
  const BBox moved{b.x1 + dx, b.y1 + dy, b.x2 + dx, b.y2 + dy};
  EXPECT_EQ(perturb.inpaint(ctx, p, mask_from_box(b, k512)),
            inner->inpaint(ctx, p, mask_from_box(moved, k512)));
}

TEST(Perturb, ClipsAtTheCanvasAndPassesBackgroundThrough) {
  auto inner = std::make_shared<ProceduralBackend>();
  const PerturbBackend perturb(inner, 40, 8);
  const Image ctx(k512, Palette::background());
  const Mask corner = mask_from_box({0, 0, 30, 30}, k512);
  const Image out = perturb.inpaint(ctx, "Add red rubber cube", corner);
  EXPECT_EQ(out.width(), 512);
  const Mask bg = background_mask(Layout{k512, {{"x", {0, 0, 30, 30}}}});
  EXPECT_EQ(perturb.inpaint(ctx, "Add gray background", bg),
            inner->inpaint(ctx, "Add gray background", bg));
}

TEST(BackendConfig, Validation) {
  BackendConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.guidance_scale, 4.0);
  EXPECT_EQ(c.steps, 50);
  c.jitter_px = 3;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.kind = BackendKind::kPerturb;
  EXPECT_NO_THROW(c.validate());
  c.steps = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  BackendConfig r;
  r.kind = BackendKind::kRemote;
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.guidance_scale = 0;
  r.endpoint = "http://localhost:1";
  EXPECT_THROW(r.validate(), InvalidArgument);
}

}  // namespace
}  // namespace layoutlab
