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
#include <string>
#include <vector>

#include "layoutlab/core.hpp"
#include "layoutlab/renderer.hpp"

namespace layoutlab {

inline constexpr int kUnknownClass = -1;

struct Detection {
  std::string image_id;
  int class_id = kUnknownClass;
  BBox box;
  double score = 1.0;
  bool operator==(const Detection&) const = default;
};

namespace detail {

inline constexpr std::int16_t kBackgroundLabel = -1;
inline constexpr std::int16_t kOffPaletteLabel = kNumColors * kNumMaterials;

struct PixelLabels {
  int width = 0;
  int height = 0;
  std::vector<std::int16_t> label;  // color * 2 + material, or a sentinel
  std::vector<std::uint8_t> edge;

  std::int16_t at(int x, int y) const {
    return label[static_cast<std::size_t>(y) * width + x];
  }
};

inline PixelLabels label_pixels(const Image& image) {
  PixelLabels out{image.width(), image.height(), {}, {}};
  const std::size_t n = static_cast<std::size_t>(image.width()) * image.height();
  out.label.assign(n, kBackgroundLabel);
  out.edge.assign(n, 0);
  const auto px = image.bytes();
  const std::uint32_t bg = Palette::pack(Palette::background());
  std::uint32_t last = bg;
  std::int16_t last_label = kBackgroundLabel;
  std::uint8_t last_edge = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Rgb c{px[3 * i], px[3 * i + 1], px[3 * i + 2]};
    const std::uint32_t key = Palette::pack(c);
    if (key != last) {
      last = key;
      if (key == bg) {
        last_label = kBackgroundLabel;
        last_edge = 0;
      } else if (auto src = Palette::identify(c)) {
        last_label = static_cast<std::int16_t>(static_cast<int>(src->color) * kNumMaterials +
                                               static_cast<int>(src->material));
        last_edge = src->role == PixelRole::kEdge ? 1 : 0;
      } else {
        last_label = kOffPaletteLabel;
        last_edge = 0;
      }
    }
    out.label[i] = last_label;
    out.edge[i] = last_edge;
  }
  return out;
}

enum class Evidence : std::uint8_t { kOther, kOwn, kOpen };

// Per-pixel evidence around one component: its own pixels (interior plus the
// adjacent edge ring), open background, or anything else.
class EvidenceWindow {
 public:
  EvidenceWindow(const PixelLabels& px, const std::vector<int>& comp, int id,
                 std::int16_t label, const BBox& window)
      : window_(window), cells_(static_cast<std::size_t>(window.area()), Evidence::kOther) {
    const int W = px.width, H = px.height;
    auto is_comp = [&](int x, int y) {
      return x >= 0 && y >= 0 && x < W && y < H &&
             comp[static_cast<std::size_t>(y) * W + x] == id;
    };
    for (int y = window.y1; y < window.y2; ++y) {
      for (int x = window.x1; x < window.x2; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * W + x;
        Evidence e = Evidence::kOther;
        if (comp[i] == id) {
          e = Evidence::kOwn;
        } else if (px.label[i] == kBackgroundLabel) {
          e = Evidence::kOpen;
        } else if (px.label[i] == label && px.edge[i]) {
          for (int dy = -1; dy <= 1 && e == Evidence::kOther; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              if (is_comp(x + dx, y + dy)) {
                e = Evidence::kOwn;
                break;
              }
            }
          }
        }
        cells_[index(x, y)] = e;
      }
    }
    // Row prefix counts of own and open pixels.
    const std::size_t stride = static_cast<std::size_t>(window.width()) + 1;
    own_.assign(stride * window.height(), 0);
    open_.assign(stride * window.height(), 0);
    for (int y = window.y1; y < window.y2; ++y) {
      const std::size_t row = static_cast<std::size_t>(y - window.y1) * stride;
      for (int x = window.x1; x < window.x2; ++x) {
        const std::size_t k = row + (x - window.x1);
        const Evidence e = at(x, y);
        own_[k + 1] = own_[k] + (e == Evidence::kOwn);
        open_[k + 1] = open_[k] + (e == Evidence::kOpen);
      }
    }
  }

  Evidence at(int x, int y) const { return cells_[index(x, y)]; }
  const BBox& window() const { return window_; }

  // Pixels a silhouette hypothesis gets wrong: own pixels it leaves out plus
  // open pixels it claims. Own pixels never lie outside `box`.
  std::int64_t cost(Shape shape, const BBox& box) const {
    std::int64_t c = 0;
    for (int y = box.y1; y < box.y2; ++y) {
      const auto [lo, hi] = silhouette_row_span(shape, box, y);
      c += count(own_, y, box.x1, box.x2) - count(own_, y, lo, hi) + count(open_, y, lo, hi);
    }
    return c;
  }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y - window_.y1) * window_.width() + (x - window_.x1);
  }

  std::int64_t count(const std::vector<int>& prefix, int y, int x_lo, int x_hi) const {
    if (x_hi <= x_lo) return 0;
    const std::size_t row = static_cast<std::size_t>(y - window_.y1) * (window_.width() + 1);
    return prefix[row + (x_hi - window_.x1)] - prefix[row + (x_lo - window_.x1)];
  }

  BBox window_;
  std::vector<Evidence> cells_;
  std::vector<int> own_;
  std::vector<int> open_;
};

struct SilhouetteFit {
  std::optional<Shape> shape;
  BBox box;
};

// Fits a shape to one component. The visible box is exact for unoccluded
// objects; when no shape explains it, sides that border other objects are
// pushed outward (the object may continue underneath) and the smallest
// extension with the lowest cost wins.
inline SilhouetteFit fit_silhouette(const PixelLabels& px, const std::vector<int>& comp, int id,
                                    std::int16_t label, const BBox& visible) {
  std::array<std::int64_t, kNumShapes> cost{};
  {
    const EvidenceWindow tight(px, comp, id, label, visible);
    for (int s = 0; s < kNumShapes; ++s) cost[s] = tight.cost(static_cast<Shape>(s), visible);
  }
  std::array<BBox, kNumShapes> boxes;
  boxes.fill(visible);

  if (*std::min_element(cost.begin(), cost.end()) > 0) {
    const int W = px.width, H = px.height;
    const int reach = 2 * std::max(visible.width(), visible.height());
    const BBox window{std::max(0, visible.x1 - reach), std::max(0, visible.y1 - reach),
                      std::min(W, visible.x2 + reach), std::min(H, visible.y2 + reach)};
    const EvidenceWindow ev(px, comp, id, label, window);
    // Sides with other objects directly beyond them.
    auto blocked = [&](int side) {
      const BBox& b = visible;
      int n = 0;
      if (side == 0 && b.x1 > window.x1) for (int y = b.y1; y < b.y2; ++y) n += ev.at(b.x1 - 1, y) == Evidence::kOther;
      if (side == 1 && b.x2 < window.x2) for (int y = b.y1; y < b.y2; ++y) n += ev.at(b.x2, y) == Evidence::kOther;
      if (side == 2 && b.y1 > window.y1) for (int x = b.x1; x < b.x2; ++x) n += ev.at(x, b.y1 - 1) == Evidence::kOther;
      if (side == 3 && b.y2 < window.y2) for (int x = b.x1; x < b.x2; ++x) n += ev.at(x, b.y2) == Evidence::kOther;
      return n > 0;
    };
    auto extend = [&](BBox b, int side, int e) {
      switch (side) {
        case 0: b.x1 = visible.x1 - e; break;
        case 1: b.x2 = visible.x2 + e; break;
        case 2: b.y1 = visible.y1 - e; break;
        default: b.y2 = visible.y2 + e; break;
      }
      return b;
    };
    auto limit = [&](int side) {
      switch (side) {
        case 0: return visible.x1 - window.x1;
        case 1: return window.x2 - visible.x2;
        case 2: return visible.y1 - window.y1;
        default: return window.y2 - visible.y2;
      }
    };
    std::array<bool, 4> open_side{};
    for (int side = 0; side < 4; ++side) open_side[side] = blocked(side);

    for (int s = 0; s < kNumShapes; ++s) {
      const auto shape = static_cast<Shape>(s);
      BBox box = visible;
      std::int64_t best = cost[s];
      for (int round = 0; round < 2 && best > 0; ++round) {
        for (int side = 0; side < 4 && best > 0; ++side) {
          if (!open_side[side]) continue;
          const int lim = limit(side);
          int best_e = -1;
          auto consider = [&](int e) {
            const std::int64_t c = ev.cost(shape, extend(box, side, e));
            if (c < best) {
              best = c;
              best_e = e;
            }
          };
          for (int e = 4; e <= lim; e += 4) consider(e);
          if (best_e > 0) {
            const int center = best_e;
            for (int e = std::max(1, center - 3); e <= std::min(lim, center + 3); ++e) consider(e);
          }
          if (best_e > 0) box = extend(box, side, best_e);
        }
      }
      cost[s] = best;
      boxes[s] = box;
    }
  }

  const auto best = std::min_element(cost.begin(), cost.end());
  if (std::count(cost.begin(), cost.end(), *best) > 1) return {std::nullopt, visible};
  const auto s = static_cast<std::size_t>(best - cost.begin());
  return {static_cast<Shape>(s), boxes[s]};
}

// Folds same-class detections whose boxes have IoU >= 0.5 into their union.
inline std::vector<Detection> merge_fragments(std::vector<Detection> dets) {
  constexpr double kMergeIou = 0.5;
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < dets.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < dets.size(); ++j) {
        if (dets[i].class_id == kUnknownClass || dets[i].class_id != dets[j].class_id) continue;
        if (iou(dets[i].box, dets[j].box) < kMergeIou) continue;
        auto& a = dets[i].box;
        const auto& b = dets[j].box;
        a = {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
        dets.erase(dets.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
        break;
      }
    }
  }
  return dets;
}

}  // namespace detail

// Connected-component detector for images drawn with the renderer palette.
// Components are 4-connected runs of interior pixels sharing a color and
// material; silhouette edges separate touching objects of the same kind.
inline std::vector<Detection> detect(const Image& image, const std::string& image_id = {}) {
  const auto px = detail::label_pixels(image);
  const int W = image.width(), H = image.height();
  std::vector<int> comp(px.label.size(), -1);
  std::vector<int> stack;
  std::vector<Detection> out;
  struct Pending {
    std::int16_t label;
    BBox box;
  };
  std::vector<Pending> pending;

  for (int sy = 0; sy < H; ++sy) {
    for (int sx = 0; sx < W; ++sx) {
      const std::size_t s = static_cast<std::size_t>(sy) * W + sx;
      const std::int16_t label = px.label[s];
      if (comp[s] >= 0 || label == detail::kBackgroundLabel || px.edge[s]) continue;
      const int id = static_cast<int>(pending.size());

      BBox box{sx, sy, sx + 1, sy + 1};
      stack.assign(1, static_cast<int>(s));
      comp[s] = id;
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int x = p % W, y = p / W;
        box.x1 = std::min(box.x1, x);
        box.y1 = std::min(box.y1, y);
        box.x2 = std::max(box.x2, x + 1);
        box.y2 = std::max(box.y2, y + 1);
        auto visit = [&](int nx, int ny) {
          if (nx < 0 || ny < 0 || nx >= W || ny >= H) return;
          const std::size_t q = static_cast<std::size_t>(ny) * W + nx;
          if (comp[q] >= 0 || px.label[q] != label || px.edge[q]) return;
          comp[q] = id;
          stack.push_back(static_cast<int>(q));
        };
        visit(x - 1, y);
        visit(x + 1, y);
        visit(x, y - 1);
        visit(x, y + 1);
      }

      pending.push_back({label, box});
    }
  }

  for (std::size_t id = 0; id < pending.size(); ++id) {
    const auto [label, box] = pending[id];
    Detection det;
    det.image_id = image_id;
    if (label == detail::kOffPaletteLabel) {
      det.box = box;
      det.class_id = kUnknownClass;
      det.score = 0.5;
      out.push_back(det);
      continue;
    }
    // Grow by the one-pixel silhouette edge.
    det.box = {std::max(0, box.x1 - 1), std::max(0, box.y1 - 1), std::min(W, box.x2 + 1),
               std::min(H, box.y2 + 1)};
    const auto fit = detail::fit_silhouette(px, comp, static_cast<int>(id), label, det.box);
    if (fit.shape) {
      det.box = fit.box;
      ObjectAttributes attrs{*fit.shape, static_cast<Material>(label % kNumMaterials),
                             static_cast<Color>(label / kNumMaterials)};
      det.class_id = attrs.class_id();
      det.score = 1.0;
    } else {
      det.class_id = kUnknownClass;
      det.score = 0.5;
    }
    out.push_back(det);
  }
  return detail::merge_fragments(std::move(out));
}

}  // namespace layoutlab
