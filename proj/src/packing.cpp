// SPDX-License-Identifier: Apache-2.0
#include "vidaug/packing.hpp"

#include "vidaug/error.hpp"

#include <algorithm>
#include <cmath>

namespace vidaug {

namespace {

std::string describe(const Rect& r) {
    return "rect (" + std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.w) + "," +
           std::to_string(r.h) + ")";
}

}  // namespace

void PlacementConfig::validate() const {
    if (!(salient_budget_fraction >= 0.0 && salient_budget_fraction < 1.0)) {
        throw ConfigError("salient_budget_fraction must be in [0,1)");
    }
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) throw ConfigError("shrink_factor must be in (0,1)");
    if (!(min_width_fraction > 0.0 && min_width_fraction <= 1.0)) {
        throw ConfigError("min_width_fraction must be in (0,1]");
    }
    if (scan_stride < 1) throw ConfigError("scan_stride must be at least 1");
    if (margin < 0) throw ConfigError("margin must not be negative");
}

IntegralMask::IntegralMask(const BinaryMask& mask)
    : width_(mask.width), height_(mask.height),
      table_(static_cast<std::size_t>(mask.width + 1) * static_cast<std::size_t>(mask.height + 1), 0) {
    const auto stride = static_cast<std::size_t>(width_ + 1);
    for (int y = 0; y < height_; ++y) {
        std::uint32_t row = 0;
        for (int x = 0; x < width_; ++x) {
            row += mask.at(x, y) ? 1u : 0u;
            table_[(y + 1) * stride + (x + 1)] = table_[y * stride + (x + 1)] + row;
        }
    }
}

IntegralMask build_integral(const BinaryMask& mask) {
    if (mask.empty()) throw Error("integral of an empty mask");
    return IntegralMask(mask);
}

std::uint32_t count_salient(const IntegralMask& im, const Rect& r) {
    if (!r.inside(im.width(), im.height())) throw OutOfBounds(describe(r) + " outside mask bounds");
    return im.at(r.x + r.w, r.y + r.h) - im.at(r.x, r.y + r.h) - im.at(r.x + r.w, r.y) + im.at(r.x, r.y);
}

std::vector<std::pair<int, int>> size_schedule(int frame_w, int frame_h, int asset_w, int asset_h,
                                               const PlacementConfig& cfg) {
    if (asset_w <= 0 || asset_h <= 0) throw Error("asset dimensions must be positive");
    std::vector<std::pair<int, int>> sizes;
    const long long avail_w = frame_w - 2LL * cfg.margin;
    const long long avail_h = frame_h - 2LL * cfg.margin;
    if (avail_w <= 0 || avail_h <= 0) return sizes;

    long long width = std::min({static_cast<long long>(asset_w), avail_w, avail_h * asset_w / asset_h});
    const double min_width = cfg.min_width_fraction * frame_w;
    while (width >= 1 && !(static_cast<double>(width) < min_width)) {
        const long long height = (2 * width * asset_h + asset_w) / (2LL * asset_w);
        if (height < 1) break;
        sizes.emplace_back(static_cast<int>(width), static_cast<int>(height));
        width = static_cast<long long>(std::floor(static_cast<double>(width) * cfg.shrink_factor));
    }
    return sizes;
}

namespace {

std::optional<Rect> scan(const BinaryMask& mask, int asset_w, int asset_h, const PlacementConfig& cfg,
                         const IntegralMask* occupied) {
    if (asset_w <= 0 || asset_h <= 0) throw Error("asset dimensions must be positive");
    const auto im = build_integral(mask);
    for (const auto& [w, h] : size_schedule(mask.width, mask.height, asset_w, asset_h, cfg)) {
        const double budget = cfg.salient_budget_fraction * static_cast<double>(w) * static_cast<double>(h);
        for (int y = cfg.margin; y <= mask.height - h - cfg.margin; y += cfg.scan_stride) {
            for (int x = cfg.margin; x <= mask.width - w - cfg.margin; x += cfg.scan_stride) {
                const Rect r{x, y, w, h};
                if (static_cast<double>(count_salient(im, r)) >= budget) continue;
                if (occupied && count_salient(*occupied, r) != 0) continue;
                return r;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Rect> find_placement(const BinaryMask& mask, int asset_w, int asset_h, const PlacementConfig& cfg) {
    return scan(mask, asset_w, asset_h, cfg, nullptr);
}

std::optional<Rect> find_placement(const BinaryMask& mask, int asset_w, int asset_h, const PlacementConfig& cfg,
                                   const BinaryMask& occupied) {
    if (!mask.same_shape(occupied)) throw ShapeMismatch("occupancy mask shape differs from saliency mask");
    const auto occ = build_integral(occupied);
    return scan(mask, asset_w, asset_h, cfg, &occ);
}

BinaryMask commit_placement(const BinaryMask& mask, const Rect& r) {
    if (!r.inside(mask.width, mask.height)) throw OutOfBounds(describe(r) + " outside mask bounds");
    BinaryMask out = mask;
    for (int y = r.y; y < r.y + r.h; ++y) {
        std::fill_n(out.data.begin() + static_cast<std::ptrdiff_t>(y) * out.width + r.x, r.w, std::uint8_t{1});
    }
    return out;
}

PackResult pack_segment(std::size_t segment_index, const BinaryMask& mask, const std::optional<ImageAsset>& image,
                        const std::vector<Keyphrase>& phrases, const PlacementConfig& cfg,
                        const TextMetrics& text_metrics) {
    PackResult result;
    result.mask = mask;
    BinaryMask placed(mask.width, mask.height);

    const auto place = [&](int w, int h, const PlacementConfig& c) -> std::optional<Rect> {
        const auto r = find_placement(result.mask, w, h, c, placed);
        if (r) {
            result.mask = commit_placement(result.mask, *r);
            placed = commit_placement(placed, *r);
        }
        return r;
    };

    if (image) {
        if (const auto r = place(image->width, image->height, cfg)) {
            result.placements.push_back({segment_index, AugmentationKind::Image, *r, image->ref, "border:white"});
        } else {
            result.skipped.push_back({"no-space", "image"});
        }
    }

    for (const auto& phrase : phrases) {
        const auto box = text_metrics.measure(phrase.phrase);
        if (box.width <= 0 || box.height <= 0) continue;
        PlacementConfig text_cfg = cfg;
        text_cfg.min_width_fraction =
            std::clamp(kMinKeyphraseScale * box.width / static_cast<double>(mask.width), 1e-9, 1.0);
        if (const auto r = place(box.width, box.height, text_cfg)) {
            result.placements.push_back({segment_index, AugmentationKind::Keyphrase, *r, phrase.phrase, "color:red"});
        } else {
            result.skipped.push_back({"no-space", "keyphrase:" + phrase.phrase});
        }
    }
    return result;
}

}  // namespace vidaug
