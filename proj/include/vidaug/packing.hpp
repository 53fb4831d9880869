// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/font.hpp"
#include "vidaug/image.hpp"
#include "vidaug/language.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vidaug {

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    long long area() const noexcept { return static_cast<long long>(w) * h; }
    bool intersects(const Rect& o) const noexcept {
        return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
    }
    bool inside(int width, int height) const noexcept {
        return w > 0 && h > 0 && x >= 0 && y >= 0 && x + w <= width && y + h <= height;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

struct PlacementConfig {
    double salient_budget_fraction = 0.02;  // of the candidate rect area
    double shrink_factor = 0.9;
    double min_width_fraction = 0.2;  // of the frame width
    int scan_stride = 8;
    int margin = 8;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

/// (width+1) x (height+1) summed-area table of a BinaryMask.
class IntegralMask {
public:
    IntegralMask() = default;
    explicit IntegralMask(const BinaryMask& mask);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    /// Sum of mask bits in [0,x) x [0,y).
    std::uint32_t at(int x, int y) const { return table_[static_cast<std::size_t>(y) * (width_ + 1) + x]; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint32_t> table_;
};

IntegralMask build_integral(const BinaryMask& mask);

/// Number of set bits inside r. Throws OutOfBounds.
std::uint32_t count_salient(const IntegralMask& im, const Rect& r);

/// Candidate sizes, largest first: the asset scaled down (aspect kept) to fit
/// the frame minus margins, then repeatedly floor(width * shrink_factor),
/// stopping below min_width_fraction * frame width. Heights are the rounded
/// aspect-preserving counterparts.
std::vector<std::pair<int, int>> size_schedule(int frame_w, int frame_h, int asset_w, int asset_h,
                                               const PlacementConfig& cfg);

/// First rect in (size, y, x) scan order whose salient count is below
/// salient_budget_fraction of its area.
std::optional<Rect> find_placement(const BinaryMask& mask, int asset_w, int asset_h, const PlacementConfig& cfg);

/// Same scan, additionally rejecting any rect that touches a set bit of
/// `occupied` (same shape as mask).
std::optional<Rect> find_placement(const BinaryMask& mask, int asset_w, int asset_h, const PlacementConfig& cfg,
                                   const BinaryMask& occupied);

/// Copy of the mask with every bit in r set. Throws OutOfBounds.
BinaryMask commit_placement(const BinaryMask& mask, const Rect& r);

enum class AugmentationKind { Image, Keyphrase };

struct PlacedAugmentation {
    std::size_t segment_index = 0;
    AugmentationKind kind = AugmentationKind::Image;
    Rect rect;
    std::string asset_ref;  // image asset path or the phrase text
    std::string style;      // "border:white" for images, "color:red" for keyphrases

    friend bool operator==(const PlacedAugmentation&, const PlacedAugmentation&) = default;
};

struct SkipRecord {
    std::string code;
    std::string detail;

    friend bool operator==(const SkipRecord&, const SkipRecord&) = default;
};

struct ImageAsset {
    int width = 0;
    int height = 0;
    std::string ref;
};

struct PackResult {
    std::vector<PlacedAugmentation> placements;
    std::vector<SkipRecord> skipped;
    BinaryMask mask;  // occupancy after all commits
};

/// Keyphrase boxes may shrink to this fraction of their natural width.
inline constexpr double kMinKeyphraseScale = 0.5;

/// Places the image (if any) and then each keyphrase in order, committing
/// every placement into the mask. Later items never touch earlier rects.
/// Items that do not fit become skip records.
PackResult pack_segment(std::size_t segment_index, const BinaryMask& mask, const std::optional<ImageAsset>& image,
                        const std::vector<Keyphrase>& phrases, const PlacementConfig& cfg,
                        const TextMetrics& text_metrics);

}  // namespace vidaug
