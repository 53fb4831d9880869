// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/image.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace vidaug {

/// Bundled fixed-metric 5x7 bitmap font laid out in a 6x8 cell. Lowercase
/// letters render as uppercase; unknown code points render as a hollow box.
namespace font {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kCellWidth = 6;
inline constexpr int kCellHeight = 8;

/// Seven rows, bit 4 is the leftmost column.
const std::array<std::uint8_t, kGlyphHeight>& glyph(char32_t cp);

}  // namespace font

struct TextSize {
    int width = 0;
    int height = 0;
};

/// Single-line text measurement at a point size (the cell height in pixels).
struct TextMetrics {
    int point_size = 8;

    TextSize measure(std::string_view utf8) const;
};

/// Draws UTF-8 text with its top-left cell corner at (x, y), at an integer
/// pixel scale. Pixels outside the image are clipped.
void draw_text(RgbImage& img, int x, int y, std::string_view utf8, int scale,
               std::array<std::uint8_t, 3> color);

}  // namespace vidaug
