// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace vidaug {

/// Row-major single-channel raster.
template <class T>
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Plane() = default;
    Plane(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    bool empty() const noexcept { return data.empty(); }
    std::size_t size() const noexcept { return data.size(); }
    bool same_shape(const Plane& o) const noexcept { return width == o.width && height == o.height; }

    T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const Plane&, const Plane&) = default;
};

/// Luminance in [0,1].
struct GrayImage : Plane<float> {
    using Plane::Plane;
};

/// Per-pixel saliency in [0,1]; max is 1 unless the map is all zero.
struct SaliencyMap : Plane<float> {
    using Plane::Plane;
};

/// true (1) = salient / occupied.
struct BinaryMask : Plane<std::uint8_t> {
    using Plane::Plane;

    std::size_t popcount() const noexcept;
};

/// Interleaved 8-bit RGB.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    RgbImage() = default;
    RgbImage(int w, int h)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 0) {}

    std::uint8_t* px(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const std::uint8_t* px(int x, int y) const {
        return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
    }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Rec. 601 luma of an RGB image, scaled to [0,1].
GrayImage to_luminance(const RgbImage& rgb);

RgbImage load_rgb(const std::filesystem::path& path);
GrayImage load_gray(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const RgbImage& img);
RgbImage decode_image(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const RgbImage& img);
/// 8-bit grayscale PNG; values are clamped to [0,1] and scaled to 0..255.
void write_png(const std::filesystem::path& path, const Plane<float>& img);
/// 8-bit grayscale PNG, salient = 255.
void write_png(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace vidaug
