// SPDX-License-Identifier: Apache-2.0
// Reference implementations used only by tests. Each one is written for
// clarity, not speed, and shares no code with the library it checks.
#pragma once

#include "vidaug/image.hpp"
#include "vidaug/packing.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using vidaug::BinaryMask;
using vidaug::GrayImage;
using vidaug::Rect;

/// Exact minimum barrier distance to the image border: minimum over every
/// simple 4-connected path from p to any border pixel of max(path) - min(path).
inline std::vector<float> exhaustive_mbd(const GrayImage& img) {
    const int w = img.width;
    const int h = img.height;
    const auto border = [&](int x, int y) { return x == 0 || y == 0 || x == w - 1 || y == h - 1; };
    std::vector<float> out(static_cast<std::size_t>(w) * h, 0.0f);
    std::vector<char> on_path(out.size(), 0);

    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (border(sx, sy)) continue;
            float best = std::numeric_limits<float>::infinity();
            std::function<void(int, int, float, float)> walk = [&](int x, int y, float hi, float lo) {
                const auto idx = static_cast<std::size_t>(y) * w + x;
                const float v = img.at(x, y);
                hi = std::max(hi, v);
                lo = std::min(lo, v);
                if (hi - lo >= best) return;  // cannot improve along this branch
                if (border(x, y)) {
                    best = hi - lo;
                    return;
                }
                on_path[idx] = 1;
                constexpr std::array<std::pair<int, int>, 4> steps{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
                for (const auto& [dx, dy] : steps) {
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    if (on_path[static_cast<std::size_t>(ny) * w + nx]) continue;
                    walk(nx, ny, hi, lo);
                }
                on_path[idx] = 0;
            };
            const float v = img.at(sx, sy);
            walk(sx, sy, v, v);
            out[static_cast<std::size_t>(sy) * w + sx] = best;
        }
    }
    return out;
}

/// Otsu by trying every one of the 256 split points with exact rational
/// arithmetic. Class 0 is bins <= t. Splits leaving a class empty are not
/// candidates; among equal variances the smallest t wins. When no split is
/// possible the lowest populated bin (or 0 for an empty histogram) is returned.
inline int exhaustive_otsu(const std::array<std::uint64_t, 256>& hist) {
    using boost::multiprecision::cpp_rational;
    cpp_rational total = 0;
    for (auto c : hist) total += c;
    int fallback = 0;
    for (int b = 0; b < 256; ++b) {
        if (hist[b] > 0) {
            fallback = b;
            break;
        }
    }
    std::optional<int> best;
    cpp_rational best_var = -1;
    for (int t = 0; t < 256; ++t) {
        std::uint64_t n0 = 0, n1 = 0, m0 = 0, m1 = 0;
        for (int b = 0; b < 256; ++b) {
            if (b <= t) {
                n0 += hist[b];
                m0 += hist[b] * static_cast<std::uint64_t>(b);
            } else {
                n1 += hist[b];
                m1 += hist[b] * static_cast<std::uint64_t>(b);
            }
        }
        if (n0 == 0 || n1 == 0) continue;
        const cpp_rational mu0(m0, n0);
        const cpp_rational mu1(m1, n1);
        const cpp_rational w0 = cpp_rational(n0) / total;
        const cpp_rational w1 = cpp_rational(n1) / total;
        const cpp_rational var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best = t;
        }
    }
    return best.value_or(fallback);
}

/// Per-pixel OR over all masks.
inline BinaryMask any_of(const std::vector<BinaryMask>& masks) {
    BinaryMask out(masks.at(0).width, masks.at(0).height);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            bool any = false;
            for (const auto& m : masks) any = any || m.at(x, y) != 0;
            out.at(x, y) = any ? 1 : 0;
        }
    }
    return out;
}

inline long naive_count(const BinaryMask& m, const Rect& r) {
    long n = 0;
    for (int y = r.y; y < r.y + r.h; ++y) {
        for (int x = r.x; x < r.x + r.w; ++x) n += m.at(x, y) ? 1 : 0;
    }
    return n;
}

/// Candidate sizes: start at the asset size limited to the frame minus
/// margins (keeping the aspect), multiply the width by shrink_factor and
/// floor, stop once the width drops below min_width_fraction of the frame.
/// Heights are the width scaled by the aspect, rounded half up.
inline std::vector<std::pair<int, int>> sizes(int fw, int fh, int aw, int ah, const vidaug::PlacementConfig& c) {
    std::vector<std::pair<int, int>> out;
    const int avail_w = fw - 2 * c.margin;
    const int avail_h = fh - 2 * c.margin;
    if (avail_w <= 0 || avail_h <= 0) return out;
    long long w = aw;
    w = std::min<long long>(w, avail_w);
    w = std::min<long long>(w, static_cast<long long>(std::floor(static_cast<double>(avail_h) * aw / ah)));
    while (w >= 1 && static_cast<double>(w) >= c.min_width_fraction * fw) {
        const auto h = static_cast<long long>(std::floor(static_cast<double>(w) * ah / aw + 0.5));
        if (h < 1) break;
        out.emplace_back(static_cast<int>(w), static_cast<int>(h));
        w = static_cast<long long>(std::floor(static_cast<double>(w) * c.shrink_factor));
    }
    return out;
}

/// First rect in (size, y, x) order whose naive salient count is below the
/// budget. Enumerates every stride position without shortcuts.
inline std::optional<Rect> brute_force_placement(const BinaryMask& m, int aw, int ah, const vidaug::PlacementConfig& c) {
    for (const auto& [w, h] : sizes(m.width, m.height, aw, ah, c)) {
        std::vector<Rect> candidates;
        for (int y = c.margin; y + h + c.margin <= m.height; y += c.scan_stride) {
            for (int x = c.margin; x + w + c.margin <= m.width; x += c.scan_stride) candidates.push_back({x, y, w, h});
        }
        for (const auto& r : candidates) {
            if (static_cast<double>(naive_count(m, r)) < c.salient_budget_fraction * w * h) return r;
        }
    }
    return std::nullopt;
}

inline bool rects_overlap(const Rect& a, const Rect& b) {
    for (int y = a.y; y < a.y + a.h; ++y) {
        for (int x = a.x; x < a.x + a.w; ++x) {
            if (x >= b.x && x < b.x + b.w && y >= b.y && y < b.y + b.h) return true;
        }
    }
    return false;
}

}  // namespace oracle
