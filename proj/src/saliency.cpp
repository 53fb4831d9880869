// SPDX-License-Identifier: Apache-2.0
#include "vidaug/saliency.hpp"

#include "vidaug/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace vidaug {

std::vector<long> sample_frame_indices(Millis t_start, Millis t_end) {
    // ceil(t_start) .. floor(t_end) in whole seconds.
    const long long first = (t_start.count() + 999) / 1000;
    const long long last = t_end.count() / 1000;
    std::vector<long> out;
    for (long long i = first; i <= last; ++i) out.push_back(static_cast<long>(i));
    if (out.empty()) out.push_back(static_cast<long>(t_start.count() / 1000));
    return out;
}

Plane<float> mbd_distances(const GrayImage& img, int passes) {
    const int w = img.width;
    const int h = img.height;
    constexpr float kInf = std::numeric_limits<float>::infinity();
    Plane<float> dist(w, h, kInf);
    Plane<float> upper(w, h);
    Plane<float> lower(w, h);
    upper.data = img.data;
    lower.data = img.data;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x == 0 || y == 0 || x == w - 1 || y == h - 1) dist.at(x, y) = 0.0f;
        }
    }

    const auto relax = [&](int x, int y, int qx, int qy) {
        const float v = img.at(x, y);
        const float hi = std::max(upper.at(qx, qy), v);
        const float lo = std::min(lower.at(qx, qy), v);
        const float cost = hi - lo;
        if (cost < dist.at(x, y)) {
            dist.at(x, y) = cost;
            upper.at(x, y) = hi;
            lower.at(x, y) = lo;
        }
    };

    for (int pass = 0; pass < passes; ++pass) {
        if (pass % 2 == 0) {
            for (int y = 1; y < h - 1; ++y) {
                for (int x = 1; x < w - 1; ++x) {
                    relax(x, y, x, y - 1);
                    relax(x, y, x - 1, y);
                }
            }
        } else {
            for (int y = h - 2; y >= 1; --y) {
                for (int x = w - 2; x >= 1; --x) {
                    relax(x, y, x, y + 1);
                    relax(x, y, x + 1, y);
                }
            }
        }
    }
    return dist;
}

SaliencyMap mbd_transform(const GrayImage& img, int passes) {
    if (passes < 1) throw Error("MBD requires at least one pass");
    if (img.empty()) throw Error("MBD requires a non-empty image");
    const auto raw = mbd_distances(img, passes);
    SaliencyMap out(raw.width, raw.height);
    const float peak = *std::max_element(raw.data.begin(), raw.data.end());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out.data[i] = peak > 0.0f ? raw.data[i] / peak : raw.data[i];
    }
    return out;
}

double otsu_edge(int t) { return (static_cast<double>(t) + 0.5) / 255.0; }

int otsu_bin(float value) {
    const double v = value;
    int b = static_cast<int>(std::ceil(v * 255.0 - 0.5));
    b = std::clamp(b, 0, kOtsuBins - 1);
    while (b > 0 && !(v > otsu_edge(b - 1))) --b;
    while (b < kOtsuBins - 1 && v > otsu_edge(b)) ++b;
    return b;
}

Histogram saliency_histogram(const SaliencyMap& map) {
    Histogram hist{};
    for (float v : map.data) ++hist[static_cast<std::size_t>(otsu_bin(v))];
    return hist;
}

int otsu_bin_threshold(const Histogram& hist) {
    using boost::multiprecision::int256_t;

    std::uint64_t total = 0;
    std::uint64_t total_sum = 0;
    int lowest = -1;
    for (int b = 0; b < kOtsuBins; ++b) {
        total += hist[b];
        total_sum += hist[b] * static_cast<std::uint64_t>(b);
        if (lowest < 0 && hist[b] > 0) lowest = b;
    }
    if (lowest < 0) return 0;

    // Between-class variance is proportional to (N*S0 - n0*S)^2 / (n0*n1);
    // candidates are compared exactly by cross-multiplication.
    int best = lowest;
    int256_t best_num = 0;
    int256_t best_den = 1;
    std::uint64_t n0 = 0;
    std::uint64_t s0 = 0;
    for (int t = 0; t < kOtsuBins; ++t) {
        n0 += hist[t];
        s0 += hist[t] * static_cast<std::uint64_t>(t);
        if (t < lowest) continue;
        const std::uint64_t n1 = total - n0;
        if (n1 == 0) continue;
        const int256_t diff = int256_t(total) * s0 - int256_t(n0) * total_sum;
        const int256_t num = diff * diff;
        const int256_t den = int256_t(n0) * n1;
        if (num * best_den > best_num * den) {
            best = t;
            best_num = num;
            best_den = den;
        }
    }
    return best;
}

double otsu_threshold(const SaliencyMap& map) {
    if (map.empty()) throw Error("Otsu threshold of an empty map");
    return std::min(1.0, otsu_edge(otsu_bin_threshold(saliency_histogram(map))));
}

BinaryMask binarize(const SaliencyMap& map, double thr) {
    BinaryMask out(map.width, map.height);
    for (std::size_t i = 0; i < map.size(); ++i) out.data[i] = static_cast<double>(map.data[i]) > thr ? 1 : 0;
    return out;
}

BinaryMask cumulative_mask(std::span<const BinaryMask> masks) {
    if (masks.empty()) throw Error("cumulative mask of an empty list");
    BinaryMask out = masks.front();
    for (const auto& m : masks.subspan(1)) {
        if (!m.same_shape(out)) {
            throw ShapeMismatch("mask " + std::to_string(m.width) + "x" + std::to_string(m.height) +
                                " does not match " + std::to_string(out.width) + "x" +
                                std::to_string(out.height));
        }
        for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = (out.data[i] | m.data[i]) ? 1 : 0;
    }
    for (auto& b : out.data) b = b ? 1 : 0;
    return out;
}

BinaryMask frame_mask(const GrayImage& frame, int passes) {
    const auto map = mbd_transform(frame, passes);
    return binarize(map, otsu_threshold(map));
}

FrameStore::FrameStore(std::filesystem::path root, double fps) : root_(std::move(root)), fps_(fps) {}

std::filesystem::path FrameStore::path_for(long index) const {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06ld", index);
    for (const char* ext : {".png", ".jpg", ".jpeg"}) {
        auto p = root_ / (std::string(name) + ext);
        if (std::filesystem::exists(p)) return p;
    }
    return root_ / (std::string(name) + ".png");
}

bool FrameStore::contains(long index) const { return std::filesystem::exists(path_for(index)); }

GrayImage FrameStore::load(long index) const {
    const auto p = path_for(index);
    if (index < 0 || !std::filesystem::exists(p)) throw MissingFrame(index, p.string());
    return load_gray(p);
}

std::vector<long> FrameStore::indices() const {
    std::vector<long> out;
    if (!std::filesystem::is_directory(root_)) return out;
    for (const auto& entry : std::filesystem::directory_iterator(root_)) {
        const auto name = entry.path().filename().string();
        long idx = -1;
        char ext[8] = {};
        if (std::sscanf(name.c_str(), "frame_%6ld.%4s", &idx, ext) == 2 && idx >= 0) {
            const std::string e(ext);
            if (e == "png" || e == "jpg" || e == "jpeg") out.push_back(idx);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<std::pair<int, int>> FrameStore::probe_resolution() const {
    const auto idx = indices();
    if (idx.empty()) return std::nullopt;
    const auto img = load_rgb(path_for(idx.front()));
    return std::make_pair(img.width, img.height);
}

BinaryMask segment_saliency(const FrameStore& store, const TranscriptSegment& seg, int passes) {
    std::vector<BinaryMask> masks;
    for (long i : sample_frame_indices(seg.t_start, seg.t_end)) masks.push_back(frame_mask(store.load(i), passes));
    return cumulative_mask(masks);
}

}  // namespace vidaug
