// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/image.hpp"
#include "vidaug/transcript.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace vidaug {

inline constexpr int kDefaultMbdPasses = 3;

/// Integer second indices i with t_start <= i <= t_end. When no integer lies
/// in the window, the single index floor(t_start) is returned so that every
/// segment owns at least one frame.
std::vector<long> sample_frame_indices(Millis t_start, Millis t_end);

/// Raw minimum-barrier distances by alternating raster / inverse-raster
/// scans. Boundary pixels are seeds (distance 0).
Plane<float> mbd_distances(const GrayImage& img, int passes = kDefaultMbdPasses);

/// mbd_distances() divided by its maximum (left as-is when the max is 0).
SaliencyMap mbd_transform(const GrayImage& img, int passes = kDefaultMbdPasses);

/// Histogram bins are centered on k/255; bin k spans ((k-0.5)/255, (k+0.5)/255].
/// A threshold index t separates bins <= t from bins > t and is reported as the
/// upper edge (t+0.5)/255, clamped to 1.
inline constexpr int kOtsuBins = 256;
using Histogram = std::array<std::uint64_t, kOtsuBins>;

int otsu_bin(float value);
double otsu_edge(int t);
Histogram saliency_histogram(const SaliencyMap& map);

/// Bin index maximizing between-class variance; ties go to the lowest
/// candidate, and candidates start at the lowest non-empty bin.
int otsu_bin_threshold(const Histogram& hist);

double otsu_threshold(const SaliencyMap& map);

/// bit = value > thr.
BinaryMask binarize(const SaliencyMap& map, double thr);

/// Per-pixel OR. Throws ShapeMismatch on differing shapes, Error on an empty list.
BinaryMask cumulative_mask(std::span<const BinaryMask> masks);

/// binarize(mbd_transform(frame), otsu_threshold(...)).
BinaryMask frame_mask(const GrayImage& frame, int passes = kDefaultMbdPasses);

/// Directory of frames pre-extracted at one frame per second, named
/// frame_%06d.png (or .jpg) by integer second index.
class FrameStore {
public:
    explicit FrameStore(std::filesystem::path root, double fps = 1.0);

    const std::filesystem::path& root() const noexcept { return root_; }
    double fps() const noexcept { return fps_; }

    /// Existing .png or .jpg for the index; the .png path when neither exists.
    std::filesystem::path path_for(long index) const;
    bool contains(long index) const;

    /// Throws MissingFrame when the file does not exist.
    GrayImage load(long index) const;

    /// Sorted indices of every frame file in the directory.
    std::vector<long> indices() const;

    /// Resolution of the lowest-indexed frame, if any.
    std::optional<std::pair<int, int>> probe_resolution() const;

private:
    std::filesystem::path root_;
    double fps_;
};

BinaryMask segment_saliency(const FrameStore& store, const TranscriptSegment& seg,
                            int passes = kDefaultMbdPasses);

}  // namespace vidaug
