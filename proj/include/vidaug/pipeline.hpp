// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/backends.hpp"
#include "vidaug/config.hpp"
#include "vidaug/imagegen.hpp"
#include "vidaug/manifest.hpp"
#include "vidaug/saliency.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace vidaug {

struct ProjectInput {
    std::string project_id;
    FrameStore frames;
    std::filesystem::path transcript_path;
};

struct Backends {
    std::unique_ptr<ChatBackend> chat;
    std::unique_ptr<ImageBackend> images;
};

/// Offline stub + placeholder when cfg.offline or no endpoint is configured,
/// remote HTTP clients otherwise.
Backends make_backends(const PipelineConfig& cfg);

using ProgressFn = std::function<void(std::string_view)>;

struct BuildResult {
    Manifest manifest;
    std::map<std::size_t, RgbImage> images;     // by segment index
    std::map<std::size_t, BinaryMask> masks;    // cumulative saliency per segment
    std::map<std::size_t, BinaryMask> packing;  // occupancy after packing
};

/// Asset path of a segment image relative to the project directory.
std::string image_asset_path(std::size_t segment_index);

/// Runs the whole pipeline in memory. Fatal only for unreadable inputs
/// (transcript, empty frame directory); per-segment failures become skip
/// reasons. The timestamp comes from SOURCE_DATE_EPOCH when set.
BuildResult build_manifest(const ProjectInput& input, ChatBackend& chat, ImageBackend& images,
                           const PipelineConfig& cfg, AssetCache& cache, const ProgressFn& progress = {});

struct WriteOptions {
    bool dump_masks = false;
    bool dump_packing = false;
};

/// Writes manifest.json and assets/ under out_dir. Both are staged in a
/// temporary directory and moved into place by rename.
void write_project(const BuildResult& result, const std::filesystem::path& out_dir, const WriteOptions& opts = {});

}  // namespace vidaug
