// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/backends.hpp"
#include "vidaug/packing.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace vidaug {

/// Everything that steers a build. Loaded from a `key = value` file (one
/// entry per line, '#' starts a comment); see docs/config.md for the keys.
struct PipelineConfig {
    std::string project_id;  // empty: name of the output directory
    int threshold = 5;
    std::size_t max_keyphrases = 3;
    int mbd_passes = 3;
    double fps = 1.0;
    PlacementConfig packing;
    int font_point_size = 0;  // 0: frame height / 20
    std::uint64_t seed = 0;
    bool offline = false;
    std::string lexicon_path;  // empty: bundled lexicon

    ChatSettings chat;    // remote chat is used only when chat.endpoint.url is set
    ImageSettings image;  // remote images only when image.endpoint.url is set

    std::size_t request_concurrency = 4;
    std::size_t workers = 0;  // 0: hardware concurrency

    static PipelineConfig parse(std::string_view text);
    static PipelineConfig load(const std::filesystem::path& path);

    /// Applies one key. Throws ConfigError for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);

    /// Throws ConfigError when any value is out of range.
    void validate() const;

    /// Sorted `key=value` lines of every setting that can change the output.
    std::string canonical() const;
    std::string digest() const;
};

}  // namespace vidaug
