// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/language.hpp"
#include "vidaug/packing.hpp"
#include "vidaug/transcript.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vidaug {

inline constexpr int kManifestSchemaVersion = 1;

struct ManifestImage {
    std::string path;  // relative to the project directory
    int width = 0;
    int height = 0;
    std::uint64_t seed = 0;
    std::string generator;

    friend bool operator==(const ManifestImage&, const ManifestImage&) = default;
};

struct ManifestEntry {
    std::size_t index = 0;
    Millis t_start{0};
    Millis t_end{0};
    std::string text;
    int score = 1;
    std::string score_backend;
    std::vector<Keyphrase> keyphrases;
    std::optional<std::string> prompt;
    std::optional<ManifestImage> image;
    std::vector<PlacedAugmentation> placements;
    std::vector<SkipRecord> skip_reasons;
    bool placements_hidden = false;  // set by filter_view

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct GenerationMetadata {
    std::string summary_backend;
    std::string global_summary;
    std::string chat_backend;
    std::string image_backend;
    std::uint64_t seed = 0;
    int threshold = 5;
    std::string config_digest;
    std::optional<std::string> timestamp;  // omitted in canonical form

    friend bool operator==(const GenerationMetadata&, const GenerationMetadata&) = default;
};

struct Manifest {
    int schema_version = kManifestSchemaVersion;
    std::string project_id;
    int frame_width = 0;
    int frame_height = 0;
    Millis duration{0};
    std::vector<ManifestEntry> entries;
    GenerationMetadata generation;
    int view_min_score = 1;  // > 1 only for filter_view results

    friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Canonical form drops the generation timestamp.
nlohmann::json to_json(const Manifest& m, bool canonical = false);

/// Throws SchemaMismatch on a missing or different schema_version and
/// InvariantViolation on malformed fields. Does not run validate_manifest().
Manifest manifest_from_json(const nlohmann::json& j);

/// Sorted keys, 2-space indent, floats with exactly 3 decimals, trailing newline.
std::string dump_canonical(const nlohmann::json& j);

/// dump_canonical(to_json(m, canonical)).
std::string serialize_manifest(const Manifest& m, bool canonical = false);

/// Throws InvariantViolation naming the entry and field.
void validate_manifest(const Manifest& m);

/// Parse + validate.
Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::filesystem::path& path);

/// Entries scoring below min_score keep text and score but lose their
/// placements. Views compose: the effective minimum is the largest applied.
/// Throws Error unless 1 <= min_score <= 10.
Manifest filter_view(const Manifest& m, int min_score);

}  // namespace vidaug
