// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/backends.hpp"
#include "vidaug/image.hpp"
#include "vidaug/language.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

namespace vidaug {

inline constexpr std::size_t kMaxPromptChars = 500;

struct ImagePrompt {
    std::size_t segment_index = 0;
    std::string prompt_text;
    std::uint64_t derived_from = 0;  // ContextBundle::digest()
    std::string backend_id;          // chat backend that wrote the prompt
};

struct GeneratedImage {
    std::size_t segment_index = 0;
    RgbImage pixels;
    std::string generator_id;
    std::uint64_t seed = 0;
};

/// "Illustration of: <first 20 target words>; context: <first 10 summary words>".
std::string stub_image_prompt(const ContextBundle& ctx);

/// Asks the chat backend to write a text-to-image prompt; whitespace-only
/// replies and backend failures fall back to stub_image_prompt(). The result
/// is cut to kMaxPromptChars on a word boundary.
ImagePrompt formulate_prompt(std::size_t segment_index, const ContextBundle& ctx, ChatBackend& backend);

/// Deterministic stand-in image: a two-tone diagonal gradient whose hue is
/// (hash(prompt) xor seed) mod 360, the first four prompt words in the
/// bundled bitmap font, and a 2-pixel border. width and height must be >= 64.
RgbImage placeholder_image(std::string_view prompt, std::uint64_t seed, int width, int height);

/// Runs the backend at its default size; on BackendUnavailable the placeholder
/// is rendered with the same seed and size and generator_id is "placeholder".
GeneratedImage generate_image(const ImagePrompt& prompt, ImageBackend& backend, std::uint64_t seed);

/// Per-segment seed derived from (project id, segment index, base seed).
std::uint32_t segment_seed(std::string_view project_id, std::size_t segment_index, std::uint64_t base_seed);

/// Prompt plus image for one segment, as stored in the cache.
struct AugmentationImage {
    ImagePrompt prompt;
    GeneratedImage image;
};

/// Disk-backed cache of prompt + image keyed by (context digest, seed, size,
/// backend ids). Concurrent requests for one key run the producer once.
/// An empty directory keeps entries in memory only.
class AssetCache {
public:
    explicit AssetCache(std::filesystem::path dir = {});

    static std::string make_key(std::uint64_t context_digest, std::uint64_t seed, ImageSize size,
                                std::string_view image_backend, std::string_view chat_backend);

    /// The producer returns the entry and whether it may be persisted.
    using Producer = std::function<std::pair<AugmentationImage, bool>()>;
    AugmentationImage get_or_produce(const std::string& key, const Producer& produce);

    std::size_t hits() const;
    std::size_t misses() const;

private:
    std::optional<AugmentationImage> load(const std::string& key) const;
    void store(const std::string& key, const AugmentationImage& entry) const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_future<AugmentationImage>> entries_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

/// formulate_prompt + generate_image through the cache.
AugmentationImage produce_augmentation(std::size_t segment_index, const ContextBundle& ctx, ChatBackend& chat,
                                       ImageBackend& images, std::uint64_t seed, AssetCache& cache);

}  // namespace vidaug
