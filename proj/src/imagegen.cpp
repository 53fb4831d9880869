// SPDX-License-Identifier: Apache-2.0
#include "vidaug/imagegen.hpp"

#include "vidaug/error.hpp"
#include "vidaug/font.hpp"
#include "vidaug/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>

namespace vidaug {

using nlohmann::json;

namespace {

std::array<std::uint8_t, 3> hsv_to_rgb(double hue, double sat, double val) {
    const double c = val * sat;
    const double hp = std::fmod(hue, 360.0) / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = val - c;
    const auto to8 = [m](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v + m, 0.0, 1.0) * 255.0)); };
    return {to8(r), to8(g), to8(b)};
}

}  // namespace

std::string stub_image_prompt(const ContextBundle& ctx) {
    return std::string(trim_view("Illustration of: " + first_words(ctx.target_text, 20) +
                                 "; context: " + first_words(ctx.global_summary, 10)));
}

ImagePrompt formulate_prompt(std::size_t segment_index, const ContextBundle& ctx, ChatBackend& backend) {
    try {
        const auto reply = join(split_words(backend.complete(render_image_prompt_request(ctx))), " ");
        if (!reply.empty()) {
            return {segment_index, truncate_on_word(reply, kMaxPromptChars), ctx.digest(), backend.id()};
        }
    } catch (const BackendUnavailable&) {
    }
    return {segment_index, truncate_on_word(stub_image_prompt(ctx), kMaxPromptChars), ctx.digest(),
            std::string(kOfflineStubId)};
}

RgbImage placeholder_image(std::string_view prompt, std::uint64_t seed, int width, int height) {
    if (width < 64 || height < 64) throw Error("placeholder images must be at least 64x64");
    const std::uint64_t h = fnv1a64(prompt);
    const double hue = static_cast<double>((h ^ seed) % 360);
    const auto light = hsv_to_rgb(hue, 0.35 + static_cast<double>((h >> 16) & 0xFF) / 255.0 * 0.25, 0.95);
    const auto dark = hsv_to_rgb(std::fmod(hue + 25.0 + static_cast<double>((h >> 24) & 0x1F), 360.0), 0.85,
                                 0.35 + static_cast<double>((h >> 32) & 0xFF) / 255.0 * 0.2);
    const bool mirrored = ((h >> 8) & 1) != 0;

    RgbImage img(width, height);
    const double span = static_cast<double>(width + height - 2);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int gx = mirrored ? width - 1 - x : x;
            const double t = static_cast<double>(gx + y) / span;
            auto* p = img.px(x, y);
            for (int c = 0; c < 3; ++c) {
                p[c] = static_cast<std::uint8_t>(std::lround(light[c] * (1.0 - t) + dark[c] * t));
            }
        }
    }

    const std::string caption = first_words(prompt, 4);
    const auto chars = static_cast<int>(std::max<std::size_t>(1, utf8_length(caption)));
    const int scale = std::clamp((width - 16) / (chars * font::kCellWidth), 1, std::max(1, height / 64));
    const int text_y = (height - font::kCellHeight * scale) / 2;
    draw_text(img, 9, text_y + 1, caption, scale, {0, 0, 0});
    draw_text(img, 8, text_y, caption, scale, {255, 255, 255});

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (x < 2 || y < 2 || x >= width - 2 || y >= height - 2) {
                auto* p = img.px(x, y);
                p[0] = p[1] = p[2] = 255;
            }
        }
    }
    return img;
}

GeneratedImage generate_image(const ImagePrompt& prompt, ImageBackend& backend, std::uint64_t seed) {
    const auto size = backend.default_size();
    try {
        return {prompt.segment_index, backend.generate(prompt.prompt_text, seed, size), backend.id(), seed};
    } catch (const BackendUnavailable&) {
    }
    return {prompt.segment_index, placeholder_image(prompt.prompt_text, seed, size.width, size.height),
            std::string(kPlaceholderId), seed};
}

std::uint32_t segment_seed(std::string_view project_id, std::size_t segment_index, std::uint64_t base_seed) {
    std::uint64_t h = fnv1a64(project_id);
    h = fnv1a64("#" + std::to_string(segment_index) + "#" + std::to_string(base_seed), h);
    return static_cast<std::uint32_t>(h ^ (h >> 32));
}

AssetCache::AssetCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string AssetCache::make_key(std::uint64_t context_digest, std::uint64_t seed, ImageSize size,
                                 std::string_view image_backend, std::string_view chat_backend) {
    std::uint64_t h = fnv1a64(hex64(context_digest));
    h = fnv1a64("|" + std::to_string(seed) + "|" + std::to_string(size.width) + "x" + std::to_string(size.height) + "|", h);
    h = fnv1a64(image_backend, h);
    h = fnv1a64("|", h);
    h = fnv1a64(chat_backend, h);
    return hex64(h);
}

std::optional<AugmentationImage> AssetCache::load(const std::string& key) const {
    if (dir_.empty()) return std::nullopt;
    const auto meta_path = dir_ / (key + ".json");
    const auto png_path = dir_ / (key + ".png");
    if (!std::filesystem::exists(meta_path) || !std::filesystem::exists(png_path)) return std::nullopt;
    try {
        std::ifstream in(meta_path);
        const auto meta = json::parse(in);
        AugmentationImage entry;
        entry.prompt.segment_index = meta.at("segment_index").get<std::size_t>();
        entry.prompt.prompt_text = meta.at("prompt").get<std::string>();
        entry.prompt.derived_from = std::stoull(meta.at("derived_from").get<std::string>(), nullptr, 16);
        entry.prompt.backend_id = meta.at("prompt_backend").get<std::string>();
        entry.image.segment_index = entry.prompt.segment_index;
        entry.image.generator_id = meta.at("generator").get<std::string>();
        entry.image.seed = meta.at("seed").get<std::uint64_t>();
        entry.image.pixels = load_rgb(png_path);
        return entry;
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable entries are regenerated
    }
}

void AssetCache::store(const std::string& key, const AugmentationImage& entry) const {
    if (dir_.empty()) return;
    const json meta = {
        {"segment_index", entry.prompt.segment_index},
        {"prompt", entry.prompt.prompt_text},
        {"derived_from", hex64(entry.prompt.derived_from)},
        {"prompt_backend", entry.prompt.backend_id},
        {"generator", entry.image.generator_id},
        {"seed", entry.image.seed},
    };
    const auto tmp_png = dir_ / (key + ".png.tmp.png");
    const auto tmp_meta = dir_ / (key + ".json.tmp");
    write_png(tmp_png, entry.image.pixels);
    {
        std::ofstream out(tmp_meta);
        out << meta.dump(2) << '\n';
    }
    std::filesystem::rename(tmp_png, dir_ / (key + ".png"));
    std::filesystem::rename(tmp_meta, dir_ / (key + ".json"));
}

AugmentationImage AssetCache::get_or_produce(const std::string& key, const Producer& produce) {
    std::promise<AugmentationImage> promise;
    std::shared_future<AugmentationImage> future;
    bool owner = false;
    {
        std::lock_guard lock(mutex_);
        if (const auto it = entries_.find(key); it != entries_.end()) {
            ++hits_;
            future = it->second;
        } else if (auto cached = load(key)) {
            ++hits_;
            return *cached;
        } else {
            ++misses_;
            owner = true;
            future = promise.get_future().share();
            entries_.emplace(key, future);
        }
    }
    if (owner) {
        try {
            auto [entry, persist] = produce();
            if (persist) store(key, entry);
            {
                // Persisted entries are served from disk from now on; entries that
                // must not be cached are dropped so the next call retries.
                std::lock_guard lock(mutex_);
                if (!persist || !dir_.empty()) entries_.erase(key);
            }
            promise.set_value(std::move(entry));
        } catch (...) {
            {
                std::lock_guard lock(mutex_);
                entries_.erase(key);
            }
            promise.set_exception(std::current_exception());
        }
    }
    return future.get();
}

std::size_t AssetCache::hits() const {
    std::lock_guard lock(mutex_);
    return hits_;
}

std::size_t AssetCache::misses() const {
    std::lock_guard lock(mutex_);
    return misses_;
}

AugmentationImage produce_augmentation(std::size_t segment_index, const ContextBundle& ctx, ChatBackend& chat,
                                       ImageBackend& images, std::uint64_t seed, AssetCache& cache) {
    const auto key = AssetCache::make_key(ctx.digest(), seed, images.default_size(), images.id(), chat.id());
    return cache.get_or_produce(key, [&] {
        AugmentationImage entry;
        entry.prompt = formulate_prompt(segment_index, ctx, chat);
        entry.image = generate_image(entry.prompt, images, seed);
        // Fallback output is not cached so a later run can reach the real backends.
        const bool persist = entry.image.generator_id == images.id() && entry.prompt.backend_id == chat.id();
        return std::make_pair(std::move(entry), persist);
    });
}

}  // namespace vidaug
