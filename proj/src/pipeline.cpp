// SPDX-License-Identifier: Apache-2.0
#include "vidaug/pipeline.hpp"

#include "vidaug/error.hpp"
#include "vidaug/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iterator>
#include <set>

#include <unistd.h>

namespace vidaug {

namespace {

std::string build_timestamp() {
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ImageabilityLexicon load_lexicon(const PipelineConfig& cfg) {
    if (cfg.lexicon_path.empty()) return ImageabilityLexicon::bundled();
    std::ifstream in(cfg.lexicon_path, std::ios::binary);
    if (!in) throw Error("cannot read lexicon: " + cfg.lexicon_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return ImageabilityLexicon::parse(text);
}

struct FrameResult {
    std::optional<BinaryMask> mask;
    SkipRecord error;
};

RgbImage render_packing(const BinaryMask& saliency, const std::vector<PlacedAugmentation>& placements) {
    RgbImage img(saliency.width, saliency.height);
    for (int y = 0; y < saliency.height; ++y) {
        for (int x = 0; x < saliency.width; ++x) {
            const std::uint8_t v = saliency.at(x, y) ? 160 : 24;
            auto* p = img.px(x, y);
            p[0] = p[1] = p[2] = v;
        }
    }
    for (const auto& pl : placements) {
        const std::array<std::uint8_t, 3> color =
            pl.kind == AugmentationKind::Image ? std::array<std::uint8_t, 3>{255, 255, 255}
                                               : std::array<std::uint8_t, 3>{255, 0, 0};
        const auto& r = pl.rect;
        for (int x = r.x; x < r.x + r.w; ++x) {
            for (int y : {r.y, r.y + r.h - 1}) std::copy(color.begin(), color.end(), img.px(x, y));
        }
        for (int y = r.y; y < r.y + r.h; ++y) {
            for (int x : {r.x, r.x + r.w - 1}) std::copy(color.begin(), color.end(), img.px(x, y));
        }
    }
    return img;
}

}  // namespace

Backends make_backends(const PipelineConfig& cfg) {
    Backends b;
    if (cfg.offline || cfg.chat.endpoint.url.empty()) {
        b.chat = std::make_unique<OfflineChatBackend>();
    } else {
        b.chat = std::make_unique<RemoteChatBackend>(cfg.chat);
    }
    if (cfg.offline || cfg.image.endpoint.url.empty()) {
        b.images = std::make_unique<PlaceholderImageBackend>(cfg.image.size);
    } else {
        b.images = std::make_unique<RemoteImageBackend>(cfg.image);
    }
    return b;
}

std::string image_asset_path(std::size_t segment_index) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "assets/images/seg_%04zu.png", segment_index);
    return buf;
}

BuildResult build_manifest(const ProjectInput& input, ChatBackend& chat, ImageBackend& images,
                           const PipelineConfig& cfg, AssetCache& cache, const ProgressFn& progress) {
    const auto report = [&](const std::string& msg) {
        if (progress) progress(msg);
    };
    cfg.validate();

    report("reading transcript " + input.transcript_path.string());
    const Transcript transcript = load_transcript(input.transcript_path);
    const auto resolution = input.frames.probe_resolution();
    if (!resolution) throw Error("no frames found in " + input.frames.root().string());
    const auto [frame_w, frame_h] = *resolution;
    const auto lexicon = load_lexicon(cfg);
    const std::size_t n = transcript.size();

    report("summarizing " + std::to_string(n) + " segments");
    const Summary summary = summarize_global(transcript, chat);

    report("scoring imageability and extracting keyphrases");
    std::vector<ContextBundle> contexts(n);
    std::vector<ImageabilityRecord> records(n);
    std::vector<KeyphraseResult> keyphrases(n);
    parallel_for(n, cfg.request_concurrency, [&](std::size_t i) {
        contexts[i] = make_context(transcript, i, summary.text);
        records[i] = assess_imageability(i, contexts[i], chat, lexicon);
        keyphrases[i] = extract_keyphrases(i, contexts[i], chat, cfg.max_keyphrases);
    });

    const auto qualifying = filter_imageable(records, cfg.threshold);
    report(std::to_string(qualifying.size()) + " segments above threshold " + std::to_string(cfg.threshold));
    std::vector<std::optional<AugmentationImage>> augmentations(n);
    std::vector<std::optional<SkipRecord>> augmentation_errors(n);
    parallel_for(qualifying.size(), cfg.request_concurrency, [&](std::size_t q) {
        const std::size_t i = qualifying[q];
        try {
            augmentations[i] = produce_augmentation(i, contexts[i], chat, images,
                                                    segment_seed(input.project_id, i, cfg.seed), cache);
        } catch (const std::exception& e) {
            augmentation_errors[i] = SkipRecord{"image-failed", e.what()};
        }
    });

    report("computing saliency masks");
    std::set<long> needed;
    std::vector<std::vector<long>> segment_frames(n);
    for (std::size_t i = 0; i < n; ++i) {
        segment_frames[i] = sample_frame_indices(transcript[i].t_start, transcript[i].t_end);
        needed.insert(segment_frames[i].begin(), segment_frames[i].end());
    }
    const std::vector<long> frame_ids(needed.begin(), needed.end());
    std::vector<FrameResult> frames(frame_ids.size());
    parallel_for(frame_ids.size(), cfg.workers, [&](std::size_t k) {
        const long id = frame_ids[k];
        const auto name = input.frames.path_for(id).filename().string();
        try {
            const auto img = input.frames.load(id);
            if (img.width != frame_w || img.height != frame_h) {
                frames[k].error = {"frame-shape-mismatch", name};
            } else {
                frames[k].mask = frame_mask(img, cfg.mbd_passes);
            }
        } catch (const MissingFrame&) {
            frames[k].error = {"missing-frame", name};
        } catch (const Error& e) {
            frames[k].error = {"unreadable-frame", name};
        }
    });
    const auto frame_slot = [&](long id) {
        return static_cast<std::size_t>(std::lower_bound(frame_ids.begin(), frame_ids.end(), id) - frame_ids.begin());
    };

    report("packing augmentations");
    const TextMetrics metrics{cfg.font_point_size > 0 ? cfg.font_point_size : std::max(6, frame_h / 20)};
    BuildResult result;
    Manifest& m = result.manifest;
    m.project_id = input.project_id;
    m.frame_width = frame_w;
    m.frame_height = frame_h;
    m.duration = std::max(Millis{static_cast<long long>(transcript.duration_seconds() * 1000.0 + 0.5)},
                          Millis{frame_ids.empty() ? 0 : (frame_ids.back() + 1) * 1000});
    m.entries.resize(n);
    std::vector<std::optional<BinaryMask>> segment_masks(n);
    std::vector<std::optional<BinaryMask>> packed_masks(n);

    parallel_for(n, cfg.workers, [&](std::size_t i) {
        const auto& seg = transcript[i];
        ManifestEntry& e = m.entries[i];
        e.index = i;
        e.t_start = seg.t_start;
        e.t_end = seg.t_end;
        e.text = seg.text;
        e.score = records[i].score;
        e.score_backend = records[i].backend_id;
        e.keyphrases = keyphrases[i].phrases;
        if (augmentation_errors[i]) e.skip_reasons.push_back(*augmentation_errors[i]);

        std::optional<ImageAsset> asset;
        if (const auto& aug = augmentations[i]) {
            e.prompt = aug->prompt.prompt_text;
            e.image = ManifestImage{image_asset_path(i), aug->image.pixels.width, aug->image.pixels.height,
                                    aug->image.seed, aug->image.generator_id};
            asset = ImageAsset{aug->image.pixels.width, aug->image.pixels.height, e.image->path};
        }

        std::vector<BinaryMask> masks;
        for (long id : segment_frames[i]) {
            const auto& fr = frames[frame_slot(id)];
            if (fr.mask) {
                masks.push_back(*fr.mask);
            } else {
                e.skip_reasons.push_back(fr.error);
            }
        }
        if (masks.size() != segment_frames[i].size()) return;

        const auto cumulative = cumulative_mask(masks);
        auto packed = pack_segment(i, cumulative, asset, e.keyphrases, cfg.packing, metrics);
        e.placements = std::move(packed.placements);
        e.skip_reasons.insert(e.skip_reasons.end(), packed.skipped.begin(), packed.skipped.end());
        segment_masks[i] = cumulative;
        packed_masks[i] = std::move(packed.mask);
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (augmentations[i]) result.images.emplace(i, std::move(augmentations[i]->image.pixels));
        if (segment_masks[i]) result.masks.emplace(i, std::move(*segment_masks[i]));
        if (packed_masks[i]) result.packing.emplace(i, std::move(*packed_masks[i]));
    }

    m.generation.summary_backend = summary.backend_id;
    m.generation.global_summary = summary.text;
    m.generation.chat_backend = chat.id();
    m.generation.image_backend = images.id();
    m.generation.seed = cfg.seed;
    m.generation.threshold = cfg.threshold;
    m.generation.config_digest = cfg.digest();
    m.generation.timestamp = build_timestamp();

    validate_manifest(m);
    report("built manifest with " + std::to_string(n) + " entries, " + std::to_string(result.images.size()) +
           " images");
    return result;
}

void write_project(const BuildResult& result, const std::filesystem::path& out_dir, const WriteOptions& opts) {
    namespace fs = std::filesystem;
    static std::atomic<int> counter{0};
    fs::create_directories(out_dir);
    const auto tag = std::to_string(::getpid()) + "-" + std::to_string(counter++);
    const fs::path staging = out_dir / (".staging-" + tag);
    fs::remove_all(staging);
    fs::create_directories(staging / "assets" / "images");

    for (const auto& [index, img] : result.images) write_png(staging / image_asset_path(index), img);
    {
        std::ofstream out(staging / "manifest.json", std::ios::binary);
        out << serialize_manifest(result.manifest);
        if (!out) throw Error("cannot write manifest to " + staging.string());
    }

    const fs::path old_assets = out_dir / (".assets-old-" + tag);
    if (fs::exists(out_dir / "assets")) fs::rename(out_dir / "assets", old_assets);
    fs::rename(staging / "assets", out_dir / "assets");
    fs::rename(staging / "manifest.json", out_dir / "manifest.json");
    fs::remove_all(old_assets);
    fs::remove_all(staging);

    char name[32];
    if (opts.dump_masks) {
        for (const auto& [index, mask] : result.masks) {
            std::snprintf(name, sizeof(name), "seg_%04zu.png", index);
            write_png(out_dir / "debug" / "masks" / name, mask);
        }
    }
    if (opts.dump_packing) {
        for (const auto& [index, mask] : result.masks) {
            std::snprintf(name, sizeof(name), "seg_%04zu.png", index);
            write_png(out_dir / "debug" / "packing" / name,
                      render_packing(mask, result.manifest.entries[index].placements));
        }
    }
}

}  // namespace vidaug
