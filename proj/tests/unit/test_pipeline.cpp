// SPDX-License-Identifier: Apache-2.0
#include "project.hpp"

#include "vidaug/error.hpp"
#include "vidaug/manifest.hpp"
#include "vidaug/pipeline.hpp"

#include <doctest.h>

#include <set>

using namespace vidaug;
namespace fs = std::filesystem;

namespace {

class FailingImages final : public ImageBackend {
public:
    RgbImage generate(const std::string&, std::uint64_t, ImageSize) override {
        throw BackendUnavailable("renderer offline");
    }
    std::string id() const override { return "failing"; }
    ImageSize default_size() const override { return {}; }
};

std::size_t count_kind(const Manifest& m, AugmentationKind kind) {
    std::size_t n = 0;
    for (const auto& e : m.entries) {
        for (const auto& p : e.placements) n += p.kind == kind ? 1 : 0;
    }
    return n;
}

}  // namespace

TEST_CASE("offline sample build") {
    const auto r = testing::build_sample(testing::offline_config());
    const auto& m = r.manifest;
    CHECK_NOTHROW(validate_manifest(m));
    CHECK(m.project_id == "sample");
    CHECK(m.frame_width == 320);
    CHECK(m.frame_height == 180);
    CHECK(m.entries.size() == 10);
    CHECK(m.generation.chat_backend == "offline-stub");
    CHECK(m.generation.image_backend == "placeholder");
    CHECK(m.duration == Millis{12000});
    std::set<std::size_t> with_image;
    for (const auto& e : m.entries) {
        if (e.image) with_image.insert(e.index);
        CHECK(e.score_backend == "lexicon");
        CHECK(e.keyphrases.size() <= 3);
        if (e.score > m.generation.threshold) CHECK(e.image);
    }
    CHECK(with_image.size() == r.images.size());
    CHECK(count_kind(m, AugmentationKind::Image) > 0);
    CHECK(count_kind(m, AugmentationKind::Keyphrase) > 0);
}

TEST_CASE("images only above threshold, keyphrases regardless") {
    auto cfg = testing::offline_config();
    cfg.threshold = 10;
    const auto r = testing::build_sample(cfg);
    CHECK(r.images.empty());
    CHECK(count_kind(r.manifest, AugmentationKind::Image) == 0);
    CHECK(count_kind(r.manifest, AugmentationKind::Keyphrase) > 0);
    for (const auto& e : r.manifest.entries) {
        CHECK_FALSE(e.image);
        CHECK_FALSE(e.prompt);
    }
}

TEST_CASE("a missing frame skips only the segments that need it") {
    testing::TempDir dir;
    fs::copy(testing::sample_dir() / "frames", dir / "frames");
    fs::remove(dir / "frames/frame_000005.png");
    const auto cfg = testing::offline_config();
    const auto full = testing::build_sample(cfg);
    const auto r = testing::build_sample(cfg, "sample", dir / "frames");
    REQUIRE(r.manifest.entries.size() == full.manifest.entries.size());
    std::size_t affected = 0;
    for (std::size_t i = 0; i < r.manifest.entries.size(); ++i) {
        const auto& e = r.manifest.entries[i];
        // Frames sampled are ceil(start)..floor(end) seconds, or floor(start) when that is empty.
        const long long first = (e.t_start.count() + 999) / 1000;
        const long long last = e.t_end.count() / 1000;
        const bool needs = first <= last ? (first <= 5 && 5 <= last) : e.t_start.count() / 1000 == 5;
        const bool skipped = std::any_of(e.skip_reasons.begin(), e.skip_reasons.end(), [](const SkipRecord& s) {
            return s.code == "missing-frame" && s.detail == "frame_000005.png";
        });
        CHECK(skipped == needs);
        if (skipped) {
            ++affected;
            CHECK(e.placements.empty());
        } else {
            CHECK(e.placements == full.manifest.entries[i].placements);
        }
        CHECK(e.score == full.manifest.entries[i].score);
        CHECK(e.image == full.manifest.entries[i].image);
    }
    CHECK(affected > 0);
}

TEST_CASE("a failing image backend falls back to placeholders") {
    const auto cfg = testing::offline_config();
    OfflineChatBackend chat;
    FailingImages images;
    AssetCache cache;
    const auto r = build_manifest({"sample", FrameStore(testing::sample_dir() / "frames"),
                                   testing::sample_dir() / "transcript.srt"},
                                  chat, images, cfg, cache);
    const auto reference = testing::build_sample(cfg);
    CHECK(r.images.size() == reference.images.size());
    CHECK(r.manifest.generation.image_backend == "failing");
    for (const auto& e : r.manifest.entries) {
        if (e.image) CHECK(e.image->generator == "placeholder");
    }
    for (const auto& [i, img] : reference.images) CHECK(r.images.at(i) == img);
}

TEST_CASE("a chat backend drives scores and is recorded") {
    auto cfg = testing::offline_config();
    FunctionChatBackend chat("fake-chat", [](const std::string&) { return "Score: 8"; });
    PlaceholderImageBackend images;
    AssetCache cache;
    const auto r = build_manifest({"sample", FrameStore(testing::sample_dir() / "frames"),
                                   testing::sample_dir() / "transcript.srt"},
                                  chat, images, cfg, cache);
    CHECK(r.manifest.generation.chat_backend == "fake-chat");
    for (const auto& e : r.manifest.entries) {
        CHECK(e.score == 8);
        CHECK(e.score_backend == "fake-chat");
    }
    CHECK(r.images.size() == 10);
    CHECK(chat.calls() > 0);
}

TEST_CASE("unreadable inputs are fatal") {
    testing::TempDir dir;
    fs::create_directories(dir / "empty");
    const auto cfg = testing::offline_config();
    CHECK_THROWS_AS(testing::build_sample(cfg, "x", dir / "empty"), Error);
    CHECK_THROWS_AS(testing::build_sample(cfg, "x", testing::sample_dir() / "frames", dir / "missing.srt"), Error);
}

TEST_CASE("written project is self-consistent and deterministic") {
    testing::TempDir dir;
    const auto a = testing::write_sample(dir.path(), "a");
    const auto b = testing::build_sample(testing::offline_config(), "a");
    write_project(b, dir / "b");

    const auto loaded = load_manifest(dir / "a/manifest.json");
    CHECK(loaded == a.manifest);
    for (const auto& e : loaded.entries) {
        if (e.image) {
            CHECK(fs::is_regular_file(dir / "a" / e.image->path));
            const auto img = load_rgb(dir / "a" / e.image->path);
            CHECK(img.width == e.image->width);
            CHECK(img.height == e.image->height);
        }
        for (const auto& p : e.placements) {
            if (p.kind == AugmentationKind::Image) {
                REQUIRE(e.image);
                CHECK(p.asset_ref == e.image->path);
            }
        }
    }
    CHECK(serialize_manifest(a.manifest, true) == serialize_manifest(b.manifest, true));
    for (const auto& [i, img] : a.images) {
        const auto rel = image_asset_path(i);
        CHECK(testing::read_file(dir / "a" / rel) == testing::read_file(dir / "b" / rel));
    }
    // Nothing staged is left behind.
    for (const auto& entry : fs::directory_iterator(dir / "b")) {
        CHECK(entry.path().filename().string().rfind(".staging", 0) != 0);
        CHECK(entry.path().filename().string().rfind(".assets-old", 0) != 0);
    }
}

TEST_CASE("rewriting a project replaces its assets") {
    testing::TempDir dir;
    testing::write_file(dir / "p/assets/images/stale.png", "stale");
    auto cfg = testing::offline_config();
    cfg.threshold = 10;
    write_project(testing::build_sample(cfg, "p"), dir / "p");
    CHECK_FALSE(fs::exists(dir / "p/assets/images/stale.png"));
    CHECK(load_manifest(dir / "p/manifest.json").generation.threshold == 10);
}
