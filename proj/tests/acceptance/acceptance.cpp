// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include "generators.hpp"
#include "oracles.hpp"
#include "project.hpp"

#include "vidaug/error.hpp"
#include "vidaug/language.hpp"
#include "vidaug/manifest.hpp"
#include "vidaug/packing.hpp"
#include "vidaug/saliency.hpp"
#include "vidaug/transcript.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace vidaug;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr double kGoldenSeconds = 30.0;
constexpr double kMbdSeconds = 60.0;
constexpr int kMaskOracleSets = 100;
constexpr int kMaskPropertyCases = 1000;
constexpr int kMbdSamples = 200;
constexpr int kMbdLargeImages = 10;
constexpr int kOtsuHistograms = 200;
constexpr int kPackingCases = 300;
constexpr int kFilterCases = 500;
constexpr int kCorpusFiles = 20;

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome golden_determinism() {
    Outcome o;
    const auto golden_path = testing::source_dir() / "tests" / "golden" / "manifest.json";
    const auto golden = testing::read_file(golden_path);
    const auto t0 = Clock::now();
    const auto first = serialize_manifest(testing::build_sample(testing::offline_config(7)).manifest, true);
    const auto second = serialize_manifest(testing::build_sample(testing::offline_config(7)).manifest, true);
    const double elapsed = seconds_since(t0) / 2.0;
    if (golden.empty()) o.fail("golden file missing: " + golden_path.string());
    else if (first != golden) o.fail("manifest differs from the golden file");
    if (first != second) o.fail("two consecutive runs differ");
    if (elapsed >= kGoldenSeconds) o.fail("run took " + std::to_string(elapsed) + " s");
    if (o.ok) o.detail = "byte-identical, " + std::to_string(elapsed) + " s per run";
    return o;
}

Outcome cumulative_mask_oracle() {
    Outcome o;
    std::mt19937 rng(1001);
    for (int i = 0; i < kMaskOracleSets; ++i) {
        const int w = 1 + static_cast<int>(rng() % 48);
        const int h = 1 + static_cast<int>(rng() % 48);
        std::vector<BinaryMask> set;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < n; ++k) set.push_back(gen::noise_mask(rng, w, h, static_cast<unsigned>(rng() % 60)));
        if (cumulative_mask(set) != oracle::any_of(set)) o.fail("oracle mismatch in set " + std::to_string(i));
    }
    for (int i = 0; i < kMaskPropertyCases; ++i) {
        const int w = 1 + static_cast<int>(rng() % 24);
        const int h = 1 + static_cast<int>(rng() % 24);
        const auto a = gen::noise_mask(rng, w, h, 30);
        const auto b = gen::noise_mask(rng, w, h, 30);
        const auto c = gen::noise_mask(rng, w, h, 30);
        const auto u = [](std::vector<BinaryMask> ms) { return cumulative_mask(ms); };
        if (u({u({a, b}), c}) != u({a, u({b, c})})) o.fail("associativity, case " + std::to_string(i));
        if (u({a, b}) != u({b, a})) o.fail("commutativity, case " + std::to_string(i));
        if (u({a, a}) != a) o.fail("idempotence, case " + std::to_string(i));
    }
    if (o.ok) o.detail = std::to_string(kMaskOracleSets) + " oracle sets, " + std::to_string(kMaskPropertyCases) +
                         " property cases";
    return o;
}

Outcome mbd_correctness() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937 rng(1002);
    for (int i = 0; i < kMbdSamples; ++i) {
        const auto img = gen::gray(rng, 3, 3);
        const auto d = mbd_distances(img, 3);
        const auto exact = oracle::exhaustive_mbd(img);
        for (std::size_t k = 0; k < exact.size(); ++k) {
            if (d.data[k] != exact[k]) o.fail("3x3 sample " + std::to_string(i) + " differs from exhaustive MBD");
        }
    }
    for (int i = 0; i < kMbdLargeImages; ++i) {
        const auto img = gen::gray(rng, 64, 64);
        auto prev = mbd_distances(img, 1);
        for (int passes = 2; passes <= 6; ++passes) {
            const auto cur = mbd_distances(img, passes);
            for (std::size_t p = 0; p < cur.size(); ++p) {
                if (cur.data[p] > prev.data[p]) o.fail("distance grew with passes on image " + std::to_string(i));
            }
            for (int k = 0; k < 64; ++k) {
                if (cur.at(k, 0) != 0.0f || cur.at(k, 63) != 0.0f || cur.at(0, k) != 0.0f || cur.at(63, k) != 0.0f) {
                    o.fail("nonzero boundary pixel on image " + std::to_string(i));
                }
            }
            prev = cur;
        }
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= kMbdSeconds) o.fail("took " + std::to_string(elapsed) + " s");
    if (o.ok) o.detail = std::to_string(kMbdSamples) + " exact 3x3 matches, " + std::to_string(elapsed) + " s";
    return o;
}

Outcome otsu_oracle() {
    Outcome o;
    std::mt19937 rng(1003);
    for (int i = 0; i < kOtsuHistograms; ++i) {
        Histogram h{};
        const int populated = 1 + static_cast<int>(rng() % 40);
        for (int k = 0; k < populated; ++k) h[rng() % 256] += 1 + rng() % 100000;
        const int got = otsu_bin_threshold(h);
        const int want = oracle::exhaustive_otsu(h);
        if (got != want) {
            o.fail("histogram " + std::to_string(i) + ": " + std::to_string(got) + " vs " + std::to_string(want));
        }
    }
    if (o.ok) o.detail = std::to_string(kOtsuHistograms) + " exact matches";
    return o;
}

Outcome packing_oracle() {
    Outcome o;
    std::mt19937 rng(1004);
    const TextMetrics metrics{9};
    std::size_t placed = 0;
    for (int i = 0; i < kPackingCases; ++i) {
        const int w = 40 + static_cast<int>(rng() % 200);
        const int h = 30 + static_cast<int>(rng() % 120);
        const auto mask = gen::blobs(rng, w, h, static_cast<int>(rng() % 6));
        PlacementConfig cfg;
        cfg.salient_budget_fraction = static_cast<double>(rng() % 15) / 100.0;
        cfg.shrink_factor = 0.5 + static_cast<double>(rng() % 45) / 100.0;
        cfg.min_width_fraction = 0.05 + static_cast<double>(rng() % 40) / 100.0;
        cfg.scan_stride = 1 + static_cast<int>(rng() % 8);
        cfg.margin = static_cast<int>(rng() % 10);
        const int aw = 1 + static_cast<int>(rng() % 300);
        const int ah = 1 + static_cast<int>(rng() % 300);
        if (find_placement(mask, aw, ah, cfg) != oracle::brute_force_placement(mask, aw, ah, cfg)) {
            o.fail("find_placement differs from brute force in case " + std::to_string(i));
        }

        std::vector<Keyphrase> phrases;
        for (int k = 0; k < 3; ++k) phrases.push_back({0, std::string(3 + rng() % 9, 'k'), std::nullopt});
        const auto res = pack_segment(0, mask, ImageAsset{aw, ah, "img"}, phrases, cfg, metrics);
        for (std::size_t a = 0; a < res.placements.size(); ++a) {
            const auto& r = res.placements[a].rect;
            if (r.x < cfg.margin || r.y < cfg.margin || r.x + r.w > w - cfg.margin || r.y + r.h > h - cfg.margin) {
                o.fail("placement out of bounds in case " + std::to_string(i));
            }
            if (!(static_cast<double>(oracle::naive_count(mask, r)) < cfg.salient_budget_fraction * r.w * r.h)) {
                o.fail("salient budget exceeded in case " + std::to_string(i));
            }
            for (std::size_t b = a + 1; b < res.placements.size(); ++b) {
                if (oracle::rects_overlap(r, res.placements[b].rect)) o.fail("overlap in case " + std::to_string(i));
            }
            if (oracle::naive_count(res.mask, r) != static_cast<long>(r.w) * r.h) {
                o.fail("placement not committed in case " + std::to_string(i));
            }
        }
        placed += res.placements.size();
    }
    if (o.ok) o.detail = std::to_string(kPackingCases) + " oracle cases, " + std::to_string(placed) + " placements checked";
    return o;
}

Outcome filter_semantics() {
    Outcome o;
    const auto records_of = [](const std::vector<int>& scores) {
        std::vector<ImageabilityRecord> r;
        for (std::size_t i = 0; i < scores.size(); ++i) r.push_back({i, scores[i], "test", ""});
        return r;
    };
    const auto pinned = records_of({3, 5, 6, 9});
    if (filter_imageable(pinned, 5) != std::vector<std::size_t>{2, 3}) o.fail("[3,5,6,9] at 5 is not {6,9}");

    std::mt19937 rng(1005);
    for (int i = 0; i < kFilterCases; ++i) {
        std::vector<int> scores(rng() % 30);
        for (auto& s : scores) s = 1 + static_cast<int>(rng() % 10);
        const int t = 1 + static_cast<int>(rng() % 10);
        std::vector<std::size_t> want;
        for (std::size_t k = 0; k < scores.size(); ++k) {
            if (scores[k] > t) want.push_back(k);
        }
        if (filter_imageable(records_of(scores), t) != want) o.fail("filter_imageable case " + std::to_string(i));

        const auto m = gen::manifest(rng);
        const int a = 1 + static_cast<int>(rng() % 10);
        const int b = 1 + static_cast<int>(rng() % 10);
        if (filter_view(filter_view(m, a), b) != filter_view(m, std::max(a, b))) {
            o.fail("composition law, case " + std::to_string(i));
        }
        const auto v = filter_view(m, a);
        for (std::size_t k = 0; k < m.entries.size(); ++k) {
            const bool keep = m.entries[k].score >= a;
            if (keep && v.entries[k].placements != m.entries[k].placements) o.fail("view dropped a visible entry");
            if (!keep && !v.entries[k].placements.empty()) o.fail("view kept a hidden entry");
        }
    }
    if (o.ok) o.detail = "pinned example plus " + std::to_string(kFilterCases) + " random cases";
    return o;
}

Outcome parser_round_trip() {
    Outcome o;
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(testing::fixtures_dir() / "transcripts")) {
        const auto path = entry.path();
        if (path.extension() == ".json") continue;
        ++files;
        const auto name = path.filename().string();
        const auto t = load_transcript(path);
        const auto expected = json::parse(testing::read_file(path.string() + ".expected.json"));
        if (t.size() != expected.size()) {
            o.fail(name + ": cue count");
            continue;
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i].t_start.count() != expected[i]["t_start_ms"].get<long long>() ||
                t[i].t_end.count() != expected[i]["t_end_ms"].get<long long>() ||
                t[i].text != expected[i]["text"].get<std::string>()) {
                o.fail(name + ": cue " + std::to_string(i));
            }
        }
        if (parse_transcript(serialize(t)) != t) o.fail(name + ": round trip");
    }
    if (files != kCorpusFiles) o.fail("corpus has " + std::to_string(files) + " files");

    const auto dir = testing::fixtures_dir() / "malformed";
    const auto expected = json::parse(testing::read_file(dir / "expected.json"));
    const std::map<std::string, TranscriptError::Kind> kinds = {
        {"MalformedTimestamp", TranscriptError::Kind::MalformedTimestamp},
        {"InvertedInterval", TranscriptError::Kind::InvertedInterval},
        {"EmptyTranscript", TranscriptError::Kind::EmptyTranscript},
        {"MissingHeader", TranscriptError::Kind::MissingHeader},
    };
    for (const auto& [name, kind] : expected.items()) {
        try {
            load_transcript(dir / name);
            o.fail(name + ": parsed without error");
        } catch (const TranscriptError& e) {
            if (e.kind() != kinds.at(kind.get<std::string>())) o.fail(name + ": wrong error kind");
        }
    }
    if (o.ok) o.detail = std::to_string(files) + " corpus files, " + std::to_string(expected.size()) + " malformed";
    return o;
}

Outcome api_contract() {
    Outcome o;
    testing::TempDir root("vidaug-acceptance");
    const auto built = testing::write_sample(root.path());
    ServiceConfig cfg;
    cfg.root = root.path();
    testing::RunningService svc(cfg);
    auto& c = svc.client();

    auto res = c.Get("/api/projects");
    if (!res || res->status != 200) {
        o.fail("/api/projects did not answer 200");
        return o;
    }
    const auto list = json::parse(res->body);
    if (!list.is_array() || list.size() != 1 || list[0]["project_id"] != "sample" ||
        list[0]["segment_count"] != built.manifest.entries.size() || !list[0]["duration"].is_number()) {
        o.fail("/api/projects shape");
    }
    for (int k = 1; k <= 10; ++k) {
        const auto view = filter_view(built.manifest, k);
        const auto q = "?min_score=" + std::to_string(k);
        res = c.Get("/api/projects/sample/manifest" + q);
        if (!res || res->status != 200 || parse_manifest(res->body) != view) o.fail("manifest" + q + " != filter_view");
        res = c.Get("/api/projects/sample/segments" + q);
        if (!res || res->status != 200 || json::parse(res->body) != to_json(view)["entries"]) {
            o.fail("segments" + q + " != filter_view entries");
        }
    }
    for (const char* path : {"/api/projects/unknown/manifest", "/api/projects/unknown/segments"}) {
        res = c.Get(path);
        if (!res || res->status != 404 || !json::parse(res->body).contains("error")) o.fail(std::string(path) + " not 404");
    }
    if (o.ok) o.detail = "min_score 1..10 match filter_view, unknown project is 404";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"golden-determinism", golden_determinism},
        {"cumulative-mask-oracle", cumulative_mask_oracle},
        {"mbd-correctness", mbd_correctness},
        {"otsu-oracle", otsu_oracle},
        {"packing-oracle", packing_oracle},
        {"filter-semantics", filter_semantics},
        {"parser-round-trip", parser_round_trip},
        {"api-contract", api_contract},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += o.ok ? 0 : 1;
        std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
