// SPDX-License-Identifier: Apache-2.0
#include "generators.hpp"

#include "vidaug/error.hpp"
#include "vidaug/manifest.hpp"

#include <doctest.h>

using namespace vidaug;
using nlohmann::json;

TEST_CASE("manifest json round trip") {
    std::mt19937 rng(41);
    for (int i = 0; i < 100; ++i) {
        const auto m = gen::manifest(rng);
        CHECK_NOTHROW(validate_manifest(m));
        CHECK(parse_manifest(serialize_manifest(m)) == m);
        const auto canon = parse_manifest(serialize_manifest(m, true));
        CHECK_FALSE(canon.generation.timestamp);
        auto expected = m;
        expected.generation.timestamp.reset();
        CHECK(canon == expected);
    }
}

TEST_CASE("canonical dump: sorted keys, fixed decimals, trailing newline") {
    const json j = {{"b", 1.5}, {"a", {{"z", 2}, {"y", "s"}}}, {"c", json::array()}, {"d", 3}};
    CHECK(dump_canonical(j) ==
          "{\n  \"a\": {\n    \"y\": \"s\",\n    \"z\": 2\n  },\n  \"b\": 1.500,\n  \"c\": [],\n  \"d\": 3\n}\n");
    CHECK(dump_canonical(json(0.1 + 0.2)) == "0.300\n");
}

TEST_CASE("canonical form omits only the timestamp") {
    std::mt19937 rng(42);
    const auto m = gen::manifest(rng);
    const auto full = to_json(m);
    auto canon = to_json(m, true);
    CHECK(full["generation"].contains("timestamp"));
    CHECK_FALSE(canon["generation"].contains("timestamp"));
    canon["generation"]["timestamp"] = full["generation"]["timestamp"];
    CHECK(canon == full);
}

TEST_CASE("schema version checks") {
    std::mt19937 rng(43);
    auto j = to_json(gen::manifest(rng));
    j["schema_version"] = 2;
    CHECK_THROWS_AS(manifest_from_json(j), SchemaMismatch);
    j.erase("schema_version");
    CHECK_THROWS_AS(manifest_from_json(j), SchemaMismatch);
    CHECK_THROWS_AS(parse_manifest("not json"), InvariantViolation);
}

TEST_CASE("invariant violations name the entry and field") {
    std::mt19937 rng(44);
    Manifest m;
    do {
        m = gen::manifest(rng);
    } while (m.entries.size() < 3);

    auto outside = m;
    outside.entries[2].placements = {{2, AugmentationKind::Keyphrase, Rect{300, 170, 40, 20}, "segment", "color:red"}};
    try {
        validate_manifest(outside);
        FAIL("accepted a rect outside the frame");
    } catch (const InvariantViolation& e) {
        const std::string what = e.what();
        CHECK(what.find("entry 2") != std::string::npos);
        CHECK(what.find("placements") != std::string::npos);
    }

    auto overlapping = m;
    overlapping.entries[1].placements = {{1, AugmentationKind::Keyphrase, Rect{10, 10, 20, 20}, "a", "color:red"},
                                         {1, AugmentationKind::Keyphrase, Rect{25, 25, 20, 20}, "b", "color:red"}};
    CHECK_THROWS_AS(validate_manifest(overlapping), InvariantViolation);

    auto bad_score = m;
    bad_score.entries[0].score = 11;
    CHECK_THROWS_WITH_AS(validate_manifest(bad_score), doctest::Contains("entry 0: field 'score'"), InvariantViolation);

    auto bad_image = m;
    bad_image.entries[0].score = bad_image.generation.threshold;
    bad_image.entries[0].image = ManifestImage{"assets/images/x.png", 1, 1, 0, "placeholder"};
    CHECK_THROWS_WITH_AS(validate_manifest(bad_image), doctest::Contains("field 'image'"), InvariantViolation);

    auto bad_order = m;
    std::swap(bad_order.entries[0], bad_order.entries[1]);
    CHECK_THROWS_WITH_AS(validate_manifest(bad_order), doctest::Contains("field 'index'"), InvariantViolation);

    auto bad_time = m;
    bad_time.entries[1].t_end = bad_time.entries[1].t_start;
    CHECK_THROWS_WITH_AS(validate_manifest(bad_time), doctest::Contains("t_start"), InvariantViolation);

    auto bad_span = m;
    bad_span.entries[0].keyphrases[0].span = CharSpan{0, 1000};
    CHECK_THROWS_AS(validate_manifest(bad_span), InvariantViolation);

    auto dangling = m;
    dangling.entries[2].image.reset();
    dangling.entries[2].prompt.reset();
    dangling.entries[2].placements = {{2, AugmentationKind::Image, Rect{10, 10, 20, 20}, "assets/images/x.png", "border:white"}};
    CHECK_THROWS_WITH_AS(validate_manifest(dangling), doctest::Contains("entry 2: field 'placements'"), InvariantViolation);

    auto missing = to_json(m);
    missing["entries"][1].erase("score");
    CHECK_THROWS_WITH_AS(manifest_from_json(missing), doctest::Contains("entry 1"), InvariantViolation);
}

TEST_CASE("filter view examples") {
    std::mt19937 rng(45);
    const auto m = gen::manifest(rng, 20);
    CHECK(filter_view(m, 1) == m);
    const auto top = filter_view(m, 10);
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        CHECK(top.entries[i].text == m.entries[i].text);
        CHECK(top.entries[i].score == m.entries[i].score);
        if (m.entries[i].score == 10) {
            CHECK(top.entries[i].placements == m.entries[i].placements);
        } else {
            CHECK(top.entries[i].placements.empty());
            CHECK(top.entries[i].placements_hidden);
        }
    }
    CHECK_THROWS_AS(filter_view(m, 0), Error);
    CHECK_THROWS_AS(filter_view(m, 11), Error);
}

TEST_CASE("filter view: partition oracle, composition and serialization") {
    std::mt19937 rng(46);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = gen::manifest(rng);
        const auto before = serialize_manifest(m);
        const int a = 1 + static_cast<int>(rng() % 10);
        const int b = 1 + static_cast<int>(rng() % 10);
        const auto va = filter_view(m, a);
        for (std::size_t i = 0; i < m.entries.size(); ++i) {
            const bool visible = m.entries[i].score >= a;
            CHECK(va.entries[i].placements_hidden == !visible);
            CHECK(va.entries[i].placements == (visible ? m.entries[i].placements : std::vector<PlacedAugmentation>{}));
        }
        CHECK(filter_view(va, b) == filter_view(m, std::max(a, b)));
        CHECK(parse_manifest(serialize_manifest(va)) == va);
        CHECK(serialize_manifest(m) == before);
    }
}
