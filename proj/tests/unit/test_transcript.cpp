// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include "vidaug/error.hpp"
#include "vidaug/transcript.hpp"

#include <doctest.h>
#include <json.hpp>

#include <random>

using namespace vidaug;
using namespace std::chrono_literals;

namespace {

TranscriptError::Kind kind_of(std::string_view text) {
    try {
        parse_transcript(text);
    } catch (const TranscriptError& e) {
        return e.kind();
    }
    FAIL("expected a TranscriptError");
    return {};
}

TranscriptError::Kind kind_from_name(const std::string& name) {
    if (name == "MalformedTimestamp") return TranscriptError::Kind::MalformedTimestamp;
    if (name == "InvertedInterval") return TranscriptError::Kind::InvertedInterval;
    if (name == "EmptyTranscript") return TranscriptError::Kind::EmptyTranscript;
    if (name == "MissingHeader") return TranscriptError::Kind::MissingHeader;
    throw std::runtime_error("unknown kind " + name);
}

}  // namespace

TEST_CASE("srt: two cues") {
    const auto t = parse_srt("1\n00:00:01,000 --> 00:00:02,500\nHello\n\n2\n00:00:03,000 --> 00:00:04,000\nWorld\n");
    REQUIRE(t.size() == 2);
    CHECK(t[0] == TranscriptSegment{0, 1000ms, 2500ms, "Hello"});
    CHECK(t[1] == TranscriptSegment{1, 3000ms, 4000ms, "World"});
    CHECK(t.source_format == SubtitleFormat::SRT);
    CHECK(t.duration_seconds() == doctest::Approx(4.0));
}

TEST_CASE("vtt: header, cue settings and speaker tags") {
    const auto t = parse_transcript(
        "WEBVTT\n\n00:01.000 --> 00:02.000 align:start\n<v Ann>Hi <b>there</b>\n\nNOTE skip me\n\n"
        "00:00:02.000 --> 00:00:03.000\nBye\n");
    REQUIRE(t.size() == 2);
    CHECK(t[0].text == "Hi there");
    CHECK(t[0].t_start == 1000ms);
    CHECK(t[1].t_end == 3000ms);
    CHECK(t.source_format == SubtitleFormat::WebVTT);
}

TEST_CASE("malformed timestamp reports line and content") {
    try {
        parse_srt("1\n00:00:01,000 --> 00:00:02,000\nfine\n\n2\n00:0x:01,000 --> 00:00:02,000\nbad\n");
        FAIL("no error");
    } catch (const TranscriptError& e) {
        CHECK(e.kind() == TranscriptError::Kind::MalformedTimestamp);
        CHECK(e.line() == 6);
        CHECK(e.content() == "00:0x:01,000 --> 00:00:02,000");
    }
}

TEST_CASE("error kinds") {
    CHECK(kind_of("") == TranscriptError::Kind::EmptyTranscript);
    CHECK(kind_of("1\n00:00:02,000 --> 00:00:01,000\nx\n") == TranscriptError::Kind::InvertedInterval);
    CHECK(kind_of("1\n00:00:02,000 --> 00:00:02,000\nx\n") == TranscriptError::Kind::InvertedInterval);
    CHECK(kind_of("1\n00:00:01 --> 00:00:02\nx\n") == TranscriptError::Kind::MalformedTimestamp);
    CHECK_THROWS_AS(parse_vtt("1\n00:00:01.000 --> 00:00:02.000\nx\n"), TranscriptError);
    CHECK_THROWS_AS(load_transcript("/nonexistent/file.srt"), Error);
}

TEST_CASE("tag stripping keeps literal angle brackets") {
    CHECK(clean_cue_text("<i>a</i> <b>b</b>") == "a b");
    CHECK(clean_cue_text("3 < 5 and 7 > 2") == "3 < 5 and 7 > 2");
    CHECK(clean_cue_text("a <3 b") == "a <3 b");
    CHECK(clean_cue_text("<<i>i>x") == "x");
    CHECK(clean_cue_text("  a\t\tb  \n c ") == "a b c");
    CHECK(clean_cue_text("<00:00:01.000>x") == "x");
}

TEST_CASE("normalize sorts, drops empty cues and is idempotent") {
    Transcript t;
    t.segments = {{7, 3000ms, 4000ms, " c "}, {3, 1000ms, 5000ms, "<i></i>"}, {1, 0ms, 1000ms, "a"},
                  {9, 3000ms, 3500ms, "b"}};
    const auto n = normalize(t);
    REQUIRE(n.size() == 3);
    CHECK(n[0].text == "a");
    CHECK(n[1].text == "b");
    CHECK(n[2].text == "c");
    for (std::size_t i = 0; i < n.size(); ++i) CHECK(n[i].index == i);
    CHECK(normalize(n) == n);
}

TEST_CASE("timestamp formatting") {
    CHECK(format_srt_timestamp(0ms) == "00:00:00,000");
    CHECK(format_srt_timestamp(3'723'004ms) == "01:02:03,004");
    CHECK(format_srt_timestamp(360'000'000ms) == "100:00:00,000");
}

TEST_CASE("corpus files match their expected cues and round-trip") {
    const auto dir = testing::fixtures_dir() / "transcripts";
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto path = entry.path();
        if (path.extension() == ".json") continue;
        ++files;
        CAPTURE(path.filename().string());
        const auto t = load_transcript(path);
        const auto expected = nlohmann::json::parse(testing::read_file(path.string() + ".expected.json"));
        REQUIRE(t.size() == expected.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(t[i].index == i);
            CHECK(t[i].t_start.count() == expected[i]["t_start_ms"].get<long long>());
            CHECK(t[i].t_end.count() == expected[i]["t_end_ms"].get<long long>());
            CHECK(t[i].text == expected[i]["text"].get<std::string>());
        }
        CHECK(parse_transcript(serialize(t)) == t);
    }
    CHECK(files == 20);
}

TEST_CASE("malformed fixtures raise the named errors") {
    const auto dir = testing::fixtures_dir() / "malformed";
    const auto expected = nlohmann::json::parse(testing::read_file(dir / "expected.json"));
    CHECK(expected.size() >= 4);
    for (const auto& [name, kind] : expected.items()) {
        CAPTURE(name);
        try {
            load_transcript(dir / name);
            FAIL("parsed without error");
        } catch (const TranscriptError& e) {
            CHECK(e.kind() == kind_from_name(kind.get<std::string>()));
        }
    }
}

TEST_CASE("property: serialize/parse round trip on random transcripts") {
    std::mt19937 rng(12345);
    const char* words[] = {"alpha", "beta", "gamma", "delta", "<", ">", "&", "x<y", "ünïcödé", "10", "--"};
    for (int trial = 0; trial < 200; ++trial) {
        Transcript t;
        t.source_format = trial % 2 ? SubtitleFormat::WebVTT : SubtitleFormat::SRT;
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            const long long a = rng() % 5'000'000;
            const long long b = a + 1 + rng() % 10'000;
            std::string text;
            const int nw = 1 + static_cast<int>(rng() % 6);
            for (int k = 0; k < nw; ++k) {
                std::string w = words[rng() % std::size(words)];
                // SRT has no escaping, so markup-looking words only go to VTT.
                if (t.source_format == SubtitleFormat::SRT && w.find_first_of("<>") != std::string::npos) w = "plain";
                text += (k ? " " : "") + w;
            }
            t.segments.push_back({0, Millis{a}, Millis{b}, text});
        }
        t = normalize(t);
        CAPTURE(serialize(t));
        CHECK(parse_transcript(serialize(t)) == t);
    }
}
