// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include "vidaug/config.hpp"
#include "vidaug/error.hpp"

#include <doctest.h>

using namespace vidaug;

TEST_CASE("config defaults validate") {
    PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.threshold == 5);
    CHECK(cfg.max_keyphrases == 3);
    CHECK(cfg.packing.salient_budget_fraction == doctest::Approx(0.02));
    CHECK(cfg.packing.shrink_factor == doctest::Approx(0.9));
    CHECK(cfg.packing.min_width_fraction == doctest::Approx(0.2));
    CHECK(cfg.packing.scan_stride == 8);
    CHECK(cfg.packing.margin == 8);
}

TEST_CASE("config file parsing") {
    const auto cfg = PipelineConfig::parse(
        "# comment line\n"
        "threshold = 7   # trailing comment\n"
        "\n"
        "  seed=42\n"
        "offline = yes\n"
        "packing.scan_stride = 2\n"
        "chat.endpoint = http://127.0.0.1:9/v1/chat/completions\n"
        "chat.timeout_ms = 1500\n"
        "image.width = 256\n");
    CHECK(cfg.threshold == 7);
    CHECK(cfg.seed == 42);
    CHECK(cfg.offline);
    CHECK(cfg.packing.scan_stride == 2);
    CHECK(cfg.chat.endpoint.url == "http://127.0.0.1:9/v1/chat/completions");
    CHECK(cfg.chat.endpoint.timeout == std::chrono::milliseconds(1500));
    CHECK(cfg.image.size.width == 256);
}

TEST_CASE("config errors") {
    CHECK_THROWS_WITH_AS(PipelineConfig::parse("colour = red\n"), doctest::Contains("unknown config key 'colour'"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(PipelineConfig::parse("\nthreshold\n"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("threshold = five\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("threshold = 11\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("threshold = 0\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("offline = maybe\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("packing.shrink_factor = 1.0\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("packing.scan_stride = 0\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("chat.endpoint = ftp://x/y\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("image.width = 10\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::parse("concurrency.requests = 0\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::load("/nonexistent/vidaug.conf"), ConfigError);
}

TEST_CASE("config digest tracks output-relevant settings only") {
    PipelineConfig a;
    PipelineConfig b;
    CHECK(a.digest() == b.digest());
    b.request_concurrency = 16;
    b.chat.endpoint.timeout = std::chrono::milliseconds(5);
    CHECK(a.digest() == b.digest());
    b.seed = 1;
    CHECK(a.digest() != b.digest());

    PipelineConfig offline;
    offline.offline = true;
    auto offline_with_url = offline;
    offline_with_url.chat.endpoint.url = "http://example.invalid/v1";
    CHECK(offline.digest() == offline_with_url.digest());

    const auto canon = a.canonical();
    CHECK(canon.back() == '\n');
    CHECK(canon.find("threshold=5\n") != std::string::npos);
}

TEST_CASE("config load from file") {
    testing::TempDir dir;
    testing::write_file(dir / "c.conf", "threshold = 3\nkeyphrases.max_k = 5\n");
    const auto cfg = PipelineConfig::load(dir / "c.conf");
    CHECK(cfg.threshold == 3);
    CHECK(cfg.max_keyphrases == 5);
}
