// SPDX-License-Identifier: Apache-2.0
#include "vidaug/config.hpp"

#include "vidaug/error.hpp"
#include "vidaug/text.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>

namespace vidaug {

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    const auto v = ascii_lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::chrono::milliseconds parse_ms(std::string_view key, std::string_view value) {
    return std::chrono::milliseconds(parse_number<long long>(key, value));
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

PipelineConfig PipelineConfig::parse(std::string_view text) {
    PipelineConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim_view(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            cfg.set(trim_view(line.substr(0, eq)), trim_view(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text);
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
    const std::string v(value);
    if (key == "project_id") project_id = v;
    else if (key == "threshold") threshold = parse_number<int>(key, value);
    else if (key == "keyphrases.max_k") max_keyphrases = parse_number<std::size_t>(key, value);
    else if (key == "saliency.passes") mbd_passes = parse_number<int>(key, value);
    else if (key == "frames.fps") fps = parse_number<double>(key, value);
    else if (key == "packing.salient_budget_fraction") packing.salient_budget_fraction = parse_number<double>(key, value);
    else if (key == "packing.shrink_factor") packing.shrink_factor = parse_number<double>(key, value);
    else if (key == "packing.min_width_fraction") packing.min_width_fraction = parse_number<double>(key, value);
    else if (key == "packing.scan_stride") packing.scan_stride = parse_number<int>(key, value);
    else if (key == "packing.margin") packing.margin = parse_number<int>(key, value);
    else if (key == "packing.font_point_size") font_point_size = parse_number<int>(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "offline") offline = parse_bool(key, value);
    else if (key == "lexicon.path") lexicon_path = v;
    else if (key == "chat.endpoint") chat.endpoint.url = v;
    else if (key == "chat.model") chat.model = v;
    else if (key == "chat.temperature") chat.temperature = parse_number<double>(key, value);
    else if (key == "chat.response_path") chat.response_path = v;
    else if (key == "chat.timeout_ms") chat.endpoint.timeout = parse_ms(key, value);
    else if (key == "chat.retries") chat.endpoint.retries = parse_number<int>(key, value);
    else if (key == "chat.backoff_ms") chat.endpoint.backoff = parse_ms(key, value);
    else if (key == "image.endpoint") image.endpoint.url = v;
    else if (key == "image.width") image.size.width = parse_number<int>(key, value);
    else if (key == "image.height") image.size.height = parse_number<int>(key, value);
    else if (key == "image.response_path") image.response_path = v;
    else if (key == "image.timeout_ms") image.endpoint.timeout = parse_ms(key, value);
    else if (key == "image.retries") image.endpoint.retries = parse_number<int>(key, value);
    else if (key == "image.backoff_ms") image.endpoint.backoff = parse_ms(key, value);
    else if (key == "concurrency.requests") request_concurrency = parse_number<std::size_t>(key, value);
    else if (key == "concurrency.workers") workers = parse_number<std::size_t>(key, value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void PipelineConfig::validate() const {
    if (threshold < 1 || threshold > 10) throw ConfigError("threshold must be within 1..10");
    if (max_keyphrases > 32) throw ConfigError("keyphrases.max_k must be at most 32");
    if (mbd_passes < 1) throw ConfigError("saliency.passes must be at least 1");
    if (!(fps > 0.0)) throw ConfigError("frames.fps must be positive");
    if (font_point_size < 0) throw ConfigError("packing.font_point_size must not be negative");
    packing.validate();
    if (image.size.width < 64 || image.size.height < 64) throw ConfigError("image size must be at least 64x64");
    if (chat.endpoint.retries < 0 || image.endpoint.retries < 0) throw ConfigError("retries must not be negative");
    if (request_concurrency < 1) throw ConfigError("concurrency.requests must be at least 1");
    if (!chat.endpoint.url.empty()) split_url(chat.endpoint.url);
    if (!image.endpoint.url.empty()) split_url(image.endpoint.url);
}

std::string PipelineConfig::canonical() const {
    // Concurrency and timeouts never change the output and are left out.
    std::map<std::string, std::string> kv = {
        {"project_id", project_id},
        {"threshold", std::to_string(threshold)},
        {"keyphrases.max_k", std::to_string(max_keyphrases)},
        {"saliency.passes", std::to_string(mbd_passes)},
        {"frames.fps", fmt_double(fps)},
        {"packing.salient_budget_fraction", fmt_double(packing.salient_budget_fraction)},
        {"packing.shrink_factor", fmt_double(packing.shrink_factor)},
        {"packing.min_width_fraction", fmt_double(packing.min_width_fraction)},
        {"packing.scan_stride", std::to_string(packing.scan_stride)},
        {"packing.margin", std::to_string(packing.margin)},
        {"packing.font_point_size", std::to_string(font_point_size)},
        {"seed", std::to_string(seed)},
        {"offline", offline ? "true" : "false"},
        {"lexicon.path", lexicon_path},
        {"chat.endpoint", offline ? "" : chat.endpoint.url},
        {"chat.model", chat.model},
        {"chat.temperature", fmt_double(chat.temperature)},
        {"image.endpoint", offline ? "" : image.endpoint.url},
        {"image.width", std::to_string(image.size.width)},
        {"image.height", std::to_string(image.size.height)},
    };
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::string PipelineConfig::digest() const { return hex64(fnv1a64(canonical())); }

}  // namespace vidaug
