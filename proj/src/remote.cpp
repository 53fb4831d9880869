// SPDX-License-Identifier: Apache-2.0
#include "vidaug/backends.hpp"

#include "vidaug/error.hpp"
#include "vidaug/imagegen.hpp"
#include "vidaug/text.hpp"

#include <httplib.h>
#include <json.hpp>

#include <thread>

namespace vidaug {

using nlohmann::json;

namespace {

bool retryable(int status) { return status == 408 || status == 429 || status >= 500; }

// POSTs a JSON body with retries and returns the parsed JSON response.
json post_json(const HttpEndpoint& ep, const json& body) {
    const auto [base, path] = split_url(ep.url);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(ep.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(ep.timeout - seconds);
    const std::string payload = body.dump();

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= std::max(0, ep.retries); ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(ep.backoff * (1 << (attempt - 1)));
        httplib::Client client(base);
        client.set_connection_timeout(seconds.count(), static_cast<time_t>(micros.count()));
        client.set_read_timeout(seconds.count(), static_cast<time_t>(micros.count()));
        client.set_write_timeout(seconds.count(), static_cast<time_t>(micros.count()));
        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            if (!retryable(res->status)) break;
            continue;
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            last_error = std::string("invalid JSON response: ") + e.what();
        }
    }
    throw BackendUnavailable(ep.url + ": " + last_error);
}

const json& at_pointer(const json& doc, const std::string& pointer, const std::string& url) {
    try {
        return doc.at(json::json_pointer(pointer));
    } catch (const json::exception&) {
        throw BackendUnavailable(url + ": response has no value at " + pointer);
    }
}

}  // namespace

std::pair<std::string, std::string> split_url(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) throw ConfigError("not a URL: " + std::string(url));
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw ConfigError("unsupported URL scheme: " + std::string(url));
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string_view::npos) return {std::string(url), "/"};
    return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
}

std::string OfflineChatBackend::complete(const std::string&) {
    throw BackendUnavailable("offline mode");
}

RemoteChatBackend::RemoteChatBackend(ChatSettings settings) : settings_(std::move(settings)) {
    split_url(settings_.endpoint.url);
}

std::string RemoteChatBackend::complete(const std::string& prompt) {
    const json body = {
        {"model", settings_.model},
        {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", settings_.temperature},
    };
    const json reply = post_json(settings_.endpoint, body);
    const auto& text = at_pointer(reply, settings_.response_path, settings_.endpoint.url);
    if (!text.is_string()) throw BackendUnavailable(settings_.endpoint.url + ": completion is not a string");
    return text.get<std::string>();
}

RgbImage PlaceholderImageBackend::generate(const std::string& prompt, std::uint64_t seed, ImageSize size) {
    return placeholder_image(prompt, seed, size.width, size.height);
}

RemoteImageBackend::RemoteImageBackend(ImageSettings settings) : settings_(std::move(settings)) {
    split_url(settings_.endpoint.url);
}

RgbImage RemoteImageBackend::generate(const std::string& prompt, std::uint64_t seed, ImageSize size) {
    const json body = {{"prompt", prompt}, {"width", size.width}, {"height", size.height}, {"seed", seed}};
    const json reply = post_json(settings_.endpoint, body);
    const auto& payload = at_pointer(reply, settings_.response_path, settings_.endpoint.url);
    if (!payload.is_string()) throw BackendUnavailable(settings_.endpoint.url + ": image payload is not a string");
    try {
        std::string encoded = payload.get<std::string>();
        // Tolerate data URLs.
        if (const auto comma = encoded.find(','); encoded.rfind("data:", 0) == 0 && comma != std::string::npos) {
            encoded.erase(0, comma + 1);
        }
        return decode_image(base64_decode(encoded));
    } catch (const Error& e) {
        throw BackendUnavailable(settings_.endpoint.url + ": " + e.what());
    }
}

}  // namespace vidaug
