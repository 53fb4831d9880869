// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/image.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace vidaug {

/// Connection settings shared by the remote backends.
struct HttpEndpoint {
    std::string url;  // http://host[:port]/path
    std::chrono::milliseconds timeout{30000};
    int retries = 2;  // extra attempts after the first
    std::chrono::milliseconds backoff{250};
};

/// Text completion. Implementations must be safe to share across threads.
/// complete() throws BackendUnavailable when no completion can be produced.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    virtual std::string id() const = 0;
};

inline constexpr std::string_view kOfflineStubId = "offline-stub";

/// Never answers; every caller takes its deterministic offline path.
class OfflineChatBackend final : public ChatBackend {
public:
    std::string complete(const std::string& prompt) override;
    std::string id() const override { return std::string(kOfflineStubId); }
};

struct ChatSettings {
    HttpEndpoint endpoint;
    std::string model = "llama-3.1-8b-instruct";
    double temperature = 0.0;
    /// JSON pointer to the completion text in the response body.
    std::string response_path = "/choices/0/message/content";
};

/// POSTs {model, messages:[{role:"user", content}], temperature}.
class RemoteChatBackend final : public ChatBackend {
public:
    explicit RemoteChatBackend(ChatSettings settings);
    std::string complete(const std::string& prompt) override;
    std::string id() const override { return "remote:" + settings_.model; }

private:
    ChatSettings settings_;
};

/// Adapter for tests and embedding: wraps a callable.
class FunctionChatBackend final : public ChatBackend {
public:
    FunctionChatBackend(std::string id, std::function<std::string(const std::string&)> fn)
        : id_(std::move(id)), fn_(std::move(fn)) {}
    std::string complete(const std::string& prompt) override {
        ++calls_;
        return fn_(prompt);
    }
    std::string id() const override { return id_; }
    int calls() const noexcept { return calls_; }

private:
    std::string id_;
    std::function<std::string(const std::string&)> fn_;
    std::atomic<int> calls_{0};
};

struct ImageSize {
    int width = 512;
    int height = 512;
};

/// Text-to-image generation. generate() throws BackendUnavailable on failure.
class ImageBackend {
public:
    virtual ~ImageBackend() = default;
    virtual RgbImage generate(const std::string& prompt, std::uint64_t seed, ImageSize size) = 0;
    virtual std::string id() const = 0;
    virtual ImageSize default_size() const = 0;
};

inline constexpr std::string_view kPlaceholderId = "placeholder";

class PlaceholderImageBackend final : public ImageBackend {
public:
    explicit PlaceholderImageBackend(ImageSize size = {}) : size_(size) {}
    RgbImage generate(const std::string& prompt, std::uint64_t seed, ImageSize size) override;
    std::string id() const override { return std::string(kPlaceholderId); }
    ImageSize default_size() const override { return size_; }

private:
    ImageSize size_;
};

struct ImageSettings {
    HttpEndpoint endpoint;
    ImageSize size;
    /// JSON pointer to the base64 image payload in the response body.
    std::string response_path = "/image";
};

/// POSTs {prompt, width, height, seed}; expects base64 PNG/JPEG in the reply.
class RemoteImageBackend final : public ImageBackend {
public:
    explicit RemoteImageBackend(ImageSettings settings);
    RgbImage generate(const std::string& prompt, std::uint64_t seed, ImageSize size) override;
    std::string id() const override { return "remote-image"; }
    ImageSize default_size() const override { return settings_.size; }

private:
    ImageSettings settings_;
};

/// Splits "http://host:port/path" into ("http://host:port", "/path").
/// Throws ConfigError for anything that is not an http(s) URL.
std::pair<std::string, std::string> split_url(std::string_view url);

}  // namespace vidaug
