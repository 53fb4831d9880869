// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/manifest.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace vidaug {

struct ServiceConfig {
    std::filesystem::path root;  // one sub-directory per project, each with manifest.json
    std::string bind = "127.0.0.1";
    int port = 8080;  // 0: any free port
    std::vector<std::string> cors_allow;  // origins; "*" allows any
    std::filesystem::path ui_dir;         // static bundle mounted at "/", optional
    std::chrono::milliseconds reload_interval{2000};
    std::ostream* log = nullptr;  // JSON lines; nullptr disables logging

    /// Throws ConfigError when root is not a readable directory.
    void validate() const;
};

struct LoadedProject {
    std::string id;
    Manifest manifest;
    std::string content_digest;  // hex FNV-1a of manifest.json bytes
};

/// Caches parsed manifests by project id and reloads a project when its
/// manifest.json mtime or size changes. Each file is stat'ed at most once
/// per reload interval.
class ProjectStore {
public:
    ProjectStore(std::filesystem::path root, std::chrono::milliseconds reload_interval);

    /// nullptr for unknown ids and ids that are not plain directory names.
    /// Throws when the manifest exists but does not parse.
    std::shared_ptr<const LoadedProject> get(const std::string& id);

    /// Ids of every sub-directory holding a manifest.json, sorted.
    std::vector<std::string> list() const;

    const std::filesystem::path& root() const noexcept { return root_; }

private:
    struct Slot {
        std::shared_ptr<const LoadedProject> project;
        std::filesystem::file_time_type mtime{};
        std::uintmax_t size = 0;
        std::chrono::steady_clock::time_point checked{};
    };

    std::filesystem::path root_;
    std::chrono::milliseconds interval_;
    std::mutex mutex_;
    std::map<std::string, Slot> slots_;
};

/// True when id is usable as a single path component.
bool is_safe_project_id(const std::string& id);

/// Resolves a request path below base; nullopt for traversal attempts,
/// absolute paths and missing files.
std::optional<std::filesystem::path> resolve_below(const std::filesystem::path& base, const std::string& rel);

/// Parses the min_score query value. nullopt unless it is an integer in 1..10.
std::optional<int> parse_min_score(const std::string& value);

/// Read-only HTTP API over a directory of built projects:
///   GET /api/projects
///   GET /api/projects/{id}/manifest?min_score=k
///   GET /api/projects/{id}/segments?min_score=k
///   GET /assets/{id}/{path}
///   GET /media/{id}/{path}
///   GET /  (static UI, when ui_dir is set)
class Service {
public:
    explicit Service(ServiceConfig cfg);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds the listening socket and returns the bound port. Throws Error
    /// when the address is unavailable (e.g. port in use).
    int bind();

    /// Blocks serving requests until stop(). Requires bind().
    void run();

    /// Safe from any thread, also before run() has started.
    void stop();

    int port() const noexcept { return port_; }

private:
    void install_routes();
    void log_line(const std::string& line) const;

    ServiceConfig cfg_;
    ProjectStore store_;
    std::unique_ptr<httplib::Server> server_;
    int port_ = 0;
    std::atomic<bool> running_{false};
    std::atomic<bool> stop_requested_{false};
    mutable std::mutex log_mutex_;
};

}  // namespace vidaug
