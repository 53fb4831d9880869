// SPDX-License-Identifier: Apache-2.0
#include "vidaug/service.hpp"

#include "vidaug/error.hpp"
#include "vidaug/text.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <thread>

namespace vidaug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string content_type_for(const fs::path& path) {
    static const std::map<std::string, std::string> types = {
        {".png", "image/png"},        {".jpg", "image/jpeg"},     {".jpeg", "image/jpeg"},
        {".json", "application/json"}, {".mp4", "video/mp4"},      {".webm", "video/webm"},
        {".html", "text/html"},       {".js", "text/javascript"}, {".css", "text/css"},
        {".svg", "image/svg+xml"},    {".vtt", "text/vtt"},       {".srt", "text/plain"},
    };
    const auto it = types.find(ascii_lower(path.extension().string()));
    return it == types.end() ? "application/octet-stream" : it->second;
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(dump_canonical(body), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, {{"error", message}, {"status", status}});
}

}  // namespace

void ServiceConfig::validate() const {
    std::error_code ec;
    if (root.empty() || !fs::is_directory(root, ec)) throw ConfigError("project root is not a directory: " + root.string());
    fs::directory_iterator probe(root, ec);
    if (ec) throw ConfigError("project root is not readable: " + root.string());
    if (port < 0 || port > 65535) throw ConfigError("port out of range: " + std::to_string(port));
    if (!ui_dir.empty() && !fs::is_directory(ui_dir, ec)) throw ConfigError("ui directory not found: " + ui_dir.string());
}

bool is_safe_project_id(const std::string& id) {
    if (id.empty() || id.front() == '.') return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.';
    });
}

std::optional<fs::path> resolve_below(const fs::path& base, const std::string& rel) {
    if (rel.empty() || rel.find('\\') != std::string::npos || rel.find('\0') != std::string::npos) return std::nullopt;
    const fs::path p(rel);
    if (p.is_absolute() || p.has_root_name()) return std::nullopt;
    for (const auto& part : p) {
        if (part == "..") return std::nullopt;
    }
    const fs::path full = base / p.relative_path();
    std::error_code ec;
    if (!fs::is_regular_file(full, ec)) return std::nullopt;
    return full;
}

std::optional<int> parse_min_score(const std::string& value) {
    if (value.empty() || value.size() > 2) return std::nullopt;
    if (!std::all_of(value.begin(), value.end(), [](unsigned char c) { return std::isdigit(c); })) return std::nullopt;
    const int k = std::stoi(value);
    if (k < 1 || k > 10) return std::nullopt;
    return k;
}

ProjectStore::ProjectStore(fs::path root, std::chrono::milliseconds reload_interval)
    : root_(std::move(root)), interval_(reload_interval) {}

std::shared_ptr<const LoadedProject> ProjectStore::get(const std::string& id) {
    if (!is_safe_project_id(id)) return nullptr;
    const auto path = root_ / id / "manifest.json";
    const auto now = std::chrono::steady_clock::now();

    std::lock_guard lock(mutex_);
    auto it = slots_.find(id);
    if (it != slots_.end() && now - it->second.checked < interval_) return it->second.project;

    std::error_code ec;
    const auto mtime = fs::last_write_time(path, ec);
    const auto size = ec ? 0 : fs::file_size(path, ec);
    if (ec) {
        if (it != slots_.end()) slots_.erase(it);
        return nullptr;
    }
    if (it != slots_.end() && it->second.mtime == mtime && it->second.size == size) {
        it->second.checked = now;
        return it->second.project;
    }

    const std::string bytes = read_file(path);
    auto project = std::make_shared<LoadedProject>();
    project->id = id;
    project->manifest = parse_manifest(bytes);
    project->content_digest = hex64(fnv1a64(bytes));
    slots_[id] = Slot{project, mtime, size, now};
    return project;
}

std::vector<std::string> ProjectStore::list() const {
    std::vector<std::string> ids;
    std::error_code ec;
    for (fs::directory_iterator it(root_, ec), end; !ec && it != end; it.increment(ec)) {
        const auto id = it->path().filename().string();
        if (is_safe_project_id(id) && fs::is_regular_file(it->path() / "manifest.json")) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

Service::Service(ServiceConfig cfg)
    : cfg_(std::move(cfg)), store_(cfg_.root, cfg_.reload_interval), server_(std::make_unique<httplib::Server>()) {
    cfg_.validate();
    // The httplib default adds SO_REUSEPORT, which lets a second server share a busy port.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    install_routes();
}

Service::~Service() { stop(); }

int Service::bind() {
    if (cfg_.port == 0) {
        port_ = server_->bind_to_any_port(cfg_.bind);
        if (port_ < 0) throw Error("cannot bind " + cfg_.bind);
    } else {
        if (!server_->bind_to_port(cfg_.bind, cfg_.port)) {
            throw Error("cannot bind " + cfg_.bind + ":" + std::to_string(cfg_.port) + " (port already in use?)");
        }
        port_ = cfg_.port;
    }
    log_line(json{{"event", "listening"}, {"bind", cfg_.bind}, {"port", port_}, {"root", cfg_.root.string()}}.dump());
    return port_;
}

void Service::run() {
    running_ = true;
    if (!stop_requested_) server_->listen_after_bind();
    running_ = false;
}

void Service::stop() {
    stop_requested_ = true;
    if (!server_) return;
    // httplib ignores stop() until its accept loop is up.
    while (running_ && !server_->is_running()) std::this_thread::yield();
    server_->stop();
}

void Service::log_line(const std::string& line) const {
    if (!cfg_.log) return;
    std::lock_guard lock(log_mutex_);
    *cfg_.log << line << '\n' << std::flush;
}

void Service::install_routes() {
    auto& srv = *server_;

    // Resolves {id} and min_score, answering 400/404 itself. Returns nullptr
    // when the response has already been written.
    const auto load_view = [this](const httplib::Request& req, httplib::Response& res, int& min_score)
        -> std::shared_ptr<const LoadedProject> {
        min_score = 1;
        if (req.has_param("min_score")) {
            const auto k = parse_min_score(req.get_param_value("min_score"));
            if (!k) {
                send_error(res, 400, "min_score must be an integer in 1..10");
                return nullptr;
            }
            min_score = *k;
        }
        const std::string id = req.matches[1];
        auto project = store_.get(id);
        if (!project) send_error(res, 404, "unknown project: " + id);
        return project;
    };

    const auto cached = [](const httplib::Request& req, httplib::Response& res, const std::string& etag) {
        res.set_header("ETag", etag);
        res.set_header("Cache-Control", "no-cache");
        if (req.get_header_value("If-None-Match") == etag) {
            res.status = 304;
            return true;
        }
        return false;
    };

    const auto view_etag = [](const LoadedProject& p, int min_score, const char* kind) {
        return "\"" + p.manifest.generation.config_digest + "-" + p.content_digest + "-" + kind + "-" +
               std::to_string(min_score) + "\"";
    };

    srv.Get("/api/projects", [this](const httplib::Request&, httplib::Response& res) {
        json out = json::array();
        for (const auto& id : store_.list()) {
            const auto p = store_.get(id);
            if (!p) continue;
            out.push_back({{"project_id", id},
                           {"duration", static_cast<double>(p->manifest.duration.count()) / 1000.0},
                           {"segment_count", p->manifest.entries.size()}});
        }
        send_json(res, 200, out);
    });

    srv.Get(R"(/api/projects/([^/]+)/manifest)", [=](const httplib::Request& req, httplib::Response& res) {
        int k = 1;
        const auto p = load_view(req, res, k);
        if (!p || cached(req, res, view_etag(*p, k, "manifest"))) return;
        send_json(res, 200, to_json(filter_view(p->manifest, k)));
    });

    srv.Get(R"(/api/projects/([^/]+)/segments)", [=](const httplib::Request& req, httplib::Response& res) {
        int k = 1;
        const auto p = load_view(req, res, k);
        if (!p || cached(req, res, view_etag(*p, k, "segments"))) return;
        send_json(res, 200, to_json(filter_view(p->manifest, k)).at("entries"));
    });

    const auto serve_file = [this](const char* subdir) {
        return [this, subdir](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            if (!is_safe_project_id(id) || !fs::is_directory(cfg_.root / id)) {
                send_error(res, 404, "unknown project: " + id);
                return;
            }
            const auto path = resolve_below(cfg_.root / id / subdir, req.matches[2]);
            if (!path) {
                send_error(res, 404, "not found: " + std::string(req.matches[2]));
                return;
            }
            res.set_header("Accept-Ranges", "bytes");
            res.set_content(read_file(*path), content_type_for(*path));
        };
    };
    srv.Get(R"(/assets/([^/]+)/(.+))", serve_file("assets"));
    srv.Get(R"(/media/([^/]+)/(.+))", serve_file("media"));

    if (!cfg_.ui_dir.empty()) {
        srv.set_mount_point("/", cfg_.ui_dir.string());
    } else {
        srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"service", "vidaug"}, {"ui", false}});
        });
    }

    srv.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Methods", "GET, HEAD, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "If-None-Match, Range");
    });

    srv.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        const auto origin = req.get_header_value("Origin");
        if (origin.empty()) return;
        const auto& allow = cfg_.cors_allow;
        const bool any = std::find(allow.begin(), allow.end(), "*") != allow.end();
        if (any || std::find(allow.begin(), allow.end(), origin) != allow.end()) {
            res.set_header("Access-Control-Allow-Origin", any ? "*" : origin);
            res.set_header("Vary", "Origin");
            res.set_header("Access-Control-Expose-Headers", "ETag");
        }
    });

    srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty() && res.status != 304) send_error(res, res.status, httplib::status_message(res.status));
    });

    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        send_error(res, 500, message);
    });

    srv.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
        log_line(json{{"ts_ms", ms},
                      {"method", req.method},
                      {"path", req.path},
                      {"status", res.status},
                      {"bytes", res.body.size()}}
                     .dump());
    });
}

}  // namespace vidaug
