// SPDX-License-Identifier: Apache-2.0
// vidaug command line: process | serve | saliency

#include "vidaug/error.hpp"
#include "vidaug/pipeline.hpp"
#include "vidaug/saliency.hpp"
#include "vidaug/service.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;

struct ProcessArgs {
    fs::path frames;
    fs::path transcript;
    fs::path out;
    fs::path config;
    fs::path cache;
    bool no_cache = false;
    bool offline = false;
    std::optional<std::uint64_t> seed;
    std::optional<int> threshold;
    bool dump_masks = false;
    bool dump_packing = false;
    bool quiet = false;
};

struct ServeArgs {
    fs::path root;
    std::optional<int> port;
    std::string bind = "127.0.0.1";
    fs::path ui_dir;
    std::vector<std::string> cors;
    bool quiet = false;
};

struct SaliencyArgs {
    fs::path frame;
    fs::path out;
    int passes = vidaug::kDefaultMbdPasses;
    bool binarize = false;
};

int fail(int code, const std::string& message) {
    std::cerr << "vidaug: error: " << message << '\n';
    return code;
}

void link_frames(const fs::path& out, const fs::path& frames) {
    const fs::path media = out / "media";
    const fs::path link = media / "frames";
    fs::create_directories(media);
    std::error_code ec;
    if (fs::is_symlink(link, ec)) fs::remove(link);
    if (!fs::exists(link, ec)) fs::create_directory_symlink(fs::absolute(frames), link);
}

int run_process(const ProcessArgs& args) {
    const auto started = std::chrono::steady_clock::now();
    vidaug::PipelineConfig cfg;
    try {
        if (!args.config.empty()) {
            if (!fs::is_regular_file(args.config)) return fail(kExitConfig, "config file not found: " + args.config.string());
            cfg = vidaug::PipelineConfig::load(args.config);
        }
        if (args.offline) cfg.offline = true;
        if (args.seed) cfg.seed = *args.seed;
        if (args.threshold) cfg.threshold = *args.threshold;
        cfg.validate();
    } catch (const vidaug::Error& e) {
        return fail(kExitConfig, e.what());
    }

    if (!fs::is_regular_file(args.transcript)) return fail(kExitInput, "transcript not found: " + args.transcript.string());
    if (!fs::is_directory(args.frames)) return fail(kExitInput, "frames directory not found: " + args.frames.string());

    std::string project_id = cfg.project_id;
    if (project_id.empty()) project_id = fs::absolute(args.out).lexically_normal().filename().string();
    if (project_id.empty()) project_id = fs::absolute(args.out).lexically_normal().parent_path().filename().string();

    const auto progress = [&](std::string_view msg) {
        if (!args.quiet) std::cerr << "vidaug: " << msg << '\n';
    };

    try {
        vidaug::ProjectInput input{project_id, vidaug::FrameStore(args.frames, cfg.fps), args.transcript};
        auto backends = vidaug::make_backends(cfg);
        vidaug::AssetCache cache(args.no_cache ? fs::path{} : (args.cache.empty() ? args.out / ".cache" : args.cache));
        const auto result = vidaug::build_manifest(input, *backends.chat, *backends.images, cfg, cache, progress);
        vidaug::write_project(result, args.out, {args.dump_masks, args.dump_packing});
        link_frames(args.out, args.frames);

        std::size_t placements = 0;
        std::size_t skipped = 0;
        for (const auto& e : result.manifest.entries) {
            placements += e.placements.size();
            skipped += e.skip_reasons.size();
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
        const nlohmann::json summary = {
            {"status", "ok"},
            {"project_id", project_id},
            {"manifest", (args.out / "manifest.json").string()},
            {"segments", result.manifest.entries.size()},
            {"images", result.images.size()},
            {"placements", placements},
            {"skipped", skipped},
            {"cache_hits", cache.hits()},
            {"cache_misses", cache.misses()},
            {"elapsed_ms", elapsed.count()},
        };
        std::cout << summary.dump() << std::endl;
        return kExitOk;
    } catch (const vidaug::ConfigError& e) {
        return fail(kExitConfig, e.what());
    } catch (const std::exception& e) {
        return fail(kExitInput, e.what());
    }
}

int run_serve(ServeArgs args) {
    if (args.root.empty()) {
        if (const char* env = std::getenv("VIDAUG_ROOT"); env && *env) args.root = env;
    }
    if (!args.port) {
        if (const char* env = std::getenv("VIDAUG_PORT"); env && *env) {
            try {
                args.port = std::stoi(env);
            } catch (const std::exception&) {
                return fail(kExitConfig, std::string("VIDAUG_PORT is not a number: ") + env);
            }
        }
    }
    if (args.root.empty()) return fail(kExitConfig, "--root is required (or set VIDAUG_ROOT)");

    vidaug::ServiceConfig cfg;
    cfg.root = args.root;
    cfg.bind = args.bind;
    cfg.port = args.port.value_or(8080);
    cfg.ui_dir = args.ui_dir;
    cfg.cors_allow = args.cors;
    cfg.log = args.quiet ? nullptr : &std::cerr;

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    std::unique_ptr<vidaug::Service> service;
    try {
        service = std::make_unique<vidaug::Service>(cfg);
    } catch (const vidaug::Error& e) {
        return fail(kExitConfig, e.what());
    }
    try {
        service->bind();
    } catch (const vidaug::Error& e) {
        return fail(kExitInput, e.what());
    }

    std::jthread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        service->stop();
    });
    service->run();
    // Wake the waiter when the server stopped on its own.
    pthread_kill(waiter.native_handle(), SIGTERM);
    return kExitOk;
}

int run_saliency(const SaliencyArgs& args) {
    try {
        const auto gray = vidaug::load_gray(args.frame);
        const auto map = vidaug::mbd_transform(gray, args.passes);
        if (args.binarize) {
            vidaug::write_png(args.out, vidaug::binarize(map, vidaug::otsu_threshold(map)));
        } else {
            vidaug::write_png(args.out, static_cast<const vidaug::Plane<float>&>(map));
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return fail(kExitInput, e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Augment speech-rich video with imageability-driven visuals"};
    app.require_subcommand(1);

    ProcessArgs proc;
    auto* process = app.add_subcommand("process", "Build a project manifest from frames and a transcript");
    process->add_option("--frames", proc.frames, "Directory of frame_NNNNNN.png files (1 fps)")->required();
    process->add_option("--transcript", proc.transcript, "SRT or WebVTT transcript")->required();
    process->add_option("--out", proc.out, "Project output directory")->required();
    process->add_option("--config", proc.config, "key = value configuration file");
    process->add_option("--cache", proc.cache, "Asset cache directory (default: <out>/.cache)");
    process->add_flag("--no-cache", proc.no_cache, "Disable the on-disk asset cache");
    process->add_flag("--offline", proc.offline, "Use the offline stub and placeholder backends");
    process->add_option("--seed", proc.seed, "Base seed for image generation");
    process->add_option("--threshold", proc.threshold, "Imageability threshold (1..10)");
    process->add_flag("--dump-masks", proc.dump_masks, "Write cumulative saliency masks to <out>/debug/masks");
    process->add_flag("--dump-packing", proc.dump_packing, "Write packing overlays to <out>/debug/packing");
    process->add_flag("-q,--quiet", proc.quiet, "No progress output");

    ServeArgs srv;
    auto* serve = app.add_subcommand("serve", "Serve projects over HTTP");
    serve->add_option("--root", srv.root, "Directory containing one sub-directory per project");
    serve->add_option("--port", srv.port, "Port (default 8080, or VIDAUG_PORT)");
    serve->add_option("--bind", srv.bind, "Bind address")->capture_default_str();
    serve->add_option("--ui-dir", srv.ui_dir, "Static UI bundle served at /");
    serve->add_option("--cors", srv.cors, "Allowed CORS origin (repeatable, * for any)");
    serve->add_flag("-q,--quiet", srv.quiet, "No request logs");

    SaliencyArgs sal;
    auto* saliency = app.add_subcommand("saliency", "Compute the saliency map of one frame");
    saliency->add_option("--frame", sal.frame, "Input image")->required();
    saliency->add_option("--out", sal.out, "Output PNG")->required();
    saliency->add_option("--passes", sal.passes, "Raster scan passes")->capture_default_str()->check(CLI::Range(1, 64));
    saliency->add_flag("--binarize", sal.binarize, "Write the Otsu-binarized mask instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (*process) return run_process(proc);
    if (*serve) return run_serve(srv);
    return run_saliency(sal);
}
