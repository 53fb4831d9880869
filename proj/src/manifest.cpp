// SPDX-License-Identifier: Apache-2.0
#include "vidaug/manifest.hpp"

#include "vidaug/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace vidaug {

using nlohmann::json;

namespace {

json seconds(Millis t) { return static_cast<double>(t.count()) / 1000.0; }

std::string_view kind_name(AugmentationKind k) { return k == AugmentationKind::Image ? "image" : "keyphrase"; }

json style_json(const std::string& style) {
    const auto colon = style.find(':');
    if (colon == std::string::npos) return json::object();
    return {{style.substr(0, colon), style.substr(colon + 1)}};
}

std::string style_from_json(const json& j) {
    if (!j.is_object() || j.size() != 1) return {};
    return j.begin().key() + ":" + j.begin().value().get<std::string>();
}

void write_canonical(std::ostringstream& out, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ",\n";
                first = false;
                out << inner << json(it.key()).dump() << ": ";
                write_canonical(out, it.value(), indent + 1);
            }
            out << '\n' << pad << '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << ",\n";
                out << inner;
                write_canonical(out, j[i], indent + 1);
            }
            out << '\n' << pad << ']';
            return;
        }
        case json::value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3f", j.get<double>());
            out << buf;
            return;
        }
        default:
            out << j.dump(-1, ' ', false, json::error_handler_t::replace);
    }
}

[[noreturn]] void violation(const std::string& where, const std::string& what) {
    throw InvariantViolation(where + ": " + what);
}

std::string entry_name(std::size_t i) { return "entry " + std::to_string(i); }

template <class T>
T field(const json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        violation(where, std::string("missing or invalid field '") + key + "'");
    }
}

Millis millis_field(const json& j, const char* key, const std::string& where) {
    const auto v = field<double>(j, key, where);
    if (!std::isfinite(v)) violation(where, std::string("non-finite '") + key + "'");
    return Millis{std::llround(v * 1000.0)};
}

}  // namespace

std::string dump_canonical(const json& j) {
    std::ostringstream out;
    write_canonical(out, j, 0);
    out << '\n';
    return out.str();
}

json to_json(const Manifest& m, bool canonical) {
    json entries = json::array();
    for (const auto& e : m.entries) {
        json keyphrases = json::array();
        for (const auto& k : e.keyphrases) {
            keyphrases.push_back({{"phrase", k.phrase},
                                  {"span", k.span ? json::array({k.span->begin, k.span->end}) : json(nullptr)}});
        }
        json placements = json::array();
        for (const auto& p : e.placements) {
            placements.push_back({{"kind", kind_name(p.kind)},
                                  {"x", p.rect.x},
                                  {"y", p.rect.y},
                                  {"w", p.rect.w},
                                  {"h", p.rect.h},
                                  {"asset", p.asset_ref},
                                  {"style", style_json(p.style)}});
        }
        json skips = json::array();
        for (const auto& s : e.skip_reasons) skips.push_back({{"code", s.code}, {"detail", s.detail}});

        json entry = {
            {"index", e.index},
            {"t_start", seconds(e.t_start)},
            {"t_end", seconds(e.t_end)},
            {"text", e.text},
            {"score", e.score},
            {"score_backend", e.score_backend},
            {"keyphrases", std::move(keyphrases)},
            {"placements", std::move(placements)},
            {"skip_reasons", std::move(skips)},
        };
        if (e.prompt) entry["prompt"] = *e.prompt;
        if (e.image) {
            entry["image"] = {{"path", e.image->path},
                              {"width", e.image->width},
                              {"height", e.image->height},
                              {"seed", e.image->seed},
                              {"generator", e.image->generator}};
        }
        if (e.placements_hidden) entry["placements_hidden"] = true;
        entries.push_back(std::move(entry));
    }

    json generation = {
        {"summary_backend", m.generation.summary_backend},
        {"global_summary", m.generation.global_summary},
        {"chat_backend", m.generation.chat_backend},
        {"image_backend", m.generation.image_backend},
        {"seed", m.generation.seed},
        {"threshold", m.generation.threshold},
        {"config_digest", m.generation.config_digest},
    };
    if (!canonical && m.generation.timestamp) generation["timestamp"] = *m.generation.timestamp;

    json out = {
        {"schema_version", m.schema_version},
        {"project_id", m.project_id},
        {"frame_width", m.frame_width},
        {"frame_height", m.frame_height},
        {"duration", seconds(m.duration)},
        {"entries", std::move(entries)},
        {"generation", std::move(generation)},
    };
    if (m.view_min_score > 1) out["view"] = {{"min_score", m.view_min_score}};
    return out;
}

std::string serialize_manifest(const Manifest& m, bool canonical) { return dump_canonical(to_json(m, canonical)); }

Manifest manifest_from_json(const json& j) {
    if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
        throw SchemaMismatch("manifest has no schema_version");
    }
    const int version = j["schema_version"].get<int>();
    if (version != kManifestSchemaVersion) {
        throw SchemaMismatch("manifest schema_version " + std::to_string(version) + " is not supported (expected " +
                             std::to_string(kManifestSchemaVersion) + ")");
    }

    Manifest m;
    m.schema_version = version;
    m.project_id = field<std::string>(j, "project_id", "manifest");
    m.frame_width = field<int>(j, "frame_width", "manifest");
    m.frame_height = field<int>(j, "frame_height", "manifest");
    m.duration = millis_field(j, "duration", "manifest");
    if (j.contains("view")) m.view_min_score = field<int>(j["view"], "min_score", "manifest view");

    const auto& gen = j.contains("generation") ? j["generation"] : json::object();
    m.generation.summary_backend = field<std::string>(gen, "summary_backend", "generation");
    m.generation.global_summary = field<std::string>(gen, "global_summary", "generation");
    m.generation.chat_backend = field<std::string>(gen, "chat_backend", "generation");
    m.generation.image_backend = field<std::string>(gen, "image_backend", "generation");
    m.generation.seed = field<std::uint64_t>(gen, "seed", "generation");
    m.generation.threshold = field<int>(gen, "threshold", "generation");
    m.generation.config_digest = field<std::string>(gen, "config_digest", "generation");
    if (gen.contains("timestamp")) m.generation.timestamp = field<std::string>(gen, "timestamp", "generation");

    if (!j.contains("entries") || !j["entries"].is_array()) violation("manifest", "missing 'entries' array");
    for (std::size_t i = 0; i < j["entries"].size(); ++i) {
        const auto& je = j["entries"][i];
        const auto where = entry_name(i);
        ManifestEntry e;
        e.index = field<std::size_t>(je, "index", where);
        e.t_start = millis_field(je, "t_start", where);
        e.t_end = millis_field(je, "t_end", where);
        e.text = field<std::string>(je, "text", where);
        e.score = field<int>(je, "score", where);
        e.score_backend = field<std::string>(je, "score_backend", where);
        for (const auto& jk : field<json>(je, "keyphrases", where)) {
            Keyphrase k{e.index, field<std::string>(jk, "phrase", where + " keyphrase"), std::nullopt};
            if (jk.contains("span") && !jk["span"].is_null()) {
                const auto span = field<std::vector<std::size_t>>(jk, "span", where + " keyphrase");
                if (span.size() != 2) violation(where, "keyphrase span must have two offsets");
                k.span = CharSpan{span[0], span[1]};
            }
            e.keyphrases.push_back(std::move(k));
        }
        if (je.contains("prompt")) e.prompt = field<std::string>(je, "prompt", where);
        if (je.contains("image")) {
            const auto& ji = je["image"];
            e.image = ManifestImage{field<std::string>(ji, "path", where + " image"),
                                    field<int>(ji, "width", where + " image"),
                                    field<int>(ji, "height", where + " image"),
                                    field<std::uint64_t>(ji, "seed", where + " image"),
                                    field<std::string>(ji, "generator", where + " image")};
        }
        for (const auto& jp : field<json>(je, "placements", where)) {
            const auto pw = where + " placement";
            const auto kind = field<std::string>(jp, "kind", pw);
            if (kind != "image" && kind != "keyphrase") violation(pw, "unknown kind '" + kind + "'");
            PlacedAugmentation p;
            p.segment_index = e.index;
            p.kind = kind == "image" ? AugmentationKind::Image : AugmentationKind::Keyphrase;
            p.rect = {field<int>(jp, "x", pw), field<int>(jp, "y", pw), field<int>(jp, "w", pw), field<int>(jp, "h", pw)};
            p.asset_ref = field<std::string>(jp, "asset", pw);
            p.style = jp.contains("style") ? style_from_json(jp["style"]) : std::string{};
            e.placements.push_back(std::move(p));
        }
        for (const auto& js : field<json>(je, "skip_reasons", where)) {
            e.skip_reasons.push_back({field<std::string>(js, "code", where + " skip_reason"),
                                      field<std::string>(js, "detail", where + " skip_reason")});
        }
        if (je.contains("placements_hidden")) e.placements_hidden = field<bool>(je, "placements_hidden", where);
        m.entries.push_back(std::move(e));
    }
    return m;
}

void validate_manifest(const Manifest& m) {
    if (m.schema_version != kManifestSchemaVersion) throw SchemaMismatch("unsupported schema_version");
    if (m.frame_width <= 0 || m.frame_height <= 0) violation("manifest", "frame_width/frame_height must be positive");
    if (m.generation.threshold < 1 || m.generation.threshold > 10) violation("generation", "threshold outside 1..10");
    if (m.view_min_score < 1 || m.view_min_score > 10) violation("manifest view", "min_score outside 1..10");
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        const auto& e = m.entries[i];
        const auto where = entry_name(i);
        if (e.index != i) violation(where, "field 'index' is " + std::to_string(e.index) + ", entries must be ordered 0..n-1");
        if (!(e.t_start < e.t_end)) violation(where, "field 't_start' is not before 't_end'");
        if (e.score < 1 || e.score > 10) violation(where, "field 'score' outside 1..10");
        if (e.image && e.score <= m.generation.threshold) {
            violation(where, "field 'image' present but score does not exceed the threshold");
        }
        for (const auto& k : e.keyphrases) {
            if (k.span && (k.span->begin > k.span->end || k.span->end > e.text.size())) {
                violation(where, "field 'keyphrases' span outside the segment text");
            }
        }
        for (std::size_t a = 0; a < e.placements.size(); ++a) {
            const auto& r = e.placements[a].rect;
            if (!r.inside(m.frame_width, m.frame_height)) {
                violation(where, "field 'placements' rect (" + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
                                     std::to_string(r.w) + "," + std::to_string(r.h) + ") outside the " +
                                     std::to_string(m.frame_width) + "x" + std::to_string(m.frame_height) + " frame");
            }
            for (std::size_t b = a + 1; b < e.placements.size(); ++b) {
                if (r.intersects(e.placements[b].rect)) violation(where, "field 'placements' rects overlap");
            }
            if (e.placements[a].kind == AugmentationKind::Image && (!e.image || e.placements[a].asset_ref != e.image->path)) {
                violation(where, "field 'placements' image placement does not reference the entry image");
            }
        }
    }
}

Manifest parse_manifest(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvariantViolation(std::string("manifest is not valid JSON: ") + e.what());
    }
    auto m = manifest_from_json(j);
    validate_manifest(m);
    return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read manifest: " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_manifest(text);
}

Manifest filter_view(const Manifest& m, int min_score) {
    if (min_score < 1 || min_score > 10) throw Error("min_score must be within 1..10");
    Manifest view = m;
    view.view_min_score = std::max(m.view_min_score, min_score);
    for (auto& e : view.entries) {
        if (e.score < view.view_min_score) {
            e.placements.clear();
            e.placements_hidden = true;
        }
    }
    return view;
}

}  // namespace vidaug
