// SPDX-License-Identifier: Apache-2.0
#include "vidaug/error.hpp"
#include "vidaug/language.hpp"
#include "vidaug/manifest.hpp"
#include "vidaug/packing.hpp"
#include "vidaug/pipeline.hpp"
#include "vidaug/saliency.hpp"
#include "vidaug/transcript.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

namespace py = pybind11;
using namespace vidaug;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using MaskArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

GrayImage to_gray(const FloatArray& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    GrayImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::memcpy(img.data.data(), a.data(), img.size() * sizeof(float));
    return img;
}

BinaryMask to_mask(const MaskArray& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    BinaryMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    const bool* src = a.data();
    for (std::size_t i = 0; i < m.size(); ++i) m.data[i] = src[i] ? 1 : 0;
    return m;
}

FloatArray from_plane(const Plane<float>& p) {
    FloatArray out({p.height, p.width});
    std::memcpy(out.mutable_data(), p.data.data(), p.size() * sizeof(float));
    return out;
}

MaskArray from_mask(const BinaryMask& m) {
    MaskArray out({m.height, m.width});
    bool* dst = out.mutable_data();
    for (std::size_t i = 0; i < m.size(); ++i) dst[i] = m.data[i] != 0;
    return out;
}

py::dict segment_dict(const TranscriptSegment& s) {
    py::dict d;
    d["index"] = s.index;
    d["t_start"] = to_seconds(s.t_start);
    d["t_end"] = to_seconds(s.t_end);
    d["text"] = s.text;
    return d;
}

py::list segments_list(const Transcript& t) {
    py::list out;
    for (const auto& s : t.segments) out.append(segment_dict(s));
    return out;
}

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_vidaug, m) {
    m.doc() = "Imageability-driven augmentation of speech-rich video";

    py::register_exception<Error>(m, "VidaugError", PyExc_RuntimeError);
    py::register_exception<TranscriptError>(m, "TranscriptError", m.attr("VidaugError").ptr());
    py::register_exception<ConfigError>(m, "ConfigError", m.attr("VidaugError").ptr());
    py::register_exception<SchemaMismatch>(m, "SchemaMismatch", m.attr("VidaugError").ptr());
    py::register_exception<InvariantViolation>(m, "InvariantViolation", m.attr("VidaugError").ptr());
    py::register_exception<UnparseableScore>(m, "UnparseableScore", m.attr("VidaugError").ptr());

    m.def("parse_transcript", [](std::string_view text) { return segments_list(parse_transcript(text)); },
          py::arg("text"), "Parse SRT or WebVTT text into a list of segment dicts.");
    m.def("load_transcript", [](const std::filesystem::path& p) { return segments_list(load_transcript(p)); },
          py::arg("path"));
    m.def("roundtrip_srt", [](std::string_view text) { return serialize_srt(parse_transcript(text)); },
          py::arg("text"), "Parse and re-serialize as SRT.");

    m.def("mbd_transform", [](const FloatArray& img, int passes) { return from_plane(mbd_transform(to_gray(img), passes)); },
          py::arg("image"), py::arg("passes") = kDefaultMbdPasses,
          "Normalized minimum barrier distance map of a [0,1] grayscale array.");
    m.def("otsu_threshold",
          [](const FloatArray& map) {
              const auto g = to_gray(map);
              SaliencyMap s(g.width, g.height);
              s.data = g.data;
              return otsu_threshold(s);
          },
          py::arg("saliency"));
    m.def("frame_mask", [](const FloatArray& img, int passes) { return from_mask(frame_mask(to_gray(img), passes)); },
          py::arg("image"), py::arg("passes") = kDefaultMbdPasses);
    m.def("cumulative_mask",
          [](const std::vector<MaskArray>& masks) {
              std::vector<BinaryMask> ms;
              for (const auto& a : masks) ms.push_back(to_mask(a));
              return from_mask(cumulative_mask(ms));
          },
          py::arg("masks"));

    m.def("find_placement",
          [](const MaskArray& mask, int w, int h) -> std::optional<std::tuple<int, int, int, int>> {
              const auto r = find_placement(to_mask(mask), w, h, PlacementConfig{});
              if (!r) return std::nullopt;
              return std::make_tuple(r->x, r->y, r->w, r->h);
          },
          py::arg("mask"), py::arg("asset_w"), py::arg("asset_h"),
          "First free (x, y, w, h) under the default placement config, or None.");

    m.def("parse_llm_score", &parse_llm_score, py::arg("response"));
    m.def("lexicon_imageability",
          [](std::string_view text) { return lexicon_imageability(text, ImageabilityLexicon::bundled()); },
          py::arg("text"), "Score text with the bundled lexicon.");
    m.def("stub_keyphrases",
          [](std::string_view text, std::size_t max_k) {
              std::vector<std::string> out;
              for (const auto& k : stub_keyphrases(0, text, max_k)) out.push_back(k.phrase);
              return out;
          },
          py::arg("text"), py::arg("max_k") = 3);

    m.def("load_manifest", [](const std::filesystem::path& p) { return json_to_py(to_json(load_manifest(p))); },
          py::arg("path"), "Load and validate a manifest, returned as plain Python data.");
    m.def("filter_view",
          [](const std::string& manifest_json, int min_score) {
              return serialize_manifest(filter_view(parse_manifest(manifest_json), min_score));
          },
          py::arg("manifest_json"), py::arg("min_score"));

    m.def("process",
          [](const std::filesystem::path& frames, const std::filesystem::path& transcript,
             const std::filesystem::path& out, bool offline, std::uint64_t seed, int threshold,
             const std::string& project_id) {
              PipelineConfig cfg;
              cfg.offline = offline;
              cfg.seed = seed;
              cfg.threshold = threshold;
              cfg.validate();
              const std::string id = project_id.empty() ? out.filename().string() : project_id;
              BuildResult result;
              {
                  py::gil_scoped_release release;
                  auto backends = make_backends(cfg);
                  AssetCache cache;
                  result = build_manifest({id, FrameStore(frames, cfg.fps), transcript}, *backends.chat,
                                          *backends.images, cfg, cache);
                  write_project(result, out);
              }
              return json_to_py(to_json(result.manifest));
          },
          py::arg("frames"), py::arg("transcript"), py::arg("out"), py::arg("offline") = true, py::arg("seed") = 0,
          py::arg("threshold") = kDefaultImageabilityThreshold, py::arg("project_id") = "",
          "Run the full pipeline and write manifest.json plus assets under out.");
}
