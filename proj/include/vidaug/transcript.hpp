// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vidaug {

using Millis = std::chrono::milliseconds;

inline double to_seconds(Millis t) { return static_cast<double>(t.count()) / 1000.0; }

/// One timed caption unit. Text is plain (markup stripped, whitespace collapsed).
struct TranscriptSegment {
    std::size_t index = 0;
    Millis t_start{0};
    Millis t_end{0};
    std::string text;

    friend bool operator==(const TranscriptSegment&, const TranscriptSegment&) = default;
};

enum class SubtitleFormat { SRT, WebVTT };

struct Transcript {
    std::vector<TranscriptSegment> segments;
    SubtitleFormat source_format = SubtitleFormat::SRT;

    std::size_t size() const noexcept { return segments.size(); }
    bool empty() const noexcept { return segments.empty(); }
    const TranscriptSegment& operator[](std::size_t i) const { return segments[i]; }

    /// Latest cue end, in seconds.
    double duration_seconds() const;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

Transcript parse_srt(std::string_view raw);
Transcript parse_vtt(std::string_view raw);

/// Dispatches on the "WEBVTT" header; anything else is parsed as SRT.
Transcript parse_transcript(std::string_view raw);

/// Reads and parses a transcript file; a .vtt extension always selects
/// WebVTT. Throws Error when unreadable.
Transcript load_transcript(const std::filesystem::path& path);

/// Canonical SRT: 1-based numbering, comma millisecond separator, LF endings.
std::string serialize_srt(const Transcript& t);

/// WebVTT with a bare header, "HH:MM:SS.mmm" timings and &, <, > escaped.
std::string serialize_vtt(const Transcript& t);

/// serialize_srt or serialize_vtt according to t.source_format.
std::string serialize(const Transcript& t);

/// Sorts cues by (start, end, original order), normalizes text, drops empty cues
/// and re-indexes from 0. Applying it twice is the same as applying it once.
Transcript normalize(Transcript t);

/// Strips `<...>` markup spans and collapses whitespace runs to single spaces.
/// A `<` that does not open a well-formed tag is kept as literal text.
std::string clean_cue_text(std::string_view text);

/// "HH:MM:SS,mmm" (SRT) rendering of a timestamp.
std::string format_srt_timestamp(Millis t);

}  // namespace vidaug
