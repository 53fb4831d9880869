// SPDX-License-Identifier: Apache-2.0
#include "vidaug/transcript.hpp"

#include "vidaug/error.hpp"
#include "vidaug/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

namespace vidaug {

namespace {

struct Line {
    std::size_t number;  // 1-based
    std::string text;
};

using Block = std::vector<Line>;

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view strip_bom(std::string_view raw) {
    if (raw.size() >= 3 && static_cast<unsigned char>(raw[0]) == 0xEF &&
        static_cast<unsigned char>(raw[1]) == 0xBB && static_cast<unsigned char>(raw[2]) == 0xBF) {
        raw.remove_prefix(3);
    }
    return raw;
}

// Splits on LF, CRLF or lone CR.
std::vector<Line> split_lines(std::string_view raw) {
    std::vector<Line> lines;
    std::string cur;
    std::size_t number = 1;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
            lines.push_back({number++, std::move(cur)});
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back({number, std::move(cur)});
    return lines;
}

std::vector<Block> split_blocks(const std::vector<Line>& lines) {
    std::vector<Block> blocks;
    Block cur;
    for (const auto& line : lines) {
        if (is_blank(line.text)) {
            if (!cur.empty()) blocks.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(line);
        }
    }
    if (!cur.empty()) blocks.push_back(std::move(cur));
    return blocks;
}

[[noreturn]] void malformed(const Line& line, const std::string& why) {
    throw TranscriptError(TranscriptError::Kind::MalformedTimestamp, line.number, line.text,
                          "line " + std::to_string(line.number) + ": " + why + ": '" + line.text + "'");
}

std::optional<long long> parse_digits(std::string_view s, std::size_t min_len, std::size_t max_len) {
    if (s.size() < min_len || s.size() > max_len) return std::nullopt;
    long long v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return v;
}

// [HH:]MM:SS<sep>mmm. Hours are mandatory for SRT.
std::optional<Millis> parse_timestamp(std::string_view s, char ms_sep, bool hours_required) {
    const auto sep = s.rfind(ms_sep);
    if (sep == std::string_view::npos) return std::nullopt;
    const auto ms = parse_digits(s.substr(sep + 1), 3, 3);
    if (!ms) return std::nullopt;

    std::vector<std::string_view> fields;
    std::string_view hms = s.substr(0, sep);
    while (true) {
        const auto colon = hms.find(':');
        fields.push_back(hms.substr(0, colon));
        if (colon == std::string_view::npos) break;
        hms.remove_prefix(colon + 1);
    }
    long long hours = 0;
    if (fields.size() == 3) {
        const auto h = parse_digits(fields[0], 1, 6);
        if (!h) return std::nullopt;
        hours = *h;
        fields.erase(fields.begin());
    } else if (fields.size() != 2 || hours_required) {
        return std::nullopt;
    }
    const auto mm = parse_digits(fields[0], 2, 2);
    const auto ss = parse_digits(fields[1], 2, 2);
    if (!mm || !ss || *mm >= 60 || *ss >= 60) return std::nullopt;
    return Millis{((hours * 60 + *mm) * 60 + *ss) * 1000 + *ms};
}

struct Timing {
    Millis start;
    Millis end;
};

Timing parse_timing_line(const Line& line, char ms_sep, bool hours_required) {
    const auto arrow = line.text.find("-->");
    if (arrow == std::string::npos) malformed(line, "expected timing line");
    const auto left = trim(std::string_view(line.text).substr(0, arrow));
    auto right = trim(std::string_view(line.text).substr(arrow + 3));
    // Cue settings / SRT coordinates follow the end timestamp.
    const auto ws = std::find_if(right.begin(), right.end(),
                                 [](unsigned char c) { return std::isspace(c); });
    right = right.substr(0, static_cast<std::size_t>(ws - right.begin()));

    const auto start = parse_timestamp(left, ms_sep, hours_required);
    const auto end = parse_timestamp(right, ms_sep, hours_required);
    if (!start || !end) malformed(line, "malformed timestamp");
    if (!(*start < *end)) {
        throw TranscriptError(TranscriptError::Kind::InvertedInterval, line.number, line.text,
                              "line " + std::to_string(line.number) +
                                  ": cue end is not after its start: '" + line.text + "'");
    }
    return {*start, *end};
}

std::string decode_vtt_entities(std::string_view s) {
    static constexpr std::pair<std::string_view, std::string_view> kEntities[] = {
        {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&nbsp;", " "},
        {"&lrm;", ""},  {"&rlm;", ""}, {"&quot;", "\""}, {"&apos;", "'"},
    };
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        bool matched = false;
        if (s[i] == '&') {
            for (const auto& [name, value] : kEntities) {
                if (s.substr(i, name.size()) == name) {
                    out += value;
                    i += name.size();
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) out.push_back(s[i++]);
    }
    return out;
}

// A tag body starts (after an optional '/') with a letter, or is a VTT
// inline timestamp made only of digits, ':' and '.'.
bool is_tag_body(std::string_view body) {
    if (!body.empty() && body.front() == '/') body.remove_prefix(1);
    if (body.empty()) return false;
    const unsigned char first = static_cast<unsigned char>(body.front());
    if (std::isalpha(first)) return true;
    if (std::isdigit(first)) {
        return std::all_of(body.begin(), body.end(), [](unsigned char c) {
            return std::isdigit(c) || c == ':' || c == '.';
        });
    }
    return false;
}

std::string strip_tags_once(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == '<') {
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '>' && text[j] != '<' && text[j] != '\n') ++j;
            if (j < text.size() && text[j] == '>' && is_tag_body(text.substr(i + 1, j - i - 1))) {
                i = j + 1;
                continue;
            }
        }
        out.push_back(text[i++]);
    }
    return out;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

Transcript order_cues(Transcript t) {
    std::erase_if(t.segments, [](const TranscriptSegment& s) { return s.text.empty(); });
    std::stable_sort(t.segments.begin(), t.segments.end(),
                     [](const TranscriptSegment& a, const TranscriptSegment& b) {
                         if (a.t_start != b.t_start) return a.t_start < b.t_start;
                         return a.t_end < b.t_end;
                     });
    for (std::size_t i = 0; i < t.segments.size(); ++i) t.segments[i].index = i;
    return t;
}

// Cue texts arrive already cleaned.
Transcript finish(std::vector<TranscriptSegment> cues, SubtitleFormat format) {
    Transcript t;
    t.segments = std::move(cues);
    t.source_format = format;
    t = order_cues(std::move(t));
    if (t.empty()) {
        throw TranscriptError(TranscriptError::Kind::EmptyTranscript, 0, {}, "transcript contains no cues");
    }
    return t;
}

std::string join_text(const Block& block, std::size_t first) {
    std::string joined;
    for (std::size_t i = first; i < block.size(); ++i) {
        if (!joined.empty()) joined.push_back(' ');
        joined += block[i].text;
    }
    return joined;
}

}  // namespace

double Transcript::duration_seconds() const {
    Millis end{0};
    for (const auto& s : segments) end = std::max(end, s.t_end);
    return to_seconds(end);
}

std::string clean_cue_text(std::string_view text) {
    std::string cur(text);
    while (true) {
        std::string next = strip_tags_once(cur);
        if (next == cur) break;
        cur = std::move(next);
    }
    return collapse_whitespace(cur);
}

Transcript normalize(Transcript t) {
    for (auto& seg : t.segments) seg.text = clean_cue_text(seg.text);
    return order_cues(std::move(t));
}

Transcript parse_srt(std::string_view raw) {
    const auto blocks = split_blocks(split_lines(strip_bom(raw)));
    std::vector<TranscriptSegment> cues;
    for (const auto& block : blocks) {
        std::size_t timing = 0;
        if (block[0].text.find("-->") == std::string::npos) {
            if (block.size() < 2 || block[1].text.find("-->") == std::string::npos) {
                malformed(block.size() < 2 ? block[0] : block[1], "expected timing line");
            }
            timing = 1;
        }
        const auto [start, end] = parse_timing_line(block[timing], ',', true);
        cues.push_back({0, start, end, clean_cue_text(join_text(block, timing + 1))});
    }
    return finish(std::move(cues), SubtitleFormat::SRT);
}

Transcript parse_vtt(std::string_view raw) {
    const auto lines = split_lines(strip_bom(raw));
    const auto header_ok = [&] {
        if (lines.empty()) return false;
        const std::string_view first = lines.front().text;
        if (first.substr(0, 6) != "WEBVTT") return false;
        return first.size() == 6 || first[6] == ' ' || first[6] == '\t';
    }();
    if (!header_ok) {
        throw TranscriptError(TranscriptError::Kind::MissingHeader, 1,
                              lines.empty() ? std::string{} : lines.front().text,
                              "WebVTT file does not start with a WEBVTT header");
    }

    const auto blocks = split_blocks(lines);
    const auto starts_with_keyword = [](std::string_view s, std::string_view kw) {
        return s.substr(0, kw.size()) == kw &&
               (s.size() == kw.size() || s[kw.size()] == ' ' || s[kw.size()] == '\t');
    };

    std::vector<TranscriptSegment> cues;
    for (std::size_t b = 1; b < blocks.size(); ++b) {
        const auto& block = blocks[b];
        const std::string_view first = block[0].text;
        if (starts_with_keyword(first, "NOTE") || starts_with_keyword(first, "STYLE") ||
            starts_with_keyword(first, "REGION")) {
            continue;
        }
        std::size_t timing = 0;
        if (first.find("-->") == std::string_view::npos) {
            if (block.size() < 2 || block[1].text.find("-->") == std::string::npos) {
                malformed(block.size() < 2 ? block[0] : block[1], "expected timing line");
            }
            timing = 1;
        }
        const auto [start, end] = parse_timing_line(block[timing], '.', false);
        // Tags go first so that escaped markup survives as literal text.
        const auto text = decode_vtt_entities(clean_cue_text(join_text(block, timing + 1)));
        cues.push_back({0, start, end, collapse_whitespace(text)});
    }
    return finish(std::move(cues), SubtitleFormat::WebVTT);
}

Transcript parse_transcript(std::string_view raw) {
    const auto body = strip_bom(raw);
    if (body.substr(0, 6) == "WEBVTT") return parse_vtt(raw);
    return parse_srt(raw);
}

Transcript load_transcript(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read transcript: " + path.string());
    const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (ascii_lower(path.extension().string()) == ".vtt") return parse_vtt(raw);
    return parse_transcript(raw);
}

std::string format_srt_timestamp(Millis t) {
    const long long total = t.count();
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld,%03lld", total / 3'600'000,
                  (total / 60'000) % 60, (total / 1000) % 60, total % 1000);
    return buf;
}

std::string serialize_srt(const Transcript& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.segments.size(); ++i) {
        const auto& s = t.segments[i];
        out << (i + 1) << '\n'
            << format_srt_timestamp(s.t_start) << " --> " << format_srt_timestamp(s.t_end) << '\n'
            << s.text << "\n\n";
    }
    return out.str();
}

std::string serialize_vtt(const Transcript& t) {
    std::ostringstream out;
    out << "WEBVTT\n\n";
    for (const auto& s : t.segments) {
        auto ts = [](Millis m) {
            auto r = format_srt_timestamp(m);
            r[r.size() - 4] = '.';
            return r;
        };
        out << ts(s.t_start) << " --> " << ts(s.t_end) << '\n';
        for (char c : s.text) {
            switch (c) {
                case '&': out << "&amp;"; break;
                case '<': out << "&lt;"; break;
                case '>': out << "&gt;"; break;
                default: out << c;
            }
        }
        out << "\n\n";
    }
    return out.str();
}

std::string serialize(const Transcript& t) {
    return t.source_format == SubtitleFormat::WebVTT ? serialize_vtt(t) : serialize_srt(t);
}

}  // namespace vidaug
