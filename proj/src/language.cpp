// SPDX-License-Identifier: Apache-2.0
#include "vidaug/language.hpp"

#include "vidaug/error.hpp"
#include "vidaug/resources.hpp"
#include "vidaug/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_set>

namespace vidaug {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
    return s;
}

std::string render_local(const std::vector<std::string>& local) {
    if (local.empty()) return "(none)";
    std::string out;
    for (const auto& s : local) {
        if (!out.empty()) out += '\n';
        out += "- " + s;
    }
    return out;
}

std::string render_context_template(std::string_view name, const ContextBundle& ctx) {
    std::string t(resource(name));
    t = replace_all(std::move(t), "{{global}}", ctx.global_summary.empty() ? "(none)" : ctx.global_summary);
    t = replace_all(std::move(t), "{{local}}", render_local(ctx.local_segments));
    return replace_all(std::move(t), "{{target}}", ctx.target_text);
}

// Spoken-English stopwords. Only words of five or more characters matter for
// keyphrase selection, but the list is kept complete for readability.
const std::unordered_set<std::string_view>& stopwords() {
    static const std::unordered_set<std::string_view> words = {
        "a", "about", "above", "actually", "after", "again", "against", "all", "almost", "also",
        "although", "always", "am", "among", "an", "and", "another", "any", "anybody", "anyone",
        "anything", "anyway", "are", "around", "as", "at", "basically", "be", "because", "been",
        "before", "being", "below", "between", "both", "but", "by", "can", "cannot", "could",
        "couldn't", "did", "didn't", "do", "does", "doesn't", "doing", "don't", "down", "during",
        "each", "either", "else", "enough", "even", "ever", "every", "everybody", "everyone",
        "everything", "few", "for", "from", "further", "get", "gets", "getting", "going", "gonna",
        "got", "gotta", "had", "hadn't", "has", "hasn't", "have", "haven't", "having", "he", "her",
        "here", "hers", "herself", "him", "himself", "his", "how", "however", "i", "if", "in",
        "into", "is", "isn't", "it", "it's", "its", "itself", "just", "kind", "kinda", "know",
        "like", "literally", "maybe", "me", "might", "more", "most", "much", "must", "my", "myself",
        "never", "no", "nobody", "nor", "not", "nothing", "now", "of", "off", "often", "on", "once",
        "only", "or", "other", "others", "otherwise", "ought", "our", "ours", "ourselves", "out",
        "over", "own", "perhaps", "pretty", "quite", "rather", "really", "right", "said", "same",
        "say", "says", "see", "seems", "shall", "she", "should", "shouldn't", "since", "so", "some",
        "somebody", "someone", "something", "sometimes", "somewhat", "sort", "still", "such", "than",
        "that", "that's", "the", "their", "theirs", "them", "themselves", "then", "there", "there's",
        "therefore", "these", "they", "they're", "thing", "things", "think", "this", "those",
        "though", "through", "thus", "to", "today", "together", "too", "toward", "towards", "under",
        "until", "up", "upon", "us", "very", "wanna", "want", "was", "wasn't", "way", "we", "well",
        "were", "weren't", "what", "whatever", "when", "whenever", "where", "whereas", "wherever",
        "whether", "which", "while", "who", "whoever", "whole", "whom", "whose", "why", "will",
        "with", "within", "without", "won't", "would", "wouldn't", "yeah", "yes", "yet", "you",
        "you're", "your", "yours", "yourself", "yourselves",
    };
    return words;
}

struct Word {
    std::size_t begin;
    std::size_t end;
};

bool is_word_byte(char c) { return is_alnum(c) || (static_cast<unsigned char>(c) & 0x80); }

// Maximal runs of word bytes; an apostrophe joins two word runs.
std::vector<Word> scan_words(std::string_view s) {
    std::vector<Word> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_word_byte(s[i])) {
            ++i;
            continue;
        }
        const std::size_t begin = i;
        while (i < s.size()) {
            if (is_word_byte(s[i])) {
                ++i;
            } else if (s[i] == '\'' && i + 1 < s.size() && is_word_byte(s[i + 1])) {
                ++i;
            } else {
                break;
            }
        }
        out.push_back({begin, i});
    }
    return out;
}

}  // namespace

std::uint64_t ContextBundle::digest() const {
    std::uint64_t h = fnv1a64(global_summary);
    h = fnv1a64("\x1f", h);
    for (const auto& s : local_segments) {
        h = fnv1a64(s, h);
        h = fnv1a64("\x1e", h);
    }
    h = fnv1a64("\x1f", h);
    return fnv1a64(target_text, h);
}

std::vector<std::string> local_context(const Transcript& transcript, std::size_t i, std::size_t k) {
    if (i >= transcript.size()) throw Error("segment index " + std::to_string(i) + " out of range");
    std::vector<std::string> out;
    for (std::size_t j = i - std::min(i, k); j < i; ++j) out.push_back(transcript[j].text);
    return out;
}

ContextBundle make_context(const Transcript& transcript, std::size_t i, std::string global_summary, std::size_t k) {
    return {std::move(global_summary), local_context(transcript, i, k), transcript[i].text};
}

std::string first_sentence(std::string_view text) {
    text = trim_view(text);
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if ((c == '.' || c == '!' || c == '?') &&
            (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
            return std::string(text.substr(0, i + 1));
        }
    }
    return std::string(text);
}

std::string stub_summary(const Transcript& transcript) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < transcript.size(); i += 10) parts.push_back(first_sentence(transcript[i].text));
    return first_words(join(parts, " "), kSummaryMaxWords);
}

std::string render_summary_prompt(const Transcript& transcript) {
    std::vector<std::string> lines;
    lines.reserve(transcript.size());
    for (const auto& s : transcript.segments) lines.push_back(s.text);
    return replace_all(std::string(resource("prompts/summary.txt")), "{{transcript}}", join(lines, "\n"));
}

Summary summarize_global(const Transcript& transcript, ChatBackend& backend) {
    if (transcript.empty()) throw Error("cannot summarize an empty transcript");
    try {
        const std::string reply = backend.complete(render_summary_prompt(transcript));
        if (!trim_view(reply).empty()) return {first_words(reply, kSummaryMaxWords), backend.id()};
    } catch (const BackendUnavailable&) {
    }
    return {stub_summary(transcript), std::string(kOfflineStubId)};
}

ImageabilityLexicon::ImageabilityLexicon(std::unordered_map<std::string, double> scores, double default_score)
    : scores_(std::move(scores)), default_score_(default_score) {
    if (!(default_score_ >= 1.0 && default_score_ <= 10.0)) throw Error("lexicon default score outside [1,10]");
    for (const auto& [word, score] : scores_) {
        if (!(score >= 1.0 && score <= 10.0)) throw Error("lexicon score for '" + word + "' outside [1,10]");
    }
}

ImageabilityLexicon ImageabilityLexicon::parse(std::string_view text, double default_score) {
    std::unordered_map<std::string, double> scores;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim_view(line);
        if (line.empty() || line.front() == '#') continue;
        const auto sep = line.find_first_of("\t ");
        if (sep == std::string_view::npos) throw Error("lexicon line " + std::to_string(line_no) + ": missing score");
        const auto word = ascii_lower(line.substr(0, sep));
        const auto num = trim_view(line.substr(sep + 1));
        double score = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), score);
        if (ec != std::errc{} || ptr != num.data() + num.size() || !(score >= 1.0 && score <= 10.0)) {
            throw Error("lexicon line " + std::to_string(line_no) + ": invalid score '" + std::string(num) + "'");
        }
        scores[word] = score;
    }
    return ImageabilityLexicon(std::move(scores), default_score);
}

ImageabilityLexicon ImageabilityLexicon::bundled() {
    static const ImageabilityLexicon lex = parse(resource("lexicon.tsv"));
    return lex;
}

double ImageabilityLexicon::score(std::string_view lowercase_word) const {
    const auto it = scores_.find(std::string(lowercase_word));
    return it == scores_.end() ? default_score_ : it->second;
}

int lexicon_imageability(std::string_view text, const ImageabilityLexicon& lexicon) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\'') continue;
        if (text.substr(i, 3) == "\xE2\x80\x99") {  // right single quotation mark
            i += 2;
            continue;
        }
        cleaned.push_back(std::ispunct(static_cast<unsigned char>(c)) ? ' ' : c);
    }
    const auto words = split_words(ascii_lower(cleaned));
    double mean = lexicon.default_score();
    if (!words.empty()) {
        double sum = 0.0;
        for (const auto& w : words) sum += lexicon.score(w);
        mean = sum / static_cast<double>(words.size());
    }
    return std::clamp(static_cast<int>(std::floor(mean + 0.5)), 1, 10);
}

int parse_llm_score(std::string_view response) {
    const std::size_t n = response.size();
    std::size_t i = 0;
    while (i < n) {
        if (!is_digit(response[i])) {
            ++i;
            continue;
        }
        const std::size_t begin = i;
        while (i < n && is_digit(response[i])) ++i;
        const std::size_t end = i;

        bool standalone = true;
        if (begin > 0) {
            const char prev = response[begin - 1];
            if (std::isalpha(static_cast<unsigned char>(prev))) standalone = false;
            if ((prev == '.' || prev == ',') && begin > 1 && is_digit(response[begin - 2])) standalone = false;
            if (prev == '-' && (begin == 1 || !is_alnum(response[begin - 2]))) standalone = false;
        }
        if (end < n) {
            const char next = response[end];
            if (std::isalpha(static_cast<unsigned char>(next))) standalone = false;
            if ((next == '.' || next == ',') && end + 1 < n && is_digit(response[end + 1])) standalone = false;
        }
        if (!standalone || end - begin > 3) continue;

        int value = 0;
        std::from_chars(response.data() + begin, response.data() + end, value);
        if (value >= 1 && value <= 10) return value;
    }
    throw UnparseableScore(std::string(response));
}

std::string render_imageability_prompt(const ContextBundle& ctx) {
    return render_context_template("prompts/imageability.txt", ctx);
}

std::string render_keyphrase_prompt(const ContextBundle& ctx, std::size_t max_k) {
    return replace_all(render_context_template("prompts/keyphrases.txt", ctx), "{{max_k}}", std::to_string(max_k));
}

std::string render_image_prompt_request(const ContextBundle& ctx) {
    return render_context_template("prompts/text_to_image.txt", ctx);
}

ImageabilityRecord assess_imageability(std::size_t segment_index, const ContextBundle& ctx, ChatBackend& backend,
                                       const ImageabilityLexicon& lexicon) {
    std::string raw;
    try {
        raw = backend.complete(render_imageability_prompt(ctx));
        return {segment_index, parse_llm_score(raw), backend.id(), raw};
    } catch (const BackendUnavailable&) {
    } catch (const UnparseableScore&) {
    }
    return {segment_index, lexicon_imageability(ctx.target_text, lexicon), std::string(kLexiconId), raw};
}

bool is_stopword(std::string_view lowercase_word) { return stopwords().contains(lowercase_word); }

std::vector<Keyphrase> stub_keyphrases(std::size_t segment_index, std::string_view target, std::size_t max_k) {
    struct Candidate {
        Word word;
        std::size_t length;
    };
    std::vector<Candidate> candidates;
    std::unordered_set<std::string> seen;
    for (const auto& w : scan_words(target)) {
        const auto text = target.substr(w.begin, w.end - w.begin);
        const auto length = utf8_length(text);
        const auto lower = ascii_lower(text);
        if (length < 5 || is_stopword(lower) || !seen.insert(lower).second) continue;
        candidates.push_back({w, length});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.length > b.length; });
    if (candidates.size() > max_k) candidates.resize(max_k);

    std::vector<Keyphrase> out;
    for (const auto& c : candidates) {
        out.push_back({segment_index, std::string(target.substr(c.word.begin, c.word.end - c.word.begin)),
                       CharSpan{c.word.begin, c.word.end}});
    }
    return out;
}

std::vector<std::string> parse_keyphrase_reply(std::string_view reply) {
    std::vector<std::string_view> pieces;
    std::size_t line_count = 0;
    for (std::string_view rest = reply; !rest.empty();) {
        const auto nl = rest.find('\n');
        const auto line = trim_view(rest.substr(0, nl));
        if (!line.empty()) {
            pieces.push_back(line);
            ++line_count;
        }
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    }
    if (line_count == 1 && pieces.front().find(',') != std::string_view::npos) {
        const auto line = pieces.front();
        pieces.clear();
        std::size_t start = 0;
        while (start <= line.size()) {
            const auto comma = line.find(',', start);
            pieces.push_back(trim_view(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }

    std::vector<std::string> out;
    for (auto p : pieces) {
        if (!p.empty() && p.back() == ':') continue;  // "Key phrases:" style headers
        // List markers.
        if (p.substr(0, 3) == "\xE2\x80\xA2") p.remove_prefix(3);
        while (!p.empty() && (p.front() == '-' || p.front() == '*')) p.remove_prefix(1);
        std::size_t digits = 0;
        while (digits < p.size() && is_digit(p[digits])) ++digits;
        if (digits > 0 && digits < p.size() && (p[digits] == '.' || p[digits] == ')')) p.remove_prefix(digits + 1);
        p = trim_view(p);
        // Quotes (ASCII and curly) and a trailing period.
        for (bool changed = true; changed;) {
            changed = false;
            for (std::string_view q : {"\"", "'", "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99"}) {
                if (p.size() >= q.size() && p.substr(0, q.size()) == q) {
                    p.remove_prefix(q.size());
                    changed = true;
                }
                if (p.size() >= q.size() && p.substr(p.size() - q.size()) == q) {
                    p.remove_suffix(q.size());
                    changed = true;
                }
            }
            if (!p.empty() && p.back() == '.') {
                p.remove_suffix(1);
                changed = true;
            }
            p = trim_view(p);
        }
        if (!p.empty()) out.emplace_back(p);
    }
    return out;
}

KeyphraseResult extract_keyphrases(std::size_t segment_index, const ContextBundle& ctx, ChatBackend& backend,
                                   std::size_t max_k) {
    try {
        const auto reply = backend.complete(render_keyphrase_prompt(ctx, max_k));
        KeyphraseResult result{{}, backend.id()};
        std::unordered_set<std::string> seen;
        for (auto& phrase : parse_keyphrase_reply(reply)) {
            if (result.phrases.size() >= max_k) break;
            if (!seen.insert(ascii_lower(phrase)).second) continue;
            Keyphrase k{segment_index, phrase, std::nullopt};
            if (const auto pos = find_casefold(ctx.target_text, phrase)) k.span = CharSpan{*pos, *pos + phrase.size()};
            result.phrases.push_back(std::move(k));
        }
        return result;
    } catch (const BackendUnavailable&) {
    }
    return {stub_keyphrases(segment_index, ctx.target_text, max_k), std::string(kOfflineStubId)};
}

std::vector<std::size_t> filter_imageable(std::span<const ImageabilityRecord> records, int threshold) {
    if (threshold < 1 || threshold > 10) throw Error("imageability threshold must be within 1..10");
    std::vector<std::size_t> out;
    for (const auto& r : records) {
        if (r.score > threshold) out.push_back(r.segment_index);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace vidaug
