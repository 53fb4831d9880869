// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vidaug/backends.hpp"
#include "vidaug/transcript.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vidaug {

inline constexpr std::size_t kLocalContextSize = 5;
inline constexpr std::size_t kSummaryMaxWords = 150;
inline constexpr int kDefaultImageabilityThreshold = 5;

/// What the language model sees for one target segment.
struct ContextBundle {
    std::string global_summary;
    std::vector<std::string> local_segments;  // oldest first, at most kLocalContextSize
    std::string target_text;

    /// Stable digest of all three fields, used as a cache key.
    std::uint64_t digest() const;
};

/// Texts of segments max(0, i-k) .. i-1.
std::vector<std::string> local_context(const Transcript& transcript, std::size_t i,
                                       std::size_t k = kLocalContextSize);

ContextBundle make_context(const Transcript& transcript, std::size_t i, std::string global_summary,
                           std::size_t k = kLocalContextSize);

struct Summary {
    std::string text;
    std::string backend_id;
};

/// First sentence of every 10th segment, joined and cut to 150 words.
std::string stub_summary(const Transcript& transcript);

/// Whole-transcript summary. Falls back to stub_summary() when the backend is
/// unavailable or answers with only whitespace.
Summary summarize_global(const Transcript& transcript, ChatBackend& backend);

/// Text up to and including the first '.', '!' or '?' that ends a word.
std::string first_sentence(std::string_view text);

/// Word -> score table in [1,10] with a default for unknown words.
class ImageabilityLexicon {
public:
    ImageabilityLexicon() = default;
    ImageabilityLexicon(std::unordered_map<std::string, double> scores, double default_score = 5.0);

    /// One `word<TAB>score` per line; blank lines and '#' comments are skipped.
    static ImageabilityLexicon parse(std::string_view text, double default_score = 5.0);
    static ImageabilityLexicon bundled();

    double score(std::string_view lowercase_word) const;
    double default_score() const noexcept { return default_score_; }
    std::size_t size() const noexcept { return scores_.size(); }

private:
    std::unordered_map<std::string, double> scores_;
    double default_score_ = 5.0;
};

/// Lowercases, drops apostrophes, turns other punctuation into spaces, averages
/// word scores, rounds half up and clamps to 1..10.
int lexicon_imageability(std::string_view text, const ImageabilityLexicon& lexicon);

/// First standalone integer token in 1..10, scanning left to right. Tokens that
/// belong to a decimal or a word, or that are negative, are not standalone.
/// Throws UnparseableScore.
int parse_llm_score(std::string_view response);

struct ImageabilityRecord {
    std::size_t segment_index = 0;
    int score = 1;
    std::string backend_id;
    std::string raw_response;
};

inline constexpr std::string_view kLexiconId = "lexicon";

std::string render_imageability_prompt(const ContextBundle& ctx);
std::string render_keyphrase_prompt(const ContextBundle& ctx, std::size_t max_k);
std::string render_image_prompt_request(const ContextBundle& ctx);
std::string render_summary_prompt(const Transcript& transcript);

/// Asks the backend for a 1..10 score; any backend failure or unparseable reply
/// is answered by the lexicon instead (backend_id "lexicon").
ImageabilityRecord assess_imageability(std::size_t segment_index, const ContextBundle& ctx,
                                       ChatBackend& backend, const ImageabilityLexicon& lexicon);

struct CharSpan {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive

    friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Keyphrase {
    std::size_t segment_index = 0;
    std::string phrase;
    std::optional<CharSpan> span;  // byte offsets into the segment text

    friend bool operator==(const Keyphrase&, const Keyphrase&) = default;
};

struct KeyphraseResult {
    std::vector<Keyphrase> phrases;
    std::string backend_id;
};

inline constexpr std::size_t kDefaultMaxKeyphrases = 3;

bool is_stopword(std::string_view lowercase_word);

/// The max_k longest words of at least five characters that are not
/// stopwords, by descending length then first occurrence.
std::vector<Keyphrase> stub_keyphrases(std::size_t segment_index, std::string_view target,
                                       std::size_t max_k = kDefaultMaxKeyphrases);

/// Splits a model reply into phrases (one per line or comma separated),
/// stripping list markers and quotes.
std::vector<std::string> parse_keyphrase_reply(std::string_view reply);

KeyphraseResult extract_keyphrases(std::size_t segment_index, const ContextBundle& ctx, ChatBackend& backend,
                                   std::size_t max_k = kDefaultMaxKeyphrases);

/// Indices whose score is strictly above the threshold, ascending.
/// Throws Error when threshold is outside 1..10.
std::vector<std::size_t> filter_imageable(std::span<const ImageabilityRecord> records,
                                          int threshold = kDefaultImageabilityThreshold);

}  // namespace vidaug
