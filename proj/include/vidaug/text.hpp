// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vidaug {

/// 64-bit FNV-1a. Stable across platforms and runs.
constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v);

/// ASCII-only lowercase; other bytes pass through unchanged.
std::string ascii_lower(std::string_view s);

/// Case-insensitive (ASCII) search; byte offset of the first match.
std::optional<std::size_t> find_casefold(std::string_view haystack, std::string_view needle);

/// Whitespace-separated tokens.
std::vector<std::string> split_words(std::string_view s);

/// First n whitespace-separated words joined by single spaces.
std::string first_words(std::string_view s, std::size_t n);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string_view trim_view(std::string_view s);

/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s);

/// Longest prefix of at most max_bytes that ends on a word boundary. Falls back
/// to a UTF-8-safe hard cut when the first word alone is too long.
std::string truncate_on_word(std::string_view s, std::size_t max_bytes);

/// Standard or URL-safe alphabet, padding optional, whitespace ignored.
/// Throws Error on any other character.
std::vector<std::uint8_t> base64_decode(std::string_view encoded);
std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace vidaug
