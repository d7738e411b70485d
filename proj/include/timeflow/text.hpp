#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace timeflow::text {

struct Token {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string_view view;
};

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// ASCII lowercase; bytes >= 0x80 pass through.
std::string lower(std::string_view s);

std::string trim(std::string_view s);

/// Word characters are ASCII alphanumerics and every byte of a multi-byte
/// UTF-8 sequence, so accented words stay whole.
bool is_word_byte(unsigned char c);

/// Maximal runs of word bytes, with byte offsets.
std::vector<Token> tokenize(std::string_view s);

/// Sentence boundaries: '.', '!' or '?' followed by whitespace and an
/// uppercase letter or digit, unless the preceding word is a known
/// abbreviation. Also breaks on blank lines.
std::vector<Span> split_sentences(std::string_view s);

/// Case-insensitive occurrences of `needle` that start and end on word
/// boundaries.
std::vector<Span> find_bounded(std::string_view haystack, std::string_view needle);

/// Lowercased, whitespace runs collapsed to one space, trimmed.
std::string normalize_for_similarity(std::string_view s);

/// Decodes UTF-8 to code points; invalid bytes map to U+FFFD.
std::u32string decode_utf8(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

/// Lowercase ASCII slug of [a-z0-9-].
std::string slug(std::string_view s);

}  // namespace timeflow::text
