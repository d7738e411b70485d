#include "timeflow/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace timeflow::text {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

std::string trim(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && ws(s.back())) {
        s.remove_suffix(1);
    }
    return std::string(s);
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_word_byte(static_cast<unsigned char>(s[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && is_word_byte(static_cast<unsigned char>(s[j]))) {
            ++j;
        }
        out.push_back({i, j, s.substr(i, j - i)});
        i = j;
    }
    return out;
}

namespace {

constexpr std::array<std::string_view, 16> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "st", "vs", "no", "art", "e.g", "i.e", "etc", "jr", "sr", "cf", "fig",
};

bool is_abbreviation(std::string_view before) {
    // `before` ends right before the terminating '.'
    std::size_t start = before.size();
    while (start > 0 && (is_word_byte(static_cast<unsigned char>(before[start - 1])) || before[start - 1] == '.')) {
        --start;
    }
    auto word = lower(before.substr(start));
    if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0]))) {
        return true;  // initials: "J. Frederik"
    }
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

}  // namespace

std::vector<Span> split_sentences(std::string_view s) {
    std::vector<Span> out;
    std::size_t start = 0;
    auto emit = [&](std::size_t end) {
        std::size_t b = start, e = end;
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
            ++b;
        }
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
            --e;
        }
        if (b < e) {
            out.push_back({b, e});
        }
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '\n' && i + 1 < s.size()) {
            std::size_t j = i + 1;
            while (j < s.size() && (s[j] == ' ' || s[j] == '\t' || s[j] == '\r')) {
                ++j;
            }
            if (j < s.size() && s[j] == '\n') {
                emit(i);
                start = j + 1;
                i = j;
                continue;
            }
        }
        if (c != '.' && c != '!' && c != '?') {
            continue;
        }
        std::size_t j = i + 1;
        if (j >= s.size() || !std::isspace(static_cast<unsigned char>(s[j]))) {
            continue;
        }
        while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) {
            ++j;
        }
        if (j >= s.size()) {
            continue;
        }
        unsigned char next = static_cast<unsigned char>(s[j]);
        if (!(std::isupper(next) || std::isdigit(next) || next == '"' || next == '\'')) {
            continue;
        }
        if (c == '.' && is_abbreviation(s.substr(start, i - start))) {
            continue;
        }
        emit(i + 1);
        start = j;
        i = j - 1;
    }
    emit(s.size());
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && lower(a) == lower(b);
}

std::vector<Span> find_bounded(std::string_view haystack, std::string_view needle) {
    std::vector<Span> out;
    if (needle.empty() || needle.size() > haystack.size()) {
        return out;
    }
    auto hay = lower(haystack);
    auto pat = lower(needle);
    bool need_left = is_word_byte(static_cast<unsigned char>(pat.front()));
    bool need_right = is_word_byte(static_cast<unsigned char>(pat.back()));
    for (std::size_t pos = hay.find(pat); pos != std::string::npos; pos = hay.find(pat, pos + 1)) {
        std::size_t end = pos + pat.size();
        bool left_ok = !need_left || pos == 0 || !is_word_byte(static_cast<unsigned char>(hay[pos - 1]));
        bool right_ok = !need_right || end == hay.size() || !is_word_byte(static_cast<unsigned char>(hay[end]));
        if (left_ok && right_ok) {
            out.push_back({pos, end});
        }
    }
    return out;
}

std::string normalize_for_similarity(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    }
    return out;
}

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        auto b0 = static_cast<unsigned char>(s[i]);
        int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xe ? 3 : (b0 >> 3) == 0x1e ? 4 : 0;
        if (len == 0 || i + len > s.size()) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1f) : len == 3 ? (b0 & 0x0f) : (b0 & 0x07);
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            auto b = static_cast<unsigned char>(s[i + k]);
            if ((b >> 6) != 0x2) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3f);
        }
        if (!ok) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string slug(std::string_view s) {
    std::string out;
    bool dash = false;
    for (char c : lower(s)) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            if (dash && !out.empty()) {
                out.push_back('-');
            }
            dash = false;
            out.push_back(c);
        } else {
            dash = true;
        }
    }
    return out;
}

}  // namespace timeflow::text
