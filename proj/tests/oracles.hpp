#pragma once

// Independent reference computations used to check the library.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

/// UTF-8 to code points; malformed input is not expected in fixtures.
inline std::vector<std::uint32_t> code_points(std::string_view s) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < s.size();) {
        auto c = static_cast<unsigned char>(s[i]);
        int len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : 4;
        std::uint32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
        for (int k = 1; k < len; ++k) {
            cp = (cp << 6) | (static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]) & 0x3F);
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(len);
    }
    return out;
}

/// ASCII-lowercased, whitespace runs as one space, trimmed.
inline std::vector<std::uint32_t> normalized(std::string_view s) {
    std::vector<std::uint32_t> out;
    bool pending_space = false;
    for (auto cp : code_points(s)) {
        bool space = cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v';
        if (space) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(cp >= 'A' && cp <= 'Z' ? cp + 32 : cp);
    }
    return out;
}

/// Distinct k-grams by linear scan; a text shorter than k is one gram.
inline std::vector<std::vector<std::uint32_t>> grams(std::string_view s, std::size_t k) {
    auto cps = normalized(s);
    std::vector<std::vector<std::uint32_t>> out;
    auto add = [&](std::vector<std::uint32_t> g) {
        for (const auto& have : out) {
            if (have == g) return;
        }
        out.push_back(std::move(g));
    };
    if (cps.empty()) return out;
    if (cps.size() < k) {
        add(cps);
        return out;
    }
    for (std::size_t i = 0; i + k <= cps.size(); ++i) {
        add(std::vector<std::uint32_t>(cps.begin() + static_cast<long>(i), cps.begin() + static_cast<long>(i + k)));
    }
    return out;
}

inline double jaccard(std::string_view a, std::string_view b, std::size_t k) {
    auto ga = grams(a, k), gb = grams(b, k);
    if (ga.empty() || gb.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& x : ga) {
        for (const auto& y : gb) {
            if (x == y) {
                ++inter;
                break;
            }
        }
    }
    return static_cast<double>(inter) / static_cast<double>(ga.size() + gb.size() - inter);
}

}  // namespace oracle
