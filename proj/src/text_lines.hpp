#pragma once

// Internal line-oriented tokenizer shared by the format parsers.

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "costsr/proof.hpp"

namespace costsr::detail {

struct Lines {
    std::string_view text;
    size_t pos = 0;
    long long lineno = 0;

    // next non-comment, non-blank line split into tokens; empty at EOF
    std::vector<std::string_view> next() {
        while (pos < text.size()) {
            size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(pos, end - pos);
            pos = end + (end < text.size() ? 1 : 0);
            ++lineno;
            std::vector<std::string_view> toks = split(line);
            if (toks.empty() || toks[0] == "c" || toks[0][0] == '*') continue;
            return toks;
        }
        return {};
    }

    static std::vector<std::string_view> split(std::string_view line) {
        std::vector<std::string_view> out;
        size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
            if (j > i) out.push_back(line.substr(i, j - i));
            i = j;
        }
        return out;
    }
};

inline long long parse_int(std::string_view tok, long long lineno, const char* what) {
    long long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(std::string("expected ") + what + ", got \"" + std::string(tok) + "\"",
                         lineno);
    return v;
}

} // namespace costsr::detail
