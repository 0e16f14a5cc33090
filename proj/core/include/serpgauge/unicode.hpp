#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace serpgauge::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;
inline constexpr char32_t kZwnj = 0x200C;

struct DecodeResult {
    std::vector<char32_t> codepoints;
    std::size_t invalid_bytes = 0;  // bytes consumed by malformed sequences
};

/// Lossy UTF-8 decode; malformed sequences become U+FFFD.
DecodeResult decode_utf8(std::string_view bytes);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);

bool is_whitespace(char32_t cp);

/// Token separators: ASCII punctuation plus common general/Arabic punctuation.
/// ZWNJ is not a separator.
bool is_separator_punct(char32_t cp);

/// ASCII A-Z and Latin-1 uppercase letters to lowercase; other codepoints unchanged.
char32_t lowercase_latin(char32_t cp);

}  // namespace serpgauge::unicode
