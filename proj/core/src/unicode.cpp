#include "serpgauge/unicode.hpp"

namespace serpgauge::unicode {

DecodeResult decode_utf8(std::string_view bytes) {
    DecodeResult out;
    out.codepoints.reserve(bytes.size());
    std::size_t i = 0;
    const auto n = bytes.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        if (b0 < 0x80) {
            out.codepoints.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.codepoints.push_back(kReplacement);
            out.invalid_bytes += 1;
            ++i;
            continue;
        }
        bool ok = i + static_cast<std::size_t>(len) <= n;
        if (ok) {
            for (int k = 1; k < len; ++k) {
                const auto bk = static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
                if ((bk & 0xC0) != 0x80) {
                    ok = false;
                    break;
                }
                cp = (cp << 6) | (bk & 0x3F);
            }
        }
        if (ok) {
            // Reject overlong encodings and surrogate/out-of-range values.
            const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                                  (len == 4 && cp < 0x10000);
            if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) ok = false;
        }
        if (ok) {
            out.codepoints.push_back(cp);
            i += static_cast<std::size_t>(len);
        } else {
            out.codepoints.push_back(kReplacement);
            out.invalid_bytes += 1;
            ++i;
        }
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (const auto cp : cps) append_utf8(out, cp);
    return out;
}

bool is_whitespace(char32_t cp) {
    switch (cp) {
        case 0x09:
        case 0x0A:
        case 0x0B:
        case 0x0C:
        case 0x0D:
        case 0x20:
        case 0x85:
        case 0xA0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_separator_punct(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
        case 0xAB:    // «
        case 0xBB:    // »
        case 0xB7:    // middle dot
        case 0x60C:   // Arabic comma
        case 0x61B:   // Arabic semicolon
        case 0x61F:   // Arabic question mark
        case 0x66A:   // Arabic percent
        case 0x66B:   // Arabic decimal separator
        case 0x66C:   // Arabic thousands separator
        case 0x6D4:   // Arabic full stop
        case 0x2010:  // hyphen
        case 0x2011:
        case 0x2012:
        case 0x2013:
        case 0x2014:
        case 0x2015:
        case 0x2018:
        case 0x2019:
        case 0x201C:
        case 0x201D:
        case 0x2022:
        case 0x2026:
        case 0x2039:
        case 0x203A:
            return true;
        default:
            return false;
    }
}

char32_t lowercase_latin(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

}  // namespace serpgauge::unicode
