#pragma once

// Java SE 8 lexer. Splits source text into the five JLS token kinds
// (Identifier, Literal, Keyword, Separator, Operator), dropping whitespace
// and comments. Unicode escapes (\uXXXX) are translated before lexing, per
// the JLS translation order; token spans index the translated text, which is
// identical to the raw input whenever no escape occurs.
//
// Scope notes:
//  - Pure longest-match lexing, no parser feedback: ">>" always lexes as one
//    operator, generics or not.
//  - Any code point >= U+0080 is accepted as an identifier character; the
//    full Character.isJavaIdentifierPart tables are not replicated.
//  - '@' and '::' are separators (JLS SE 8 3.11); true/false/null lex as
//    literals (JLS 3.10.3, 3.10.7).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jmlm/errors.hpp"
#include "jmlm/special_tokens.hpp"

namespace jmlm {

enum class TokenKind { Identifier, Literal, Keyword, Separator, Operator };

inline const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "Identifier";
        case TokenKind::Literal: return "Literal";
        case TokenKind::Keyword: return "Keyword";
        case TokenKind::Separator: return "Separator";
        case TokenKind::Operator: return "Operator";
    }
    return "?";
}

struct JavaToken {
    std::string text;
    TokenKind kind;
    std::size_t begin = 0; // byte offsets into the (escape-translated) source
    std::size_t end = 0;   // half-open
};

class LexError : public DataError {
public:
    LexError(std::size_t offset, const std::string& message)
        : DataError("lex-error", message + " at byte " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_hex_digit(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}
inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '$' || c == '_' || c >= 0x80;
}
inline bool is_ident_part(unsigned char c) { return is_ident_start(c) || is_digit(char(c)); }

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(char(cp));
    } else if (cp < 0x800) {
        out.push_back(char(0xC0 | (cp >> 6)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(char(0xE0 | (cp >> 12)));
        out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(char(0xF0 | (cp >> 18)));
        out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    }
}

inline int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// JLS 3.3: \uXXXX escapes are replaced before any other lexing. A backslash
// introduces an escape only when preceded by an even number of backslashes.
// Surrogate pairs written as two escapes are combined into one code point.
inline std::string translate_unicode_escapes(std::string_view src) {
    std::string out;
    out.reserve(src.size());
    std::size_t i = 0;
    auto parse_escape = [&](std::size_t at, std::uint32_t& unit, std::size_t& len) -> bool {
        std::size_t j = at + 1; // at points at the backslash
        if (j >= src.size() || src[j] != 'u') return false;
        while (j < src.size() && src[j] == 'u') ++j;
        if (j + 4 > src.size()) throw LexError(at, "incomplete unicode escape");
        std::uint32_t v = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const int h = hex_value(src[j + k]);
            if (h < 0) throw LexError(at, "invalid unicode escape");
            v = (v << 4) | std::uint32_t(h);
        }
        unit = v;
        len = j + 4 - at;
        return true;
    };
    while (i < src.size()) {
        if (src[i] != '\\') {
            out.push_back(src[i++]);
            continue;
        }
        std::size_t run = 0;
        while (i + run < src.size() && src[i + run] == '\\') ++run;
        for (std::size_t k = 0; k + 1 < run; k += 2) {
            out.push_back('\\');
            out.push_back('\\');
        }
        if (run % 2 == 0) {
            i += run;
            continue;
        }
        const std::size_t bs = i + run - 1;
        std::uint32_t unit = 0;
        std::size_t len = 0;
        if (!parse_escape(bs, unit, len)) {
            out.push_back('\\');
            i = bs + 1;
            continue;
        }
        i = bs + len;
        if (unit >= 0xD800 && unit <= 0xDBFF) {
            std::uint32_t low = 0;
            std::size_t low_len = 0;
            if (i < src.size() && src[i] == '\\' && parse_escape(i, low, low_len) &&
                low >= 0xDC00 && low <= 0xDFFF) {
                i += low_len;
                append_utf8(out, 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00));
            } else {
                throw LexError(bs, "unpaired surrogate in unicode escape");
            }
        } else if (unit >= 0xDC00 && unit <= 0xDFFF) {
            throw LexError(bs, "unpaired surrogate in unicode escape");
        } else {
            append_utf8(out, unit);
        }
    }
    return out;
}

// Tokenizes escape-translated text, appending to `tokens` as it goes so that
// callers catching LexError still see every token completed before the error.
inline void lex_translated(const std::string& text, std::vector<JavaToken>& tokens) {
    const std::size_t n = text.size();
    std::size_t i = 0;

    auto emit = [&](std::size_t begin, std::size_t end, TokenKind kind) {
        tokens.push_back(JavaToken{text.substr(begin, end - begin), kind, begin, end});
    };
    auto starts_with = [&](std::size_t at, std::string_view s) {
        return text.compare(at, s.size(), s) == 0;
    };

    // Digits optionally separated by underscores. Underscores must sit between
    // digits, so the longest valid match starts and ends on a digit.
    auto scan_digits = [&](std::size_t at, auto&& is_digit_fn) -> std::size_t {
        if (at >= n || !is_digit_fn(text[at])) return at;
        std::size_t j = at;
        std::size_t last_digit = at;
        while (j < n && (is_digit_fn(text[j]) || text[j] == '_')) {
            if (text[j] != '_') last_digit = j + 1;
            ++j;
        }
        return last_digit;
    };

    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(text[i]);

        // Whitespace (JLS 3.6) and the legacy SUB character when last.
        if (c == ' ' || c == '\t' || c == '\f' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        if (c == 0x1A && i + 1 == n) break;

        // Comments (JLS 3.7).
        if (c == '/' && i + 1 < n && text[i + 1] == '/') {
            i += 2;
            while (i < n && text[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && text[i + 1] == '*') {
            const std::size_t start = i;
            i += 2;
            while (true) {
                if (i + 1 >= n) throw LexError(start, "unterminated comment");
                if (text[i] == '*' && text[i + 1] == '/') {
                    i += 2;
                    break;
                }
                ++i;
            }
            continue;
        }

        // Identifiers, keywords and the word literals true/false/null.
        if (is_ident_start(c)) {
            const std::size_t start = i;
            while (i < n && is_ident_part(static_cast<unsigned char>(text[i]))) ++i;
            const std::string_view word(text.data() + start, i - start);
            TokenKind kind = TokenKind::Identifier;
            if (keyword_set().count(word)) {
                kind = TokenKind::Keyword;
            } else if (word == "true" || word == "false" || word == "null") {
                kind = TokenKind::Literal;
            }
            emit(start, i, kind);
            continue;
        }

        // Numeric literals (JLS 3.10.1, 3.10.2).
        if (is_digit(char(c)) || (c == '.' && i + 1 < n && is_digit(text[i + 1]))) {
            const std::size_t start = i;
            bool is_float = false;
            if (c == '0' && i + 1 < n && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
                i += 2;
                const std::size_t digits_end = scan_digits(i, is_hex_digit);
                const bool any_digits = digits_end > i;
                i = digits_end;
                bool has_dot = false;
                if (i < n && text[i] == '.') {
                    const std::size_t frac_end = scan_digits(i + 1, is_hex_digit);
                    if (frac_end > i + 1 || any_digits) {
                        has_dot = true;
                        i = frac_end > i + 1 ? frac_end : i + 1;
                    }
                }
                if (!any_digits && !has_dot) throw LexError(start, "malformed hex literal");
                if (i < n && (text[i] == 'p' || text[i] == 'P')) {
                    std::size_t j = i + 1;
                    if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
                    const std::size_t exp_end = scan_digits(j, is_digit);
                    if (exp_end == j) throw LexError(start, "malformed hex float exponent");
                    i = exp_end;
                    is_float = true;
                } else if (has_dot) {
                    throw LexError(start, "hex float requires a binary exponent");
                }
            } else if (c == '0' && i + 1 < n && (text[i + 1] == 'b' || text[i + 1] == 'B')) {
                i += 2;
                const std::size_t digits_end =
                    scan_digits(i, [](char d) { return d == '0' || d == '1'; });
                if (digits_end == i) throw LexError(start, "malformed binary literal");
                i = digits_end;
            } else {
                i = scan_digits(i, is_digit); // leaves i == start for a leading '.'
                if (i < n && text[i] == '.') {
                    const std::size_t frac_end = scan_digits(i + 1, is_digit);
                    if (frac_end > i + 1) {
                        is_float = true;
                        i = frac_end;
                    } else if (i > start) {
                        is_float = true; // trailing dot, "1." is a valid float
                        ++i;
                    }
                }
                if (i < n && (text[i] == 'e' || text[i] == 'E')) {
                    std::size_t j = i + 1;
                    if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
                    const std::size_t exp_end = scan_digits(j, is_digit);
                    if (exp_end > j) {
                        i = exp_end;
                        is_float = true;
                    }
                }
            }
            if (i < n) {
                const char suffix = text[i];
                if (suffix == 'f' || suffix == 'F' || suffix == 'd' || suffix == 'D') {
                    ++i;
                } else if ((suffix == 'l' || suffix == 'L') && !is_float) {
                    ++i;
                }
            }
            emit(start, i, TokenKind::Literal);
            continue;
        }

        // Character and string literals (JLS 3.10.4 - 3.10.6). Content is
        // validated for escape legality and termination; multi-character char
        // literals are left to the parser, as is octal range checking.
        if (c == '\'' || c == '"') {
            const char quote = char(c);
            const std::size_t start = i;
            ++i;
            bool closed = false;
            while (i < n) {
                const char d = text[i];
                if (d == quote) {
                    ++i;
                    closed = true;
                    break;
                }
                if (d == '\n' || d == '\r') break;
                if (d == '\\') {
                    if (i + 1 >= n) break;
                    const char e = text[i + 1];
                    if (e == 'b' || e == 't' || e == 'n' || e == 'f' || e == 'r' || e == '"' ||
                        e == '\'' || e == '\\') {
                        i += 2;
                    } else if (e >= '0' && e <= '7') {
                        const std::size_t max_digits = e <= '3' ? 3 : 2;
                        std::size_t j = i + 1;
                        std::size_t taken = 0;
                        while (j < n && taken < max_digits && text[j] >= '0' && text[j] <= '7') {
                            ++j;
                            ++taken;
                        }
                        i = j;
                    } else {
                        throw LexError(i, "illegal escape sequence");
                    }
                } else {
                    ++i;
                }
            }
            if (!closed) {
                throw LexError(start, quote == '"' ? "unterminated string literal"
                                                   : "unterminated character literal");
            }
            if (quote == '\'' && i - start == 2) {
                throw LexError(start, "empty character literal");
            }
            emit(start, i, TokenKind::Literal);
            continue;
        }

        // Separators and operators, longest match first.
        static constexpr std::string_view multi[] = {
            ">>>=", "<<=", ">>=", ">>>", "...", "==", ">=", "<=", "!=", "&&", "||",
            "++",   "--",  "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<",
            ">>",   "->",  "::"};
        bool matched = false;
        for (const auto& op : multi) {
            if (starts_with(i, op)) {
                const bool separator = (op == "..." || op == "::");
                emit(i, i + op.size(), separator ? TokenKind::Separator : TokenKind::Operator);
                i += op.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;

        switch (c) {
            case '(': case ')': case '{': case '}': case '[': case ']':
            case ';': case ',': case '.': case '@':
                emit(i, i + 1, TokenKind::Separator);
                ++i;
                continue;
            case '=': case '>': case '<': case '!': case '~': case '?': case ':':
            case '+': case '-': case '*': case '/': case '&': case '|': case '^': case '%':
                emit(i, i + 1, TokenKind::Operator);
                ++i;
                continue;
            default:
                throw LexError(i, "illegal character");
        }
    }
}

} // namespace detail

inline std::vector<JavaToken> lex(std::string_view source) {
    const std::string text = detail::translate_unicode_escapes(source);
    std::vector<JavaToken> tokens;
    detail::lex_translated(text, tokens);
    return tokens;
}

struct TokenCount {
    std::size_t count = 0;
    bool ok = true; // false when lexing failed; count covers tokens before the error
};

inline TokenCount count_tokens(std::string_view source) noexcept {
    std::vector<JavaToken> tokens;
    try {
        const std::string text = detail::translate_unicode_escapes(source);
        detail::lex_translated(text, tokens);
        return TokenCount{tokens.size(), true};
    } catch (const LexError&) {
        return TokenCount{tokens.size(), false};
    } catch (...) {
        return TokenCount{tokens.size(), false};
    }
}

} // namespace jmlm
