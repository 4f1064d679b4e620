#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace jmlm {

// Fixed-vocabulary tokens of Java SE 8: all keywords (JLS 3.9), separators
// (JLS 3.11) and operators (JLS 3.12). Later-edition contextual keywords
// (var, record, ...) are deliberately absent and lex as identifiers.

inline constexpr std::array<std::string_view, 50> kJavaKeywords = {
    "abstract", "assert",       "boolean", "break",     "byte",      "case",    "catch",
    "char",     "class",        "const",   "continue",  "default",   "do",      "double",
    "else",     "enum",         "extends", "final",     "finally",   "float",   "for",
    "goto",     "if",           "implements", "import", "instanceof", "int",    "interface",
    "long",     "native",       "new",     "package",   "private",   "protected", "public",
    "return",   "short",        "static",  "strictfp",  "super",     "switch",  "synchronized",
    "this",     "throw",        "throws",  "transient", "try",       "void",    "volatile",
    "while"};

inline constexpr std::array<std::string_view, 12> kJavaSeparators = {
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "...", "@", "::"};

inline constexpr std::array<std::string_view, 38> kJavaOperators = {
    "=",  ">",  "<",  "!",  "~",   "?",  ":",  "->",
    "==", ">=", "<=", "!=", "&&",  "||", "++", "--",
    "+",  "-",  "*",  "/",  "&",   "|",  "^",  "%",
    "<<", ">>", ">>>",
    "+=", "-=", "*=", "/=", "&=",  "|=", "^=", "%=",
    "<<=", ">>=", ">>>="};

// true/false/null look like keywords but are literals per the JLS; they are
// still protected from subword splitting downstream.
inline constexpr std::array<std::string_view, 3> kPseudoKeywords = {"true", "false", "null"};

inline constexpr std::array<std::string_view, 5> kControlTokens = {"[PAD]", "[UNK]", "[CLS]",
                                                                   "[SEP]", "[MASK]"};

struct SpecialTokenInventory {
    // Keywords, then separators, then operators; order is fixed across runs.
    std::vector<std::string> java_fixed;
    std::vector<std::string> pseudo_keywords;
    std::vector<std::string> control;
};

inline const SpecialTokenInventory& special_inventory() {
    static const SpecialTokenInventory inventory = [] {
        SpecialTokenInventory inv;
        inv.java_fixed.reserve(kJavaKeywords.size() + kJavaSeparators.size() +
                               kJavaOperators.size());
        for (auto t : kJavaKeywords) inv.java_fixed.emplace_back(t);
        for (auto t : kJavaSeparators) inv.java_fixed.emplace_back(t);
        for (auto t : kJavaOperators) inv.java_fixed.emplace_back(t);
        for (auto t : kPseudoKeywords) inv.pseudo_keywords.emplace_back(t);
        for (auto t : kControlTokens) inv.control.emplace_back(t);
        return inv;
    }();
    return inventory;
}

inline const std::unordered_set<std::string_view>& keyword_set() {
    static const std::unordered_set<std::string_view> set(kJavaKeywords.begin(),
                                                          kJavaKeywords.end());
    return set;
}

} // namespace jmlm
