#pragma once

// WordPiece subword vocabulary: training, encoding, decoding, and the plain
// one-token-per-line file format. Every special-inventory member (Java's
// fixed tokens, true/false/null, and the model control tokens) is stored as
// a whole token that the segmenter never splits.
//
// Training scores candidate merges by pair_count / (freq(left) * freq(right)),
// greedily taking the best; ties break on the lexicographic order of the
// merged string, so a given corpus and target size always produce the same
// vocabulary bytes. Only Identifier and Literal lexemes feed the merge
// statistics. Encoding is greedy longest-match-first with "##" marking
// non-initial pieces; a lexeme longer than 100 characters, or one that hits
// an uncoverable position, becomes a single [UNK].

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "jmlm/errors.hpp"
#include "jmlm/lexer.hpp"
#include "jmlm/special_tokens.hpp"

namespace jmlm {

inline constexpr std::size_t kMaxLexemeChars = 100;
inline constexpr std::string_view kContinuationPrefix = "##";

class TargetTooSmall : public ConfigError {
public:
    explicit TargetTooSmall(std::size_t target, std::size_t floor)
        : ConfigError("vocab target size " + std::to_string(target) +
                      " does not exceed specials plus alphabet (" + std::to_string(floor) + ")") {}
};

class IdOutOfRange : public DataError {
public:
    IdOutOfRange(std::int32_t id, std::size_t size)
        : DataError("data-error", "token id " + std::to_string(id) +
                                      " outside vocabulary of size " + std::to_string(size)) {}
};

struct Vocabulary {
    std::vector<std::string> tokens; // index == id
    std::unordered_map<std::string, std::int32_t> token_to_id; // first occurrence wins
    std::unordered_set<std::int32_t> special_ids;
    std::string continuation_prefix = std::string(kContinuationPrefix);
    std::int32_t pad_id = -1;
    std::int32_t unk_id = -1;
    std::int32_t cls_id = -1;
    std::int32_t sep_id = -1;
    std::int32_t mask_id = -1;

    std::size_t size() const noexcept { return tokens.size(); }

    std::int32_t lookup(std::string_view text) const {
        auto it = token_to_id.find(std::string(text));
        return it == token_to_id.end() ? -1 : it->second;
    }

    const std::string& text_of(std::int32_t id) const {
        if (id < 0 || std::size_t(id) >= tokens.size()) throw IdOutOfRange(id, tokens.size());
        return tokens[std::size_t(id)];
    }

    bool is_control(std::int32_t id) const noexcept {
        return id == pad_id || id == unk_id || id == cls_id || id == sep_id || id == mask_id;
    }
};

struct EncodedSequence {
    std::vector<std::int32_t> ids;
    // One [begin, end) id range per input lexeme, partitioning `ids`.
    std::vector<std::pair<std::int32_t, std::int32_t>> lexeme_boundaries;
};

namespace detail {

inline std::size_t utf8_len(std::string_view s) {
    std::size_t count = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++count;
    }
    return count;
}

inline std::vector<std::string> utf8_chars(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t len = 1;
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if ((c & 0xF8) == 0xF0) len = 4;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xE0) == 0xC0) len = 2;
        len = std::min(len, s.size() - i);
        out.emplace_back(s.substr(i, len));
        i += len;
    }
    return out;
}

inline bool is_pseudo_keyword(std::string_view text) {
    return text == "true" || text == "false" || text == "null";
}

inline void append_token(Vocabulary& vocab, const std::string& text, bool special) {
    if (vocab.token_to_id.count(text)) return;
    const auto id = static_cast<std::int32_t>(vocab.tokens.size());
    vocab.tokens.push_back(text);
    vocab.token_to_id.emplace(text, id);
    if (special) vocab.special_ids.insert(id);
}

inline void bind_control_ids(Vocabulary& vocab) {
    vocab.pad_id = vocab.lookup("[PAD]");
    vocab.unk_id = vocab.lookup("[UNK]");
    vocab.cls_id = vocab.lookup("[CLS]");
    vocab.sep_id = vocab.lookup("[SEP]");
    vocab.mask_id = vocab.lookup("[MASK]");
    for (std::int32_t id : {vocab.pad_id, vocab.unk_id, vocab.cls_id, vocab.sep_id,
                            vocab.mask_id}) {
        if (id < 0) throw ConfigError("vocabulary is missing a required control token");
    }
    if (vocab.pad_id != 0) throw ConfigError("[PAD] must have id 0");
}

} // namespace detail

// Accumulates subword-training word frequencies from lexeme streams. Only
// Identifier and Literal lexemes count; pseudo-keywords are protected whole
// tokens and over-long lexemes can never be segmented, so both are skipped.
class WordCounter {
public:
    void add(const std::vector<JavaToken>& stream) {
        for (const auto& token : stream) {
            if (token.kind != TokenKind::Identifier && token.kind != TokenKind::Literal) continue;
            if (detail::is_pseudo_keyword(token.text)) continue;
            if (detail::utf8_len(token.text) > kMaxLexemeChars) continue;
            ++counts_[token.text];
        }
    }

    const std::unordered_map<std::string, std::int64_t>& counts() const noexcept {
        return counts_;
    }

private:
    std::unordered_map<std::string, std::int64_t> counts_;
};

namespace detail {

struct PairStat {
    std::int64_t count = 0;
    std::vector<std::int32_t> words; // word ids containing the pair; may hold duplicates
};

inline std::uint64_t pair_key(std::int32_t l, std::int32_t r) {
    return (std::uint64_t(std::uint32_t(l)) << 32) | std::uint32_t(r);
}

// Exact comparison of count_a/(fl_a*fr_a) vs count_b/(fl_b*fr_b).
inline int compare_scores(std::int64_t ca, std::int64_t fla, std::int64_t fra, std::int64_t cb,
                          std::int64_t flb, std::int64_t frb) {
    const unsigned __int128 lhs = (unsigned __int128)(ca) * (unsigned __int128)(flb) *
                                  (unsigned __int128)(frb);
    const unsigned __int128 rhs = (unsigned __int128)(cb) * (unsigned __int128)(fla) *
                                  (unsigned __int128)(fra);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

inline std::string merged_text(const std::string& left, const std::string& right) {
    std::string_view r(right);
    if (r.substr(0, kContinuationPrefix.size()) == kContinuationPrefix) {
        r.remove_prefix(kContinuationPrefix.size());
    }
    return left + std::string(r);
}

} // namespace detail

inline Vocabulary train_vocab(const WordCounter& counter, std::size_t target_size,
                              const SpecialTokenInventory& inventory = special_inventory()) {
    Vocabulary vocab;
    for (const auto& t : inventory.control) detail::append_token(vocab, t, true);
    for (const auto& t : inventory.java_fixed) detail::append_token(vocab, t, true);
    for (const auto& t : inventory.pseudo_keywords) detail::append_token(vocab, t, true);
    detail::bind_control_ids(vocab);

    // Deterministic word order; hash-map iteration order must not leak into
    // symbol ids or anything else downstream.
    std::map<std::string, std::int64_t> words_sorted(counter.counts().begin(),
                                                     counter.counts().end());

    // Alphabet: both the initial and the continuation form of every character
    // seen, so any in-alphabet lexeme is coverable and never hits [UNK].
    std::map<std::string, bool> alphabet; // char -> seen (ordered)
    for (const auto& [word, _count] : words_sorted) {
        for (auto& ch : detail::utf8_chars(word)) alphabet.emplace(ch, true);
    }
    const std::size_t floor = vocab.size() + 2 * alphabet.size();
    if (target_size <= floor) throw TargetTooSmall(target_size, floor);
    for (const auto& [ch, _] : alphabet) detail::append_token(vocab, ch, false);
    for (const auto& [ch, _] : alphabet) {
        detail::append_token(vocab, std::string(kContinuationPrefix) + ch, false);
    }

    // Symbol table over current word segmentations.
    std::vector<std::string> sym_text;
    std::unordered_map<std::string, std::int32_t> sym_id;
    auto intern = [&](const std::string& s) {
        auto it = sym_id.find(s);
        if (it != sym_id.end()) return it->second;
        const auto id = static_cast<std::int32_t>(sym_text.size());
        sym_text.push_back(s);
        sym_id.emplace(s, id);
        return id;
    };

    std::vector<std::vector<std::int32_t>> words;
    std::vector<std::int64_t> word_count;
    words.reserve(words_sorted.size());
    for (const auto& [word, count] : words_sorted) {
        const auto chars = detail::utf8_chars(word);
        std::vector<std::int32_t> syms;
        syms.reserve(chars.size());
        for (std::size_t i = 0; i < chars.size(); ++i) {
            syms.push_back(intern(i == 0 ? chars[i]
                                         : std::string(kContinuationPrefix) + chars[i]));
        }
        words.push_back(std::move(syms));
        word_count.push_back(count);
    }

    std::vector<std::int64_t> sym_freq(sym_text.size(), 0);
    std::unordered_map<std::uint64_t, detail::PairStat> pairs;
    auto freq_of = [&](std::int32_t s) -> std::int64_t& {
        if (std::size_t(s) >= sym_freq.size()) sym_freq.resize(s + 1, 0);
        return sym_freq[std::size_t(s)];
    };
    for (std::size_t w = 0; w < words.size(); ++w) {
        const auto& syms = words[w];
        const std::int64_t c = word_count[w];
        for (std::size_t i = 0; i < syms.size(); ++i) {
            freq_of(syms[i]) += c;
            if (i + 1 < syms.size()) {
                auto& stat = pairs[detail::pair_key(syms[i], syms[i + 1])];
                stat.count += c;
                if (stat.words.empty() || stat.words.back() != std::int32_t(w)) {
                    stat.words.push_back(std::int32_t(w));
                }
            }
        }
    }

    // Greedy merge loop. A dense scan with exact rational comparison keeps the
    // argmax independent of hash iteration order.
    while (vocab.size() < target_size && !pairs.empty()) {
        std::uint64_t best_key = 0;
        std::int64_t best_count = 0, best_fl = 1, best_fr = 1;
        std::string best_text;
        for (const auto& [key, stat] : pairs) {
            if (stat.count <= 0) continue;
            const auto l = std::int32_t(key >> 32);
            const auto r = std::int32_t(key & 0xFFFFFFFF);
            const std::int64_t fl = sym_freq[std::size_t(l)];
            const std::int64_t fr = sym_freq[std::size_t(r)];
            const int cmp = detail::compare_scores(stat.count, fl, fr, best_count, best_fl,
                                                   best_fr);
            if (cmp < 0) continue;
            std::string text = detail::merged_text(sym_text[std::size_t(l)],
                                                   sym_text[std::size_t(r)]);
            if (cmp > 0 || best_count == 0 || text < best_text) {
                best_key = key;
                best_count = stat.count;
                best_fl = fl;
                best_fr = fr;
                best_text = std::move(text);
            }
        }
        if (best_count <= 0) break;

        const auto left = std::int32_t(best_key >> 32);
        const auto right = std::int32_t(best_key & 0xFFFFFFFF);
        const std::int32_t merged = intern(best_text);
        detail::append_token(vocab, best_text, false);

        auto affected = std::move(pairs[best_key].words);
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
        pairs.erase(best_key);

        for (const std::int32_t w : affected) {
            auto& syms = words[std::size_t(w)];
            const std::int64_t c = word_count[std::size_t(w)];
            bool contains = false;
            for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
                if (syms[i] == left && syms[i + 1] == right) {
                    contains = true;
                    break;
                }
            }
            if (!contains) continue; // stale membership from an earlier rewrite

            // Retract this word's contribution, rewrite, then re-add.
            for (std::size_t i = 0; i < syms.size(); ++i) {
                freq_of(syms[i]) -= c;
                if (i + 1 < syms.size()) {
                    auto it = pairs.find(detail::pair_key(syms[i], syms[i + 1]));
                    if (it != pairs.end()) it->second.count -= c;
                }
            }
            std::vector<std::int32_t> next;
            next.reserve(syms.size());
            for (std::size_t i = 0; i < syms.size();) {
                if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
                    next.push_back(merged);
                    i += 2;
                } else {
                    next.push_back(syms[i]);
                    ++i;
                }
            }
            syms = std::move(next);
            for (std::size_t i = 0; i < syms.size(); ++i) {
                freq_of(syms[i]) += c;
                if (i + 1 < syms.size()) {
                    auto& stat = pairs[detail::pair_key(syms[i], syms[i + 1])];
                    stat.count += c;
                    if (stat.words.empty() || stat.words.back() != w) stat.words.push_back(w);
                }
            }
        }

        // Drop exhausted pairs so the scan stays dense.
        for (auto it = pairs.begin(); it != pairs.end();) {
            it = it->second.count <= 0 ? pairs.erase(it) : std::next(it);
        }
    }

    return vocab;
}

inline Vocabulary train_vocab(const std::vector<std::vector<JavaToken>>& corpus,
                              std::size_t target_size,
                              const SpecialTokenInventory& inventory = special_inventory()) {
    WordCounter counter;
    for (const auto& stream : corpus) counter.add(stream);
    return train_vocab(counter, target_size, inventory);
}

// Greedy longest-match-first segmentation of one lexeme. Returns false when
// some position cannot be covered (caller then emits [UNK]).
inline bool wordpiece_segment(std::string_view lexeme, const Vocabulary& vocab,
                              std::vector<std::int32_t>& out) {
    const std::size_t start_size = out.size();
    std::size_t pos = 0;
    while (pos < lexeme.size()) {
        const bool initial = pos == 0;
        std::size_t take = lexeme.size() - pos;
        std::int32_t id = -1;
        while (take > 0) {
            std::string candidate = initial
                                        ? std::string(lexeme.substr(pos, take))
                                        : std::string(kContinuationPrefix) +
                                              std::string(lexeme.substr(pos, take));
            id = vocab.lookup(candidate);
            if (id >= 0) break;
            --take;
        }
        if (id < 0) {
            out.resize(start_size);
            return false;
        }
        out.push_back(id);
        pos += take;
    }
    return true;
}

inline EncodedSequence encode(const std::vector<JavaToken>& lexemes, const Vocabulary& vocab) {
    EncodedSequence seq;
    seq.lexeme_boundaries.reserve(lexemes.size());
    for (const auto& token : lexemes) {
        const auto begin = static_cast<std::int32_t>(seq.ids.size());
        const bool fixed_kind = token.kind == TokenKind::Keyword ||
                                token.kind == TokenKind::Separator ||
                                token.kind == TokenKind::Operator;
        const bool protected_text = detail::is_pseudo_keyword(token.text) ||
                                    std::find(kControlTokens.begin(), kControlTokens.end(),
                                              token.text) != kControlTokens.end();
        bool done = false;
        if (fixed_kind || protected_text) {
            const std::int32_t id = vocab.lookup(token.text);
            if (id >= 0) {
                seq.ids.push_back(id);
                done = true;
            }
            // A vocabulary trained here always contains the whole token; an
            // imported external one may not, in which case fall through.
        }
        if (!done) {
            if (detail::utf8_len(token.text) > kMaxLexemeChars ||
                !wordpiece_segment(token.text, vocab, seq.ids)) {
                seq.ids.push_back(vocab.unk_id);
            }
        }
        seq.lexeme_boundaries.emplace_back(begin, static_cast<std::int32_t>(seq.ids.size()));
    }
    return seq;
}

inline std::vector<std::string> decode(const std::vector<std::int32_t>& ids,
                                       const Vocabulary& vocab) {
    std::vector<std::string> lexemes;
    for (const std::int32_t id : ids) {
        const std::string& piece = vocab.text_of(id);
        const bool continuation =
            piece.size() > kContinuationPrefix.size() &&
            std::string_view(piece).substr(0, kContinuationPrefix.size()) == kContinuationPrefix &&
            !lexemes.empty();
        if (continuation) {
            lexemes.back() += piece.substr(kContinuationPrefix.size());
        } else {
            lexemes.push_back(piece);
        }
    }
    return lexemes;
}

inline void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write vocabulary file " + path.string());
    for (const auto& token : vocab.tokens) out << token << '\n';
}

// Loads a one-token-per-line vocabulary. Files produced by train_vocab are
// duplicate-free; externally supplied files are imported verbatim, with the
// first occurrence of a duplicate string winning the text-to-id mapping.
inline Vocabulary load_vocab(const std::filesystem::path& path,
                             const SpecialTokenInventory& inventory = special_inventory()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read vocabulary file " + path.string());
    Vocabulary vocab;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto id = static_cast<std::int32_t>(vocab.tokens.size());
        vocab.tokens.push_back(line);
        vocab.token_to_id.emplace(line, id); // first occurrence wins
    }
    if (vocab.tokens.empty()) throw ConfigError("empty vocabulary file " + path.string());
    detail::bind_control_ids(vocab);
    for (const auto* list : {&inventory.control, &inventory.java_fixed,
                             &inventory.pseudo_keywords}) {
        for (const auto& t : *list) {
            const std::int32_t id = vocab.lookup(t);
            if (id >= 0) vocab.special_ids.insert(id);
        }
    }
    return vocab;
}

} // namespace jmlm
