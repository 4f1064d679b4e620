#pragma once

// MLM batch construction: wraps encoded sequences with [CLS]/[SEP], chunks
// them at lexeme boundaries, and applies the seeded mask-and-label step that
// turns examples into fixed-shape batches.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "jmlm/errors.hpp"
#include "jmlm/rng.hpp"
#include "jmlm/wordpiece.hpp"

namespace jmlm {

inline constexpr std::int32_t kIgnoreLabel = -1;

struct MaskingConfig {
    double mask_prob = 0.15;
    double replace_mask = 0.8;   // selected -> [MASK]
    double replace_random = 0.1; // selected -> random non-control id
    double keep = 0.1;           // selected -> left in place
    std::uint64_t seed = 0;
    std::int32_t max_seq_len = 512;

    void validate() const {
        if (mask_prob < 0.0 || mask_prob > 1.0) {
            throw ConfigError("mask_prob must lie in [0, 1]");
        }
        if (replace_mask < 0.0 || replace_random < 0.0 || keep < 0.0) {
            throw ConfigError("treatment fractions must be non-negative");
        }
        const double sum = replace_mask + replace_random + keep;
        if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9) {
            throw ConfigError("treatment fractions must sum to 1");
        }
        if (max_seq_len < 3) throw ConfigError("max_seq_len must be at least 3");
    }
};

// Row-major int32 matrix; the shape every batch tensor shares.
struct IntMatrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<std::int32_t> data;

    IntMatrix() = default;
    IntMatrix(std::int64_t r, std::int64_t c, std::int32_t fill = 0)
        : rows(r), cols(c), data(std::size_t(r * c), fill) {}

    std::int32_t& at(std::int64_t r, std::int64_t c) { return data[std::size_t(r * cols + c)]; }
    std::int32_t at(std::int64_t r, std::int64_t c) const {
        return data[std::size_t(r * cols + c)];
    }
};

struct MaskedBatch {
    IntMatrix input_ids;
    IntMatrix attention_mask; // 1 = real token, 0 = padding
    IntMatrix labels;         // original id at selected positions, else kIgnoreLabel
};

// Wraps a sequence in [CLS] ... [SEP] and chunks it into windows of at most
// max_seq_len ids. Chunk boundaries fall on lexeme edges unless a single
// lexeme's subword run alone exceeds the window, in which case the run is
// split. The empty sequence yields no examples.
inline std::vector<std::vector<std::int32_t>> make_examples(const EncodedSequence& seq,
                                                            const Vocabulary& vocab,
                                                            std::int32_t max_seq_len) {
    if (max_seq_len < 3) throw ConfigError("max_seq_len must be at least 3");
    std::vector<std::vector<std::int32_t>> examples;
    if (seq.ids.empty()) return examples;
    const std::size_t capacity = std::size_t(max_seq_len) - 2;

    std::vector<std::int32_t> current;
    auto flush = [&] {
        if (current.empty()) return;
        std::vector<std::int32_t> example;
        example.reserve(current.size() + 2);
        example.push_back(vocab.cls_id);
        example.insert(example.end(), current.begin(), current.end());
        example.push_back(vocab.sep_id);
        examples.push_back(std::move(example));
        current.clear();
    };

    for (const auto& [begin, end] : seq.lexeme_boundaries) {
        const std::size_t run = std::size_t(end - begin);
        if (run == 0) continue;
        if (run > capacity) {
            // Oversized run: split it across windows.
            flush();
            std::size_t pos = std::size_t(begin);
            while (pos < std::size_t(end)) {
                const std::size_t take = std::min(capacity, std::size_t(end) - pos);
                current.assign(seq.ids.begin() + pos, seq.ids.begin() + pos + take);
                pos += take;
                flush();
            }
            continue;
        }
        if (current.size() + run > capacity) flush();
        current.insert(current.end(), seq.ids.begin() + begin, seq.ids.begin() + end);
    }
    flush();
    return examples;
}

// Masks a list of examples into one fixed-shape batch of width max_seq_len.
// Each eligible position (attended and not [CLS]/[SEP]/[PAD]) is selected
// independently with probability mask_prob; selected positions are replaced
// by [MASK], by a uniformly random non-control id, or kept, per the
// configured treatment split. Deterministic given cfg.seed.
inline MaskedBatch mask(const std::vector<std::vector<std::int32_t>>& examples,
                        const Vocabulary& vocab, const MaskingConfig& cfg) {
    cfg.validate();
    const auto batch_size = std::int64_t(examples.size());
    const std::int64_t len = cfg.max_seq_len;
    MaskedBatch batch{IntMatrix(batch_size, len, vocab.pad_id),
                      IntMatrix(batch_size, len, 0), IntMatrix(batch_size, len, kIgnoreLabel)};
    Rng rng(cfg.seed);

    auto random_replacement = [&]() -> std::int32_t {
        while (true) {
            const auto id = std::int32_t(rng.uniform_below(vocab.size()));
            if (!vocab.is_control(id)) return id;
        }
    };

    for (std::int64_t b = 0; b < batch_size; ++b) {
        const auto& example = examples[std::size_t(b)];
        if (std::int64_t(example.size()) > len) {
            throw ConfigError("example longer than max_seq_len");
        }
        for (std::int64_t l = 0; l < std::int64_t(example.size()); ++l) {
            const std::int32_t id = example[std::size_t(l)];
            batch.input_ids.at(b, l) = id;
            batch.attention_mask.at(b, l) = 1;
            if (id == vocab.cls_id || id == vocab.sep_id || id == vocab.pad_id) continue;
            if (!rng.bernoulli(cfg.mask_prob)) continue;
            batch.labels.at(b, l) = id;
            const double treatment = rng.uniform01();
            if (treatment < cfg.replace_mask) {
                batch.input_ids.at(b, l) = vocab.mask_id;
            } else if (treatment < cfg.replace_mask + cfg.replace_random) {
                batch.input_ids.at(b, l) = random_replacement();
            } // else: keep the original id visible
        }
    }
    return batch;
}

// Binary dump for cross-implementation diffing: little-endian int32 header
// (B, L) followed by input_ids, attention_mask, labels, each row-major.
inline void dump_batch(const MaskedBatch& batch, const std::filesystem::path& path) {
    static_assert(std::endian::native == std::endian::little,
                  "batch dump assumes a little-endian host");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write batch dump " + path.string());
    const std::int32_t header[2] = {std::int32_t(batch.input_ids.rows),
                                    std::int32_t(batch.input_ids.cols)};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (const IntMatrix* m : {&batch.input_ids, &batch.attention_mask, &batch.labels}) {
        out.write(reinterpret_cast<const char*>(m->data.data()),
                  std::streamsize(m->data.size() * sizeof(std::int32_t)));
    }
}

inline MaskedBatch load_batch_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open batch dump " + path.string());
    std::int32_t header[2] = {0, 0};
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || header[0] < 0 || header[1] <= 0) {
        throw DataError("data-error", "malformed batch dump header in " + path.string());
    }
    MaskedBatch batch{IntMatrix(header[0], header[1]), IntMatrix(header[0], header[1]),
                      IntMatrix(header[0], header[1])};
    for (IntMatrix* m : {&batch.input_ids, &batch.attention_mask, &batch.labels}) {
        in.read(reinterpret_cast<char*>(m->data.data()),
                std::streamsize(m->data.size() * sizeof(std::int32_t)));
        if (!in) throw DataError("data-error", "truncated batch dump " + path.string());
    }
    return batch;
}

} // namespace jmlm
