#pragma once

// Masked-token accuracy: a prediction at a labeled position counts as
// correct when the original id ranks inside the top-k logits (ties broken
// toward the lower id, so rankings are deterministic). Per batch this gives
// R = C / N over the N masked positions; the report carries both the
// unweighted mean of batch R values and the token-weighted ratio, which
// differ whenever batch sizes vary.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jmlm/errors.hpp"
#include "jmlm/masking.hpp"
#include "jmlm/model.hpp"
#include "jmlm/trainer.hpp"
#include "jmlm/version.hpp"
#include "jmlm/wordpiece.hpp"

namespace jmlm {

class EmptyBatch : public DataError {
public:
    EmptyBatch() : DataError("data-error", "batch has no labeled positions to score") {}
};

class EmptyInput : public DataError {
public:
    EmptyInput() : DataError("data-error", "nothing to aggregate") {}
};

class VocabMismatch : public ConfigError {
public:
    VocabMismatch(std::size_t model_vocab, std::size_t vocab_size)
        : ConfigError("checkpoint vocab size " + std::to_string(model_vocab) +
                      " does not match vocabulary of size " + std::to_string(vocab_size)) {}
};

struct MatchRule {
    int k = 1;
};

struct BatchScore {
    std::int64_t masked = 0;  // N
    std::int64_t correct = 0; // C
    double rate = 0.0;        // R = C / N
};

// True when `label` is among the top-k ids of `logits` (ties to lower id).
inline bool in_top_k(const double* logits, std::int64_t vocab, std::int32_t label, int k) {
    const double own = logits[label];
    std::int64_t ahead = 0;
    for (std::int64_t v = 0; v < vocab; ++v) {
        if (logits[v] > own || (logits[v] == own && v < label)) {
            if (++ahead >= k) return false;
        }
    }
    return ahead < k;
}

inline BatchScore score_batch(const Tensor& logits, const IntMatrix& labels,
                              const MatchRule& rule) {
    if (rule.k < 1) throw ConfigError("match rule k must be at least 1");
    if (logits.shape.size() != 3) throw ShapeMismatch("logits must be B x L x V");
    const std::int64_t R = logits.shape[0] * logits.shape[1];
    const std::int64_t V = logits.shape[2];
    if (labels.rows * labels.cols != R) throw ShapeMismatch("labels do not match logits");
    BatchScore score;
    for (std::int64_t r = 0; r < R; ++r) {
        const auto label = labels.data[std::size_t(r)];
        if (label == kIgnoreLabel) continue;
        if (label < 0 || label >= V) throw ShapeMismatch("label id outside vocabulary");
        ++score.masked;
        score.correct += in_top_k(logits.ptr() + r * V, V, label, rule.k);
    }
    if (score.masked == 0) throw EmptyBatch();
    score.rate = double(score.correct) / double(score.masked);
    return score;
}

struct RuleReport {
    int k = 1;
    std::vector<BatchScore> batches;
    double aggregate_rate = 0.0;      // unweighted mean over batch R values
    double token_weighted_rate = 0.0; // sum(C) / sum(N)
    std::int64_t total_masked = 0;
    std::int64_t total_correct = 0;
};

// Unweighted mean of batch rates, plus the token-weighted totals.
inline void aggregate(RuleReport& report) {
    if (report.batches.empty()) throw EmptyInput();
    double sum = 0.0;
    report.total_masked = 0;
    report.total_correct = 0;
    for (const auto& b : report.batches) {
        sum += b.rate;
        report.total_masked += b.masked;
        report.total_correct += b.correct;
    }
    report.aggregate_rate = sum / double(report.batches.size());
    report.token_weighted_rate =
        report.total_masked > 0 ? double(report.total_correct) / double(report.total_masked)
                                : 0.0;
}

struct EvalReport {
    std::string model;
    std::int64_t vocab_size = 0;
    std::int64_t num_batches = 0;
    std::int64_t skipped_empty_batches = 0;
    std::vector<RuleReport> rules;
};

// Scores every batch from the source under each rule. Evaluation always
// masks with pure [MASK] replacement (treatments 1/0/0) so that scored
// positions are genuinely hidden; the caller's seed and mask_prob apply.
inline EvalReport run_eval(const EncoderParams& params, const Vocabulary& vocab,
                           BatchSource& batches, const std::vector<MatchRule>& rules,
                           const std::string& model_name = "model") {
    if (std::size_t(params.config.vocab_size) != vocab.size()) {
        throw VocabMismatch(std::size_t(params.config.vocab_size), vocab.size());
    }
    EvalReport report;
    report.model = model_name;
    report.vocab_size = std::int64_t(vocab.size());
    report.rules.reserve(rules.size());
    for (const auto& rule : rules) report.rules.push_back(RuleReport{rule.k, {}, 0, 0, 0, 0});

    batches.reset(0);
    MaskedBatch batch;
    while (batches.next(batch)) {
        std::int64_t labeled = 0;
        for (const auto l : batch.labels.data) labeled += l != kIgnoreLabel;
        if (labeled == 0) {
            ++report.skipped_empty_batches;
            continue;
        }
        ForwardCache cache;
        const Tensor& logits = forward(params, batch, cache);
        for (auto& rule_report : report.rules) {
            rule_report.batches.push_back(
                score_batch(logits, batch.labels, MatchRule{rule_report.k}));
        }
        ++report.num_batches;
    }
    for (auto& rule_report : report.rules) aggregate(rule_report);
    return report;
}

inline nlohmann::json report_to_json(const EvalReport& report,
                                     const std::string& config_hash = "") {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : report.rules) {
        rules.push_back({{"k", r.k},
                         {"aggregate_R", r.aggregate_rate},
                         {"token_weighted_R", r.token_weighted_rate},
                         {"num_batches", std::int64_t(r.batches.size())},
                         {"total_N", r.total_masked},
                         {"total_C", r.total_correct}});
    }
    nlohmann::json j{{"format_version", kReportFormatVersion},
                     {"model", report.model},
                     {"vocab_size", report.vocab_size},
                     {"num_batches", report.num_batches},
                     {"skipped_empty_batches", report.skipped_empty_batches},
                     {"rules", std::move(rules)}};
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    return j;
}

inline std::string rule_column_name(int k) {
    return k == 1 ? std::string("1-Word-Match")
                  : std::to_string(k) + "-Words-Match";
}

// Plain-text comparison table; one row per report.
inline std::string render_score_table(const std::vector<nlohmann::json>& reports) {
    std::vector<int> ks;
    for (const auto& rep : reports) {
        for (const auto& rule : rep.at("rules")) {
            const int k = rule.at("k").get<int>();
            if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
        }
    }
    std::sort(ks.begin(), ks.end());

    std::ostringstream out;
    out << std::left << std::setw(24) << "Model";
    for (const int k : ks) out << std::right << std::setw(16) << rule_column_name(k);
    out << '\n';
    out << std::string(24 + 16 * ks.size(), '-') << '\n';
    for (const auto& rep : reports) {
        out << std::left << std::setw(24) << rep.at("model").get<std::string>();
        for (const int k : ks) {
            double value = -1.0;
            for (const auto& rule : rep.at("rules")) {
                if (rule.at("k").get<int>() == k) value = rule.at("aggregate_R").get<double>();
            }
            std::ostringstream cell;
            if (value < 0) {
                cell << "-";
            } else {
                cell << std::fixed << std::setprecision(1) << value * 100.0 << "%";
            }
            out << std::right << std::setw(16) << cell.str();
        }
        out << '\n';
    }
    return out.str();
}

} // namespace jmlm
