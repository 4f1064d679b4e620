#pragma once

// Pipeline configuration and the stage runners the CLI wires together.
// One JSON config file carries every stage's settings; each stage reads only
// its declared inputs and writes its declared outputs, so deleting any
// downstream artifact and re-running that stage reproduces it byte for byte.
// Every artifact (or its sidecar) embeds the hash of the resolved config.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jmlm/checkpoint.hpp"
#include "jmlm/errors.hpp"
#include "jmlm/eval.hpp"
#include "jmlm/lexer.hpp"
#include "jmlm/masking.hpp"
#include "jmlm/miner.hpp"
#include "jmlm/model.hpp"
#include "jmlm/trainer.hpp"
#include "jmlm/version.hpp"
#include "jmlm/wordpiece.hpp"

namespace jmlm {

struct PipelineConfig {
    std::uint64_t seed = 42;
    // Paths
    std::filesystem::path events_dir;
    std::filesystem::path metadata_file;
    std::filesystem::path repos_root;
    std::filesystem::path out_dir;
    // Stage settings
    MinerConfig miner;
    std::size_t vocab_target_size = 8000;
    std::filesystem::path external_vocab; // when set, no vocabulary is trained
    MaskingConfig masking;
    EncoderConfig encoder = EncoderConfig::desk_default(0); // vocab bound at train time
    TrainConfig training;
    std::vector<int> eval_ks = {1, 3};
    std::int64_t eval_batch_size = 30;

    void validate() const {
        if (external_vocab.empty()) {
            // The experiment grid ships three vocabulary sizes; anything else
            // arrives as an external vocabulary file.
            if (vocab_target_size != 8000 && vocab_target_size != 16000 &&
                vocab_target_size != 32000) {
                throw ConfigError("vocab target_size must be 8000, 16000, or 32000 "
                                  "(or supply an external vocabulary)");
            }
        }
        if (!(miner.ratio > 0.0 && miner.ratio < 1.0)) {
            throw ConfigError("split ratio must lie in (0, 1)");
        }
        if (miner.min_tokens < 0 || miner.max_tokens < miner.min_tokens) {
            throw ConfigError("token thresholds must satisfy 0 <= min <= max");
        }
        if (miner.min_comments < 0) throw ConfigError("min_comments must be non-negative");
        masking.validate();
        training.validate();
        if (eval_ks.empty()) throw ConfigError("eval needs at least one k");
        for (const int k : eval_ks) {
            if (k < 1) throw ConfigError("eval k values must be at least 1");
        }
        if (eval_batch_size < 1) throw ConfigError("eval batch size must be at least 1");
    }
};

inline nlohmann::json config_to_json(const PipelineConfig& cfg) {
    return nlohmann::json{
        {"schema_version", kConfigSchemaVersion},
        {"seed", cfg.seed},
        {"paths",
         {{"events_dir", cfg.events_dir.generic_string()},
          {"metadata_file", cfg.metadata_file.generic_string()},
          {"repos_root", cfg.repos_root.generic_string()},
          {"out_dir", cfg.out_dir.generic_string()}}},
        {"miner",
         {{"qualifying_event_type", cfg.miner.qualifying_event_type},
          {"qualifying_action", cfg.miner.qualifying_action},
          {"min_comments", cfg.miner.min_comments},
          {"min_tokens", cfg.miner.min_tokens},
          {"max_tokens", cfg.miner.max_tokens},
          {"licenses", cfg.miner.licenses},
          {"language_top_k", cfg.miner.language_top_k},
          {"ratio", cfg.miner.ratio}}},
        {"vocab",
         {{"target_size", cfg.vocab_target_size},
          {"external_path", cfg.external_vocab.generic_string()}}},
        {"masking",
         {{"mask_prob", cfg.masking.mask_prob},
          {"replace_mask", cfg.masking.replace_mask},
          {"replace_random", cfg.masking.replace_random},
          {"keep", cfg.masking.keep},
          {"max_seq_len", cfg.masking.max_seq_len}}},
        {"encoder", cfg.encoder},
        {"training",
         {{"learning_rate", cfg.training.learning_rate},
          {"batch_size", cfg.training.batch_size},
          {"epochs", cfg.training.epochs},
          {"weight_decay", cfg.training.weight_decay},
          {"adam_beta1", cfg.training.adam_beta1},
          {"adam_beta2", cfg.training.adam_beta2},
          {"adam_eps", cfg.training.adam_eps},
          {"log_every", cfg.training.log_every},
          {"use_dropout", cfg.training.use_dropout}}},
        {"eval", {{"ks", cfg.eval_ks}, {"batch_size", cfg.eval_batch_size}}}};
}

inline void config_from_json(const nlohmann::json& j, PipelineConfig& cfg) {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        if (p.contains("events_dir")) cfg.events_dir = p.at("events_dir").get<std::string>();
        if (p.contains("metadata_file")) {
            cfg.metadata_file = p.at("metadata_file").get<std::string>();
        }
        if (p.contains("repos_root")) cfg.repos_root = p.at("repos_root").get<std::string>();
        if (p.contains("out_dir")) cfg.out_dir = p.at("out_dir").get<std::string>();
    }
    if (j.contains("miner")) {
        const auto& m = j.at("miner");
        if (m.contains("qualifying_event_type")) {
            cfg.miner.qualifying_event_type = m.at("qualifying_event_type").get<std::string>();
        }
        if (m.contains("qualifying_action")) {
            cfg.miner.qualifying_action = m.at("qualifying_action").get<std::string>();
        }
        if (m.contains("min_comments")) {
            cfg.miner.min_comments = m.at("min_comments").get<std::int64_t>();
        }
        if (m.contains("min_tokens")) {
            cfg.miner.min_tokens = m.at("min_tokens").get<std::int64_t>();
        }
        if (m.contains("max_tokens")) {
            cfg.miner.max_tokens = m.at("max_tokens").get<std::int64_t>();
        }
        if (m.contains("licenses")) {
            cfg.miner.licenses = m.at("licenses").get<std::vector<std::string>>();
        }
        if (m.contains("language_top_k")) {
            cfg.miner.language_top_k = m.at("language_top_k").get<int>();
        }
        if (m.contains("ratio")) cfg.miner.ratio = m.at("ratio").get<double>();
    }
    if (j.contains("vocab")) {
        const auto& v = j.at("vocab");
        if (v.contains("target_size")) {
            cfg.vocab_target_size = v.at("target_size").get<std::size_t>();
        }
        if (v.contains("external_path")) {
            cfg.external_vocab = v.at("external_path").get<std::string>();
        }
    }
    if (j.contains("masking")) {
        const auto& m = j.at("masking");
        if (m.contains("mask_prob")) cfg.masking.mask_prob = m.at("mask_prob").get<double>();
        if (m.contains("replace_mask")) {
            cfg.masking.replace_mask = m.at("replace_mask").get<double>();
        }
        if (m.contains("replace_random")) {
            cfg.masking.replace_random = m.at("replace_random").get<double>();
        }
        if (m.contains("keep")) cfg.masking.keep = m.at("keep").get<double>();
        if (m.contains("max_seq_len")) {
            cfg.masking.max_seq_len = m.at("max_seq_len").get<std::int32_t>();
        }
    }
    if (j.contains("encoder")) cfg.encoder = j.at("encoder").get<EncoderConfig>();
    if (j.contains("training")) {
        const auto& t = j.at("training");
        if (t.contains("learning_rate")) {
            cfg.training.learning_rate = t.at("learning_rate").get<double>();
        }
        if (t.contains("batch_size")) {
            cfg.training.batch_size = t.at("batch_size").get<std::int64_t>();
        }
        if (t.contains("epochs")) cfg.training.epochs = t.at("epochs").get<std::int64_t>();
        if (t.contains("weight_decay")) {
            cfg.training.weight_decay = t.at("weight_decay").get<double>();
        }
        if (t.contains("adam_beta1")) cfg.training.adam_beta1 = t.at("adam_beta1").get<double>();
        if (t.contains("adam_beta2")) cfg.training.adam_beta2 = t.at("adam_beta2").get<double>();
        if (t.contains("adam_eps")) cfg.training.adam_eps = t.at("adam_eps").get<double>();
        if (t.contains("log_every")) {
            cfg.training.log_every = t.at("log_every").get<std::int64_t>();
        }
        if (t.contains("use_dropout")) cfg.training.use_dropout = t.at("use_dropout").get<bool>();
    }
    if (j.contains("eval")) {
        const auto& e = j.at("eval");
        if (e.contains("ks")) cfg.eval_ks = e.at("ks").get<std::vector<int>>();
        if (e.contains("batch_size")) {
            cfg.eval_batch_size = e.at("batch_size").get<std::int64_t>();
        }
    }
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("malformed JSON in config file " + path.string());
    PipelineConfig cfg;
    config_from_json(j, cfg);
    return cfg;
}

// FNV-1a 64 over the canonical (sorted-key, compact) dump of the resolved
// config; embedded in every artifact for provenance checks.
inline std::string config_hash(const PipelineConfig& cfg) {
    const std::string canonical = config_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Encoded-corpus artifact: one JSON line per file with ids and per-lexeme
// subword run lengths.
// ---------------------------------------------------------------------------

inline void ensure_parent_dir(const std::filesystem::path& path) {
    const auto parent = path.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

struct EncodedFile {
    std::string path;
    EncodedSequence seq;
};

inline void save_encoded(const std::vector<EncodedFile>& files,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write encoded corpus " + path.string());
    for (const auto& file : files) {
        std::vector<std::int32_t> runs;
        runs.reserve(file.seq.lexeme_boundaries.size());
        for (const auto& [b, e] : file.seq.lexeme_boundaries) runs.push_back(e - b);
        nlohmann::json record{{"path", file.path}, {"ids", file.seq.ids}, {"runs", runs}};
        out << record.dump() << '\n';
    }
}

inline std::vector<EncodedFile> load_encoded(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open encoded corpus " + path.string());
    std::vector<EncodedFile> files;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded()) {
            throw DataError("data-error", "malformed encoded line in " + path.string());
        }
        EncodedFile file;
        file.path = record.at("path").get<std::string>();
        file.seq.ids = record.at("ids").get<std::vector<std::int32_t>>();
        std::int32_t cursor = 0;
        for (const auto run : record.at("runs").get<std::vector<std::int32_t>>()) {
            file.seq.lexeme_boundaries.emplace_back(cursor, cursor + run);
            cursor += run;
        }
        if (cursor != std::int32_t(file.seq.ids.size())) {
            throw DataError("data-error", "runs do not partition ids in " + path.string());
        }
        files.push_back(std::move(file));
    }
    return files;
}

inline void write_sidecar(const std::filesystem::path& artifact, const std::string& hash,
                          const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json meta = extra;
    meta["config_hash"] = hash;
    std::ofstream out(artifact.string() + ".meta.json", std::ios::binary);
    if (!out) throw IoError("cannot write sidecar for " + artifact.string());
    out << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Stage runners
// ---------------------------------------------------------------------------

// mine: events + metadata + repo snapshots -> manifest.jsonl + summary JSON.
inline MineSummary mine_stage(const PipelineConfig& cfg, const std::filesystem::path& out_manifest,
                              std::optional<std::filesystem::path> out_summary = {}) {
    cfg.validate();
    std::vector<std::filesystem::path> shards;
    if (!std::filesystem::is_directory(cfg.events_dir)) {
        throw ConfigError("events directory not found: " + cfg.events_dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(cfg.events_dir)) {
        if (entry.is_regular_file()) shards.push_back(entry.path());
    }
    std::sort(shards.begin(), shards.end());

    MinerConfig miner = cfg.miner;
    miner.seed = cfg.seed;
    MineSummary summary;
    const auto activity = aggregate_activity_from_files(shards, miner, summary);
    const auto metadata = load_metadata(cfg.metadata_file);
    const auto retained = filter_repos(activity, metadata, miner, summary);
    auto manifest = sample_files(cfg.repos_root, retained, miner, summary);
    split_manifest(manifest, miner.ratio, cfg.seed);
    for (const auto& entry : manifest.entries) {
        if (entry.split == "train") ++summary.train_files;
        else ++summary.test_files;
    }
    ensure_parent_dir(out_manifest);
    save_manifest(manifest, out_manifest);

    nlohmann::json sj = summary_to_json(summary);
    sj["config_hash"] = config_hash(cfg);
    const auto summary_path =
        out_summary.value_or(out_manifest.string() + ".summary.json");
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw IoError("cannot write summary " + summary_path.string());
    out << sj.dump(2) << '\n';
    return summary;
}

// Lexes one manifest entry's file from the repos root.
inline std::vector<JavaToken> lex_manifest_entry(const PipelineConfig& cfg,
                                                 const ManifestEntry& entry) {
    const auto full = cfg.repos_root / entry.path;
    std::ifstream in(full, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file " + full.string());
    std::string source((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return lex(source);
}

// train-vocab: manifest(train split) -> vocab.txt (+ sidecar).
inline Vocabulary vocab_stage(const PipelineConfig& cfg,
                              const std::filesystem::path& manifest_path,
                              const std::filesystem::path& out_vocab) {
    cfg.validate();
    if (!cfg.external_vocab.empty()) {
        throw ConfigError("config supplies an external vocabulary; nothing to train");
    }
    const auto manifest = load_manifest(manifest_path);
    WordCounter counter;
    // The whole sample feeds the subword statistics; the train/test split
    // only governs model training and evaluation.
    for (const auto& entry : manifest.entries) {
        counter.add(lex_manifest_entry(cfg, entry));
    }
    Vocabulary vocab = train_vocab(counter, cfg.vocab_target_size);
    ensure_parent_dir(out_vocab);
    save_vocab(vocab, out_vocab);
    write_sidecar(out_vocab, config_hash(cfg),
                  {{"size", vocab.size()}, {"format_version", kVocabFormatVersion}});
    return vocab;
}

inline Vocabulary resolve_vocab(const PipelineConfig& cfg,
                                const std::filesystem::path& vocab_path) {
    const auto path = vocab_path.empty() ? cfg.external_vocab : vocab_path;
    if (path.empty()) throw ConfigError("no vocabulary file configured");
    if (!std::filesystem::exists(path)) {
        throw ConfigError("vocabulary file not found: " + path.string());
    }
    return load_vocab(path);
}

// encode: manifest(split) + vocab -> encoded JSONL (+ sidecar).
inline std::vector<EncodedFile> encode_stage(const PipelineConfig& cfg,
                                             const std::filesystem::path& manifest_path,
                                             const Vocabulary& vocab, const std::string& split,
                                             const std::filesystem::path& out_encoded) {
    const auto manifest = load_manifest(manifest_path);
    std::vector<EncodedFile> files;
    for (const auto& entry : manifest.entries) {
        if (!split.empty() && entry.split != split) continue;
        EncodedFile file;
        file.path = entry.path;
        file.seq = encode(lex_manifest_entry(cfg, entry), vocab);
        files.push_back(std::move(file));
    }
    ensure_parent_dir(out_encoded);
    save_encoded(files, out_encoded);
    write_sidecar(out_encoded, config_hash(cfg), {{"split", split}});
    return files;
}

inline std::vector<std::vector<std::int32_t>> examples_from_encoded(
    const std::vector<EncodedFile>& files, const Vocabulary& vocab,
    std::int32_t max_seq_len) {
    std::vector<std::vector<std::int32_t>> examples;
    for (const auto& file : files) {
        for (auto& ex : make_examples(file.seq, vocab, max_seq_len)) {
            examples.push_back(std::move(ex));
        }
    }
    return examples;
}

// train: encoded train corpus + vocab -> checkpoint dir with logs.
inline TrainLog train_stage(const PipelineConfig& cfg, const std::vector<EncodedFile>& files,
                            const Vocabulary& vocab, const std::filesystem::path& ckpt_dir,
                            const std::function<void(std::int64_t, double)>& on_step = {}) {
    cfg.validate();
    EncoderConfig encoder = cfg.encoder;
    encoder.vocab_size = int(vocab.size());
    encoder.validate();

    auto params = init_params(encoder, cfg.seed);
    MaskingConfig masking = cfg.masking;
    masking.seed = cfg.seed;
    TrainConfig training = cfg.training;
    training.seed = cfg.seed;

    MaskingBatchSource source(examples_from_encoded(files, vocab, masking.max_seq_len), vocab,
                              masking, training.batch_size, true);
    const TrainLog log = train(params, source, training, on_step);

    save_checkpoint(params, ckpt_dir,
                    {{"config_hash", config_hash(cfg)},
                     {"vocab_size", vocab.size()},
                     {"steps", log.total_steps}});
    save_train_log(log, ckpt_dir / "train_log.csv", ckpt_dir / "loss_curve.dat");
    return log;
}

// eval: checkpoint + vocab + encoded test corpus -> report JSON + text table.
inline EvalReport eval_stage(const PipelineConfig& cfg, const std::filesystem::path& ckpt_dir,
                             const Vocabulary& vocab, const std::vector<EncodedFile>& files,
                             const std::filesystem::path& out_report,
                             const std::string& model_name) {
    cfg.validate();
    const EncoderParams params = load_checkpoint(ckpt_dir);

    MaskingConfig masking = cfg.masking;
    masking.seed = cfg.seed;
    // Pure [MASK] replacement: scored positions are genuinely hidden.
    masking.replace_mask = 1.0;
    masking.replace_random = 0.0;
    masking.keep = 0.0;

    MaskingBatchSource source(examples_from_encoded(files, vocab, masking.max_seq_len), vocab,
                              masking, cfg.eval_batch_size, false);
    std::vector<MatchRule> rules;
    for (const int k : cfg.eval_ks) rules.push_back(MatchRule{k});
    const EvalReport report = run_eval(params, vocab, source, rules, model_name);

    const auto j = report_to_json(report, config_hash(cfg));
    ensure_parent_dir(out_report);
    std::ofstream out(out_report, std::ios::binary);
    if (!out) throw IoError("cannot write report " + out_report.string());
    out << j.dump(2) << '\n';

    std::ofstream table(out_report.string() + ".txt", std::ios::binary);
    table << render_score_table({j});
    return report;
}

} // namespace jmlm
