// jmlm: mine a Java corpus from event logs, train a WordPiece vocabulary,
// encode, pretrain a small bidirectional encoder with masked-language
// modeling, and score masked-token accuracy.
//
// Subcommands: mine, lex, train-vocab, encode, train, eval, report.
// Every subcommand accepts --config <pipeline.json>; explicit flags override
// the file. Errors print a single "<category>: <message>" line on stderr.
// Exit codes: 0 ok, 2 config-error, 3 io-error, 4 data/runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jmlm/pipeline.hpp"
#include "jmlm/version.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code_for(const std::string& category) {
    if (category == "config-error") return 2;
    if (category == "io-error") return 3;
    return 4;
}

jmlm::PipelineConfig resolve_config(const std::string& config_path) {
    if (config_path.empty()) return jmlm::PipelineConfig{};
    return jmlm::load_config(config_path);
}

void print_version() {
    std::cout << "jmlm " << jmlm::kToolVersion << " (config-schema "
              << jmlm::kConfigSchemaVersion << ", manifest-format "
              << jmlm::kManifestFormatVersion << ", vocab-format " << jmlm::kVocabFormatVersion
              << ", checkpoint-format " << jmlm::kCheckpointFormatVersion << ", report-format "
              << jmlm::kReportFormatVersion << ")\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Java masked-language-model pipeline"};
    app.require_subcommand(0, 1);
    bool show_version = false;
    app.add_flag("--version", show_version, "print tool and format versions");

    std::string config_path;

    // mine
    auto* mine = app.add_subcommand("mine", "filter event logs and sample corpus files");
    std::string mine_events, mine_meta, mine_repos, mine_out, mine_summary;
    std::int64_t mine_min_tokens = -1, mine_max_tokens = -1, mine_min_comments = -1;
    double mine_ratio = -1.0;
    std::int64_t mine_seed = -1;
    mine->add_option("--config", config_path, "pipeline config JSON");
    mine->add_option("--events", mine_events, "directory of event shards (.jsonl/.jsonl.gz)");
    mine->add_option("--meta", mine_meta, "repository metadata JSONL");
    mine->add_option("--repos-root", mine_repos, "root of repository snapshots");
    mine->add_option("--min-tokens", mine_min_tokens, "minimum Java tokens per file");
    mine->add_option("--max-tokens", mine_max_tokens, "maximum Java tokens per file");
    mine->add_option("--min-comments", mine_min_comments, "minimum PR review comments");
    mine->add_option("--ratio", mine_ratio, "train fraction");
    mine->add_option("--seed", mine_seed, "split seed");
    mine->add_option("--out", mine_out, "output manifest path")->required();
    mine->add_option("--summary", mine_summary, "summary JSON path");

    // lex
    auto* lex_cmd = app.add_subcommand("lex", "lex one Java file");
    std::string lex_file, lex_format = "jsonl";
    lex_cmd->add_option("file", lex_file, "Java source file")->required();
    lex_cmd->add_option("--format", lex_format, "output format (jsonl)");

    // train-vocab
    auto* tv = app.add_subcommand("train-vocab", "train a WordPiece vocabulary");
    std::string tv_manifest, tv_out, tv_repos;
    std::size_t tv_size = 0;
    tv->add_option("--config", config_path, "pipeline config JSON");
    tv->add_option("--manifest", tv_manifest, "corpus manifest")->required();
    tv->add_option("--size", tv_size, "target vocabulary size (8000/16000/32000)");
    tv->add_option("--repos-root", tv_repos, "root of repository snapshots");
    tv->add_option("--out", tv_out, "output vocabulary file")->required();

    // encode
    auto* enc = app.add_subcommand("encode", "encode manifest files to id sequences");
    std::string enc_manifest, enc_vocab, enc_split = "train", enc_out, enc_repos;
    enc->add_option("--config", config_path, "pipeline config JSON");
    enc->add_option("--manifest", enc_manifest, "corpus manifest")->required();
    enc->add_option("--vocab", enc_vocab, "vocabulary file")->required();
    enc->add_option("--split", enc_split, "split to encode: train, test, or all");
    enc->add_option("--repos-root", enc_repos, "root of repository snapshots");
    enc->add_option("--out", enc_out, "output encoded JSONL")->required();

    // train
    auto* tr = app.add_subcommand("train", "pretrain the encoder with MLM");
    std::string tr_manifest, tr_vocab, tr_encoded, tr_out, tr_repos;
    tr->add_option("--config", config_path, "pipeline config JSON");
    tr->add_option("--manifest", tr_manifest, "corpus manifest (used when --encoded absent)");
    tr->add_option("--vocab", tr_vocab, "vocabulary file")->required();
    tr->add_option("--encoded", tr_encoded, "pre-encoded train corpus");
    tr->add_option("--repos-root", tr_repos, "root of repository snapshots");
    tr->add_option("--out", tr_out, "checkpoint directory")->required();

    // eval
    auto* ev = app.add_subcommand("eval", "score masked-token accuracy");
    std::string ev_ckpt, ev_vocab, ev_manifest, ev_encoded, ev_out, ev_repos, ev_model;
    std::vector<int> ev_ks;
    std::int64_t ev_seed = -1;
    ev->add_option("--config", config_path, "pipeline config JSON");
    ev->add_option("--ckpt", ev_ckpt, "checkpoint directory")->required();
    ev->add_option("--vocab", ev_vocab, "vocabulary file")->required();
    ev->add_option("--manifest", ev_manifest, "corpus manifest (used when --encoded absent)");
    ev->add_option("--encoded", ev_encoded, "pre-encoded test corpus");
    ev->add_option("--repos-root", ev_repos, "root of repository snapshots");
    ev->add_option("--k", ev_ks, "match rule k (repeatable)");
    ev->add_option("--seed", ev_seed, "evaluation masking seed");
    ev->add_option("--model-name", ev_model, "row label for the report");
    ev->add_option("--out", ev_out, "output report JSON")->required();

    // report
    auto* rp = app.add_subcommand("report", "merge eval reports into one table");
    std::vector<std::string> rp_inputs;
    std::string rp_out;
    rp->add_option("--inputs", rp_inputs, "eval report JSONs")->required();
    rp->add_option("--out", rp_out, "output table file (stdout when absent)");

    CLI11_PARSE(app, argc, argv);

    if (show_version) {
        print_version();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
    }

    try {
        if (mine->parsed()) {
            jmlm::PipelineConfig cfg = resolve_config(config_path);
            if (!mine_events.empty()) cfg.events_dir = mine_events;
            if (!mine_meta.empty()) cfg.metadata_file = mine_meta;
            if (!mine_repos.empty()) cfg.repos_root = mine_repos;
            if (mine_min_tokens >= 0) cfg.miner.min_tokens = mine_min_tokens;
            if (mine_max_tokens >= 0) cfg.miner.max_tokens = mine_max_tokens;
            if (mine_min_comments >= 0) cfg.miner.min_comments = mine_min_comments;
            if (mine_ratio > 0.0) cfg.miner.ratio = mine_ratio;
            if (mine_seed >= 0) cfg.seed = std::uint64_t(mine_seed);
            const auto summary = jmlm::mine_stage(
                cfg, mine_out,
                mine_summary.empty() ? std::optional<fs::path>{} : fs::path(mine_summary));
            std::cout << "kept " << summary.files_kept << " files from "
                      << summary.repos_retained << " repos (" << summary.train_files
                      << " train / " << summary.test_files << " test)\n";
            for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
            return 0;
        }
        if (lex_cmd->parsed()) {
            if (lex_format != "jsonl") throw jmlm::ConfigError("unsupported format " + lex_format);
            std::ifstream in(lex_file, std::ios::binary);
            if (!in) throw jmlm::IoError("cannot open " + lex_file);
            std::string source((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
            for (const auto& token : jmlm::lex(source)) {
                nlohmann::json j{{"text", token.text},
                                 {"kind", jmlm::to_string(token.kind)},
                                 {"start", token.begin},
                                 {"end", token.end}};
                std::cout << j.dump() << '\n';
            }
            return 0;
        }
        if (tv->parsed()) {
            jmlm::PipelineConfig cfg = resolve_config(config_path);
            if (!tv_repos.empty()) cfg.repos_root = tv_repos;
            if (tv_size > 0) cfg.vocab_target_size = tv_size;
            const auto vocab = jmlm::vocab_stage(cfg, tv_manifest, tv_out);
            std::cout << "vocabulary of " << vocab.size() << " tokens -> " << tv_out << '\n';
            return 0;
        }
        if (enc->parsed()) {
            jmlm::PipelineConfig cfg = resolve_config(config_path);
            if (!enc_repos.empty()) cfg.repos_root = enc_repos;
            const auto vocab = jmlm::resolve_vocab(cfg, enc_vocab);
            const std::string split = enc_split == "all" ? "" : enc_split;
            const auto files = jmlm::encode_stage(cfg, enc_manifest, vocab, split, enc_out);
            std::size_t ids = 0;
            for (const auto& f : files) ids += f.seq.ids.size();
            std::cout << "encoded " << files.size() << " files (" << ids << " ids) -> "
                      << enc_out << '\n';
            return 0;
        }
        if (tr->parsed()) {
            jmlm::PipelineConfig cfg = resolve_config(config_path);
            if (!tr_repos.empty()) cfg.repos_root = tr_repos;
            const auto vocab = jmlm::resolve_vocab(cfg, tr_vocab);
            std::vector<jmlm::EncodedFile> files;
            if (!tr_encoded.empty()) {
                files = jmlm::load_encoded(tr_encoded);
            } else if (!tr_manifest.empty()) {
                const auto manifest = jmlm::load_manifest(tr_manifest);
                for (const auto& entry : manifest.entries) {
                    if (entry.split != "train") continue;
                    files.push_back(
                        {entry.path, jmlm::encode(jmlm::lex_manifest_entry(cfg, entry), vocab)});
                }
            } else {
                throw jmlm::ConfigError("train needs --encoded or --manifest");
            }
            const auto log = jmlm::train_stage(cfg, files, vocab, tr_out,
                                               [&](std::int64_t step, double loss) {
                                                   if (step % cfg.training.log_every == 0) {
                                                       std::cout << "step " << step << " loss "
                                                                 << loss << '\n';
                                                   }
                                               });
            std::cout << "trained " << log.total_steps << " steps, final loss "
                      << log.final_loss << " -> " << tr_out << '\n';
            return 0;
        }
        if (ev->parsed()) {
            jmlm::PipelineConfig cfg = resolve_config(config_path);
            if (!ev_repos.empty()) cfg.repos_root = ev_repos;
            if (!ev_ks.empty()) cfg.eval_ks = ev_ks;
            if (ev_seed >= 0) cfg.seed = std::uint64_t(ev_seed);
            const auto vocab = jmlm::resolve_vocab(cfg, ev_vocab);
            std::vector<jmlm::EncodedFile> files;
            if (!ev_encoded.empty()) {
                files = jmlm::load_encoded(ev_encoded);
            } else if (!ev_manifest.empty()) {
                const auto manifest = jmlm::load_manifest(ev_manifest);
                for (const auto& entry : manifest.entries) {
                    if (entry.split != "test") continue;
                    files.push_back(
                        {entry.path, jmlm::encode(jmlm::lex_manifest_entry(cfg, entry), vocab)});
                }
            } else {
                throw jmlm::ConfigError("eval needs --encoded or --manifest");
            }
            const std::string name =
                ev_model.empty() ? fs::path(ev_ckpt).filename().string() : ev_model;
            const auto report = jmlm::eval_stage(cfg, ev_ckpt, vocab, files, ev_out, name);
            for (const auto& rule : report.rules) {
                std::cout << jmlm::rule_column_name(rule.k) << ": "
                          << rule.aggregate_rate * 100.0 << "% (token-weighted "
                          << rule.token_weighted_rate * 100.0 << "%)\n";
            }
            return 0;
        }
        if (rp->parsed()) {
            std::vector<nlohmann::json> reports;
            for (const auto& input : rp_inputs) {
                std::ifstream in(input);
                if (!in) throw jmlm::IoError("cannot open report " + input);
                reports.push_back(nlohmann::json::parse(in));
            }
            const auto table = jmlm::render_score_table(reports);
            if (rp_out.empty()) {
                std::cout << table;
            } else {
                std::ofstream out(rp_out, std::ios::binary);
                if (!out) throw jmlm::IoError("cannot write table " + rp_out);
                out << table;
            }
            return 0;
        }
    } catch (const jmlm::Error& e) {
        std::cerr << e.category() << ": " << e.what() << '\n';
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "internal-error: " << e.what() << '\n';
        return 5;
    }
    return 0;
}
