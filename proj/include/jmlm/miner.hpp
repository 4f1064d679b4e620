#pragma once

// Corpus mining: replay of the retrieval/filtering funnel over event-log
// shards and repository snapshots. Stages only ever narrow the candidate
// set: PR-review-comment activity -> license/language/activity filters ->
// per-file token-count sampling -> seeded train/test split. Every stage is
// deterministic; outputs are canonically ordered (repo, then path) so the
// manifest bytes are reproducible.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "jmlm/errors.hpp"
#include "jmlm/gzip.hpp"
#include "jmlm/lexer.hpp"
#include "jmlm/rng.hpp"

namespace jmlm {

struct ArchiveEvent {
    std::string event_type;
    std::string repo_full_name; // "owner/name"
    std::string created_at;
    std::optional<std::string> action;
};

struct RepoMetadata {
    std::string repo_full_name;
    std::optional<std::string> license_id;
    // Sorted by byte count descending, ties broken by language name.
    std::vector<std::pair<std::string, std::int64_t>> language_ranking;
};

struct RepoActivity {
    std::string repo_full_name;
    std::int64_t pr_comment_count = 0; // >= 1 by construction
};

struct ManifestEntry {
    std::string path; // relative to the repos root, forward slashes
    std::string repo;
    std::int64_t token_count = 0;
    std::string split; // "train", "test", or "" before splitting
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;
    std::uint64_t seed = 0;
    double ratio = 0.0;
};

struct MinerConfig {
    std::string qualifying_event_type = "PullRequestReviewCommentEvent";
    std::string qualifying_action = "created";
    std::int64_t min_comments = 10;
    std::int64_t min_tokens = 40;
    std::int64_t max_tokens = 3000;
    std::vector<std::string> licenses = {"MIT", "Apache-2.0"};
    int language_top_k = 3;
    double ratio = 0.7;
    std::uint64_t seed = 0;
};

// Per-stage funnel counters plus non-fatal warnings.
struct MineSummary {
    std::int64_t event_files = 0;
    std::int64_t event_lines = 0;
    std::int64_t events_malformed = 0;
    std::int64_t events_qualifying = 0;
    std::int64_t repos_with_activity = 0;
    std::int64_t repos_missing_metadata = 0;
    std::int64_t repos_retained = 0;
    std::int64_t files_scanned = 0;
    std::int64_t files_lex_error = 0;
    std::int64_t files_below_min = 0;
    std::int64_t files_above_max = 0;
    std::int64_t files_unreadable = 0;
    std::int64_t files_kept = 0;
    std::int64_t train_files = 0;
    std::int64_t test_files = 0;
    std::vector<std::string> warnings;
};

inline std::optional<ArchiveEvent> parse_event_line(const std::string& line) {
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) return std::nullopt;
    if (!record.contains("type") || !record["type"].is_string()) return std::nullopt;
    if (!record.contains("repo") || !record["repo"].is_object() ||
        !record["repo"].contains("name") || !record["repo"]["name"].is_string()) {
        return std::nullopt;
    }
    ArchiveEvent event;
    event.event_type = record["type"].get<std::string>();
    event.repo_full_name = record["repo"]["name"].get<std::string>();
    if (std::count(event.repo_full_name.begin(), event.repo_full_name.end(), '/') != 1) {
        return std::nullopt;
    }
    if (record.contains("created_at") && record["created_at"].is_string()) {
        event.created_at = record["created_at"].get<std::string>();
    }
    if (record.contains("payload") && record["payload"].is_object() &&
        record["payload"].contains("action") && record["payload"]["action"].is_string()) {
        event.action = record["payload"]["action"].get<std::string>();
    }
    return event;
}

inline bool qualifies(const ArchiveEvent& event, const MinerConfig& cfg) {
    return event.event_type == cfg.qualifying_event_type && event.action.has_value() &&
           *event.action == cfg.qualifying_action;
}

inline std::vector<RepoActivity> aggregate_activity(const std::vector<ArchiveEvent>& events,
                                                    const MinerConfig& cfg = {}) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& event : events) {
        if (qualifies(event, cfg)) ++counts[event.repo_full_name];
    }
    std::vector<RepoActivity> activity;
    activity.reserve(counts.size());
    for (const auto& [repo, count] : counts) activity.push_back({repo, count});
    return activity;
}

// Streams newline-delimited event shards (plain or gzip) and aggregates
// qualifying events per repository. Malformed lines are counted and skipped.
inline std::vector<RepoActivity> aggregate_activity_from_files(
    const std::vector<std::filesystem::path>& shards, const MinerConfig& cfg,
    MineSummary& summary) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& shard : shards) {
        ++summary.event_files;
        const std::string content = read_file_auto(shard);
        std::size_t pos = 0;
        while (pos < content.size()) {
            std::size_t end = content.find('\n', pos);
            if (end == std::string::npos) end = content.size();
            const std::string line = content.substr(pos, end - pos);
            pos = end + 1;
            if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
            ++summary.event_lines;
            const auto event = parse_event_line(line);
            if (!event) {
                ++summary.events_malformed;
                continue;
            }
            if (qualifies(*event, cfg)) {
                ++summary.events_qualifying;
                ++counts[event->repo_full_name];
            }
        }
    }
    std::vector<RepoActivity> activity;
    activity.reserve(counts.size());
    for (const auto& [repo, count] : counts) activity.push_back({repo, count});
    summary.repos_with_activity = static_cast<std::int64_t>(activity.size());
    return activity;
}

inline std::vector<std::pair<std::string, std::int64_t>> rank_languages(
    const std::map<std::string, std::int64_t>& languages) {
    std::vector<std::pair<std::string, std::int64_t>> ranking(languages.begin(),
                                                              languages.end());
    std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranking;
}

inline std::unordered_map<std::string, RepoMetadata> load_metadata(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open metadata file " + path.string());
    std::unordered_map<std::string, RepoMetadata> meta;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.contains("full_name")) {
            throw DataError("data-error", "malformed metadata record in " + path.string());
        }
        RepoMetadata rm;
        rm.repo_full_name = record["full_name"].get<std::string>();
        if (record.contains("license") && record["license"].is_string()) {
            rm.license_id = record["license"].get<std::string>();
        }
        std::map<std::string, std::int64_t> languages;
        if (record.contains("languages") && record["languages"].is_object()) {
            for (const auto& [name, bytes] : record["languages"].items()) {
                languages[name] = bytes.get<std::int64_t>();
            }
        }
        rm.language_ranking = rank_languages(languages);
        meta[rm.repo_full_name] = std::move(rm);
    }
    return meta;
}

inline bool license_accepted(const std::optional<std::string>& license,
                             const std::vector<std::string>& accepted) {
    if (!license) return false;
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return char(std::tolower(c)); });
        return s;
    };
    const std::string have = lower(*license);
    return std::any_of(accepted.begin(), accepted.end(),
                       [&](const std::string& a) { return lower(a) == have; });
}

inline bool java_in_top(const RepoMetadata& meta, int top_k) {
    const int limit = std::min<int>(top_k, static_cast<int>(meta.language_ranking.size()));
    for (int i = 0; i < limit; ++i) {
        if (meta.language_ranking[std::size_t(i)].first == "Java") return true;
    }
    return false;
}

// Keeps repos with >= min_comments PR review comments, an accepted license,
// and Java among the top-k languages. Repos without metadata are dropped
// with a warning. The three predicates commute; result order is by name.
inline std::vector<std::string> filter_repos(
    const std::vector<RepoActivity>& activity,
    const std::unordered_map<std::string, RepoMetadata>& metadata, const MinerConfig& cfg,
    MineSummary& summary) {
    std::vector<std::string> retained;
    for (const auto& record : activity) {
        const auto it = metadata.find(record.repo_full_name);
        if (it == metadata.end()) {
            ++summary.repos_missing_metadata;
            summary.warnings.push_back("no metadata for " + record.repo_full_name +
                                       "; repo dropped");
            continue;
        }
        if (record.pr_comment_count < cfg.min_comments) continue;
        if (!license_accepted(it->second.license_id, cfg.licenses)) continue;
        if (!java_in_top(it->second, cfg.language_top_k)) continue;
        retained.push_back(record.repo_full_name);
    }
    std::sort(retained.begin(), retained.end());
    summary.repos_retained = static_cast<std::int64_t>(retained.size());
    return retained;
}

// Walks <repos_root>/<owner>/<name> for .java files and keeps those whose
// token count lies in [min_tokens, max_tokens] and which lex cleanly.
inline CorpusManifest sample_files(const std::filesystem::path& repos_root,
                                   const std::vector<std::string>& retained,
                                   const MinerConfig& cfg, MineSummary& summary) {
    namespace fs = std::filesystem;
    CorpusManifest manifest;
    manifest.ratio = cfg.ratio;
    manifest.seed = cfg.seed;
    for (const auto& repo : retained) {
        const fs::path repo_dir = repos_root / repo;
        if (!fs::is_directory(repo_dir)) {
            summary.warnings.push_back("missing snapshot directory for " + repo);
            continue;
        }
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(repo_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".java") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            ++summary.files_scanned;
            std::ifstream in(file, std::ios::binary);
            if (!in) {
                ++summary.files_unreadable;
                summary.warnings.push_back("unreadable file skipped: " + file.string());
                continue;
            }
            std::string source((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
            const TokenCount count = count_tokens(source);
            if (!count.ok) {
                ++summary.files_lex_error;
                continue;
            }
            const auto tokens = static_cast<std::int64_t>(count.count);
            if (tokens < cfg.min_tokens) {
                ++summary.files_below_min;
                continue;
            }
            if (tokens > cfg.max_tokens) {
                ++summary.files_above_max;
                continue;
            }
            ManifestEntry entry;
            entry.path = fs::relative(file, repos_root).generic_string();
            entry.repo = repo;
            entry.token_count = tokens;
            manifest.entries.push_back(std::move(entry));
        }
    }
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                  return std::tie(a.repo, a.path) < std::tie(b.repo, b.path);
              });
    summary.files_kept = static_cast<std::int64_t>(manifest.entries.size());
    return manifest;
}

// Per-file Bernoulli(ratio) split, deterministic in (entries, ratio, seed).
inline void split_manifest(CorpusManifest& manifest, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must be in (0, 1)");
    manifest.ratio = ratio;
    manifest.seed = seed;
    Rng rng(seed);
    for (auto& entry : manifest.entries) {
        entry.split = rng.bernoulli(ratio) ? "train" : "test";
    }
}

inline void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest " + path.string());
    for (const auto& entry : manifest.entries) {
        nlohmann::json record{{"path", entry.path},
                              {"repo", entry.repo},
                              {"token_count", entry.token_count},
                              {"split", entry.split}};
        out << record.dump() << '\n';
    }
}

inline CorpusManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    CorpusManifest manifest;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded()) {
            throw DataError("data-error", "malformed manifest line in " + path.string());
        }
        ManifestEntry entry;
        entry.path = record.at("path").get<std::string>();
        entry.repo = record.at("repo").get<std::string>();
        entry.token_count = record.at("token_count").get<std::int64_t>();
        entry.split = record.value("split", "");
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

inline nlohmann::json summary_to_json(const MineSummary& summary) {
    return nlohmann::json{{"event_files", summary.event_files},
                          {"event_lines", summary.event_lines},
                          {"events_malformed", summary.events_malformed},
                          {"events_qualifying", summary.events_qualifying},
                          {"repos_with_activity", summary.repos_with_activity},
                          {"repos_missing_metadata", summary.repos_missing_metadata},
                          {"repos_retained", summary.repos_retained},
                          {"files_scanned", summary.files_scanned},
                          {"files_lex_error", summary.files_lex_error},
                          {"files_below_min", summary.files_below_min},
                          {"files_above_max", summary.files_above_max},
                          {"files_unreadable", summary.files_unreadable},
                          {"files_kept", summary.files_kept},
                          {"train_files", summary.train_files},
                          {"test_files", summary.test_files},
                          {"warnings", summary.warnings}};
}

} // namespace jmlm
