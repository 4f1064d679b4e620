#pragma once

// Checkpoint layout: <dir>/model.json describes the encoder config and each
// tensor (name, shape, dtype, byte range); <dir>/model.bin holds the flat
// little-endian float32 payloads in manifest order. Parameters live in
// double precision in memory; save rounds to f32, so save(load(x)) is
// byte-identical to x.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "jmlm/errors.hpp"
#include "jmlm/model.hpp"
#include "jmlm/version.hpp"

namespace jmlm {

static_assert(std::endian::native == std::endian::little,
              "checkpoints assume a little-endian host");

inline void to_json(nlohmann::json& j, const EncoderConfig& cfg) {
    j = nlohmann::json{{"num_layers", cfg.num_layers},   {"hidden", cfg.hidden},
                       {"num_heads", cfg.num_heads},     {"intermediate", cfg.intermediate},
                       {"vocab_size", cfg.vocab_size},   {"max_positions", cfg.max_positions},
                       {"type_vocab", cfg.type_vocab},   {"dropout", cfg.dropout}};
}

inline void from_json(const nlohmann::json& j, EncoderConfig& cfg) {
    j.at("num_layers").get_to(cfg.num_layers);
    j.at("hidden").get_to(cfg.hidden);
    j.at("num_heads").get_to(cfg.num_heads);
    j.at("intermediate").get_to(cfg.intermediate);
    j.at("vocab_size").get_to(cfg.vocab_size);
    j.at("max_positions").get_to(cfg.max_positions);
    j.at("type_vocab").get_to(cfg.type_vocab);
    j.at("dropout").get_to(cfg.dropout);
}

inline void save_checkpoint(const EncoderParams& params, const std::filesystem::path& dir,
                            const nlohmann::json& extra = nlohmann::json::object()) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest = extra;
    manifest["format_version"] = kCheckpointFormatVersion;
    manifest["config"] = params.config;
    manifest["dtype"] = "f32";
    auto tensors = nlohmann::json::array();

    std::ofstream bin(dir / "model.bin", std::ios::binary);
    if (!bin) throw IoError("cannot write checkpoint payload in " + dir.string());
    std::uint64_t offset = 0;
    std::vector<float> buffer;
    for_each_tensor(const_cast<EncoderParams&>(params),
                    [&](const std::string& name, Tensor& tensor, bool) {
                        buffer.resize(tensor.data.size());
                        for (std::size_t i = 0; i < tensor.data.size(); ++i) {
                            buffer[i] = float(tensor.data[i]);
                        }
                        const std::uint64_t bytes = buffer.size() * sizeof(float);
                        bin.write(reinterpret_cast<const char*>(buffer.data()),
                                  std::streamsize(bytes));
                        tensors.push_back({{"name", name},
                                           {"shape", tensor.shape},
                                           {"dtype", "f32"},
                                           {"byte_offset", offset},
                                           {"byte_length", bytes}});
                        offset += bytes;
                    });
    manifest["tensors"] = std::move(tensors);

    std::ofstream meta(dir / "model.json", std::ios::binary);
    if (!meta) throw IoError("cannot write checkpoint manifest in " + dir.string());
    meta << manifest.dump(2) << '\n';
}

inline EncoderParams load_checkpoint(const std::filesystem::path& dir) {
    std::ifstream meta(dir / "model.json");
    if (!meta) throw IoError("cannot open checkpoint manifest in " + dir.string());
    nlohmann::json manifest = nlohmann::json::parse(meta, nullptr, false);
    if (manifest.is_discarded()) {
        throw DataError("data-error", "malformed checkpoint manifest in " + dir.string());
    }
    if (manifest.value("format_version", -1) != kCheckpointFormatVersion) {
        throw ConfigError("unsupported checkpoint format version in " + dir.string());
    }
    EncoderConfig config = manifest.at("config").get<EncoderConfig>();
    EncoderParams params = make_shaped(config);

    std::ifstream bin(dir / "model.bin", std::ios::binary);
    if (!bin) throw IoError("cannot open checkpoint payload in " + dir.string());
    std::size_t index = 0;
    const auto& tensors = manifest.at("tensors");
    std::vector<float> buffer;
    for_each_tensor(params, [&](const std::string& name, Tensor& tensor, bool) {
        if (index >= tensors.size()) {
            throw DataError("data-error", "checkpoint manifest is missing tensors");
        }
        const auto& entry = tensors[index++];
        if (entry.at("name").get<std::string>() != name) {
            throw DataError("data-error", "checkpoint tensor order mismatch at " + name);
        }
        const auto shape = entry.at("shape").get<std::vector<std::int64_t>>();
        if (shape != tensor.shape) {
            throw DataError("data-error", "checkpoint tensor shape mismatch at " + name);
        }
        buffer.resize(tensor.data.size());
        bin.seekg(std::streamoff(entry.at("byte_offset").get<std::uint64_t>()));
        bin.read(reinterpret_cast<char*>(buffer.data()),
                 std::streamsize(buffer.size() * sizeof(float)));
        if (!bin) throw DataError("data-error", "truncated checkpoint payload at " + name);
        for (std::size_t i = 0; i < buffer.size(); ++i) tensor.data[i] = double(buffer[i]);
    });
    return params;
}

// The manifest carries arbitrary provenance fields (config hash, vocab path).
inline nlohmann::json read_checkpoint_manifest(const std::filesystem::path& dir) {
    std::ifstream meta(dir / "model.json");
    if (!meta) throw IoError("cannot open checkpoint manifest in " + dir.string());
    return nlohmann::json::parse(meta);
}

} // namespace jmlm
