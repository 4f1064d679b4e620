#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <zlib.h>

#include "jmlm/errors.hpp"

namespace jmlm {

// Reads a whole file, transparently inflating it when it carries the gzip
// magic bytes. Event shards may be stored either way.
inline std::string read_file_auto(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string raw = ss.str();
    if (raw.size() < 2 || static_cast<unsigned char>(raw[0]) != 0x1f ||
        static_cast<unsigned char>(raw[1]) != 0x8b) {
        return raw;
    }

    z_stream strm{};
    if (inflateInit2(&strm, 15 + 32) != Z_OK) { // +32: auto gzip/zlib header detection
        throw IoError("inflateInit failed for " + path.string());
    }
    std::string out;
    out.reserve(raw.size() * 4);
    strm.next_in = reinterpret_cast<Bytef*>(raw.data());
    strm.avail_in = static_cast<uInt>(raw.size());
    char buf[1 << 16];
    int rc = Z_OK;
    do {
        strm.next_out = reinterpret_cast<Bytef*>(buf);
        strm.avail_out = sizeof(buf);
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw IoError("corrupt gzip stream in " + path.string());
        }
        out.append(buf, sizeof(buf) - strm.avail_out);
    } while (rc != Z_STREAM_END && (strm.avail_in > 0 || strm.avail_out == 0));
    inflateEnd(&strm);
    if (rc != Z_STREAM_END) throw IoError("truncated gzip stream in " + path.string());
    return out;
}

} // namespace jmlm
