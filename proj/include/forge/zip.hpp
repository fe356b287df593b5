#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

struct ArchiveCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZipEntry {
    std::string name;
    std::vector<std::uint8_t> data;
    std::int64_t modified_epoch = 0;  // from DOS date/time, treated as UTC
};

/// Read every file entry of a ZIP container (stored and deflate methods).
std::vector<ZipEntry> read_zip(const std::string& path);

/// Entry names only, without decompressing payloads.
std::vector<std::string> list_zip(const std::string& path);

/// Write a ZIP file with stored (uncompressed) entries. Used to build
/// synthetic archives for fixtures and the kb CLI tests.
void write_zip(const std::string& path, const std::vector<ZipEntry>& entries);

}  // namespace forge
