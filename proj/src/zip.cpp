#include "forge/zip.hpp"

#include <zlib.h>

#include <cstring>
#include <ctime>
#include <fstream>

namespace forge {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEocdSig = 0x06054b50;

std::uint16_t rd16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t rd32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::int64_t dos_to_epoch(std::uint16_t dos_date, std::uint16_t dos_time) {
    std::tm tm{};
    tm.tm_year = ((dos_date >> 9) & 0x7f) + 80;
    tm.tm_mon = ((dos_date >> 5) & 0x0f) - 1;
    tm.tm_mday = dos_date & 0x1f;
    tm.tm_hour = (dos_time >> 11) & 0x1f;
    tm.tm_min = (dos_time >> 5) & 0x3f;
    tm.tm_sec = (dos_time & 0x1f) * 2;
    return static_cast<std::int64_t>(timegm(&tm));
}

void epoch_to_dos(std::int64_t epoch, std::uint16_t& dos_date, std::uint16_t& dos_time) {
    std::time_t t = static_cast<std::time_t>(epoch);
    std::tm tm{};
    gmtime_r(&t, &tm);
    int year = tm.tm_year + 1900;
    if (year < 1980) year = 1980;
    dos_date = static_cast<std::uint16_t>(((year - 1980) << 9) | ((tm.tm_mon + 1) << 5) |
                                          tm.tm_mday);
    dos_time = static_cast<std::uint16_t>((tm.tm_hour << 11) | (tm.tm_min << 5) |
                                          (tm.tm_sec / 2));
}

std::vector<std::uint8_t> inflate_raw(const std::uint8_t* data, std::size_t size,
                                      std::size_t expected) {
    std::vector<std::uint8_t> out(expected);
    // Zero-length entries still carry a 2-byte deflate stream; a null
    // next_out would make zlib report Z_STREAM_ERROR, so give it scratch.
    std::uint8_t scratch = 0;
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK)
        throw ArchiveCorrupt("inflateInit failed");
    zs.next_in = const_cast<Bytef*>(data);
    zs.avail_in = static_cast<uInt>(size);
    zs.next_out = expected == 0 ? &scratch : out.data();
    zs.avail_out = static_cast<uInt>(expected == 0 ? 1 : out.size());
    int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != expected)
        throw ArchiveCorrupt("deflate stream corrupt");
    return out;
}

struct CentralEntry {
    std::string name;
    std::uint16_t method = 0;
    std::uint32_t compressed = 0;
    std::uint32_t uncompressed = 0;
    std::uint32_t local_offset = 0;
    std::int64_t modified_epoch = 0;
};

std::vector<CentralEntry> read_central_directory(const std::vector<std::uint8_t>& file,
                                                 const std::string& path) {
    if (file.size() < 22) throw ArchiveCorrupt("file too small: " + path);
    std::size_t eocd = std::string::npos;
    std::size_t scan_limit = file.size() >= 22 + 65535 ? file.size() - 22 - 65535 : 0;
    for (std::size_t i = file.size() - 22 + 1; i-- > scan_limit;) {
        if (rd32(&file[i]) == kEocdSig) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string::npos) throw ArchiveCorrupt("no end-of-central-directory: " + path);

    std::uint16_t count = rd16(&file[eocd + 10]);
    std::uint32_t cd_offset = rd32(&file[eocd + 16]);

    std::vector<CentralEntry> entries;
    std::size_t pos = cd_offset;
    for (std::uint16_t i = 0; i < count; ++i) {
        if (pos + 46 > file.size() || rd32(&file[pos]) != kCentralSig)
            throw ArchiveCorrupt("central directory corrupt: " + path);
        CentralEntry e;
        e.method = rd16(&file[pos + 10]);
        std::uint16_t dtime = rd16(&file[pos + 12]);
        std::uint16_t ddate = rd16(&file[pos + 14]);
        e.modified_epoch = dos_to_epoch(ddate, dtime);
        e.compressed = rd32(&file[pos + 20]);
        e.uncompressed = rd32(&file[pos + 24]);
        std::uint16_t name_len = rd16(&file[pos + 28]);
        std::uint16_t extra_len = rd16(&file[pos + 30]);
        std::uint16_t comment_len = rd16(&file[pos + 32]);
        e.local_offset = rd32(&file[pos + 42]);
        if (pos + 46 + name_len > file.size())
            throw ArchiveCorrupt("central directory corrupt: " + path);
        e.name.assign(reinterpret_cast<const char*>(&file[pos + 46]), name_len);
        entries.push_back(std::move(e));
        pos += 46 + name_len + extra_len + comment_len;
    }
    return entries;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArchiveCorrupt("cannot open archive: " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

}  // namespace

std::vector<ZipEntry> read_zip(const std::string& path) {
    auto file = read_file_bytes(path);
    std::vector<ZipEntry> out;
    for (const auto& ce : read_central_directory(file, path)) {
        if (!ce.name.empty() && ce.name.back() == '/') continue;  // directory entry
        std::size_t pos = ce.local_offset;
        if (pos + 30 > file.size() || rd32(&file[pos]) != kLocalSig)
            throw ArchiveCorrupt("local header corrupt: " + path);
        std::uint16_t name_len = rd16(&file[pos + 26]);
        std::uint16_t extra_len = rd16(&file[pos + 28]);
        std::size_t data_pos = pos + 30 + name_len + extra_len;
        if (data_pos + ce.compressed > file.size())
            throw ArchiveCorrupt("entry data out of bounds: " + path);

        ZipEntry entry;
        entry.name = ce.name;
        entry.modified_epoch = ce.modified_epoch;
        if (ce.method == 0) {
            entry.data.assign(file.begin() + data_pos, file.begin() + data_pos + ce.compressed);
        } else if (ce.method == 8) {
            entry.data = inflate_raw(&file[data_pos], ce.compressed, ce.uncompressed);
        } else {
            throw ArchiveCorrupt("unsupported compression method in " + path);
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<std::string> list_zip(const std::string& path) {
    auto file = read_file_bytes(path);
    std::vector<std::string> names;
    for (const auto& ce : read_central_directory(file, path)) {
        if (!ce.name.empty() && ce.name.back() != '/') names.push_back(ce.name);
    }
    return names;
}

void write_zip(const std::string& path, const std::vector<ZipEntry>& entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write archive: " + path);

    auto w16 = [&](std::uint16_t v) {
        char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
        out.write(b, 2);
    };
    auto w32 = [&](std::uint32_t v) {
        char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
        out.write(b, 4);
    };

    struct Written {
        const ZipEntry* entry;
        std::uint32_t offset;
        std::uint32_t crc;
    };
    std::vector<Written> written;

    for (const auto& e : entries) {
        std::uint32_t offset = static_cast<std::uint32_t>(out.tellp());
        std::uint32_t crc = static_cast<std::uint32_t>(
            crc32(0L, e.data.data(), static_cast<uInt>(e.data.size())));
        std::uint16_t ddate, dtime;
        epoch_to_dos(e.modified_epoch, ddate, dtime);
        w32(kLocalSig);
        w16(20);      // version needed
        w16(0);       // flags
        w16(0);       // stored
        w16(dtime);
        w16(ddate);
        w32(crc);
        w32(static_cast<std::uint32_t>(e.data.size()));
        w32(static_cast<std::uint32_t>(e.data.size()));
        w16(static_cast<std::uint16_t>(e.name.size()));
        w16(0);
        out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        out.write(reinterpret_cast<const char*>(e.data.data()),
                  static_cast<std::streamsize>(e.data.size()));
        written.push_back({&e, offset, crc});
    }

    std::uint32_t cd_start = static_cast<std::uint32_t>(out.tellp());
    for (const auto& w : written) {
        const auto& e = *w.entry;
        std::uint16_t ddate, dtime;
        epoch_to_dos(e.modified_epoch, ddate, dtime);
        w32(kCentralSig);
        w16(20);
        w16(20);
        w16(0);
        w16(0);
        w16(dtime);
        w16(ddate);
        w32(w.crc);
        w32(static_cast<std::uint32_t>(e.data.size()));
        w32(static_cast<std::uint32_t>(e.data.size()));
        w16(static_cast<std::uint16_t>(e.name.size()));
        w16(0);
        w16(0);
        w16(0);
        w16(0);
        w32(0);
        w32(w.offset);
        out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    }
    std::uint32_t cd_size = static_cast<std::uint32_t>(out.tellp()) - cd_start;

    w32(kEocdSig);
    w16(0);
    w16(0);
    w16(static_cast<std::uint16_t>(written.size()));
    w16(static_cast<std::uint16_t>(written.size()));
    w32(cd_size);
    w32(cd_start);
    w16(0);
}

}  // namespace forge
