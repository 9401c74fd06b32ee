#include "pbsearch/zipfile.hpp"

#include <cstdint>
#include <limits>
#include <set>

#include <zlib.h>

#include "pbsearch/errors.hpp"

namespace pbsearch {

namespace {

constexpr uint32_t kLocalSig = 0x04034b50;
constexpr uint32_t kCentralSig = 0x02014b50;
constexpr uint32_t kEocdSig = 0x06054b50;
constexpr size_t kLocalHeaderSize = 30;
constexpr size_t kCentralHeaderSize = 46;
constexpr size_t kEocdSize = 22;

void put_u16(std::string& out, uint16_t v) {
    out += static_cast<char>(v & 0xFF);
    out += static_cast<char>(v >> 8);
}

void put_u32(std::string& out, uint32_t v) {
    put_u16(out, static_cast<uint16_t>(v & 0xFFFF));
    put_u16(out, static_cast<uint16_t>(v >> 16));
}

uint16_t get_u16(std::string_view b, size_t at) {
    return static_cast<uint16_t>(static_cast<uint8_t>(b[at]) |
                                 static_cast<uint8_t>(b[at + 1]) << 8);
}

uint32_t get_u32(std::string_view b, size_t at) {
    return static_cast<uint32_t>(get_u16(b, at)) |
           static_cast<uint32_t>(get_u16(b, at + 2)) << 16;
}

uint32_t crc_of(std::string_view data) {
    return static_cast<uint32_t>(
        ::crc32(0, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::string inflate_raw(std::string_view compressed, size_t expected_size) {
    std::string out(expected_size, '\0');
    z_stream zs{};
    // Negative window bits: raw deflate stream, no zlib wrapper, per the
    // zip specification.
    if (inflateInit2(&zs, -15) != Z_OK) throw Error("zlib initialization failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const bool complete = rc == Z_STREAM_END && zs.avail_out == 0;
    inflateEnd(&zs);
    if (!complete) throw ValidationError("bad zip: corrupt deflate stream");
    return out;
}

} // namespace

std::string write_zip(const std::vector<ZipEntry>& entries) {
    if (entries.size() > std::numeric_limits<uint16_t>::max())
        throw ValidationError("too many zip entries");
    std::set<std::string_view> names;
    for (const ZipEntry& e : entries) {
        if (e.name.empty()) throw ValidationError("zip entry with empty name");
        if (e.name.size() > std::numeric_limits<uint16_t>::max())
            throw ValidationError("zip entry name too long: " + e.name.substr(0, 64));
        if (e.data.size() > std::numeric_limits<uint32_t>::max())
            throw ValidationError("zip entry too large: " + e.name);
        if (!names.insert(e.name).second)
            throw ValidationError("duplicate zip entry name: " + e.name);
    }

    std::string out;
    std::vector<uint32_t> offsets;
    offsets.reserve(entries.size());
    for (const ZipEntry& e : entries) {
        offsets.push_back(static_cast<uint32_t>(out.size()));
        put_u32(out, kLocalSig);
        put_u16(out, 20);     // version needed
        put_u16(out, 0x0800); // UTF-8 names
        put_u16(out, 0);      // stored
        put_u16(out, 0);      // time: fixed for reproducible archives
        put_u16(out, 0x21);   // date: 1980-01-01
        put_u32(out, crc_of(e.data));
        put_u32(out, static_cast<uint32_t>(e.data.size()));
        put_u32(out, static_cast<uint32_t>(e.data.size()));
        put_u16(out, static_cast<uint16_t>(e.name.size()));
        put_u16(out, 0); // extra length
        out += e.name;
        out += e.data;
    }

    const uint32_t cd_offset = static_cast<uint32_t>(out.size());
    for (size_t i = 0; i < entries.size(); ++i) {
        const ZipEntry& e = entries[i];
        put_u32(out, kCentralSig);
        put_u16(out, 20); // version made by
        put_u16(out, 20); // version needed
        put_u16(out, 0x0800);
        put_u16(out, 0); // stored
        put_u16(out, 0);
        put_u16(out, 0x21);
        put_u32(out, crc_of(e.data));
        put_u32(out, static_cast<uint32_t>(e.data.size()));
        put_u32(out, static_cast<uint32_t>(e.data.size()));
        put_u16(out, static_cast<uint16_t>(e.name.size()));
        put_u16(out, 0); // extra
        put_u16(out, 0); // comment
        put_u16(out, 0); // disk
        put_u16(out, 0); // internal attrs
        put_u32(out, 0); // external attrs
        put_u32(out, offsets[i]);
        out += e.name;
    }
    const uint32_t cd_size = static_cast<uint32_t>(out.size()) - cd_offset;

    put_u32(out, kEocdSig);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, static_cast<uint16_t>(entries.size()));
    put_u16(out, static_cast<uint16_t>(entries.size()));
    put_u32(out, cd_size);
    put_u32(out, cd_offset);
    put_u16(out, 0);
    return out;
}

std::vector<ZipEntry> read_zip(std::string_view bytes) {
    if (bytes.size() < kEocdSize) throw ValidationError("bad zip: too short");

    // The end-of-central-directory record sits at the tail, possibly behind
    // an archive comment; scan backwards for its signature.
    const size_t scan_floor =
        bytes.size() > kEocdSize + 0xFFFF ? bytes.size() - kEocdSize - 0xFFFF : 0;
    size_t eocd = std::string_view::npos;
    for (size_t at = bytes.size() - kEocdSize + 1; at-- > scan_floor;) {
        if (get_u32(bytes, at) == kEocdSig) {
            eocd = at;
            break;
        }
    }
    if (eocd == std::string_view::npos)
        throw ValidationError("bad zip: no end-of-central-directory record");

    const uint16_t entry_count = get_u16(bytes, eocd + 10);
    const uint32_t cd_size = get_u32(bytes, eocd + 12);
    const uint32_t cd_offset = get_u32(bytes, eocd + 16);
    if (static_cast<uint64_t>(cd_offset) + cd_size > eocd)
        throw ValidationError("bad zip: central directory out of bounds");

    std::vector<ZipEntry> entries;
    size_t at = cd_offset;
    for (uint16_t i = 0; i < entry_count; ++i) {
        if (at + kCentralHeaderSize > cd_offset + cd_size)
            throw ValidationError("bad zip: truncated central directory");
        if (get_u32(bytes, at) != kCentralSig)
            throw ValidationError("bad zip: bad central directory signature");
        const uint16_t method = get_u16(bytes, at + 10);
        const uint32_t crc = get_u32(bytes, at + 16);
        const uint32_t csize = get_u32(bytes, at + 20);
        const uint32_t usize = get_u32(bytes, at + 24);
        const uint16_t name_len = get_u16(bytes, at + 28);
        const uint16_t extra_len = get_u16(bytes, at + 30);
        const uint16_t comment_len = get_u16(bytes, at + 32);
        const uint32_t local_offset = get_u32(bytes, at + 42);
        if (csize == 0xFFFFFFFF || usize == 0xFFFFFFFF || local_offset == 0xFFFFFFFF)
            throw ValidationError("bad zip: zip64 archives are not supported");
        if (at + kCentralHeaderSize + name_len > cd_offset + cd_size)
            throw ValidationError("bad zip: truncated central directory entry");
        std::string name(bytes.substr(at + kCentralHeaderSize, name_len));
        at += kCentralHeaderSize + name_len + extra_len + comment_len;

        if (!name.empty() && name.back() == '/') continue; // directory marker

        if (static_cast<uint64_t>(local_offset) + kLocalHeaderSize > bytes.size())
            throw ValidationError("bad zip: local header out of bounds");
        if (get_u32(bytes, local_offset) != kLocalSig)
            throw ValidationError("bad zip: bad local header signature");
        const uint16_t local_name_len = get_u16(bytes, local_offset + 26);
        const uint16_t local_extra_len = get_u16(bytes, local_offset + 28);
        const uint64_t data_at =
            static_cast<uint64_t>(local_offset) + kLocalHeaderSize + local_name_len +
            local_extra_len;
        if (data_at + csize > bytes.size())
            throw ValidationError("bad zip: entry data out of bounds");

        std::string_view raw = bytes.substr(data_at, csize);
        std::string data;
        if (method == 0) {
            if (csize != usize) throw ValidationError("bad zip: stored sizes disagree");
            data = std::string(raw);
        } else if (method == 8) {
            data = inflate_raw(raw, usize);
        } else {
            throw ValidationError("bad zip: unsupported compression method " +
                                  std::to_string(method));
        }
        if (crc_of(data) != crc) throw ValidationError("bad zip: entry CRC mismatch");
        entries.push_back({std::move(name), std::move(data)});
    }
    return entries;
}

} // namespace pbsearch
