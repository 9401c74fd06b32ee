#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "pbsearch/errors.hpp"

namespace pbsearch::io {

/// CRC-64/XZ (reflected, poly 0x42F0E1EBA9EA3693). Used as the database
/// trailer checksum.
uint64_t crc64(const void* data, size_t len, uint64_t crc = 0);

/// SHA-256 of a buffer as lowercase hex. Guards report rendering against
/// post-encode edits of the source file.
std::string sha256_hex(std::string_view data);

/// Little-endian primitive writer that keeps a running CRC64 of everything
/// written through it.
class CrcWriter {
  public:
    explicit CrcWriter(std::ostream& out) : out_(out) {}

    void write_bytes(const void* data, size_t len);
    void write_u8(uint8_t v) { write_bytes(&v, 1); }
    void write_u32(uint32_t v);
    void write_u64(uint64_t v);
    void write_string(std::string_view s); // u32 length prefix + bytes

    uint64_t crc() const { return crc_; }
    /// Appends the running CRC as a trailing u64 (not folded into itself).
    void write_crc_trailer();

  private:
    std::ostream& out_;
    uint64_t crc_ = 0;
};

/// Little-endian primitive reader mirroring CrcWriter. Reads raise
/// LoadError{Truncated} when the stream runs dry.
class CrcReader {
  public:
    explicit CrcReader(std::istream& in) : in_(in) {}

    void read_bytes(void* data, size_t len);
    uint8_t read_u8();
    uint32_t read_u32();
    uint64_t read_u64();
    std::string read_string(size_t max_len = 1 << 20);

    uint64_t crc() const { return crc_; }
    /// Reads the trailing u64 and verifies it against the running CRC.
    void check_crc_trailer();

  private:
    std::istream& in_;
    uint64_t crc_ = 0;
};

} // namespace pbsearch::io
