#include "pbsearch/io_util.hpp"

#include <array>

#include <openssl/evp.h>

namespace pbsearch::io {

namespace {

std::array<uint64_t, 256> make_crc64_table() {
    constexpr uint64_t poly = 0xC96C5795D7870F42ULL; // reflected 0x42F0E1EBA9EA3693
    std::array<uint64_t, 256> table{};
    for (uint32_t i = 0; i < 256; ++i) {
        uint64_t crc = i;
        for (int bit = 0; bit < 8; ++bit) {
            crc = (crc & 1) ? (crc >> 1) ^ poly : crc >> 1;
        }
        table[i] = crc;
    }
    return table;
}

const std::array<uint64_t, 256>& crc64_table() {
    static const auto table = make_crc64_table();
    return table;
}

} // namespace

uint64_t crc64(const void* data, size_t len, uint64_t crc) {
    const auto& table = crc64_table();
    const auto* p = static_cast<const unsigned char*>(data);
    crc = ~crc;
    for (size_t i = 0; i < len; ++i) {
        crc = table[(crc ^ p[i]) & 0xFF] ^ (crc >> 8);
    }
    return ~crc;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

void CrcWriter::write_bytes(const void* data, size_t len) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out_) {
        throw Error("write failed");
    }
    crc_ = crc64(data, len, crc_);
}

void CrcWriter::write_u32(uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) {
        buf[i] = static_cast<unsigned char>(v >> (8 * i));
    }
    write_bytes(buf, 4);
}

void CrcWriter::write_u64(uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<unsigned char>(v >> (8 * i));
    }
    write_bytes(buf, 8);
}

void CrcWriter::write_string(std::string_view s) {
    write_u32(static_cast<uint32_t>(s.size()));
    if (!s.empty()) {
        write_bytes(s.data(), s.size());
    }
}

void CrcWriter::write_crc_trailer() {
    uint64_t crc = crc_;
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<unsigned char>(crc >> (8 * i));
    }
    out_.write(reinterpret_cast<const char*>(buf), 8);
    if (!out_) {
        throw Error("write failed");
    }
}

void CrcReader::read_bytes(void* data, size_t len) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
    if (static_cast<size_t>(in_.gcount()) != len) {
        throw LoadError(LoadError::Kind::Truncated, "unexpected end of file");
    }
    crc_ = crc64(data, len, crc_);
}

uint8_t CrcReader::read_u8() {
    uint8_t v = 0;
    read_bytes(&v, 1);
    return v;
}

uint32_t CrcReader::read_u32() {
    unsigned char buf[4];
    read_bytes(buf, 4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | buf[i];
    }
    return v;
}

uint64_t CrcReader::read_u64() {
    unsigned char buf[8];
    read_bytes(buf, 8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | buf[i];
    }
    return v;
}

std::string CrcReader::read_string(size_t max_len) {
    uint32_t len = read_u32();
    if (len > max_len) {
        throw LoadError(LoadError::Kind::BadSection, "string field exceeds sane length");
    }
    std::string s(len, '\0');
    if (len > 0) {
        read_bytes(s.data(), len);
    }
    return s;
}

void CrcReader::check_crc_trailer() {
    uint64_t expected = crc_;
    unsigned char buf[8];
    in_.read(reinterpret_cast<char*>(buf), 8);
    if (in_.gcount() != 8) {
        throw LoadError(LoadError::Kind::Truncated, "missing checksum trailer");
    }
    uint64_t stored = 0;
    for (int i = 7; i >= 0; --i) {
        stored = (stored << 8) | buf[i];
    }
    if (stored != expected) {
        throw LoadError(LoadError::Kind::BadChecksum, "checksum mismatch");
    }
}

} // namespace pbsearch::io
