#include "hetpanel/io/binary.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "hetpanel/core/error.hpp"

namespace hetpanel::io {

void Writer::u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
}

void Writer::f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
}

void Writer::str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
}

void Writer::raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
}

void Writer::patch_u32(std::size_t pos, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.at(pos + static_cast<std::size_t>(i)) =
        static_cast<std::uint8_t>(v >> (8 * i));
}

void Reader::need(std::size_t n) {
    if (size_ - pos_ < n) {
        fail("unexpected end of file (needed " + std::to_string(n) + " more bytes)");
    }
}

std::uint8_t Reader::u8() {
    need(1);
    return data_[pos_++];
}

std::uint32_t Reader::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
    return v;
}

std::uint64_t Reader::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
    return v;
}

float Reader::f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

double Reader::f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::string Reader::str(std::size_t max_len) {
    const std::uint32_t n = u32();
    if (n > max_len) fail("string length " + std::to_string(n) + " exceeds sane bounds");
    need(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
}

void Reader::fail(const std::string& msg) const {
    throw FormatError(origin_ + ": " + msg + " at byte offset " + std::to_string(pos_));
}

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t n) {
    return static_cast<std::uint32_t>(
        ::crc32(::crc32(0L, nullptr, 0), data, static_cast<uInt>(n)));
}

void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open '" + tmp + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw FormatError("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw FormatError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw FormatError("cannot open '" + path + "'");
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    if (size > 0) {
        in.read(reinterpret_cast<char*>(bytes.data()), size);
        if (!in) throw FormatError("cannot read '" + path + "'");
    }
    return bytes;
}

}  // namespace hetpanel::io
