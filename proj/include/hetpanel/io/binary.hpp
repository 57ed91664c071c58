#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hetpanel::io {

/// Append-only little-endian byte buffer used to assemble file payloads.
class Writer {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f32(float v);
    void f64(double v);
    void str(const std::string& s);  // u32 length + raw bytes
    void raw(const void* data, std::size_t n);

    std::size_t size() const { return bytes_.size(); }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    /// Overwrites 4 bytes at `pos` (for back-patched lengths).
    void patch_u32(std::size_t pos, std::uint32_t v);

private:
    std::vector<std::uint8_t> bytes_;
};

/// Bounds-checked little-endian reader.  Every overrun throws a FormatError
/// naming the byte offset, so truncated files always fail cleanly.
class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size, std::string origin)
        : data_(data), size_(size), origin_(std::move(origin)) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    float f32();
    double f64();
    std::string str(std::size_t max_len = 1u << 20);

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }
    bool at_end() const { return pos_ == size_; }
    [[noreturn]] void fail(const std::string& msg) const;

private:
    void need(std::size_t n);

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::string origin_;
};

/// CRC-32 (zlib polynomial) of a byte range.
std::uint32_t crc32_of(const std::uint8_t* data, std::size_t n);

/// Writes bytes to `path` atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes);

/// Reads an entire file; missing/unreadable file throws a FormatError.
std::vector<std::uint8_t> read_file(const std::string& path);

}  // namespace hetpanel::io
