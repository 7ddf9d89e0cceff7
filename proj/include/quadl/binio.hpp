// Little-endian binary helpers and the FNV-1a checksum shared by the
// coefficient-table and block-file formats.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace quadl {

static_assert(std::endian::native == std::endian::little, "file formats assume a little-endian host");

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

class ByteWriter {
public:
    template <class T>
    void put(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        const auto* p = reinterpret_cast<const unsigned char*>(&v);
        buf_.insert(buf_.end(), p, p + sizeof(T));
    }
    void put_bytes(const void* p, std::size_t n) {
        const auto* c = static_cast<const unsigned char*>(p);
        buf_.insert(buf_.end(), c, c + n);
    }
    std::vector<unsigned char>& bytes() { return buf_; }
    std::uint64_t checksum() const { return fnv1a(buf_.data(), buf_.size()); }

private:
    std::vector<unsigned char> buf_;
};

class ByteReader {
public:
    ByteReader(const unsigned char* p, std::size_t n) : p_(p), n_(n) {}
    template <class T>
    T get() {
        T v;
        if (pos_ + sizeof(T) > n_) throw std::runtime_error("truncated file");
        std::memcpy(&v, p_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    void get_bytes(void* out, std::size_t n) {
        if (pos_ + n > n_) throw std::runtime_error("truncated file");
        std::memcpy(out, p_ + pos_, n);
        pos_ += n;
    }
    std::size_t pos() const { return pos_; }

private:
    const unsigned char* p_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

std::vector<unsigned char> read_file_bytes(const std::string& path);
// Writes to path.tmp then renames, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::vector<unsigned char>& bytes);

}  // namespace quadl
