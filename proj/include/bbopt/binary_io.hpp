#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bbopt/error.hpp"

namespace bbopt::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

// Sequential little-endian reader; errors carry the failing byte offset.
class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  std::size_t offset() const { return offset_; }
  bool at_end() const { return offset_ == bytes_.size(); }

  void expect_magic(const char (&magic)[5]);
  std::uint8_t u8();
  std::uint32_t u32();
  void f32s(std::span<float> out);

  [[noreturn]] void fail(const std::string& message) const;

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> bytes_;
  std::string what_;
  std::size_t offset_ = 0;
};

class Writer {
 public:
  void magic(const char (&magic)[5]) { raw(magic, 4); }
  void u8(std::uint8_t v) { raw(&v, 1); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void f32s(std::span<const float> v) { raw(v.data(), v.size_bytes()); }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  std::vector<std::uint8_t> bytes_;
};

}  // namespace bbopt::io
