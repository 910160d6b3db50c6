#include "bbopt/binary_io.hpp"

#include <fstream>
#include <iterator>

namespace bbopt::io {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path.string());
}

void Reader::fail(const std::string& message) const {
  throw LoadError(what_ + ": " + message + " at byte offset " +
                  std::to_string(offset_));
}

void Reader::need(std::size_t n) const {
  if (bytes_.size() - offset_ < n)
    fail("truncated (need " + std::to_string(n) + " bytes, have " +
         std::to_string(bytes_.size() - offset_) + ")");
}

void Reader::expect_magic(const char (&magic)[5]) {
  need(4);
  if (std::memcmp(bytes_.data() + offset_, magic, 4) != 0)
    fail(std::string("bad magic, expected \"") + magic + "\"");
  offset_ += 4;
}

std::uint8_t Reader::u8() {
  need(1);
  return bytes_[offset_++];
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v;
  std::memcpy(&v, bytes_.data() + offset_, 4);
  offset_ += 4;
  return v;
}

void Reader::f32s(std::span<float> out) {
  need(out.size_bytes());
  std::memcpy(out.data(), bytes_.data() + offset_, out.size_bytes());
  offset_ += out.size_bytes();
}

}  // namespace bbopt::io
