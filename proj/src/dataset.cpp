#include "bbopt/dataset.hpp"

#include "bbopt/binary_io.hpp"

namespace bbopt {

Dataset parse_dataset(const std::vector<std::uint8_t>& bytes) {
  io::Reader in(bytes, "IMGB");
  in.expect_magic("IMGB");
  if (const auto version = in.u32(); version != 1)
    in.fail("unsupported version " + std::to_string(version));
  const std::uint32_t count = in.u32();
  const std::uint32_t c = in.u32();
  const std::uint32_t h = in.u32();
  const std::uint32_t w = in.u32();
  Dataset out;
  out.class_count = in.u32();
  if (count > 0 && (c == 0 || h == 0 || w == 0))
    in.fail("zero image dimension");
  if (out.class_count < 2) in.fail("class_count must be >= 2");
  const std::uint64_t pixels = std::uint64_t{c} * h * w;
  if (count > 0 && (4 + pixels * 4) * count > bytes.size())
    in.fail("declared count exceeds file size");
  out.items.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t label_offset = in.offset();
    LabeledImage item;
    item.label = in.u32();
    if (item.label >= out.class_count)
      throw LoadError("IMGB: label " + std::to_string(item.label) +
                      " >= class_count at byte offset " +
                      std::to_string(label_offset));
    std::vector<float> data(pixels);
    in.f32s(data);
    item.image = ImageTensor(c, h, w, std::move(data));
    if (!item.image.all_finite()) in.fail("non-finite pixel");
    out.items.push_back(std::move(item));
  }
  if (!in.at_end()) in.fail("trailing bytes");
  return out;
}

Dataset load_dataset(const std::filesystem::path& path) {
  return parse_dataset(io::read_file(path));
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  io::Writer out;
  out.magic("IMGB");
  out.u32(1);
  out.u32(static_cast<std::uint32_t>(dataset.items.size()));
  std::size_t c = 0, h = 0, w = 0;
  if (!dataset.items.empty()) {
    const auto& first = dataset.items.front().image;
    c = first.channels();
    h = first.height();
    w = first.width();
  }
  out.u32(static_cast<std::uint32_t>(c));
  out.u32(static_cast<std::uint32_t>(h));
  out.u32(static_cast<std::uint32_t>(w));
  out.u32(dataset.class_count);
  for (const auto& item : dataset.items) {
    if (item.image.channels() != c || item.image.height() != h ||
        item.image.width() != w)
      throw ConfigError("IMGB requires a uniform image shape");
    out.u32(item.label);
    out.f32s(item.image.data());
  }
  io::write_file(path, out.bytes());
}

}  // namespace bbopt
