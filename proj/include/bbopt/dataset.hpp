#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "bbopt/tensor.hpp"

namespace bbopt {

struct LabeledImage {
  ImageTensor image;
  std::uint32_t label = 0;
};

struct Dataset {
  std::uint32_t class_count = 0;
  std::vector<LabeledImage> items;
};

// IMGB file: magic "IMGB", u32 version (1), u32 count, u32 c, u32 h, u32 w,
// u32 class_count, then per image u32 label and f32 pixels[c*h*w]. All
// little-endian. Load errors name the byte offset of the violation.
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(const std::vector<std::uint8_t>& bytes);

void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

}  // namespace bbopt
