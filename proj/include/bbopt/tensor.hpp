#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bbopt {

// Channel-first image of shape (channels, height, width) stored as a flat
// row-major float array.
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(std::size_t channels, std::size_t height, std::size_t width,
              float fill = 0.0f);
  ImageTensor(std::size_t channels, std::size_t height, std::size_t width,
              std::vector<float> data);

  std::size_t channels() const { return channels_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  float& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * height_ + y) * width_ + x];
  }
  float at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * height_ + y) * width_ + x];
  }

  bool same_shape(const ImageTensor& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }
  bool all_finite() const;

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> data_;
};

// Elementwise clamp into [0, 1]. Throws ConfigError("non-finite tensor").
ImageTensor clamp01(const ImageTensor& t);

// max_i |a_i - b_i|, accumulated in double.
double linf_distance(const ImageTensor& a, const ImageTensor& b);

// Projection onto the intersection of the l-inf ball of radius eps around
// `center` and the unit box. The ball clamp is applied first, then the box
// clamp; for two boxes the composition is the exact projection either way.
ImageTensor project_linf(const ImageTensor& point, const ImageTensor& center,
                         double eps);

// In-place variant used on hot attack paths.
void project_linf_inplace(ImageTensor& point, const ImageTensor& center,
                          double eps);

}  // namespace bbopt
