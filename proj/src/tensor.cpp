#include "bbopt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbopt/error.hpp"

namespace bbopt {

ImageTensor::ImageTensor(std::size_t channels, std::size_t height,
                         std::size_t width, float fill)
    : ImageTensor(channels, height, width,
                  std::vector<float>(channels * height * width, fill)) {}

ImageTensor::ImageTensor(std::size_t channels, std::size_t height,
                         std::size_t width, std::vector<float> data)
    : channels_(channels), height_(height), width_(width),
      data_(std::move(data)) {
  if (channels == 0 || height == 0 || width == 0)
    throw ConfigError("image dimensions must be positive");
  if (data_.size() != channels * height * width)
    throw ConfigError("image data length " + std::to_string(data_.size()) +
                      " does not match shape " + std::to_string(channels) +
                      "x" + std::to_string(height) + "x" +
                      std::to_string(width));
}

bool ImageTensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float v) { return std::isfinite(v); });
}

ImageTensor clamp01(const ImageTensor& t) {
  if (!t.all_finite()) throw ConfigError("non-finite tensor");
  ImageTensor out = t;
  for (float& v : out.data()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

double linf_distance(const ImageTensor& a, const ImageTensor& b) {
  if (!a.same_shape(b)) throw ConfigError("linf_distance: shape mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    best = std::max(best, std::abs(static_cast<double>(a[i]) - b[i]));
  return best;
}

void project_linf_inplace(ImageTensor& point, const ImageTensor& center,
                          double eps) {
  if (!(eps > 0.0)) throw ConfigError("project_linf: eps must be positive");
  if (!point.same_shape(center))
    throw ConfigError("project_linf: shape mismatch");
  for (std::size_t i = 0; i < point.size(); ++i) {
    // Bounds are computed in double and rounded inward so the float result
    // never sits outside the ball by a rounding step.
    const double c = center[i];
    float lo = static_cast<float>(c - eps);
    float hi = static_cast<float>(c + eps);
    if (static_cast<double>(lo) < c - eps) lo = std::nextafter(lo, hi);
    if (static_cast<double>(hi) > c + eps) hi = std::nextafter(hi, lo);
    float v = std::clamp(point[i], lo, hi);
    point[i] = std::clamp(v, 0.0f, 1.0f);
  }
}

ImageTensor project_linf(const ImageTensor& point, const ImageTensor& center,
                         double eps) {
  ImageTensor out = point;
  project_linf_inplace(out, center, eps);
  return out;
}

}  // namespace bbopt
