#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "bbopt/oracle.hpp"

namespace bbopt {

struct DenseLayer {
  std::uint32_t in_dim = 0;
  std::uint32_t out_dim = 0;
  bool relu = false;
  std::vector<float> weights;  // out_dim x in_dim, row-major
  std::vector<float> bias;     // out_dim
};

// flatten -> (dense -> ReLU)* -> dense. Stateless after construction, so
// concurrent queries are safe.
class MlpOracle final : public Oracle {
 public:
  explicit MlpOracle(std::vector<DenseLayer> layers);

  Logits logits(const ImageTensor& image) override;
  std::size_t num_classes() const override;
  std::string describe() const override { return "mlp"; }

  std::size_t input_dim() const { return layers_.front().in_dim; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

 private:
  std::vector<DenseLayer> layers_;
};

// BBAM file: magic "BBAM", u32 version (1), u32 layer_count, then per layer
// u32 in_dim, u32 out_dim, u8 relu_flag, f32 weights[out*in], f32 bias[out].
// All little-endian. Throws LoadError on any violation.
std::unique_ptr<MlpOracle> load_builtin_model(const std::filesystem::path& path);
std::unique_ptr<MlpOracle> parse_builtin_model(const std::vector<std::uint8_t>& bytes);

void save_builtin_model(const std::filesystem::path& path,
                        const std::vector<DenseLayer>& layers);

}  // namespace bbopt
