#include "bbopt/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "bbopt/binary_io.hpp"

namespace bbopt {

namespace {

bool finite(const std::vector<float>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](float x) { return std::isfinite(x); });
}

void validate(const std::vector<DenseLayer>& layers) {
  if (layers.empty()) throw LoadError("model has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string where = "layer " + std::to_string(i);
    if (l.in_dim == 0 || l.out_dim == 0)
      throw LoadError(where + ": zero dimension");
    if (l.weights.size() != std::size_t{l.in_dim} * l.out_dim ||
        l.bias.size() != l.out_dim)
      throw LoadError(where + ": parameter count mismatch");
    if (i > 0 && l.in_dim != layers[i - 1].out_dim)
      throw LoadError(where + ": in_dim " + std::to_string(l.in_dim) +
                      " does not match previous out_dim " +
                      std::to_string(layers[i - 1].out_dim));
    if (!finite(l.weights) || !finite(l.bias))
      throw LoadError(where + ": non-finite weights");
  }
  if (layers.back().out_dim < 2) throw LoadError("model needs >= 2 classes");
}

}  // namespace

MlpOracle::MlpOracle(std::vector<DenseLayer> layers)
    : layers_(std::move(layers)) {
  validate(layers_);
}

std::size_t MlpOracle::num_classes() const { return layers_.back().out_dim; }

Logits MlpOracle::logits(const ImageTensor& image) {
  if (image.size() != input_dim())
    throw ConfigError("image has " + std::to_string(image.size()) +
                      " values, model expects " + std::to_string(input_dim()));
  std::vector<double> act(image.data().begin(), image.data().end());
  std::vector<double> next;
  for (const auto& layer : layers_) {
    next.assign(layer.out_dim, 0.0);
    for (std::uint32_t o = 0; o < layer.out_dim; ++o) {
      const float* row = layer.weights.data() + std::size_t{o} * layer.in_dim;
      double acc = layer.bias[o];
      for (std::uint32_t i = 0; i < layer.in_dim; ++i) acc += row[i] * act[i];
      next[o] = layer.relu ? std::max(acc, 0.0) : acc;
    }
    act.swap(next);
  }
  return act;
}

std::unique_ptr<MlpOracle> parse_builtin_model(
    const std::vector<std::uint8_t>& bytes) {
  io::Reader in(bytes, "BBAM");
  in.expect_magic("BBAM");
  if (const auto version = in.u32(); version != 1)
    in.fail("unsupported version " + std::to_string(version));
  const std::uint32_t count = in.u32();
  if (count == 0) in.fail("layer_count is zero");
  std::vector<DenseLayer> layers;
  for (std::uint32_t i = 0; i < count; ++i) {
    DenseLayer l;
    l.in_dim = in.u32();
    l.out_dim = in.u32();
    if (i > 0 && l.in_dim != layers.back().out_dim)
      in.fail("layer " + std::to_string(i) + " in_dim " +
              std::to_string(l.in_dim) + " does not match previous out_dim " +
              std::to_string(layers.back().out_dim));
    const std::uint8_t flag = in.u8();
    if (flag > 1) in.fail("relu_flag must be 0 or 1");
    l.relu = flag == 1;
    const std::uint64_t n = std::uint64_t{l.in_dim} * l.out_dim;
    if (n * 4 > bytes.size()) in.fail("layer size exceeds file size");
    l.weights.resize(n);
    in.f32s(l.weights);
    l.bias.resize(l.out_dim);
    in.f32s(l.bias);
    layers.push_back(std::move(l));
  }
  if (!in.at_end()) in.fail("trailing bytes");
  return std::make_unique<MlpOracle>(std::move(layers));
}

std::unique_ptr<MlpOracle> load_builtin_model(
    const std::filesystem::path& path) {
  return parse_builtin_model(io::read_file(path));
}

void save_builtin_model(const std::filesystem::path& path,
                        const std::vector<DenseLayer>& layers) {
  validate(layers);
  io::Writer out;
  out.magic("BBAM");
  out.u32(1);
  out.u32(static_cast<std::uint32_t>(layers.size()));
  for (const auto& l : layers) {
    out.u32(l.in_dim);
    out.u32(l.out_dim);
    out.u8(l.relu ? 1 : 0);
    out.f32s(l.weights);
    out.f32s(l.bias);
  }
  io::write_file(path, out.bytes());
}

}  // namespace bbopt
