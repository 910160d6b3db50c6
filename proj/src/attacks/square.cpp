#include <algorithm>

#include "attack_run.hpp"

namespace bbopt {

ImageTensor square_init(const ImageTensor& x, double eps, RngStream& rng) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  ImageTensor out = x;
  for (std::size_t c = 0; c < x.channels(); ++c)
    for (std::size_t col = 0; col < x.width(); ++col) {
      const double offset = rng.sign() * eps;
      for (std::size_t row = 0; row < x.height(); ++row)
        out.at(c, row, col) = static_cast<float>(x.at(c, row, col) + offset);
    }
  project_linf_inplace(out, x, eps);
  return out;
}

ImageTensor square_sample_delta(double eps, std::uint32_t h,
                                const ImageTensor& x_hat, const ImageTensor& x,
                                std::uint32_t k_squares, RngStream& rng) {
  if (!x_hat.same_shape(x)) throw ConfigError("square: shape mismatch");
  if (k_squares == 0) throw ConfigError("k_squares must be at least 1");
  if (h == 0 || h > x.height() || h > x.width())
    throw ConfigError("square side " + std::to_string(h) +
                      " exceeds the image side");
  ImageTensor out = x_hat;
  for (std::uint32_t k = 0; k < k_squares; ++k) {
    const std::size_t top = rng.uniform_int(x.height() - h + 1);
    const std::size_t left = rng.uniform_int(x.width() - h + 1);
    for (std::size_t c = 0; c < x.channels(); ++c) {
      const double offset = rng.sign() * eps;
      for (std::size_t row = top; row < top + h; ++row)
        for (std::size_t col = left; col < left + h; ++col)
          out.at(c, row, col) = static_cast<float>(x.at(c, row, col) + offset);
    }
  }
  project_linf_inplace(out, x, eps);
  return out;
}

AttackResult square_attack_linf(Oracle& oracle, const LabeledImage& item,
                                double eps, std::uint64_t budget,
                                const SquareConfig& cfg, RngStream& rng,
                                LossKind loss) {
  cfg.validate();
  const auto omega = static_cast<std::uint32_t>(
      std::min(item.image.height(), item.image.width()));
  detail::AttackRun run(oracle, item, eps, budget, loss);
  return run.run([&] {
    AttackResult& result = run.result();
    ImageTensor best = square_init(run.original(), eps, rng);
    if (run.record_iterate(best)) {
      result.accepted_losses.push_back(result.final_loss);
      return;
    }
    double best_loss = result.final_loss;
    result.accepted_losses.push_back(best_loss);

    for (std::uint64_t i = 1; i < cfg.p_schedule.n_total; ++i) {
      const std::uint32_t h = square_side(p_at(cfg.p_schedule, i), omega);
      ImageTensor candidate = square_sample_delta(eps, h, best, run.original(),
                                                  cfg.k_squares, rng);
      const auto e = run.objective().evaluate(candidate);
      ++result.iterations;
      const bool accept =
          cfg.strict_improve ? e.loss < best_loss : e.loss <= best_loss;
      if (!accept) continue;
      best = std::move(candidate);
      best_loss = e.loss;
      result.final_image = best;
      result.final_loss = best_loss;
      result.accepted_losses.push_back(best_loss);
      if (e.adversarial) {
        result.success = true;
        return;
      }
    }
  });
}

}  // namespace bbopt
