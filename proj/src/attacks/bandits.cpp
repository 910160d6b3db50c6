#include <cmath>

#include "attack_run.hpp"

namespace bbopt {

ImageTensor upsample_latent(std::span<const double> latent,
                            std::uint32_t prior_size,
                            const ImageTensor& like) {
  const std::size_t c = like.channels(), h = like.height(), w = like.width();
  if (latent.size() != c * prior_size * prior_size)
    throw ConfigError("latent size does not match channels x prior_size^2");
  ImageTensor out(c, h, w);
  double peak = 0.0;
  for (double v : latent) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return out;
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t ly = y * prior_size / h;
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t lx = x * prior_size / w;
        out.at(ch, y, x) = static_cast<float>(
            latent[(ch * prior_size + ly) * prior_size + lx] / peak);
      }
    }
  return out;
}

std::vector<double> bandits_grad_est(Objective& objective,
                                     const ImageTensor& x,
                                     std::span<const double> latent,
                                     const BanditsConfig& cfg, RngStream& rng,
                                     const FeasibleSet& feasible) {
  cfg.validate();
  const std::uint32_t prior_size = cfg.resolved_prior_size(x);
  if (latent.size() != x.channels() * prior_size * prior_size)
    throw ConfigError("latent size does not match channels x prior_size^2");

  std::vector<double> u(latent.size());
  rng.fill_normal(u);

  std::vector<double> shifted(latent.size());
  auto probe_loss = [&](double direction) {
    for (std::size_t i = 0; i < u.size(); ++i)
      shifted[i] = latent[i] + direction * cfg.exploration * u[i];
    ImageTensor probe = upsample_latent(shifted, prior_size, x);
    for (std::size_t i = 0; i < probe.size(); ++i)
      probe[i] = static_cast<float>(x[i] + cfg.fd_eta * probe[i]);
    feasible.project(probe);
    return objective.loss(probe);
  };

  const double plus = probe_loss(1.0);
  const double minus = probe_loss(-1.0);
  const double slope = (plus - minus) / (2.0 * cfg.exploration * cfg.fd_eta);
  for (double& v : u) v *= slope;
  return u;
}

// The latent v carries the gradient estimate across rounds (time prior) and
// lives at reduced resolution so neighbouring pixels share it (data prior).
// It is updated by plain gradient ascent on <grad L, v>; the image descends
// along sign(up(v)), which is the l-inf projection of the step.
AttackResult bandits_attack(Oracle& oracle, const LabeledImage& item,
                            double eps, std::uint64_t budget,
                            const BanditsConfig& cfg, RngStream& rng,
                            LossKind loss) {
  cfg.validate();
  const std::uint32_t prior_size = cfg.resolved_prior_size(item.image);
  detail::AttackRun run(oracle, item, eps, budget, loss);
  return run.run([&] {
    const FeasibleSet feasible = run.feasible();
    ImageTensor x = run.original();
    std::vector<double> latent(x.channels() * prior_size * prior_size, 0.0);
    for (;;) {
      const auto step =
          bandits_grad_est(run.objective(), x, latent, cfg, rng, feasible);
      for (std::size_t i = 0; i < latent.size(); ++i)
        latent[i] += cfg.prior_step * step[i];
      const ImageTensor direction = upsample_latent(latent, prior_size, x);
      const std::vector<double> dir(direction.data().begin(),
                                    direction.data().end());
      detail::signed_step(x, dir, cfg.image_step, feasible);
      ++run.result().iterations;
      if (run.record_iterate(x)) return;
    }
  });
}

}  // namespace bbopt
