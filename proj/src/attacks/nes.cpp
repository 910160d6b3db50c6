#include "attack_run.hpp"

namespace bbopt {

std::vector<double> nes_gradient_estimate(Objective& objective,
                                          const ImageTensor& x,
                                          const NesConfig& cfg, RngStream& rng,
                                          const FeasibleSet& feasible) {
  cfg.validate();
  const std::size_t d = x.size();
  std::vector<double> grad(d, 0.0);
  std::vector<double> u(d);
  ImageTensor probe = x;

  auto evaluate_at = [&](double scale) {
    for (std::size_t i = 0; i < d; ++i)
      probe[i] = static_cast<float>(x[i] + scale * u[i]);
    feasible.project(probe);
    return objective.loss(probe);
  };

  const std::uint32_t draws = cfg.antithetic ? cfg.n_samples / 2 : cfg.n_samples;
  for (std::uint32_t k = 0; k < draws; ++k) {
    rng.fill_normal(u);
    double weight = evaluate_at(cfg.sigma);
    if (cfg.antithetic) weight -= evaluate_at(-cfg.sigma);
    for (std::size_t i = 0; i < d; ++i) grad[i] += weight * u[i];
  }
  const double norm = 1.0 / (cfg.n_samples * cfg.sigma);
  for (double& g : grad) g *= norm;
  return grad;
}

// The search distribution is an isotropic Gaussian with fixed scale, so the
// Fisher matrix is a constant multiple of the identity and the natural
// gradient step reduces to a rescaled plain step; that scale is folded into
// step_size. The step itself is the l-inf steepest-descent (sign) step.
AttackResult nes_attack(Oracle& oracle, const LabeledImage& item, double eps,
                        std::uint64_t budget, const NesConfig& cfg,
                        RngStream& rng, LossKind loss) {
  cfg.validate();
  detail::AttackRun run(oracle, item, eps, budget, loss);
  return run.run([&] {
    const FeasibleSet feasible = run.feasible();
    ImageTensor x = run.original();
    for (;;) {
      const auto grad =
          nes_gradient_estimate(run.objective(), x, cfg, rng, feasible);
      detail::signed_step(x, grad, cfg.step_size, feasible);
      ++run.result().iterations;
      if (run.record_iterate(x)) return;
    }
  });
}

}  // namespace bbopt
