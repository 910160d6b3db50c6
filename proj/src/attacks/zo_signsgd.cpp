#include <cmath>

#include "attack_run.hpp"

namespace bbopt {

std::vector<double> zo_sign_gradient_estimate(Objective& objective,
                                              const ImageTensor& x,
                                              const ZoSignConfig& cfg,
                                              RngStream& rng,
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

  double base = 0.0;
  if (cfg.forward_difference) {
    probe = x;
    feasible.project(probe);
    base = objective.loss(probe);
  }

  for (std::uint32_t j = 0; j < cfg.n_directions; ++j) {
    // Uniform direction on the unit sphere: a normalised Gaussian draw.
    double norm2 = 0.0;
    do {
      rng.fill_normal(u);
      norm2 = 0.0;
      for (double v : u) norm2 += v * v;
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : u) v *= inv;

    const double diff = cfg.forward_difference
                            ? evaluate_at(cfg.mu) - base
                            : evaluate_at(cfg.mu) - evaluate_at(-cfg.mu);
    for (std::size_t i = 0; i < d; ++i) grad[i] += diff * u[i];
  }
  const double scale =
      static_cast<double>(d) /
      ((cfg.forward_difference ? 1.0 : 2.0) * cfg.n_directions * cfg.mu);
  for (double& g : grad) g *= scale;
  return grad;
}

AttackResult zo_signsgd_attack(Oracle& oracle, const LabeledImage& item,
                               double eps, std::uint64_t budget,
                               const ZoSignConfig& cfg, RngStream& rng,
                               LossKind loss) {
  cfg.validate();
  detail::AttackRun run(oracle, item, eps, budget, loss);
  return run.run([&] {
    const FeasibleSet feasible = run.feasible();
    ImageTensor x = run.original();
    for (;;) {
      const auto grad =
          zo_sign_gradient_estimate(run.objective(), x, cfg, rng, feasible);
      detail::signed_step(x, grad, cfg.step_size, feasible);
      ++run.result().iterations;
      if (run.record_iterate(x)) return;
    }
  });
}

}  // namespace bbopt
