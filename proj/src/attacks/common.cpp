#include "attack_run.hpp"

namespace bbopt {

void FeasibleSet::project(ImageTensor& image) const {
  if (center != nullptr) project_linf_inplace(image, *center, eps);
}

void NesConfig::validate() const {
  if (n_samples == 0) throw ConfigError("NES n_samples must be positive");
  if (antithetic && n_samples % 2 != 0)
    throw ConfigError("NES n_samples must be even for antithetic sampling");
  if (!(sigma > 0.0) || !(step_size > 0.0))
    throw ConfigError("NES sigma and step_size must be positive");
}

void BanditsConfig::validate() const {
  if (!(exploration > 0.0) || !(fd_eta > 0.0) || !(image_step > 0.0))
    throw ConfigError("Bandits exploration, fd_eta and image_step must be positive");
  if (!(prior_step >= 0.0))
    throw ConfigError("Bandits prior_step must be non-negative");
}

std::uint32_t BanditsConfig::resolved_prior_size(
    const ImageTensor& image) const {
  const auto side =
      static_cast<std::uint32_t>(std::min(image.height(), image.width()));
  const std::uint32_t size = prior_size == 0 ? std::max(side / 2, 1u) : prior_size;
  if (size > side)
    throw ConfigError("Bandits prior_size exceeds the image side");
  return size;
}

void ZoSignConfig::validate() const {
  if (n_directions == 0)
    throw ConfigError("ZO-signSGD n_directions must be positive");
  if (!(mu > 0.0) || !(step_size > 0.0))
    throw ConfigError("ZO-signSGD mu and step_size must be positive");
}

void SquareConfig::validate() const {
  if (k_squares == 0) throw ConfigError("k_squares must be at least 1");
  p_schedule.validate();
}

SquareConfig SquareConfig::for_budget(std::uint64_t budget,
                                      const std::vector<std::uint64_t>& list,
                                      double p0) {
  SquareConfig cfg;
  cfg.p_schedule = make_schedule(p0, list, budget);
  return cfg;
}

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::Bandits: return "bandits";
    case AttackKind::Nes: return "nes";
    case AttackKind::Square: return "square";
    case AttackKind::ZoSignSgd: return "zosignsgd";
  }
  return "?";
}

std::string_view display_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::Bandits: return "Bandits";
    case AttackKind::Nes: return "NES";
    case AttackKind::Square: return "Square Attack";
    case AttackKind::ZoSignSgd: return "ZO-signSGD";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view text) {
  for (auto kind : {AttackKind::Bandits, AttackKind::Nes, AttackKind::Square,
                    AttackKind::ZoSignSgd})
    if (text == to_string(kind)) return kind;
  throw ConfigError("unknown attack '" + std::string(text) + "'");
}

AttackResult run_attack(Oracle& oracle, const LabeledImage& item, double eps,
                        std::uint64_t budget, const AttackConfig& cfg,
                        RngStream& rng) {
  switch (cfg.kind) {
    case AttackKind::Bandits:
      return bandits_attack(oracle, item, eps, budget, cfg.bandits, rng,
                            cfg.loss);
    case AttackKind::Nes:
      return nes_attack(oracle, item, eps, budget, cfg.nes, rng, cfg.loss);
    case AttackKind::Square:
      return square_attack_linf(oracle, item, eps, budget, cfg.square, rng,
                                cfg.loss);
    case AttackKind::ZoSignSgd:
      return zo_signsgd_attack(oracle, item, eps, budget, cfg.zo, rng,
                               cfg.loss);
  }
  throw ConfigError("unknown attack kind");
}

}  // namespace bbopt
