#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bbopt/dataset.hpp"
#include "bbopt/oracle.hpp"
#include "bbopt/rng.hpp"
#include "bbopt/schedule.hpp"
#include "bbopt/tensor.hpp"

namespace bbopt {

struct AttackResult {
  bool success = false;
  // The clean input was already misclassified by the first query.
  bool clean_misclassified = false;
  std::uint64_t queries = 0;
  std::uint64_t iterations = 0;
  ImageTensor final_image;
  double final_loss = 0.0;
  // Square Attack only: the best-so-far loss after init and after every
  // accepted candidate.
  std::vector<double> accepted_losses;
};

struct NesConfig {
  std::uint32_t n_samples = 50;  // even when antithetic
  double sigma = 0.001;
  double step_size = 0.01;
  bool antithetic = true;

  void validate() const;
};

struct BanditsConfig {
  std::uint32_t prior_size = 0;  // 0: half the image side, at least 1
  double exploration = 1.0;
  double fd_eta = 0.1;
  double prior_step = 0.01;
  double image_step = 0.01;

  void validate() const;
  std::uint32_t resolved_prior_size(const ImageTensor& image) const;
};

struct ZoSignConfig {
  std::uint32_t n_directions = 20;
  double mu = 0.005;
  double step_size = 0.005;
  // One-sided differences against L(x); b + 1 queries instead of 2b.
  bool forward_difference = false;

  void validate() const;
};

struct SquareConfig {
  PSchedule p_schedule;
  std::uint32_t k_squares = 1;
  // Accept only strict improvements (l_new < l*) instead of l_new <= l*.
  bool strict_improve = false;

  void validate() const;
  // Schedule over `budget` iterations built from a list written for 10000.
  static SquareConfig for_budget(std::uint64_t budget,
                                 const std::vector<std::uint64_t>& list =
                                     builtin_list_L1(),
                                 double p0 = 0.05);
};

// Constraint applied to every probe an estimator queries: projection onto
// the eps-ball around `center` intersected with [0,1]^d. A default value
// leaves probes unconstrained.
struct FeasibleSet {
  const ImageTensor* center = nullptr;
  double eps = 0.0;

  void project(ImageTensor& image) const;
};

// -1, 0 or +1.
inline double sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Antithetic Gaussian search-gradient estimate of the objective at x:
// (1/(n sigma)) * sum over pairs of (L(x + sigma u) - L(x - sigma u)) u.
// Without antithetic pairing it is (1/(n sigma)) * sum L(x + sigma u) u.
// Uses exactly n_samples queries.
std::vector<double> nes_gradient_estimate(Objective& objective,
                                          const ImageTensor& x,
                                          const NesConfig& cfg,
                                          RngStream& rng,
                                          const FeasibleSet& feasible = {});

// Nearest-neighbour upsampling of a (c, s, s) latent to the image shape
// followed by scaling to unit max-magnitude (an all-zero latent stays zero).
ImageTensor upsample_latent(std::span<const double> latent,
                            std::uint32_t prior_size,
                            const ImageTensor& like);

// Two-point latent-space estimate for the bandit prior update:
// draws u ~ N(0, I) in latent space and returns
// (L(x + eta up(v + delta u)) - L(x + eta up(v - delta u))) / (2 delta eta) * u.
// Uses exactly 2 queries.
std::vector<double> bandits_grad_est(Objective& objective,
                                     const ImageTensor& x,
                                     std::span<const double> latent,
                                     const BanditsConfig& cfg, RngStream& rng,
                                     const FeasibleSet& feasible = {});

// (d / (2 b mu)) * sum_j (L(x + mu u_j) - L(x - mu u_j)) u_j with u_j
// uniform on the unit sphere. Uses exactly 2b queries (b + 1 with forward
// differences).
std::vector<double> zo_sign_gradient_estimate(Objective& objective,
                                              const ImageTensor& x,
                                              const ZoSignConfig& cfg,
                                              RngStream& rng,
                                              const FeasibleSet& feasible = {});

// Vertical-stripe initialisation: every (channel, column) gets x +/- eps,
// then the result is projected onto the feasible set.
ImageTensor square_init(const ImageTensor& x, double eps, RngStream& rng);

// Candidate for one random-search step: k_squares windows of side h placed
// uniformly at random (overlap allowed); inside each window every channel is
// set to x +/- eps with one sign per (window, channel). Pixels outside the
// windows keep their value from x_hat.
ImageTensor square_sample_delta(double eps, std::uint32_t h,
                                const ImageTensor& x_hat, const ImageTensor& x,
                                std::uint32_t k_squares, RngStream& rng);

// All attacks minimise attack_loss(loss, f(x'), y) over the eps-ball, issue
// one clean-image query first (counted), and stop on the first adversarial
// iterate or when the budget runs out.
AttackResult nes_attack(Oracle& oracle, const LabeledImage& item, double eps,
                        std::uint64_t budget, const NesConfig& cfg,
                        RngStream& rng, LossKind loss = LossKind::Margin);

AttackResult bandits_attack(Oracle& oracle, const LabeledImage& item,
                            double eps, std::uint64_t budget,
                            const BanditsConfig& cfg, RngStream& rng,
                            LossKind loss = LossKind::Margin);

AttackResult zo_signsgd_attack(Oracle& oracle, const LabeledImage& item,
                               double eps, std::uint64_t budget,
                               const ZoSignConfig& cfg, RngStream& rng,
                               LossKind loss = LossKind::Margin);

AttackResult square_attack_linf(Oracle& oracle, const LabeledImage& item,
                                double eps, std::uint64_t budget,
                                const SquareConfig& cfg, RngStream& rng,
                                LossKind loss = LossKind::Margin);

enum class AttackKind { Bandits, Nes, Square, ZoSignSgd };

std::string_view to_string(AttackKind kind);
std::string_view display_name(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);

struct AttackConfig {
  AttackKind kind = AttackKind::Square;
  LossKind loss = LossKind::Margin;
  NesConfig nes;
  BanditsConfig bandits;
  ZoSignConfig zo;
  SquareConfig square;
};

AttackResult run_attack(Oracle& oracle, const LabeledImage& item, double eps,
                        std::uint64_t budget, const AttackConfig& cfg,
                        RngStream& rng);

}  // namespace bbopt
