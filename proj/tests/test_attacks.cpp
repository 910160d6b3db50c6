#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "bbopt/attacks.hpp"
#include "bbopt/error.hpp"
#include "test_support.hpp"

using namespace bbopt;
using namespace bbopt::testing;

namespace {

std::vector<double> gaussian_weights(std::size_t d, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> w(d);
  rng.fill_normal(w);
  return w;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

bool all_zero(const std::vector<double>& g) {
  return std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; });
}

// Label 0 of a two-class model whose score margin at x is a fraction of
// eps * |w|_1, so a sign step of total size eps suffices.
struct EasyCase {
  LinearOracle model;
  LabeledImage item;
};

EasyCase easy_case(double eps, double fraction, std::uint64_t seed) {
  auto w = gaussian_weights(64, seed);
  ImageTensor x(1, 8, 8, 0.5f);
  double wx = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wx += w[i] * x[i];
    l1 += std::abs(w[i]);
  }
  const double bias = fraction * eps * l1 - wx;
  return {LinearOracle::two_class(w, bias), {x, 0}};
}

SquareConfig square_for(std::uint64_t budget) {
  return SquareConfig::for_budget(budget);
}

}  // namespace

TEST_CASE("NES estimate aligns with the analytic gradient") {
  const auto w = gaussian_weights(64, 11);
  auto model = LinearOracle::two_class(w);
  ImageTensor x(1, 8, 8, 0.5f);
  NesConfig cfg{200, 1e-3, 0.01, true};
  std::vector<double> mean(64, 0.0);
  double per_seed = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    QueryLedger ledger(200);
    Objective obj(model, ledger, 0, LossKind::Margin);
    RngStream rng(seed);
    const auto g = nes_gradient_estimate(obj, x, cfg, rng);
    CHECK(ledger.used() == 200);
    per_seed += cosine(g, w) / 20;
    for (std::size_t i = 0; i < 64; ++i) mean[i] += g[i] / 20;
  }
  // 100 antithetic directions in 64 dimensions: E[cos] ~ 1/sqrt(1 + 65/100).
  CHECK(per_seed > 0.7);
  CHECK(cosine(mean, w) >= 0.9);
}

TEST_CASE("NES without antithetic pairs uses n queries") {
  auto model = LinearOracle::two_class(gaussian_weights(16, 3));
  ImageTensor x(1, 4, 4, 0.5f);
  QueryLedger ledger(100);
  Objective obj(model, ledger, 0, LossKind::Margin);
  RngStream rng(1);
  nes_gradient_estimate(obj, x, NesConfig{7, 1e-3, 0.01, false}, rng);
  CHECK(ledger.used() == 7);
}

TEST_CASE("ZO-signSGD estimate recovers the signs of large coordinates") {
  const auto w = gaussian_weights(64, 12);
  auto model = LinearOracle::two_class(w);
  ImageTensor x(1, 8, 8, 0.5f);
  ZoSignConfig cfg{50, 1e-3, 0.005, false};
  std::vector<double> magnitudes(64);
  for (std::size_t i = 0; i < 64; ++i) magnitudes[i] = std::abs(w[i]);
  std::nth_element(magnitudes.begin(), magnitudes.begin() + 32, magnitudes.end());
  const double median = magnitudes[32];

  std::vector<double> mean(64, 0.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    QueryLedger ledger(100);
    Objective obj(model, ledger, 0, LossKind::Margin);
    RngStream rng(seed);
    const auto g = zo_sign_gradient_estimate(obj, x, cfg, rng);
    CHECK(ledger.used() == 100);
    for (std::size_t i = 0; i < 64; ++i) mean[i] += g[i] / 20;
  }
  int agree = 0, total = 0;
  for (std::size_t i = 0; i < 64; ++i) {
    if (std::abs(w[i]) < median) continue;
    ++total;
    agree += sign_of(mean[i]) == sign_of(w[i]);
  }
  CHECK(agree >= 0.95 * total);
}

TEST_CASE("ZO-signSGD single direction in one dimension is a central difference") {
  class Square final : public Oracle {
   public:
    Logits logits(const ImageTensor& x) override {
      const double v = x[0];
      return {v * v, 0.0};
    }
    std::size_t num_classes() const override { return 2; }
  } square;
  ImageTensor x(1, 1, 1, 0.3f);
  const double mu = 0.01;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    QueryLedger ledger(2);
    Objective obj(square, ledger, 0, LossKind::Margin);
    RngStream rng(seed);
    const auto g = zo_sign_gradient_estimate(obj, x, ZoSignConfig{1, mu, 0.1, false}, rng);
    const double xp = static_cast<float>(x[0] + mu), xm = static_cast<float>(x[0] - mu);
    CHECK(g[0] == doctest::Approx((xp * xp - xm * xm) / (2 * mu)).epsilon(1e-9));
  }
}

TEST_CASE("ZO-signSGD forward difference uses b + 1 queries") {
  auto model = LinearOracle::two_class(gaussian_weights(16, 3));
  ImageTensor x(1, 4, 4, 0.5f);
  QueryLedger ledger(100);
  Objective obj(model, ledger, 0, LossKind::Margin);
  RngStream rng(1);
  zo_sign_gradient_estimate(obj, x, ZoSignConfig{5, 1e-3, 0.01, true}, rng);
  CHECK(ledger.used() == 6);
}

TEST_CASE("Bandits latent estimate points along the gradient") {
  // Weights constant over each 2x2 cell of an 8x8 image, prior size 4.
  const auto cell = gaussian_weights(16, 13);
  std::vector<double> w(64);
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t xx = 0; xx < 8; ++xx) w[y * 8 + xx] = cell[(y / 2) * 4 + xx / 2];
  auto model = LinearOracle::two_class(w);
  ImageTensor x(1, 8, 8, 0.5f);
  BanditsConfig cfg;
  cfg.prior_size = 4;
  int positive = 0, positive_warm = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    QueryLedger ledger(4);
    Objective obj(model, ledger, 0, LossKind::Margin);
    RngStream rng(seed);
    std::vector<double> latent(16, 0.0);
    const auto delta = bandits_grad_est(obj, x, latent, cfg, rng);
    CHECK(ledger.used() == 2);
    const auto up = upsample_latent(delta, 4, x);
    double dot = 0.0;
    for (std::size_t i = 0; i < 64; ++i) dot += up[i] * w[i];
    positive += dot > 0.0;

    // Same check from a non-zero prior.
    rng.fill_normal(latent);
    const auto warm = bandits_grad_est(obj, x, latent, cfg, rng);
    const auto up_warm = upsample_latent(warm, 4, x);
    dot = 0.0;
    for (std::size_t i = 0; i < 64; ++i) dot += up_warm[i] * w[i];
    positive_warm += dot > 0.0;
  }
  CHECK(positive >= 90);
  CHECK(positive_warm >= 90);
}

TEST_CASE("Bandits at full prior resolution equals the pixel-space two-point estimate") {
  const auto w = gaussian_weights(2 * 4 * 4, 14);
  auto model = LinearOracle::two_class(w);
  RngStream img_rng(5);
  const ImageTensor x = random_image(img_rng, 2, 4, 4, 0.2, 0.8);
  BanditsConfig cfg;
  cfg.prior_size = 4;
  cfg.exploration = 0.5;
  std::vector<double> latent(32);
  img_rng.fill_normal(latent);

  QueryLedger ledger(2);
  Objective obj(model, ledger, 0, LossKind::Margin);
  RngStream rng(9);
  const auto got = bandits_grad_est(obj, x, latent, cfg, rng);

  // Independent reconstruction: same Gaussian draw, direct normalisation.
  RngStream replay(9);
  std::vector<double> u(32);
  replay.fill_normal(u);
  auto loss_at = [&](double s) {
    std::vector<double> v(32);
    double peak = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      v[i] = latent[i] + s * cfg.exploration * u[i];
      peak = std::max(peak, std::abs(v[i]));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      const float dir = static_cast<float>(v[i] / peak);
      const float probe = static_cast<float>(x[i] + cfg.fd_eta * dir);
      acc += w[i] * probe;
    }
    return acc;
  };
  const double slope = (loss_at(1) - loss_at(-1)) / (2 * cfg.exploration * cfg.fd_eta);
  for (std::size_t i = 0; i < 32; ++i)
    CHECK(got[i] == doctest::Approx(slope * u[i]).epsilon(1e-12));
}

TEST_CASE("upsample_latent") {
  ImageTensor like(1, 4, 4);
  const std::vector<double> latent{1.0, -2.0, 0.5, 0.0};
  const auto up = upsample_latent(latent, 2, like);
  CHECK(up.at(0, 0, 0) == 0.5f);
  CHECK(up.at(0, 1, 1) == 0.5f);
  CHECK(up.at(0, 0, 2) == -1.0f);
  CHECK(up.at(0, 3, 0) == 0.25f);
  CHECK(up.at(0, 3, 3) == 0.0f);
  const auto zero = upsample_latent(std::vector<double>(4, 0.0), 2, like);
  CHECK(zero == ImageTensor(1, 4, 4));
  CHECK_THROWS_AS(upsample_latent(latent, 3, like), ConfigError);
}

TEST_CASE("estimators are exactly zero on a constant loss") {
  ConstantOracle model({0.7, 0.2, 0.1});
  RngStream img_rng(4);
  const ImageTensor x = random_image(img_rng, 3, 6, 6);
  QueryLedger ledger(1000);
  Objective obj(model, ledger, 0, LossKind::Margin);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(seed);
    CHECK(all_zero(nes_gradient_estimate(obj, x, NesConfig{}, rng)));
    CHECK(all_zero(zo_sign_gradient_estimate(obj, x, ZoSignConfig{}, rng)));
    BanditsConfig bandits;
    std::vector<double> latent(3 * 9);
    rng.fill_normal(latent);
    CHECK(all_zero(bandits_grad_est(obj, x, latent, bandits, rng)));
  }
}

TEST_CASE("estimators propagate BudgetExhausted") {
  auto model = LinearOracle::two_class(gaussian_weights(16, 3));
  ImageTensor x(1, 4, 4, 0.5f);
  RngStream rng(1);
  {
    QueryLedger ledger(49);
    Objective obj(model, ledger, 0, LossKind::Margin);
    CHECK_THROWS_AS(nes_gradient_estimate(obj, x, NesConfig{}, rng), BudgetExhausted);
    CHECK(ledger.used() == 49);
  }
  {
    QueryLedger ledger(39);
    Objective obj(model, ledger, 0, LossKind::Margin);
    CHECK_THROWS_AS(zo_sign_gradient_estimate(obj, x, ZoSignConfig{}, rng),
                    BudgetExhausted);
  }
  {
    QueryLedger ledger(1);
    Objective obj(model, ledger, 0, LossKind::Margin);
    std::vector<double> latent(4, 0.0);
    CHECK_THROWS_AS(bandits_grad_est(obj, x, latent, BanditsConfig{}, rng),
                    BudgetExhausted);
  }
}

TEST_CASE("sign step example") {
  ImageTensor x(1, 1, 3, 0.5f);
  const std::vector<double> g{0.3, -0.2, 0.0};
  for (std::size_t i = 0; i < 3; ++i)
    x[i] = static_cast<float>(x[i] - 0.01 * sign_of(g[i]));
  CHECK(x[0] == doctest::Approx(0.49));
  CHECK(x[1] == doctest::Approx(0.51));
  CHECK(x[2] == 0.5f);
}

TEST_CASE("square_init") {
  RngStream rng(3);
  SUBCASE("single pixel") {
    ImageTensor x(1, 1, 1, 0.5f);
    const auto out = square_init(x, 0.05, rng);
    CHECK(std::abs(out[0] - 0.5) == doctest::Approx(0.05).epsilon(1e-6));
  }
  SUBCASE("mid-grey image gets column stripes") {
    ImageTensor x(3, 6, 5, 0.5f);
    const auto out = square_init(x, 0.05, rng);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t col = 0; col < 5; ++col) {
        const float top = out.at(c, 0, col);
        CHECK((std::abs(top - 0.45f) < 1e-6f || std::abs(top - 0.55f) < 1e-6f));
        for (std::size_t row = 0; row < 6; ++row) CHECK(out.at(c, row, col) == top);
      }
  }
  SUBCASE("black image clamps at zero") {
    ImageTensor x(2, 4, 4, 0.0f);
    const auto out = square_init(x, 0.05, rng);
    std::set<float> values(out.data().begin(), out.data().end());
    for (float v : values) CHECK((v == 0.0f || std::abs(v - 0.05f) < 1e-6f));
  }
  CHECK_THROWS_AS(square_init(ImageTensor(1, 1, 1), 0.0, rng), ConfigError);
}

TEST_CASE("square_sample_delta examples") {
  RngStream rng(8);
  RngStream img_rng(2);
  const ImageTensor x = random_image(img_rng, 3, 6, 6, 0.2, 0.8);
  const ImageTensor x_hat = square_init(x, 0.05, rng);

  SUBCASE("full-image window") {
    const auto out = square_sample_delta(0.05, 6, x_hat, x, 1, rng);
    for (std::size_t c = 0; c < 3; ++c) {
      const double s = sign_of(out.at(c, 0, 0) - x.at(c, 0, 0));
      for (std::size_t i = 0; i < 36; ++i) {
        const double diff = out[c * 36 + i] - x[c * 36 + i];
        CHECK(sign_of(diff) == s);
        CHECK(std::abs(diff) == doctest::Approx(0.05).epsilon(1e-5));
      }
    }
  }
  SUBCASE("single pixel window changes at most one position") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto out = square_sample_delta(0.05, 1, x_hat, x, 1, rng);
      std::set<std::pair<std::size_t, std::size_t>> positions;
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t y = 0; y < 6; ++y)
          for (std::size_t xx = 0; xx < 6; ++xx)
            if (out.at(c, y, xx) != x_hat.at(c, y, xx)) positions.insert({y, xx});
      CHECK(positions.size() <= 1);
    }
  }
  SUBCASE("window larger than the image") {
    CHECK_THROWS_AS(square_sample_delta(0.05, 7, x_hat, x, 1, rng), ConfigError);
    CHECK_THROWS_AS(square_sample_delta(0.05, 0, x_hat, x, 1, rng), ConfigError);
    CHECK_THROWS_AS(square_sample_delta(0.05, 2, x_hat, x, 0, rng), ConfigError);
  }
}

TEST_CASE("square_sample_delta stays feasible over 10^4 draws") {
  RngStream rng(21);
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t side = 1 + rng.uniform_int(8);
    const double eps = 0.01 + 0.2 * rng.uniform();
    const ImageTensor x = random_image(rng, 1 + rng.uniform_int(3), side, side);
    const ImageTensor x_hat = square_init(x, eps, rng);
    const auto h = static_cast<std::uint32_t>(1 + rng.uniform_int(side));
    const auto k = static_cast<std::uint32_t>(1 + rng.uniform_int(4));
    const auto out = square_sample_delta(eps, h, x_hat, x, k, rng);
    bool ok = linf_distance(out, x) <= eps + 1e-6;
    for (float v : out.data()) ok = ok && v >= 0.0f && v <= 1.0f;
    violations += !ok;
  }
  CHECK(violations == 0);
}

TEST_CASE("clean misclassification costs one query") {
  auto model = LinearOracle::two_class(gaussian_weights(64, 1), -1000.0);
  const LabeledImage item{ImageTensor(1, 8, 8, 0.5f), 0};
  RngStream rng(1);
  AttackConfig cfg;
  cfg.square = square_for(100);
  for (auto kind : {AttackKind::Nes, AttackKind::Bandits, AttackKind::ZoSignSgd,
                    AttackKind::Square}) {
    cfg.kind = kind;
    const auto r = run_attack(model, item, 0.05, 100, cfg, rng);
    CHECK(r.success);
    CHECK(r.clean_misclassified);
    CHECK(r.queries == 1);
    CHECK(r.iterations == 0);
  }
}

TEST_CASE("budget of one fails after the clean query") {
  auto easy = easy_case(0.05, 0.5, 2);
  RngStream rng(1);
  AttackConfig cfg;
  cfg.square = square_for(1);
  for (auto kind : {AttackKind::Nes, AttackKind::Bandits, AttackKind::ZoSignSgd,
                    AttackKind::Square}) {
    cfg.kind = kind;
    const auto r = run_attack(easy.model, easy.item, 0.05, 1, cfg, rng);
    CHECK_FALSE(r.success);
    CHECK(r.queries == 1);
  }
}

TEST_CASE("gradient attacks solve an easy linear case within 2000 queries") {
  auto easy = easy_case(0.05, 0.5, 5);
  AttackConfig cfg;
  for (auto kind : {AttackKind::Nes, AttackKind::Bandits, AttackKind::ZoSignSgd}) {
    cfg.kind = kind;
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RngStream rng(seed);
      const auto r = run_attack(easy.model, easy.item, 0.05, 2000, cfg, rng);
      wins += r.success;
      CHECK(r.queries <= 2000);
    }
    INFO(to_string(kind));
    CHECK(wins >= 18);
  }
}

TEST_CASE("frozen Bandits prior never moves the image") {
  auto easy = easy_case(0.05, 0.5, 5);
  BanditsConfig cfg;
  cfg.prior_step = 0.0;
  RngStream rng(1);
  const auto r = bandits_attack(easy.model, easy.item, 0.05, 200, cfg, rng);
  CHECK_FALSE(r.success);
  CHECK(r.final_image == easy.item.image);
  CHECK(r.queries == 200);
}

TEST_CASE("attacks keep every query feasible and count it exactly") {
  const auto fx = attackable_linear_fixture(6, 0.04);
  AttackConfig cfg;
  for (auto kind : {AttackKind::Nes, AttackKind::Bandits, AttackKind::ZoSignSgd,
                    AttackKind::Square}) {
    cfg.kind = kind;
    for (std::uint64_t budget : {1, 2, 3, 57, 400}) {
      cfg.square = square_for(budget);
      for (const auto& item : fx.items) {
        auto model = fx.model;
        CheckingOracle checking(model, item.image, 0.02);
        RngStream rng(budget);
        const auto r = run_attack(checking, item, 0.02, budget, cfg, rng);
        CHECK(checking.violations() == 0);
        CHECK(checking.calls() == r.queries);
        CHECK(r.queries <= budget);
        CHECK(linf_distance(r.final_image, item.image) <= 0.02 + 1e-6);
      }
    }
  }
}

TEST_CASE("attacks are deterministic for a fixed seed") {
  const auto fx = attackable_linear_fixture(3, 0.04);
  AttackConfig cfg;
  for (auto kind : {AttackKind::Nes, AttackKind::Bandits, AttackKind::ZoSignSgd,
                    AttackKind::Square}) {
    cfg.kind = kind;
    cfg.square = square_for(500);
    for (const auto& item : fx.items) {
      auto model = fx.model;
      RngStream a(77), b(77);
      const auto ra = run_attack(model, item, 0.03, 500, cfg, a);
      const auto rb = run_attack(model, item, 0.03, 500, cfg, b);
      CHECK(ra.success == rb.success);
      CHECK(ra.queries == rb.queries);
      CHECK(ra.iterations == rb.iterations);
      CHECK(ra.final_loss == rb.final_loss);
      CHECK(ra.final_image == rb.final_image);
      CHECK(ra.accepted_losses == rb.accepted_losses);
    }
  }
}

TEST_CASE("Square Attack accepted losses are monotone") {
  const auto fx = attackable_linear_fixture(10, 0.04);
  for (bool strict : {false, true}) {
    SquareConfig cfg = square_for(2000);
    cfg.strict_improve = strict;
    for (std::uint64_t seed = 0; seed < 3; ++seed)
      for (const auto& item : fx.items) {
        auto model = fx.model;
        RngStream rng(seed);
        const auto r = square_attack_linf(model, item, 0.02, 2000, cfg, rng);
        REQUIRE_FALSE(r.accepted_losses.empty());
        for (std::size_t i = 1; i < r.accepted_losses.size(); ++i) {
          if (strict)
            CHECK(r.accepted_losses[i] < r.accepted_losses[i - 1]);
          else
            CHECK(r.accepted_losses[i] <= r.accepted_losses[i - 1]);
        }
        CHECK(r.final_loss == r.accepted_losses.back());
      }
  }
}

TEST_CASE("Square Attack iteration count respects the schedule length") {
  auto easy = easy_case(0.05, 5.0, 5);  // out of reach
  const auto cfg = square_for(50);
  RngStream rng(1);
  const auto r = square_attack_linf(easy.model, easy.item, 0.05, 50, cfg, rng);
  CHECK_FALSE(r.success);
  CHECK(r.queries == 50);
  CHECK(r.iterations == 48);  // clean check + init + 48 candidates
}

TEST_CASE("positive logit scaling preserves outcomes and estimate signs") {
  const auto fx = attackable_linear_fixture(5, 0.04);
  auto scaled_weights = fx.model.weights();
  for (auto& row : scaled_weights)
    for (double& v : row) v *= 3.5;
  auto scaled_bias = fx.model.bias();
  for (double& v : scaled_bias) v *= 3.5;
  LinearOracle scaled(scaled_weights, scaled_bias);
  auto base = fx.model;

  const auto cfg = square_for(1000);
  for (const auto& item : fx.items) {
    RngStream a(5), b(5);
    const auto ra = square_attack_linf(base, item, 0.03, 1000, cfg, a);
    const auto rb = square_attack_linf(scaled, item, 0.03, 1000, cfg, b);
    CHECK(ra.success == rb.success);
  }

  const auto& item = fx.items.front();
  QueryLedger la(1000), lb(1000);
  Objective oa(base, la, item.label, LossKind::Margin);
  Objective ob(scaled, lb, item.label, LossKind::Margin);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream a(seed), b(seed);
    const auto ga = nes_gradient_estimate(oa, item.image, NesConfig{}, a);
    const auto gb = nes_gradient_estimate(ob, item.image, NesConfig{}, b);
    std::size_t same = 0;
    for (std::size_t i = 0; i < ga.size(); ++i) same += sign_of(ga[i]) == sign_of(gb[i]);
    CHECK(same >= ga.size() * 99 / 100);
  }
}

TEST_CASE("cross-entropy loss drives attacks too") {
  const auto fx = attackable_linear_fixture(5, 0.03);
  AttackConfig cfg;
  cfg.loss = LossKind::CrossEntropy;
  cfg.square = square_for(3000);
  int wins = 0;
  for (const auto& item : fx.items) {
    auto model = fx.model;
    RngStream rng(3);
    wins += run_attack(model, item, 0.05, 3000, cfg, rng).success;
  }
  CHECK(wins >= 4);
}

TEST_CASE("attack configuration validation") {
  auto easy = easy_case(0.05, 0.5, 2);
  RngStream rng(1);
  CHECK_THROWS_AS(nes_attack(easy.model, easy.item, 0.0, 10, NesConfig{}, rng),
                  ConfigError);
  CHECK_THROWS_AS(nes_attack(easy.model, easy.item, 0.05, 10, NesConfig{3}, rng),
                  ConfigError);
  CHECK_THROWS_AS(
      zo_signsgd_attack(easy.model, easy.item, 0.05, 10, ZoSignConfig{0}, rng),
      ConfigError);
  SquareConfig bad = square_for(10);
  bad.k_squares = 0;
  CHECK_THROWS_AS(square_attack_linf(easy.model, easy.item, 0.05, 10, bad, rng),
                  ConfigError);
  CHECK(parse_attack_kind("zosignsgd") == AttackKind::ZoSignSgd);
  CHECK(display_name(AttackKind::Square) == "Square Attack");
  CHECK_THROWS_AS(parse_attack_kind("fgsm"), ConfigError);
}
