#pragma once

#include "bbopt/attacks.hpp"
#include "bbopt/error.hpp"

namespace bbopt::detail {

// Shared bookkeeping for one attack run: owns the ledger, performs the
// counted clean-image check, and converts budget exhaustion into a failed
// result.
class AttackRun {
 public:
  AttackRun(Oracle& oracle, const LabeledImage& item, double eps,
            std::uint64_t budget, LossKind loss)
      : item_(item), eps_(eps), ledger_(budget),
        objective_(oracle, ledger_, item.label, loss) {
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    result_.final_image = item.image;
  }

  const ImageTensor& original() const { return item_.image; }
  double eps() const { return eps_; }
  Objective& objective() { return objective_; }
  FeasibleSet feasible() const { return {&item_.image, eps_}; }
  AttackResult& result() { return result_; }

  // Evaluates `image`, records it as the current iterate, and reports
  // whether it fools the model.
  bool record_iterate(const ImageTensor& image) {
    const auto e = objective_.evaluate(image);
    result_.final_image = image;
    result_.final_loss = e.loss;
    if (e.adversarial) result_.success = true;
    return e.adversarial;
  }

  // Runs `body` after the clean check; `body` returns when it succeeded or
  // gave up. BudgetExhausted anywhere ends the run as a failure.
  template <class Body>
  AttackResult run(Body&& body) {
    try {
      if (record_iterate(item_.image)) {
        result_.clean_misclassified = true;
      } else {
        body();
      }
    } catch (const BudgetExhausted&) {
      result_.success = false;
    }
    result_.queries = ledger_.used();
    return std::move(result_);
  }

 private:
  const LabeledImage& item_;
  double eps_;
  QueryLedger ledger_;
  Objective objective_;
  AttackResult result_;
};

// x <- project(x - step * sign(direction)).
inline void signed_step(ImageTensor& x, std::span<const double> direction,
                        double step, const FeasibleSet& feasible) {
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = static_cast<float>(x[i] - step * sign_of(direction[i]));
  feasible.project(x);
}

}  // namespace bbopt::detail
