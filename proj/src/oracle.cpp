#include "bbopt/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "bbopt/error.hpp"

namespace bbopt {

QueryLedger::QueryLedger(std::uint64_t budget) : budget_(budget) {
  if (budget == 0) throw ConfigError("query budget must be at least 1");
}

void QueryLedger::charge() {
  if (used_ >= budget_) throw BudgetExhausted();
  ++used_;
}

Logits query_logits(Oracle& model, const ImageTensor& image,
                    QueryLedger& ledger) {
  ledger.charge();
  return model.logits(image);
}

std::string_view to_string(LossKind kind) {
  return kind == LossKind::Margin ? "margin" : "xent";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "margin") return LossKind::Margin;
  if (text == "xent" || text == "cross_entropy") return LossKind::CrossEntropy;
  throw ConfigError("unknown loss kind '" + std::string(text) + "'");
}

namespace {
void check_label(const Logits& logits, std::size_t label) {
  if (label >= logits.size())
    throw ConfigError("label " + std::to_string(label) + " out of range for " +
                      std::to_string(logits.size()) + " classes");
}
}  // namespace

std::size_t argmax(const Logits& logits) {
  return static_cast<std::size_t>(
      std::max_element(logits.begin(), logits.end()) - logits.begin());
}

double margin_loss(const Logits& logits, std::size_t label) {
  if (logits.size() < 2) throw ConfigError("margin loss needs K >= 2");
  check_label(logits, label);
  double best_other = -INFINITY;
  for (std::size_t k = 0; k < logits.size(); ++k)
    if (k != label) best_other = std::max(best_other, logits[k]);
  return logits[label] - best_other;
}

double cross_entropy_loss(const Logits& logits, std::size_t label) {
  check_label(logits, label);
  // log-sum-exp as shift + log1p(sum of the non-max terms), which keeps full
  // relative precision when the true class dominates.
  const std::size_t top = argmax(logits);
  const double shift = logits[top];
  double rest = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k)
    if (k != top) rest += std::exp(logits[k] - shift);
  return std::log1p(rest) - (logits[label] - shift);
}

bool is_adversarial_untargeted(const Logits& logits, std::size_t label) {
  check_label(logits, label);
  return argmax(logits) != label;
}

double attack_loss(LossKind kind, const Logits& logits, std::size_t label) {
  return kind == LossKind::Margin ? margin_loss(logits, label)
                                  : -cross_entropy_loss(logits, label);
}

Objective::Objective(Oracle& model, QueryLedger& ledger, std::size_t label,
                     LossKind kind)
    : model_(model), ledger_(ledger), label_(label), kind_(kind) {}

Objective::Evaluation Objective::evaluate(const ImageTensor& image) {
  const Logits out = query_logits(model_, image, ledger_);
  return {attack_loss(kind_, out, label_),
          is_adversarial_untargeted(out, label_)};
}

Logits SerializedOracle::logits(const ImageTensor& image) {
  std::lock_guard lock(mutex_);
  return inner_.logits(image);
}

}  // namespace bbopt
