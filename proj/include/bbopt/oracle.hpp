#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "bbopt/tensor.hpp"

namespace bbopt {

using Logits = std::vector<double>;

// Score-returning classifier. Implementations that cannot take concurrent
// calls report serial() == true; the bench harness then gates them.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual Logits logits(const ImageTensor& image) = 0;
  virtual std::size_t num_classes() const = 0;
  virtual bool serial() const { return false; }
  virtual std::string describe() const { return "oracle"; }
};

// Per-run query counter with a hard cap.
class QueryLedger {
 public:
  explicit QueryLedger(std::uint64_t budget = 10000);

  std::uint64_t used() const { return used_; }
  std::uint64_t budget() const { return budget_; }
  std::uint64_t remaining() const { return budget_ - used_; }

  // Reserves one query; throws BudgetExhausted when used == budget.
  void charge();

 private:
  std::uint64_t used_ = 0;
  std::uint64_t budget_;
};

// The only path attacks use to reach a model: one forward pass, one charge.
// The ledger is charged before the oracle is touched, so an exhausted budget
// never reaches the model.
Logits query_logits(Oracle& model, const ImageTensor& image,
                    QueryLedger& ledger);

enum class LossKind { Margin, CrossEntropy };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view text);

// scores[y] - max_{k != y} scores[k].
double margin_loss(const Logits& logits, std::size_t label);

// -log softmax(logits)[label], max-shifted.
double cross_entropy_loss(const Logits& logits, std::size_t label);

// argmax(scores) != label, ties resolved to the lowest index.
bool is_adversarial_untargeted(const Logits& logits, std::size_t label);

std::size_t argmax(const Logits& logits);

// Objective every attack minimizes: the margin itself, or the negated
// cross-entropy of the true class.
double attack_loss(LossKind kind, const Logits& logits, std::size_t label);

// Budgeted loss evaluation bound to one (model, label, loss) triple.
class Objective {
 public:
  struct Evaluation {
    double loss;
    bool adversarial;
  };

  Objective(Oracle& model, QueryLedger& ledger, std::size_t label,
            LossKind kind);

  Evaluation evaluate(const ImageTensor& image);
  double loss(const ImageTensor& image) { return evaluate(image).loss; }

  QueryLedger& ledger() { return ledger_; }
  std::size_t label() const { return label_; }

 private:
  Oracle& model_;
  QueryLedger& ledger_;
  std::size_t label_;
  LossKind kind_;
};

// Wraps a serial oracle so concurrent callers take turns.
class SerializedOracle final : public Oracle {
 public:
  explicit SerializedOracle(Oracle& inner) : inner_(inner) {}

  Logits logits(const ImageTensor& image) override;
  std::size_t num_classes() const override { return inner_.num_classes(); }
  std::string describe() const override { return inner_.describe(); }

 private:
  Oracle& inner_;
  std::mutex mutex_;
};

}  // namespace bbopt
