#include "bbopt/bench.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fmt/format.h>
#include <thread>

#include "bbopt/error.hpp"
#include "bbopt/mlp.hpp"
#include "bbopt/remote.hpp"

namespace bbopt {

ModelSource ModelSource::parse(const std::string& text) {
  constexpr std::string_view builtin = "builtin:";
  constexpr std::string_view remote = "remote:";
  ModelSource src;
  if (text.starts_with(builtin)) {
    src.kind = Kind::Builtin;
    src.location = text.substr(builtin.size());
  } else if (text.starts_with(remote)) {
    src.kind = Kind::Remote;
    src.location = text.substr(remote.size());
  } else {
    throw ConfigError("model must be builtin:PATH or remote:HOST:PORT, got '" +
                      text + "'");
  }
  if (src.location.empty()) throw ConfigError("empty model location");
  return src;
}

std::string ModelSource::to_string() const {
  return (kind == Kind::Builtin ? "builtin:" : "remote:") + location;
}

std::unique_ptr<Oracle> open_model(const ModelSource& source) {
  if (source.kind == ModelSource::Kind::Builtin)
    return load_builtin_model(source.location);
  return remote_oracle(source.location);
}

void BenchConfig::validate() const {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (budget < 1) throw ConfigError("budget must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  switch (attack) {
    case AttackKind::Nes: nes.validate(); break;
    case AttackKind::Bandits: bandits.validate(); break;
    case AttackKind::ZoSignSgd: zo.validate(); break;
    case AttackKind::Square:
      validate_index_list(p_indices, kBaseIterations);
      attack_config().square.validate();
      break;
  }
}

AttackConfig BenchConfig::attack_config() const {
  AttackConfig cfg;
  cfg.kind = attack;
  cfg.loss = loss;
  cfg.nes = nes;
  cfg.bandits = bandits;
  cfg.zo = zo;
  cfg.square = SquareConfig::for_budget(budget, p_indices, p0);
  cfg.square.k_squares = k_squares;
  cfg.square.strict_improve = strict_improve;
  return cfg;
}

std::string BenchConfig::canonical() const {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{}={}\n", key, value);
  };
  line("attack", to_string(attack));
  line("loss", to_string(loss));
  line("eps", eps);
  line("budget", budget);
  line("model", model.to_string());
  line("dataset", dataset_path);
  line("seed", seed);
  line("avg_basis", "successes");
  switch (attack) {
    case AttackKind::Nes:
      line("nes.n_samples", nes.n_samples);
      line("nes.sigma", nes.sigma);
      line("nes.step_size", nes.step_size);
      line("nes.antithetic", nes.antithetic);
      break;
    case AttackKind::Bandits:
      line("bandits.prior_size", bandits.prior_size);
      line("bandits.exploration", bandits.exploration);
      line("bandits.fd_eta", bandits.fd_eta);
      line("bandits.prior_step", bandits.prior_step);
      line("bandits.image_step", bandits.image_step);
      break;
    case AttackKind::ZoSignSgd:
      line("zo.n_directions", zo.n_directions);
      line("zo.mu", zo.mu);
      line("zo.step_size", zo.step_size);
      line("zo.forward_difference", zo.forward_difference);
      break;
    case AttackKind::Square:
      line("square.p0", p0);
      line("square.p_indices", fmt::format("{}", fmt::join(p_indices, ",")));
      line("square.k_squares", k_squares);
      line("square.strict_improve", strict_improve);
      break;
  }
  return out;
}

std::string BenchConfig::fingerprint() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

SummaryStats summarize(std::span<const RunRecord> records) {
  SummaryStats stats;
  std::uint64_t success_queries = 0;
  std::size_t successes = 0;
  for (const auto& r : records) {
    if (!r.initial_label_correct) continue;
    ++stats.n_evaluated;
    if (r.success) {
      ++successes;
      success_queries += r.queries;
    } else {
      ++stats.failures;
    }
  }
  if (stats.n_evaluated == 0) throw ConfigError("nothing to summarize");
  stats.failure_rate =
      static_cast<double>(stats.failures) / static_cast<double>(stats.n_evaluated);
  if (successes > 0)
    stats.avg_queries =
        static_cast<double>(success_queries) / static_cast<double>(successes);
  return stats;
}

SummaryRow make_row(const BenchConfig& cfg,
                    std::span<const RunRecord> records) {
  SummaryRow row;
  row.attack = std::string(to_string(cfg.attack));
  row.variant = cfg.variant;
  row.model = cfg.model.to_string();
  row.eps = cfg.eps;
  row.budget = cfg.budget;
  row.seed = cfg.seed;
  row.config_fingerprint = cfg.fingerprint();
  row.stats = summarize(records);
  return row;
}

std::vector<RunRecord> run_attack_over_dataset(
    const BenchConfig& cfg, Oracle& oracle, const Dataset& dataset,
    const RecordCallback& on_record, const std::set<std::uint64_t>& skip) {
  cfg.validate();
  const AttackConfig attack = cfg.attack_config();
  if (!dataset.items.empty() && dataset.class_count != oracle.num_classes())
    throw ConfigError(fmt::format("dataset has {} classes, model has {}",
                                  dataset.class_count, oracle.num_classes()));

  std::vector<std::uint64_t> todo;
  for (std::uint64_t i = 0; i < dataset.items.size(); ++i)
    if (!skip.contains(i)) todo.push_back(i);

  std::unique_ptr<SerializedOracle> gate;
  Oracle* target = &oracle;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(cfg.workers, todo.size()));
  if (workers > 1 && oracle.serial()) {
    gate = std::make_unique<SerializedOracle>(oracle);
    target = gate.get();
  }

  std::vector<std::optional<RunRecord>> slots(todo.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      if (abort) return;
      const std::size_t slot = next++;
      if (slot >= todo.size()) return;
      const std::uint64_t index = todo[slot];
      try {
        RngStream rng(cfg.seed ^ index);
        const auto result = run_attack(*target, dataset.items[index], cfg.eps,
                                       cfg.budget, attack, rng);
        RunRecord record{index, !result.clean_misclassified, result.success,
                         result.queries, result.final_loss};
        spdlog::debug("image {}: success={} queries={}", index, record.success,
                      record.queries);
        if (on_record) on_record(record);
        slots[slot] = record;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        abort = true;
        return;
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<RunRecord> records;
  records.reserve(slots.size());
  for (auto& slot : slots) records.push_back(*slot);
  return records;
}

std::vector<SummaryRow> ablation_squares(
    const BenchConfig& cfg, Oracle& oracle, const Dataset& dataset,
    const std::vector<std::uint32_t>& k_list) {
  if (cfg.attack != AttackKind::Square)
    throw ConfigError("square-count ablation requires the square attack");
  if (k_list.empty()) throw ConfigError("empty square-count list");
  std::vector<SummaryRow> rows;
  for (std::uint32_t k : k_list) {
    if (k == 0) throw ConfigError("square count must be at least 1");
    BenchConfig run = cfg;
    run.k_squares = k;
    run.variant = fmt::format("k={}", k);
    const auto records = run_attack_over_dataset(run, oracle, dataset);
    rows.push_back(make_row(run, records));
  }
  return rows;
}

std::vector<SummaryRow> ablation_schedule(const BenchConfig& cfg,
                                          Oracle& oracle,
                                          const Dataset& dataset,
                                          const std::vector<NamedList>& lists) {
  if (cfg.attack != AttackKind::Square)
    throw ConfigError("schedule ablation requires the square attack");
  if (lists.empty()) throw ConfigError("empty schedule list set");
  for (const auto& list : lists) validate_index_list(list.indices, kBaseIterations);
  std::vector<SummaryRow> rows;
  for (const auto& list : lists) {
    BenchConfig run = cfg;
    run.p_indices = list.indices;
    run.variant = list.name;
    const auto records = run_attack_over_dataset(run, oracle, dataset);
    rows.push_back(make_row(run, records));
  }
  return rows;
}

}  // namespace bbopt
