#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bbopt/attacks.hpp"
#include "bbopt/dataset.hpp"
#include "bbopt/oracle.hpp"

namespace bbopt {

// "builtin:PATH" or "remote:HOST:PORT".
struct ModelSource {
  enum class Kind { Builtin, Remote };
  Kind kind = Kind::Builtin;
  std::string location;

  static ModelSource parse(const std::string& text);
  std::string to_string() const;
};

std::unique_ptr<Oracle> open_model(const ModelSource& source);

struct BenchConfig {
  AttackKind attack = AttackKind::Square;
  LossKind loss = LossKind::Margin;
  double eps = 0.05;
  std::uint64_t budget = 10000;
  ModelSource model;
  std::string dataset_path;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  NesConfig nes;
  BanditsConfig bandits;
  ZoSignConfig zo;
  // Square Attack: halving list written for 10000 iterations, rescaled to
  // the budget at run time.
  std::vector<std::uint64_t> p_indices = builtin_list_L1();
  double p0 = 0.05;
  std::uint32_t k_squares = 1;
  bool strict_improve = false;

  // Row label for ablation runs ("k=4", "L3"); empty for plain runs.
  std::string variant;

  void validate() const;
  AttackConfig attack_config() const;
  // Every setting that influences results, one "key=value" per line, in a
  // fixed order. Worker count is excluded.
  std::string canonical() const;
  // FNV-1a 64 of canonical(), as 16 lowercase hex digits.
  std::string fingerprint() const;
};

struct RunRecord {
  std::uint64_t image_index = 0;
  bool initial_label_correct = true;
  bool success = false;
  std::uint64_t queries = 0;
  double final_loss = 0.0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct SummaryStats {
  std::size_t n_evaluated = 0;
  std::size_t failures = 0;
  double failure_rate = 0.0;
  // Mean queries over successful runs; empty when nothing succeeded.
  std::optional<double> avg_queries;
};

struct SummaryRow {
  std::string attack;  // attack id, e.g. "square"
  std::string variant;
  std::string model;
  double eps = 0.05;
  std::uint64_t budget = 10000;
  std::uint64_t seed = 0;
  std::string config_fingerprint;
  SummaryStats stats;
};

// Records from images the model already misclassifies do not count. Throws
// ConfigError("nothing to summarize") when no record remains.
SummaryStats summarize(std::span<const RunRecord> records);
SummaryRow make_row(const BenchConfig& cfg, std::span<const RunRecord> records);

// Called once per finished image, possibly from several worker threads.
using RecordCallback = std::function<void(const RunRecord&)>;

// Attacks every dataset image not listed in `skip`. Image i uses the RNG
// stream seeded with seed ^ i, so results do not depend on the worker count.
// Output is sorted by image index. The first oracle error stops all workers
// and is rethrown after every finished record has been reported.
std::vector<RunRecord> run_attack_over_dataset(
    const BenchConfig& cfg, Oracle& oracle, const Dataset& dataset,
    const RecordCallback& on_record = {},
    const std::set<std::uint64_t>& skip = {});

struct NamedList {
  std::string name;
  std::vector<std::uint64_t> indices;
};

std::vector<SummaryRow> ablation_squares(const BenchConfig& cfg,
                                         Oracle& oracle,
                                         const Dataset& dataset,
                                         const std::vector<std::uint32_t>& k_list);

std::vector<SummaryRow> ablation_schedule(const BenchConfig& cfg,
                                          Oracle& oracle,
                                          const Dataset& dataset,
                                          const std::vector<NamedList>& lists);

enum class ReportFormat { Csv, Markdown };

ReportFormat parse_report_format(const std::string& text);

// Deterministic text rendering. Markdown puts one row per attack (or
// ablation variant) and one failure-rate and one avg-queries column per
// model; attacks appear in the order Bandits, NES, Square Attack,
// ZO-signSGD.
std::string emit_report(std::span<const SummaryRow> rows, ReportFormat format);

// JSON-lines run log: one "meta" line describing the configuration followed
// by one "record" line per finished image.
class RecordLog {
 public:
  // Opens `path` for writing. With `resume`, an existing log must carry the
  // same fingerprint; its records are kept and reported by done().
  RecordLog(const std::filesystem::path& path, const BenchConfig& cfg,
            bool resume);

  void append(const RunRecord& record);
  const std::vector<RunRecord>& previous() const { return previous_; }
  std::set<std::uint64_t> done() const;

 private:
  std::filesystem::path path_;
  std::vector<RunRecord> previous_;
  std::mutex mutex_;
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file_{nullptr, &std::fclose};
};

struct LoadedLog {
  SummaryRow meta;  // stats left empty
  std::vector<RunRecord> records;
};

LoadedLog read_record_log(const std::filesystem::path& path);

}  // namespace bbopt
