// bbopt: command-line driver for the black-box attack benchmark.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "bbopt/bench.hpp"
#include "bbopt/error.hpp"
#include "bbopt/schedule.hpp"

namespace {

using namespace bbopt;

constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;

struct CommonOptions {
  std::string attack = "square";
  std::string model;
  std::string dataset;
  std::string loss = "margin";
  std::string p_indices;
  std::string out;
  std::string format = "csv";
  bool resume = false;
  bool no_antithetic = false;
  BenchConfig cfg;
};

void add_common(CLI::App* app, CommonOptions& o) {
  auto& c = o.cfg;
  app->add_option("--attack", o.attack, "bandits | nes | square | zosignsgd")
      ->capture_default_str();
  app->add_option("--model", o.model, "builtin:PATH or remote:HOST:PORT")
      ->required();
  app->add_option("--dataset", o.dataset, "IMGB dataset file")->required();
  app->add_option("--eps", c.eps, "l-inf radius")->capture_default_str();
  app->add_option("--budget", c.budget, "queries per image")
      ->capture_default_str();
  app->add_option("--loss", o.loss, "margin | xent")->capture_default_str();
  app->add_option("--seed", c.seed)->capture_default_str();
  app->add_option("--workers", c.workers)->capture_default_str();
  app->add_option("--format", o.format, "csv | markdown")
      ->capture_default_str();

  app->add_option("--squares", c.k_squares, "squares per Square Attack step")
      ->capture_default_str();
  app->add_option("--p-indices", o.p_indices,
                  "comma-separated p-halving indices (for 10000 iterations)");
  app->add_option("--p0", c.p0, "initial square fraction")
      ->capture_default_str();
  app->add_flag("--strict-improve", c.strict_improve,
                "accept only strictly better Square Attack candidates");

  app->add_option("--nes-samples", c.nes.n_samples)->capture_default_str();
  app->add_option("--nes-sigma", c.nes.sigma)->capture_default_str();
  app->add_option("--nes-step", c.nes.step_size)->capture_default_str();
  app->add_flag("--no-antithetic", o.no_antithetic,
                "use the canonical unpaired NES estimator");

  app->add_option("--bandits-prior-size", c.bandits.prior_size,
                  "latent resolution (0: half the image side)")
      ->capture_default_str();
  app->add_option("--bandits-exploration", c.bandits.exploration)
      ->capture_default_str();
  app->add_option("--bandits-fd-eta", c.bandits.fd_eta)->capture_default_str();
  app->add_option("--bandits-prior-step", c.bandits.prior_step)
      ->capture_default_str();
  app->add_option("--bandits-image-step", c.bandits.image_step)
      ->capture_default_str();

  app->add_option("--zo-directions", c.zo.n_directions)->capture_default_str();
  app->add_option("--zo-mu", c.zo.mu)->capture_default_str();
  app->add_option("--zo-step", c.zo.step_size)->capture_default_str();
  app->add_flag("--zo-forward", c.zo.forward_difference,
                "one-sided differences");
}

BenchConfig resolve(CommonOptions& o) {
  BenchConfig cfg = o.cfg;
  cfg.attack = parse_attack_kind(o.attack);
  cfg.loss = parse_loss_kind(o.loss);
  cfg.model = ModelSource::parse(o.model);
  cfg.dataset_path = o.dataset;
  cfg.nes.antithetic = !o.no_antithetic;
  if (!o.p_indices.empty()) cfg.p_indices = parse_index_list(o.p_indices);
  cfg.validate();
  return cfg;
}

std::vector<std::uint32_t> parse_k_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (auto v : parse_index_list(text)) out.push_back(static_cast<std::uint32_t>(v));
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

int cmd_attack(CommonOptions& o, const std::string& report_path) {
  const BenchConfig cfg = resolve(o);
  const Dataset dataset = load_dataset(cfg.dataset_path);
  auto oracle = open_model(cfg.model);

  std::optional<RecordLog> log;
  std::set<std::uint64_t> skip;
  std::vector<RunRecord> records;
  if (!o.out.empty()) {
    log.emplace(o.out, cfg, o.resume);
    skip = log->done();
    records = log->previous();
    if (!skip.empty()) spdlog::info("resuming: {} images already done", skip.size());
  }
  RecordCallback sink;
  if (log) sink = [&log](const RunRecord& r) { log->append(r); };
  auto fresh = run_attack_over_dataset(cfg, *oracle, dataset, sink, skip);
  records.insert(records.end(), fresh.begin(), fresh.end());
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.image_index < b.image_index; });

  const SummaryRow row = make_row(cfg, records);
  spdlog::info("{}: failure rate {:.4f}, n={}", row.attack,
               row.stats.failure_rate, row.stats.n_evaluated);
  write_text(report_path, emit_report(std::span(&row, 1),
                                      parse_report_format(o.format)));
  return 0;
}

int cmd_ablate_squares(CommonOptions& o, const std::string& k_text,
                       const std::string& report_path) {
  BenchConfig cfg = resolve(o);
  const Dataset dataset = load_dataset(cfg.dataset_path);
  auto oracle = open_model(cfg.model);
  const auto rows = ablation_squares(cfg, *oracle, dataset, parse_k_list(k_text));
  write_text(report_path, emit_report(rows, parse_report_format(o.format)));
  return 0;
}

int cmd_ablate_schedule(CommonOptions& o, const std::string& names,
                        const std::string& report_path) {
  BenchConfig cfg = resolve(o);
  std::vector<NamedList> lists;
  std::size_t start = 0;
  while (start < names.size()) {
    const std::size_t comma = std::min(names.find(',', start), names.size());
    const std::string name = names.substr(start, comma - start);
    if (!name.empty()) lists.push_back({name, builtin_list(name)});
    start = comma + 1;
  }
  if (!o.p_indices.empty()) lists.push_back({"custom", cfg.p_indices});
  cfg.p_indices = builtin_list_L1();
  const Dataset dataset = load_dataset(cfg.dataset_path);
  auto oracle = open_model(cfg.model);
  const auto rows = ablation_schedule(cfg, *oracle, dataset, lists);
  write_text(report_path, emit_report(rows, parse_report_format(o.format)));
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& format,
               const std::string& out) {
  std::vector<SummaryRow> rows;
  for (const auto& path : inputs) {
    auto log = read_record_log(path);
    log.meta.stats = summarize(log.records);
    rows.push_back(std::move(log.meta));
  }
  write_text(out, emit_report(rows, parse_report_format(format)));
  return 0;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("bbopt");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("BBOPT_LOG"))
    spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Query-budgeted black-box adversarial attack benchmark"};
  app.require_subcommand(1);

  CommonOptions attack_opts;
  std::string attack_report;
  auto* attack = app.add_subcommand("attack", "attack every image of a dataset");
  add_common(attack, attack_opts);
  attack->add_option("--out", attack_opts.out, "JSON-lines record log");
  attack->add_flag("--resume", attack_opts.resume,
                   "continue an interrupted run from --out");
  attack->add_option("--report", attack_report, "write the summary here");

  CommonOptions squares_opts;
  std::string k_list = "1,2,4,8,16";
  std::string squares_report;
  auto* squares = app.add_subcommand("ablate-squares",
                                     "Square Attack with several squares per step");
  add_common(squares, squares_opts);
  squares->add_option("--k", k_list, "comma-separated square counts")
      ->capture_default_str();
  squares->add_option("--out", squares_report, "write the report here");

  CommonOptions schedule_opts;
  std::string list_names = "L1,L2,L3";
  std::string schedule_report;
  auto* schedule = app.add_subcommand("ablate-schedule",
                                      "Square Attack with several p schedules");
  add_common(schedule, schedule_opts);
  schedule->add_option("--lists", list_names, "built-in lists L1, L2, L3")
      ->capture_default_str();
  schedule->add_option("--out", schedule_report, "write the report here");

  std::vector<std::string> report_inputs;
  std::string report_format = "csv";
  std::string report_out;
  auto* report = app.add_subcommand("report", "summarize record logs");
  report->add_option("--in", report_inputs, "record log(s)")->required();
  report->add_option("--format", report_format, "csv | markdown")
      ->capture_default_str();
  report->add_option("--out", report_out, "write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*attack) return cmd_attack(attack_opts, attack_report);
    if (*squares) return cmd_ablate_squares(squares_opts, k_list, squares_report);
    if (*schedule)
      return cmd_ablate_schedule(schedule_opts, list_names, schedule_report);
    if (*report) return cmd_report(report_inputs, report_format, report_out);
  } catch (const OracleUnavailable& e) {
    spdlog::error("oracle failure: {}", e.what());
    return kExitOracle;
  } catch (const ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const LoadError& e) {
    spdlog::error("load error: {}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
