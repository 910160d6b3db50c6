#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>

#include "bbopt/bench.hpp"
#include "bbopt/error.hpp"

namespace bbopt {

namespace {

constexpr std::string_view kMissing = "—";

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string format_queries(const std::optional<double>& avg) {
  return avg ? fmt::format("{:.2f}", *avg) : std::string(kMissing);
}

std::string format_percent(double rate) {
  return fmt::format("{:.1f}%", rate * 100.0);
}

// Sort key placing plain attack rows in the canonical attack order.
int attack_rank(const std::string& id) {
  try {
    return static_cast<int>(parse_attack_kind(id));
  } catch (const ConfigError&) {
    return 100;
  }
}

std::string emit_csv(std::span<const SummaryRow> rows) {
  std::string out =
      "attack,model,eps,budget,n_evaluated,failure_rate,avg_queries,seed,"
      "config_fingerprint\n";
  for (const auto& row : rows) {
    const std::string attack =
        row.variant.empty() ? row.attack : row.attack + "[" + row.variant + "]";
    out += fmt::format("{},{},{},{},{},{:.6f},{},{},{}\n", csv_field(attack),
                       csv_field(row.model), row.eps, row.budget,
                       row.stats.n_evaluated, row.stats.failure_rate,
                       format_queries(row.stats.avg_queries), row.seed,
                       row.config_fingerprint);
  }
  return out;
}

std::string emit_markdown(std::span<const SummaryRow> rows) {
  std::vector<std::string> models;
  for (const auto& row : rows)
    if (std::find(models.begin(), models.end(), row.model) == models.end())
      models.push_back(row.model);

  const bool plain = std::all_of(rows.begin(), rows.end(),
                                 [](const auto& r) { return r.variant.empty(); });
  const bool square_counts =
      !plain && std::all_of(rows.begin(), rows.end(), [](const auto& r) {
        return r.variant.starts_with("k=");
      });

  auto label_of = [&](const SummaryRow& row) -> std::string {
    if (plain) {
      try {
        return std::string(display_name(parse_attack_kind(row.attack)));
      } catch (const ConfigError&) {
        return row.attack;
      }
    }
    return square_counts ? row.variant.substr(2) : row.variant;
  };

  // Row labels in display order, each mapping model -> stats.
  std::vector<std::pair<std::string, int>> order;
  std::map<std::string, std::map<std::string, const SummaryRow*>> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string label = label_of(rows[i]);
    if (!cells.contains(label))
      order.emplace_back(label, plain ? attack_rank(rows[i].attack)
                                      : static_cast<int>(order.size()));
    cells[label][rows[i].model] = &rows[i];
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });

  const std::string head =
      plain ? "Attack" : (square_counts ? "Square Num." : "Index List");
  std::string out = "| " + head;
  for (const auto& m : models) out += " | Failure Rate (" + m + ")";
  for (const auto& m : models) out += " | Avg. Queries (" + m + ")";
  out += " |\n|---";
  for (std::size_t i = 0; i < 2 * models.size(); ++i) out += "|---:";
  out += "|\n";

  for (const auto& [label, rank] : order) {
    const auto& row_cells = cells[label];
    out += "| " + label;
    for (const auto& m : models) {
      auto it = row_cells.find(m);
      out += " | " + (it == row_cells.end()
                          ? std::string(kMissing)
                          : format_percent(it->second->stats.failure_rate));
    }
    for (const auto& m : models) {
      auto it = row_cells.find(m);
      out += " | " + (it == row_cells.end()
                          ? std::string(kMissing)
                          : format_queries(it->second->stats.avg_queries));
    }
    out += " |\n";
  }
  out += "\navg_basis=successes\n";
  return out;
}

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "markdown" || text == "md") return ReportFormat::Markdown;
  throw ConfigError("unknown report format '" + text + "'");
}

std::string emit_report(std::span<const SummaryRow> rows, ReportFormat format) {
  if (rows.empty()) throw ConfigError("no rows to report");
  return format == ReportFormat::Csv ? emit_csv(rows) : emit_markdown(rows);
}

// --- JSON-lines run log ----------------------------------------------------

using nlohmann::json;

namespace {

json record_to_json(const RunRecord& r) {
  return {{"type", "record"},
          {"image_index", r.image_index},
          {"initial_label_correct", r.initial_label_correct},
          {"success", r.success},
          {"queries", r.queries},
          {"final_loss", r.final_loss}};
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.image_index = j.at("image_index").get<std::uint64_t>();
  r.initial_label_correct = j.at("initial_label_correct").get<bool>();
  r.success = j.at("success").get<bool>();
  r.queries = j.at("queries").get<std::uint64_t>();
  r.final_loss = j.at("final_loss").get<double>();
  return r;
}

json meta_to_json(const BenchConfig& cfg) {
  return {{"type", "meta"},
          {"attack", std::string(to_string(cfg.attack))},
          {"variant", cfg.variant},
          {"model", cfg.model.to_string()},
          {"eps", cfg.eps},
          {"budget", cfg.budget},
          {"loss", std::string(to_string(cfg.loss))},
          {"seed", cfg.seed},
          {"avg_basis", "successes"},
          {"fingerprint", cfg.fingerprint()},
          {"config", cfg.canonical()}};
}

struct ParsedLog {
  json meta;
  std::vector<RunRecord> records;
};

ParsedLog parse_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  ParsedLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "meta") {
        log.meta = std::move(j);
      } else if (type == "record") {
        log.records.push_back(record_from_json(j));
      }
    } catch (const json::exception& e) {
      // A torn final line from an interrupted run is dropped.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw LoadError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  if (log.meta.is_null()) throw LoadError(path.string() + ": missing meta line");
  return log;
}

}  // namespace

RecordLog::RecordLog(const std::filesystem::path& path, const BenchConfig& cfg,
                     bool resume)
    : path_(path) {
  if (resume && std::filesystem::exists(path)) {
    auto log = parse_log(path);
    if (log.meta.at("fingerprint").get<std::string>() != cfg.fingerprint())
      throw ConfigError("cannot resume " + path.string() +
                        ": configuration fingerprint differs");
    previous_ = std::move(log.records);
    // Rewrite without any torn trailing line, then append.
    file_.reset(std::fopen(path.string().c_str(), "w"));
    if (!file_) throw Error("cannot write " + path.string());
    std::fputs((meta_to_json(cfg).dump() + "\n").c_str(), file_.get());
    for (const auto& r : previous_)
      std::fputs((record_to_json(r).dump() + "\n").c_str(), file_.get());
  } else {
    file_.reset(std::fopen(path.string().c_str(), "w"));
    if (!file_) throw Error("cannot write " + path.string());
    std::fputs((meta_to_json(cfg).dump() + "\n").c_str(), file_.get());
  }
  std::fflush(file_.get());
}

void RecordLog::append(const RunRecord& record) {
  std::lock_guard lock(mutex_);
  std::fputs((record_to_json(record).dump() + "\n").c_str(), file_.get());
  std::fflush(file_.get());
}

std::set<std::uint64_t> RecordLog::done() const {
  std::set<std::uint64_t> out;
  for (const auto& r : previous_) out.insert(r.image_index);
  return out;
}

LoadedLog read_record_log(const std::filesystem::path& path) {
  auto log = parse_log(path);
  LoadedLog out;
  const auto& m = log.meta;
  try {
    out.meta.attack = m.at("attack").get<std::string>();
    out.meta.variant = m.value("variant", std::string());
    out.meta.model = m.at("model").get<std::string>();
    out.meta.eps = m.at("eps").get<double>();
    out.meta.budget = m.at("budget").get<std::uint64_t>();
    out.meta.seed = m.at("seed").get<std::uint64_t>();
    out.meta.config_fingerprint = m.at("fingerprint").get<std::string>();
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": bad meta line: " + e.what());
  }
  out.records = std::move(log.records);
  std::sort(out.records.begin(), out.records.end(),
            [](const auto& a, const auto& b) { return a.image_index < b.image_index; });
  return out;
}

}  // namespace bbopt
