#include "bbopt/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bbopt/error.hpp"

namespace bbopt {

void PSchedule::validate() const {
  if (!(p0 > 0.0 && p0 <= 1.0)) throw ConfigError("p0 must lie in (0, 1]");
  if (n_total == 0) throw ConfigError("schedule needs n_total >= 1");
  for (std::size_t k = 0; k < halving_indices.size(); ++k) {
    if (halving_indices[k] == 0)
      throw ConfigError("halving indices must be positive");
    if (k > 0 && halving_indices[k] < halving_indices[k - 1])
      throw ConfigError("halving indices must be non-decreasing");
  }
}

const std::vector<std::uint64_t>& builtin_list_L1() {
  static const std::vector<std::uint64_t> list{10,   50,   200,  500, 1000,
                                               2000, 4000, 6000, 8000};
  return list;
}

const std::vector<std::uint64_t>& builtin_list_L2() {
  static const std::vector<std::uint64_t> list{10,  20,   50,   100, 200,
                                               500, 1000, 3000, 6000};
  return list;
}

const std::vector<std::uint64_t>& builtin_list_L3() {
  static const std::vector<std::uint64_t> list{5,   40,   150,  400, 800,
                                               1600, 2500, 4500, 8000};
  return list;
}

const std::vector<std::uint64_t>& builtin_list(std::string_view name) {
  if (name == "L1") return builtin_list_L1();
  if (name == "L2") return builtin_list_L2();
  if (name == "L3") return builtin_list_L3();
  throw ConfigError("unknown schedule list '" + std::string(name) + "'");
}

void validate_index_list(const std::vector<std::uint64_t>& indices,
                         std::uint64_t n_total) {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] == 0 || indices[k] >= n_total)
      throw ConfigError("halving index " + std::to_string(indices[k]) +
                        " outside [1, " + std::to_string(n_total) + ")");
    if (k > 0 && indices[k] <= indices[k - 1])
      throw ConfigError("halving indices must be strictly increasing");
  }
}

std::vector<std::uint64_t> parse_index_list(std::string_view csv) {
  std::vector<std::uint64_t> out;
  if (csv.empty()) return out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', start), csv.size());
    std::string_view token = csv.substr(start, comma - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() ||
        ptr != token.data() + token.size())
      throw ConfigError("invalid index '" + std::string(token) + "' in list");
    out.push_back(value);
    start = comma + 1;
  }
  validate_index_list(out, kBaseIterations);
  return out;
}

std::vector<std::uint64_t> rescale_indices(
    const std::vector<std::uint64_t>& base, std::uint64_t base_n,
    std::uint64_t n) {
  if (base_n == 0 || n == 0)
    throw ConfigError("rescale_indices needs positive iteration counts");
  std::vector<std::uint64_t> out;
  out.reserve(base.size());
  for (std::uint64_t i : base) {
    // round(i * n / base_n) with ties upward, in exact integer arithmetic
    const auto num = static_cast<unsigned __int128>(i) * n * 2 + base_n;
    const auto scaled = static_cast<std::uint64_t>(num / (2 * base_n));
    out.push_back(std::max<std::uint64_t>(1, scaled));
  }
  return out;
}

PSchedule make_schedule(double p0, const std::vector<std::uint64_t>& base_list,
                        std::uint64_t n) {
  PSchedule s;
  s.p0 = p0;
  s.n_total = n;
  s.halving_indices = rescale_indices(base_list, kBaseIterations, n);
  s.validate();
  return s;
}

double p_at(const PSchedule& schedule, std::uint64_t i) {
  if (i >= schedule.n_total)
    throw ConfigError("iteration " + std::to_string(i) + " outside schedule");
  const auto halvings = std::upper_bound(schedule.halving_indices.begin(),
                                         schedule.halving_indices.end(), i) -
                        schedule.halving_indices.begin();
  return std::ldexp(schedule.p0, -static_cast<int>(halvings));
}

std::uint32_t square_side(double p, std::uint32_t omega) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
  if (omega == 0) throw ConfigError("image side must be positive");
  const double exact = std::sqrt(p) * omega;
  const auto h = static_cast<std::uint32_t>(std::floor(exact + 0.5));
  return std::clamp<std::uint32_t>(h, 1, omega);
}

}  // namespace bbopt
