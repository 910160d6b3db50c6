#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bbopt {

// Iteration budget the built-in halving lists are written for.
inline constexpr std::uint64_t kBaseIterations = 10000;

// Piecewise-constant schedule for the fraction p of pixels a square covers:
// p(i) = p0 * 2^-(number of halving indices <= i).
//
// halving_indices must be positive and non-decreasing. Repeated entries each
// count as a halving (they arise from rescaling to a small budget), and
// entries at or beyond n_total are simply never reached.
struct PSchedule {
  double p0 = 0.05;
  std::vector<std::uint64_t> halving_indices;
  std::uint64_t n_total = kBaseIterations;

  void validate() const;
};

// The three halving lists compared in the schedule ablation, all written for
// 10000 iterations. L1 is the default.
const std::vector<std::uint64_t>& builtin_list_L1();
const std::vector<std::uint64_t>& builtin_list_L2();
const std::vector<std::uint64_t>& builtin_list_L3();

// "L1" | "L2" | "L3"; throws ConfigError otherwise.
const std::vector<std::uint64_t>& builtin_list(std::string_view name);

// Parses a comma-separated user list ("5,40,150"). The list must be strictly
// increasing, positive, and below kBaseIterations.
std::vector<std::uint64_t> parse_index_list(std::string_view csv);
void validate_index_list(const std::vector<std::uint64_t>& indices,
                         std::uint64_t n_total);

// Maps each index i to max(1, round_half_up(i * n / base_n)). Duplicates are
// kept.
std::vector<std::uint64_t> rescale_indices(
    const std::vector<std::uint64_t>& base, std::uint64_t base_n,
    std::uint64_t n);

// Schedule for a run of n iterations built from a list written for
// kBaseIterations.
PSchedule make_schedule(double p0, const std::vector<std::uint64_t>& base_list,
                        std::uint64_t n);

double p_at(const PSchedule& schedule, std::uint64_t i);

// Closest positive integer to sqrt(p * omega^2), half-up, clamped to
// [1, omega].
std::uint32_t square_side(double p, std::uint32_t omega);

}  // namespace bbopt
