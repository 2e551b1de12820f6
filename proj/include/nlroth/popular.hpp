#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "nlroth/energy.hpp"
#include "nlroth/grid.hpp"

namespace nlroth {

struct BestDifference {
  std::int64_t d = 1;
  std::int64_t count = 0;
};

struct PopularDifferenceReport {
  double delta = 0;
  double epsilon = 0;
  std::int64_t q = 1;
  std::int64_t m = 1;
  /// sum_{x,y,d} mu_M(d) 1_A(x,y) 1_A(x+qd,y) 1_A(x,y+q^2 d^2), unnormalised.
  double weighted_count = 0;
  /// (delta^3 - eps) N1 N2.
  double threshold = 0;
  bool pass = false;
  std::int64_t best_d = 1;
  std::int64_t best_count = 0;
  IncrementTrace trace;
};

/// Exhaustive argmax of count_for_difference over the nonzero d in `range`.
/// Ties go to the smallest |d|, then to positive d. DomainError if the range
/// holds no nonzero d.
BestDifference brute_force_best_difference(const SetIndicator& a, IntInterval range);

/// Runs the increment loop on (1_A, 1_A, 1_A) with cfg.epsilon replaced by
/// `epsilon`. After irregularity_small, `pass` compares the weighted count
/// at the final (q, M) against the threshold and best_d is searched among
/// q*d, 0 < |d| < M (falling back to the full range when that finds nothing).
/// Otherwise `pass` compares the unweighted best count over
/// 1 <= |d| <= min(N1 - 1, floor(sqrt(N2 - 1))).
/// Requires 0 < eps <= 1/2 and N1 >= sqrt(N2).
PopularDifferenceReport popular_difference_search(const SetIndicator& a, double epsilon, IncrementConfig cfg);

struct ThresholdReport {
  bool holds = false;
  std::int64_t witness_d = 1;
  std::int64_t count = 0;
  double threshold = 0;
  /// count - threshold
  double margin = 0;
};

/// Is there d != 0 with count_for_difference >= (delta^3 - eps) N^2? Square windows only.
ThresholdReport verify_2d_threshold(const SetIndicator& a, double epsilon);

/// {(x,y) in [floor(sqrt N)] x [N] : x + y in A1}.
SetIndicator lift_1d(std::span<const std::int64_t> a1, std::int64_t n);

/// |lift_1d(A1, N)| as sum_x |A1 cap [x+1, N]|.
std::int64_t lift_cardinality_by_rows(std::span<const std::int64_t> a1, std::int64_t n);
/// |lift_1d(A1, N)| as sum_{a in A1} #{x in [floor(sqrt N)] : 1 <= a - x <= N}.
std::int64_t lift_cardinality_by_elements(std::span<const std::int64_t> a1, std::int64_t n);

struct OneDimReport {
  double delta = 0;
  std::int64_t d = 1;
  /// Count on the lifted set for d.
  std::int64_t lifted_count = 0;
  /// Smallest x0 maximising the lifted row count for d.
  std::int64_t x0 = 1;
  std::int64_t row_count = 0;
  /// #{y in [N] : x0+y, x0+y+d, x0+y+d^2 in A1}
  std::int64_t count = 0;
  /// ((delta - eps)^3 - eps) N
  double threshold = 0;
  /// (delta^3 - 4 eps - eps) N, never above threshold
  double binomial_floor = 0;
  bool holds = false;
};

/// The one-dimensional verdict through lift_1d: the best d on the lifted set,
/// then the fiber x0 that carries the most of its count.
OneDimReport verify_1d_threshold(std::span<const std::int64_t> a1, std::int64_t n, double epsilon);

std::string report_to_json(const PopularDifferenceReport& r);
/// Header plus one summary row.
void write_report_csv(std::ostream& out, const PopularDifferenceReport& r);

}  // namespace nlroth
