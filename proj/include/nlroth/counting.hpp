#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nlroth/grid.hpp"

namespace nlroth {

/// N is the difference scale; (q, M) localise the difference to q*d with
/// weight mu_M(d). M = 0 stands for M = N. Sums are normalised by the area of
/// `window`.
struct CountingParams {
  std::int64_t n = 1;
  std::int64_t q = 1;
  std::int64_t m = 0;
  GridWindow window{1, 1};

  std::int64_t scale() const { return m == 0 ? n : m; }
  bool localized() const { return q != 1 || scale() != n; }
  /// Throws DomainError unless N, q, M >= 1 and, when localised, q*M <= sqrt(N2).
  void validate() const;
};

enum class CountMethod { kNaive, kBitparallel };

struct CountProfile {
  std::vector<std::int64_t> d_values;
  std::vector<std::int64_t> counts;
};

/// sum_{x,y,d} mu_M(d) f0(x,y) f1(x+qd,y) f2(x,y+q^2 d^2) / (N1 N2), with (x,y)
/// ranging over the window. For q = 1, M = N on [N]x[N^2] this is Lambda_N.
/// Throws ContractError unless all three inputs are flagged bounded.
Complex lambda(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
               const CountingParams& p);

/// lambda(1_A, 1_A, 1_A) through exact per-difference counts.
double lambda_indicator(const SetIndicator& a, const CountingParams& p);

/// #{(x,y) in A : (x+d,y), (x,y+d^2) in A}.
std::int64_t count_for_difference(const SetIndicator& a, std::int64_t d,
                                  CountMethod method = CountMethod::kBitparallel);

/// Counts for every d in [d_lo, d_hi], ascending.
CountProfile count_profile(const SetIndicator& a, std::int64_t d_lo, std::int64_t d_hi,
                           CountMethod method = CountMethod::kBitparallel);

/// F(x,y) = sum_d mu_N(d) f0(x, y-d^2) f1(x+d, y-d^2).
DenseFunction dual_F(const DenseFunction& f0, const DenseFunction& f1, std::int64_t n);

/// G(x,y) = sum_d mu_N(d) f0(x-d, y) f2(x-d, y+d^2).
DenseFunction dual_G(const DenseFunction& f0, const DenseFunction& f2, std::int64_t n);

/// E 1_A(x,y) 1_A(x',y) 1_A(x,y') over the window, computed as
/// sum_{(x,y) in A} R(y) C(x) / (N1^2 N2^2).
double blakley_roy_lhs(const SetIndicator& a);

/// "d,count" rows under a header.
void write_profile_csv(std::ostream& out, const CountProfile& profile);

/// "re im" with 12 significant digits.
void write_lambda(std::ostream& out, Complex value);

}  // namespace nlroth
