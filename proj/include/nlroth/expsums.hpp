#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "nlroth/grid.hpp"

namespace nlroth {

/// A point of the torus R/Z, stored reduced into [0, 1).
class Frequency {
 public:
  Frequency() = default;
  explicit Frequency(long double value);
  /// num/den reduced mod 1; den > 0.
  static Frequency rational(std::int64_t num, std::int64_t den);

  long double value() const { return value_; }
  double as_double() const { return static_cast<double>(value_); }
  Frequency negated() const { return Frequency(-value_); }
  auto operator<=>(const Frequency&) const = default;

 private:
  long double value_ = 0;
};

/// Distance from a to the nearest integer.
double torus_norm(long double a);

/// e(t) = exp(2 pi i t), with t reduced mod 1 in extended precision first.
Complex e_phase(long double t);

/// sum_d mu_N(d) e(alpha d^2 + beta d). |result| <= 1.
Complex weyl_sum(Frequency alpha, Frequency beta, std::int64_t n);

/// sum_y f(y) e(alpha y).
Complex fourier_coefficient(const Fiber& f, Frequency alpha);

/// A verified witness that ||q alpha|| <= Q / S with q <= Q.
class MajorArcCertificate {
 public:
  /// Returns a certificate iff q <= Q and ||q alpha|| * S <= Q.
  static std::optional<MajorArcCertificate> verify(Frequency alpha, std::int64_t q, std::int64_t bound,
                                                   double scale);

  Frequency alpha() const { return alpha_; }
  std::int64_t q() const { return q_; }
  std::int64_t bound() const { return bound_; }
  double scale() const { return scale_; }
  /// ||q alpha|| * S.
  double achieved() const { return achieved_; }

 private:
  MajorArcCertificate() = default;
  Frequency alpha_;
  std::int64_t q_ = 1;
  std::int64_t bound_ = 1;
  double scale_ = 1;
  double achieved_ = 0;
};

/// Maximum number of continued-fraction convergents rationalize() inspects.
inline constexpr int kMaxConvergents = 64;

/// Smallest q <= Q with ||q alpha|| <= Q / S, found among the continued
/// fraction convergents of alpha (the minimal such q is always one).
/// Absent when no q qualifies within kMaxConvergents convergents.
std::optional<MajorArcCertificate> rationalize(Frequency alpha, std::int64_t bound, double scale);

/// Rounding grid size 100 Q S, rounded up to an integer.
std::int64_t arc_grid_size(std::int64_t bound, double scale);

struct FrequencyCluster {
  Frequency representative;       ///< t / T
  std::int64_t grid_index = 0;    ///< t
  std::int64_t grid_size = 1;     ///< T
  std::vector<std::size_t> members;
};

/// Rounds each frequency to the nearest t/T (T = arc_grid_size(Q, S)),
/// groups equal t, and sorts by descending size then ascending t.
std::vector<FrequencyCluster> cluster_major_arcs(const std::vector<Frequency>& freqs, std::int64_t bound,
                                                 double scale);

enum class ScanDirection { kHorizontal, kVertical };

struct SpectrumEntry {
  Frequency freq;
  std::int64_t num = 0;  ///< freq == num / den exactly
  std::int64_t den = 1;
  double score = 0;
};

/// Candidate frequencies a/q + j/T for q <= Q, gcd(a, q) = 1, |j| <= 2,
/// T = arc_grid_size(Q, S); deduplicated and sorted ascending.
std::vector<SpectrumEntry> major_arc_grid(std::int64_t bound, double scale);

/// Vertical: score(alpha) = sum_x |sum_y f(x,y) e(alpha y)|.
/// Horizontal: score(beta) = sum_y |sum_x f(x,y) e(beta x)|.
/// Evaluated on major_arc_grid(Q, S); returns the `top` best entries sorted by
/// descending score, ties by ascending frequency.
std::vector<SpectrumEntry> fiber_correlation_scan(const DenseFunction& f, ScanDirection direction,
                                                  std::int64_t bound, double scale, std::size_t top = 10);

/// CSV with header "freq_num,freq_den_or_grid,score".
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumEntry>& entries);

}  // namespace nlroth
