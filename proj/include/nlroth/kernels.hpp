#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nlroth/grid.hpp"

namespace nlroth {

/// A nonnegative, symmetric, unit-mass weight on Z supported on stride * Z.
///
/// Weights are exact rationals num(k)/den with a common denominator, where k
/// indexes the offset h = stride * k for |k| <= radius. A double mirror of
/// every weight is kept for the numeric paths. Construction verifies
/// symmetry, nonnegativity and sum(num) == den in integer arithmetic.
class Kernel {
 public:
  Kernel(std::int64_t stride, double halfwidth, std::vector<std::int64_t> numerators,
         std::int64_t denominator);

  std::int64_t stride() const { return stride_; }
  double halfwidth() const { return halfwidth_; }
  /// Largest |k| with a stored numerator; the support lies in |h| <= stride * radius.
  std::int64_t radius() const { return radius_; }
  std::int64_t max_offset() const { return stride_ * radius_; }
  std::int64_t denominator() const { return den_; }

  /// Numerator at k (offset stride * k); 0 outside the table.
  std::int64_t numerator_at(std::int64_t k) const {
    return (k < -radius_ || k > radius_) ? 0 : nums_[static_cast<std::size_t>(k + radius_)];
  }
  /// Weight at integer offset h.
  double weight(std::int64_t h) const;
  /// Float weights indexed by k + radius.
  const std::vector<double>& weights() const { return mirror_; }
  /// Number of offsets with nonzero weight.
  std::int64_t support_size() const { return support_size_; }

  /// Offsets with nonzero weight, ascending.
  std::vector<std::int64_t> support() const;

  /// Re-runs the exact unit-mass and symmetry checks.
  bool exact_unit_mass() const;
  bool exact_symmetric() const;

 private:
  std::int64_t stride_;
  double halfwidth_;
  std::int64_t radius_;
  std::vector<std::int64_t> nums_;
  std::int64_t den_;
  std::vector<double> mirror_;
  std::int64_t support_size_ = 0;
};

/// mu_H(h) = (1/floor(H)) (1 - |h|/floor(H))_+ with stride 1. Throws DomainError for H < 1.
Kernel fejer(double halfwidth);

/// The kernel h -> k(h/q) on q*Z, zero elsewhere. Requires stride 1 and q >= 1.
Kernel stretch(const Kernel& k, std::int64_t q);

/// Exact convolution of two kernels' weight tables (the kernel of k1 then k2).
Kernel compose(const Kernel& k1, const Kernel& k2);

enum class ConvolveMethod { kDirect, kFft, kAuto };

/// |supp f| * |supp k| above which kAuto picks the FFT path.
inline constexpr std::int64_t kDefaultFftCrossover = std::int64_t{1} << 15;
void set_fft_crossover(std::int64_t product);
std::int64_t fft_crossover();

/// (f * k)(y) = sum_h f(y - h) k(h) on [f.lo - R, f.hi + R], R = k.max_offset().
Fiber convolve(const Fiber& f, const Kernel& k, ConvolveMethod method = ConvolveMethod::kAuto);

/// Linear (non-circular) convolution of two complex sequences through a
/// zero-padded FFT. Output length a.size() + b.size() - 1.
std::vector<Complex> fft_linear_convolve(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// In-place forward DFT, X_k = sum_n x_n e(-k n / L) with L = data.size().
void fft_forward(std::vector<Complex>& data);

/// "offset num/den" per nonzero weight, fractions reduced.
void print_kernel(std::ostream& out, const Kernel& k);

}  // namespace nlroth
