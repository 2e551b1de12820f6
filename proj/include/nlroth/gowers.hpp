#pragma once

#include <cstdint>
#include <optional>

#include "nlroth/grid.hpp"

namespace nlroth {

/// Order s of a Gowers norm, 1 <= s <= 6.
class GowersOrder {
 public:
  explicit GowersOrder(int s);
  int value() const { return s_; }

 private:
  int s_;
};

/// x -> f(x) conj(f(x + h)) on the overlap of supp f and supp f - h.
Fiber diff_fn(const Fiber& f, std::int64_t h);

/// The unrooted counting form sum_{x, h_1..h_s} Delta_{h_1..h_s} f(x), summed
/// over Z with no normalisation. Conjugation alternates with the parity of
/// |omega|, which falls out of iterating diff_fn. Throws
/// NumericalIntegrityError if the sum is negative or non-real beyond
/// 1e-6 * L^{s+1}, where L is the support length.
double gowers_power(const Fiber& f, GowersOrder s);

/// ||f||_{U^s} = gowers_power^{1/2^s}. With a window, computes ||f 1_window||.
double gowers_norm(const Fiber& f, GowersOrder s, std::optional<IntInterval> window = std::nullopt);

/// ||f||_{U^2}^4 via a zero-padded FFT of f: (1/P) sum_k |f^(k/P)|^4.
double gowers_u2_power_fft(const Fiber& f);

}  // namespace nlroth
