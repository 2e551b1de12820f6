#include "nlroth/gowers.hpp"

#include <cmath>
#include <string>

#include "nlroth/errors.hpp"
#include "nlroth/kernels.hpp"
#include "nlroth/parallel.hpp"

namespace nlroth {

namespace {

// Below this support length the quadratic autocorrelation beats the FFT.
constexpr std::int64_t kU2FftThreshold = 96;

Fiber trim(const Fiber& f) {
  const auto& v = f.values();
  std::size_t a = 0, b = v.size();
  while (a < b && v[a] == Complex{}) ++a;
  while (b > a && v[b - 1] == Complex{}) --b;
  return Fiber(f.lo() + static_cast<std::int64_t>(a),
               std::vector<Complex>(v.begin() + static_cast<std::ptrdiff_t>(a),
                                    v.begin() + static_cast<std::ptrdiff_t>(b)));
}

Complex u1_power(const Fiber& f) {
  Complex s{};
  for (const auto& v : f.values()) s += v;
  return std::norm(s);
}

// sum_h |sum_x f(x) conj f(x+h)|^2
Complex u2_power_direct(const Fiber& f) {
  const auto& v = f.values();
  const auto n = static_cast<std::int64_t>(v.size());
  double total = 0.0;
  for (std::int64_t h = -(n - 1); h <= n - 1; ++h) {
    Complex r{};
    const std::int64_t a = std::max<std::int64_t>(0, -h), b = std::min<std::int64_t>(n, n - h);
    for (std::int64_t x = a; x < b; ++x)
      r += v[static_cast<std::size_t>(x)] * std::conj(v[static_cast<std::size_t>(x + h)]);
    total += std::norm(r);
  }
  return total;
}

Complex power_rec(const Fiber& f, int s, bool top_level) {
  if (f.empty()) return {};
  if (s == 1) return u1_power(f);
  if (s == 2) {
    if (f.size() > kU2FftThreshold) return gowers_u2_power_fft(f);
    return u2_power_direct(f);
  }
  const std::int64_t n = f.size();
  auto term = [&](std::int64_t i) {
    const std::int64_t h = i - (n - 1);
    return power_rec(trim(diff_fn(f, h)), s - 1, false);
  };
  std::vector<Complex> parts;
  if (top_level) {
    parts = parallel_map<Complex>(2 * n - 1, term);
  } else {
    parts.reserve(static_cast<std::size_t>(2 * n - 1));
    for (std::int64_t i = 0; i < 2 * n - 1; ++i) parts.push_back(term(i));
  }
  Complex total{};
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace

GowersOrder::GowersOrder(int s) : s_(s) {
  if (s < 1 || s > 6) throw DomainError("Gowers order must lie in [1, 6], got " + std::to_string(s));
}

Fiber diff_fn(const Fiber& f, std::int64_t h) {
  const std::int64_t lo = std::max(f.lo(), f.lo() - h);
  const std::int64_t hi = std::min(f.hi(), f.hi() - h);
  if (f.empty() || hi < lo) return Fiber(lo, {});
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t x = lo; x <= hi; ++x) out.push_back(f.at(x) * std::conj(f.at(x + h)));
  return Fiber(lo, std::move(out));
}

double gowers_u2_power_fft(const Fiber& f) {
  if (f.empty()) return 0.0;
  // |f^|^4 is a trigonometric polynomial of degree < 2L in each direction, so
  // P >= 4L points integrate it exactly.
  std::size_t p = 1;
  while (p < static_cast<std::size_t>(4 * f.size())) p <<= 1;
  std::vector<Complex> buf(p);
  std::copy(f.values().begin(), f.values().end(), buf.begin());
  fft_forward(buf);
  double s = 0.0;
  for (const auto& c : buf) {
    const double m = std::norm(c);
    s += m * m;
  }
  return s / static_cast<double>(p);
}

double gowers_power(const Fiber& f, GowersOrder s) {
  const Fiber g = trim(f);
  const Complex total = power_rec(g, s.value(), true);
  const double tol = 1e-6 * std::pow(static_cast<double>(std::max<std::int64_t>(g.size(), 1)), s.value() + 1);
  if (total.real() < -tol || std::abs(total.imag()) > tol)
    throw NumericalIntegrityError("Gowers sum is not a nonnegative real: (" + std::to_string(total.real()) + ", " +
                                  std::to_string(total.imag()) + ")");
  return std::max(total.real(), 0.0);
}

double gowers_norm(const Fiber& f, GowersOrder s, std::optional<IntInterval> window) {
  if (!window) return std::pow(gowers_power(f, s), 1.0 / static_cast<double>(1 << s.value()));
  const std::int64_t lo = std::max(f.lo(), window->lo), hi = std::min(f.hi(), window->hi);
  std::vector<Complex> v;
  for (std::int64_t y = lo; y <= hi; ++y) v.push_back(f.at(y));
  return gowers_norm(Fiber(lo, std::move(v)), s);
}

}  // namespace nlroth
