#include "nlroth/counting.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "nlroth/errors.hpp"
#include "nlroth/kernels.hpp"
#include "nlroth/parallel.hpp"

namespace nlroth {

namespace {

void require_bounded(const DenseFunction& f, const char* name) {
  if (!f.bounded()) throw ContractError(std::string(name) + " must be 1-bounded");
}

// Word i of the row shifted down by s bits, so bit k holds bit k + s of the row.
std::uint64_t shifted_word(std::span<const std::uint64_t> row, std::size_t i, std::int64_t s) {
  const auto ws = static_cast<std::size_t>(s / 64);
  const auto bs = static_cast<unsigned>(s % 64);
  const std::size_t j = i + ws;
  std::uint64_t lo = j < row.size() ? row[j] >> bs : 0;
  if (bs != 0 && j + 1 < row.size()) lo |= row[j + 1] << (64 - bs);
  return lo;
}

std::int64_t count_naive(const SetIndicator& a, std::int64_t d) {
  const auto d2 = static_cast<__int128>(d) * d;
  if (d2 > a.window().n2()) return 0;
  const auto s = static_cast<std::int64_t>(d2);
  std::int64_t c = 0;
  for (const auto& [x, y] : a.points())
    if (a.contains(x + d, y) && a.contains(x, y + s)) ++c;
  return c;
}

std::int64_t count_bitparallel(const SetIndicator& a, std::int64_t d) {
  const auto& w = a.window();
  if (d <= -w.n1() || d >= w.n1()) return 0;
  const auto d2 = static_cast<__int128>(d) * d;
  if (d2 >= w.n2()) return 0;
  const auto s = static_cast<std::int64_t>(d2);
  std::int64_t c = 0;
  for (std::int64_t x = std::max<std::int64_t>(1, 1 - d); x <= std::min(w.n1(), w.n1() - d); ++x) {
    const auto r0 = a.row(x);
    const auto r1 = a.row(x + d);
    for (std::size_t i = 0; i < r0.size(); ++i) c += std::popcount(r0[i] & r1[i] & shifted_word(r0, i, s));
  }
  return c;
}

}  // namespace

void CountingParams::validate() const {
  if (n < 1) throw DomainError("counting scale N must be >= 1");
  if (q < 1) throw DomainError("stride q must be >= 1");
  if (m < 0) throw DomainError("localised scale M must be >= 1");
  if (localized()) {
    const auto qm = static_cast<__int128>(q) * scale();
    if (qm * qm > window.n2())
      throw DomainError("localisation requires q*M <= sqrt(N2), got q*M = " + std::to_string(q * scale()));
  }
}

Complex lambda(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
               const CountingParams& p) {
  require_bounded(f0, "f0");
  require_bounded(f1, "f1");
  require_bounded(f2, "f2");
  p.validate();
  const Kernel mu = fejer(static_cast<double>(p.scale()));
  const Box& b0 = f0.box();
  const std::int64_t x_lo = std::max<std::int64_t>(1, b0.x_lo), x_hi = std::min(p.window.n1(), b0.x_hi);
  const std::int64_t y_lo = std::max<std::int64_t>(1, b0.y_lo), y_hi = std::min(p.window.n2(), b0.y_hi);
  const std::int64_t r = mu.radius();
  auto term = [&](std::int64_t i) {
    const std::int64_t k = i - r;
    const std::int64_t dx = p.q * k, dy = p.q * p.q * k * k;
    Complex acc{};
    for (std::int64_t x = x_lo; x <= x_hi; ++x)
      for (std::int64_t y = y_lo; y <= y_hi; ++y) {
        const Complex a = f0.at(x, y);
        if (a == Complex{}) continue;
        acc += a * f1.at(x + dx, y) * f2.at(x, y + dy);
      }
    return acc * mu.weights()[static_cast<std::size_t>(i)];
  };
  const auto parts = parallel_map<Complex>(2 * r + 1, term);
  Complex total{};
  for (const auto& t : parts) total += t;
  return total / static_cast<double>(p.window.area());
}

double lambda_indicator(const SetIndicator& a, const CountingParams& p) {
  if (!(p.window == a.window())) throw DomainError("counting window must match the set's window");
  p.validate();
  const Kernel mu = fejer(static_cast<double>(p.scale()));
  const std::int64_t r = mu.radius();
  const auto counts = parallel_map<std::int64_t>(2 * r + 1, [&](std::int64_t i) {
    return count_for_difference(a, p.q * (i - r));
  });
  // Exact rational accumulation: sum num(k) * count(k) over a common denominator.
  __int128 num = 0;
  for (std::int64_t i = 0; i <= 2 * r; ++i) num += static_cast<__int128>(mu.numerator_at(i - r)) * counts[i];
  return static_cast<double>(static_cast<long double>(num) / mu.denominator() / a.window().area());
}

std::int64_t count_for_difference(const SetIndicator& a, std::int64_t d, CountMethod method) {
  return method == CountMethod::kNaive ? count_naive(a, d) : count_bitparallel(a, d);
}

CountProfile count_profile(const SetIndicator& a, std::int64_t d_lo, std::int64_t d_hi, CountMethod method) {
  CountProfile p;
  if (d_hi < d_lo) return p;
  const std::int64_t n = d_hi - d_lo + 1;
  p.counts = parallel_map<std::int64_t>(n, [&](std::int64_t i) { return count_for_difference(a, d_lo + i, method); });
  p.d_values.reserve(static_cast<std::size_t>(n));
  for (std::int64_t d = d_lo; d <= d_hi; ++d) p.d_values.push_back(d);
  return p;
}

DenseFunction dual_F(const DenseFunction& f0, const DenseFunction& f1, std::int64_t n) {
  require_bounded(f0, "f0");
  require_bounded(f1, "f1");
  const Kernel mu = fejer(static_cast<double>(n));
  const Box& b0 = f0.box();
  const Box& b1 = f1.box();
  const std::int64_t r = mu.radius();
  Box out{b0.x_lo, b0.x_hi, std::max(b0.y_lo, b1.y_lo), std::min(b0.y_hi, b1.y_hi) + r * r};
  if (b0.empty() || b1.empty() || out.empty()) return DenseFunction::zeros(Box{});
  const std::int64_t h = out.height();
  std::vector<Complex> values(static_cast<std::size_t>(out.width() * h));
  parallel_for(out.width(), [&](std::int64_t i) {
    const std::int64_t x = out.x_lo + i;
    Complex* col = values.data() + i * h;
    for (std::int64_t d = -r; d <= r; ++d) {
      const double w = mu.weights()[static_cast<std::size_t>(d + r)];
      for (std::int64_t j = 0; j < h; ++j) {
        const std::int64_t y = out.y_lo + j - d * d;
        col[j] += w * f0.at(x, y) * f1.at(x + d, y);
      }
    }
  });
  return DenseFunction(out, std::move(values), true);
}

DenseFunction dual_G(const DenseFunction& f0, const DenseFunction& f2, std::int64_t n) {
  require_bounded(f0, "f0");
  require_bounded(f2, "f2");
  const Kernel mu = fejer(static_cast<double>(n));
  const Box& b0 = f0.box();
  const std::int64_t r = mu.radius();
  if (b0.empty() || f2.box().empty()) return DenseFunction::zeros(Box{});
  Box out{b0.x_lo - r, b0.x_hi + r, b0.y_lo, b0.y_hi};
  const std::int64_t h = out.height();
  std::vector<Complex> values(static_cast<std::size_t>(out.width() * h));
  parallel_for(out.width(), [&](std::int64_t i) {
    const std::int64_t x = out.x_lo + i;
    Complex* col = values.data() + i * h;
    for (std::int64_t d = -r; d <= r; ++d) {
      const double w = mu.weights()[static_cast<std::size_t>(d + r)];
      for (std::int64_t j = 0; j < h; ++j) {
        const std::int64_t y = out.y_lo + j;
        col[j] += w * f0.at(x - d, y) * f2.at(x - d, y + d * d);
      }
    }
  });
  return DenseFunction(out, std::move(values), true);
}

double blakley_roy_lhs(const SetIndicator& a) {
  const auto& w = a.window();
  std::vector<std::int64_t> row_sum(static_cast<std::size_t>(w.n2()), 0);  // R(y)
  const auto pts = a.points();
  for (const auto& [x, y] : pts) ++row_sum[static_cast<std::size_t>(y - 1)];
  __int128 total = 0;
  for (const auto& [x, y] : pts) total += static_cast<__int128>(row_sum[static_cast<std::size_t>(y - 1)]) * a.row_count(x);
  const long double norm = static_cast<long double>(w.area()) * static_cast<long double>(w.area());
  return static_cast<double>(static_cast<long double>(total) / norm);
}

void write_profile_csv(std::ostream& out, const CountProfile& profile) {
  out << "d,count\n";
  for (std::size_t i = 0; i < profile.counts.size(); ++i) out << profile.d_values[i] << "," << profile.counts[i] << "\n";
}

void write_lambda(std::ostream& out, Complex value) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g %.12g", value.real(), value.imag());
  out << buf << "\n";
}

}  // namespace nlroth
