#include "nlroth/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>

#include "nlroth/errors.hpp"
#include "nlroth/kernels.hpp"
#include "nlroth/parallel.hpp"

namespace nlroth {

namespace {

// Restart the phase recurrence from an exact value this often.
constexpr std::int64_t kPhaseRestart = 64;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// e(num * y / den) with the product reduced exactly.
Complex rational_phase(std::int64_t num, std::int64_t den, std::int64_t y) {
  const auto r = static_cast<__int128>(num) * y % den;
  const auto rr = r < 0 ? r + den : r;
  return e_phase(static_cast<long double>(rr) / static_cast<long double>(den));
}

// sum_i v[i] e(alpha (lo + i)) via a multiplicative recurrence.
Complex phase_sum(std::span<const Complex> v, std::int64_t lo, std::int64_t num, std::int64_t den) {
  const Complex step = rational_phase(num, den, 1);
  Complex z{}, acc{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i % kPhaseRestart == 0)
      z = rational_phase(num, den, lo + static_cast<std::int64_t>(i));
    else
      z *= step;
    acc += v[i] * z;
  }
  return acc;
}

bool rational_less(const SpectrumEntry& a, const SpectrumEntry& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

}  // namespace

Frequency::Frequency(long double value) {
  if (!std::isfinite(value)) throw DomainError("frequency must be finite");
  long double r = value - std::floor(value);
  if (r >= 1.0L || r < 0.0L) r = 0.0L;
  value_ = r;
}

Frequency Frequency::rational(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw DomainError("frequency denominator must be positive");
  return Frequency(static_cast<long double>(floor_mod(num, den)) / static_cast<long double>(den));
}

double torus_norm(long double a) {
  const long double r = a - std::floor(a);
  return static_cast<double>(std::min(r, 1.0L - r));
}

Complex e_phase(long double t) {
  long double r = t - std::floor(t);
  if (r > 0.5L) r -= 1.0L;
  const long double angle = 2.0L * std::numbers::pi_v<long double> * r;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

Complex weyl_sum(Frequency alpha, Frequency beta, std::int64_t n) {
  if (n < 1) throw DomainError("weyl_sum requires N >= 1");
  const Kernel mu = fejer(static_cast<double>(n));
  const auto& w = mu.weights();
  const long double a = alpha.value(), b = beta.value();
  Complex acc{};
  for (std::int64_t d = -mu.radius(); d <= mu.radius(); ++d) {
    const auto dd = static_cast<long double>(d);
    acc += w[static_cast<std::size_t>(d + mu.radius())] * e_phase(a * dd * dd + b * dd);
  }
  return acc;
}

Complex fourier_coefficient(const Fiber& f, Frequency alpha) {
  Complex acc{};
  for (std::int64_t y = f.lo(); y <= f.hi(); ++y)
    acc += f.at(y) * e_phase(alpha.value() * static_cast<long double>(y));
  return acc;
}

std::optional<MajorArcCertificate> MajorArcCertificate::verify(Frequency alpha, std::int64_t q,
                                                               std::int64_t bound, double scale) {
  if (q < 1 || q > bound || !(scale > 0)) return std::nullopt;
  const double achieved = torus_norm(static_cast<long double>(q) * alpha.value()) * scale;
  if (!(achieved <= static_cast<double>(bound))) return std::nullopt;
  MajorArcCertificate c;
  c.alpha_ = alpha;
  c.q_ = q;
  c.bound_ = bound;
  c.scale_ = scale;
  c.achieved_ = achieved;
  return c;
}

std::optional<MajorArcCertificate> rationalize(Frequency alpha, std::int64_t bound, double scale) {
  if (bound < 1) throw DomainError("rationalize requires Q >= 1");
  if (!(scale > 0)) throw DomainError("rationalize requires S > 0");
  // Convergent denominators q_k = a_k q_{k-1} + q_{k-2}, starting from q_0 = 1.
  std::int64_t q_prev = 0, q = 1;
  long double rem = alpha.value();
  for (int depth = 0; depth < kMaxConvergents; ++depth) {
    if (auto c = MajorArcCertificate::verify(alpha, q, bound, scale)) return c;
    if (rem == 0.0L) break;
    const long double x = 1.0L / rem;
    const long double a = std::floor(x);
    rem = x - a;
    if (a > static_cast<long double>(bound)) break;
    const std::int64_t next = static_cast<std::int64_t>(a) * q + q_prev;
    if (next > bound) break;
    q_prev = q;
    q = next;
  }
  return std::nullopt;
}

std::int64_t arc_grid_size(std::int64_t bound, double scale) {
  if (bound < 1) throw DomainError("major-arc bound Q must be >= 1");
  if (!(scale > 0)) throw DomainError("major-arc scale S must be > 0");
  const long double t = std::ceil(100.0L * static_cast<long double>(bound) * static_cast<long double>(scale));
  if (t > 0x1.0p52L) throw DomainError("rounding grid 100*Q*S is too large");
  return static_cast<std::int64_t>(t);
}

std::vector<FrequencyCluster> cluster_major_arcs(const std::vector<Frequency>& freqs, std::int64_t bound,
                                                 double scale) {
  const std::int64_t grid = arc_grid_size(bound, scale);
  std::map<std::int64_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const std::int64_t t = floor_mod(std::llround(freqs[i].value() * static_cast<long double>(grid)), grid);
    groups[t].push_back(i);
  }
  std::vector<FrequencyCluster> out;
  out.reserve(groups.size());
  for (auto& [t, members] : groups)
    out.push_back({Frequency::rational(t, grid), t, grid, std::move(members)});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.members.size() > b.members.size();
  });
  return out;
}

std::vector<SpectrumEntry> major_arc_grid(std::int64_t bound, double scale) {
  const std::int64_t grid = arc_grid_size(bound, scale);
  if (static_cast<__int128>(bound) * grid * 4 > std::numeric_limits<std::int64_t>::max())
    throw DomainError("major-arc grid does not fit in 64-bit rationals");
  std::vector<SpectrumEntry> out;
  for (std::int64_t q = 1; q <= bound; ++q) {
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      for (std::int64_t j = -2; j <= 2; ++j) {
        // a/q + j/T = (aT + jq) / (qT)
        std::int64_t den = q * grid;
        std::int64_t num = floor_mod(a * grid + j * q, den);
        const std::int64_t g = std::gcd(num, den);
        num /= g;
        den /= g;
        out.push_back({Frequency::rational(num, den), num, den, 0.0});
      }
    }
  }
  std::sort(out.begin(), out.end(), rational_less);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) { return a.num == b.num && a.den == b.den; }),
            out.end());
  return out;
}

std::vector<SpectrumEntry> fiber_correlation_scan(const DenseFunction& f, ScanDirection direction,
                                                  std::int64_t bound, double scale, std::size_t top) {
  auto grid = major_arc_grid(bound, scale);
  const Box& box = f.box();
  auto score = [&](std::int64_t i) {
    const auto& c = grid[static_cast<std::size_t>(i)];
    double s = 0.0;
    if (box.empty()) return s;
    if (direction == ScanDirection::kVertical) {
      for (std::int64_t x = box.x_lo; x <= box.x_hi; ++x) s += std::abs(phase_sum(f.column(x), box.y_lo, c.num, c.den));
    } else {
      std::vector<Complex> acc(static_cast<std::size_t>(box.height()));
      const Complex step = rational_phase(c.num, c.den, 1);
      Complex z{};
      for (std::int64_t x = box.x_lo; x <= box.x_hi; ++x) {
        z = ((x - box.x_lo) % kPhaseRestart == 0) ? rational_phase(c.num, c.den, x) : z * step;
        const auto col = f.column(x);
        for (std::size_t k = 0; k < col.size(); ++k) acc[k] += col[k] * z;
      }
      for (const auto& v : acc) s += std::abs(v);
    }
    return s;
  };
  const auto scores = parallel_map<double>(static_cast<std::int64_t>(grid.size()), score);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i].score = scores[i];
  // grid is ascending in frequency, so a stable sort keeps that as the tie-break.
  std::stable_sort(grid.begin(), grid.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  if (grid.size() > top) grid.resize(top);
  return grid;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumEntry>& entries) {
  out << "freq_num,freq_den_or_grid,score\n";
  char buf[64];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%.12g", e.score);
    out << e.num << "," << e.den << "," << buf << "\n";
  }
}

}  // namespace nlroth
