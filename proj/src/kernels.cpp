#include "nlroth/kernels.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>

#include "nlroth/errors.hpp"

namespace nlroth {

namespace {

std::atomic<std::int64_t> g_fft_crossover{kDefaultFftCrossover};

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

class FftwBuffer {
 public:
  explicit FftwBuffer(std::size_t n) : n_(n), data_(fftw_alloc_complex(n)) {
    if (!data_) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data_); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* get() { return data_; }
  Complex* as_complex() { return reinterpret_cast<Complex*>(data_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_complex* data_;
};

class FftwPlan {
 public:
  FftwPlan(FftwBuffer& in, FftwBuffer& out, int sign) {
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(in.size()), in.get(), out.get(), sign, FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("fftw plan creation failed");
  }
  ~FftwPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;

  void execute() { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

Kernel::Kernel(std::int64_t stride, double halfwidth, std::vector<std::int64_t> numerators,
               std::int64_t denominator)
    : stride_(stride), halfwidth_(halfwidth), nums_(std::move(numerators)), den_(denominator) {
  if (stride_ < 1) throw DomainError("kernel stride must be positive");
  if (den_ < 1) throw DomainError("kernel denominator must be positive");
  if (nums_.empty() || nums_.size() % 2 == 0) throw DomainError("kernel table must have odd length");
  radius_ = static_cast<std::int64_t>(nums_.size() / 2);
  for (auto n : nums_)
    if (n < 0) throw DomainError("kernel weights must be nonnegative");
  if (!exact_symmetric()) throw DomainError("kernel weights must be symmetric");
  if (!exact_unit_mass()) throw DomainError("kernel weights must sum to 1");
  mirror_.reserve(nums_.size());
  for (auto n : nums_) {
    mirror_.push_back(static_cast<double>(n) / static_cast<double>(den_));
    if (n != 0) ++support_size_;
  }
}

double Kernel::weight(std::int64_t h) const {
  if (h % stride_ != 0) return 0.0;
  const std::int64_t k = h / stride_;
  return (k < -radius_ || k > radius_) ? 0.0 : mirror_[static_cast<std::size_t>(k + radius_)];
}

std::vector<std::int64_t> Kernel::support() const {
  std::vector<std::int64_t> out;
  for (std::int64_t k = -radius_; k <= radius_; ++k)
    if (numerator_at(k) != 0) out.push_back(k * stride_);
  return out;
}

bool Kernel::exact_unit_mass() const {
  __int128 s = 0;
  for (auto n : nums_) s += n;
  return s == static_cast<__int128>(den_);
}

bool Kernel::exact_symmetric() const {
  for (std::size_t i = 0, j = nums_.size() - 1; i < j; ++i, --j)
    if (nums_[i] != nums_[j]) return false;
  return true;
}

Kernel fejer(double halfwidth) {
  if (!(halfwidth >= 1.0)) throw DomainError("Fejer kernel requires H >= 1");
  const auto h = static_cast<std::int64_t>(std::floor(halfwidth));
  if (h > (std::int64_t{1} << 31)) throw DomainError("Fejer kernel halfwidth too large");
  // mu_H(k) = (h - |k|) / h^2 for |k| < h.
  std::vector<std::int64_t> nums(static_cast<std::size_t>(2 * h - 1));
  for (std::int64_t k = -(h - 1); k <= h - 1; ++k)
    nums[static_cast<std::size_t>(k + h - 1)] = h - (k < 0 ? -k : k);
  return Kernel(1, halfwidth, std::move(nums), h * h);
}

Kernel stretch(const Kernel& k, std::int64_t q) {
  if (q <= 0) throw DomainError("stretch factor must be positive");
  if (k.stride() != 1) throw DomainError("stretch requires a stride-1 kernel");
  std::vector<std::int64_t> nums;
  nums.reserve(static_cast<std::size_t>(2 * k.radius() + 1));
  for (std::int64_t i = -k.radius(); i <= k.radius(); ++i) nums.push_back(k.numerator_at(i));
  return Kernel(q, k.halfwidth(), std::move(nums), k.denominator());
}

Kernel compose(const Kernel& k1, const Kernel& k2) {
  const std::int64_t g = std::gcd(k1.stride(), k2.stride());
  const std::int64_t m1 = k1.stride() / g, m2 = k2.stride() / g;
  const std::int64_t r1 = k1.radius() * m1, r2 = k2.radius() * m2;
  const __int128 den = static_cast<__int128>(k1.denominator()) * k2.denominator();
  if (den > std::numeric_limits<std::int64_t>::max()) throw DomainError("composed kernel denominator overflows");
  std::vector<std::int64_t> out(static_cast<std::size_t>(2 * (r1 + r2) + 1), 0);
  for (std::int64_t a = -k1.radius(); a <= k1.radius(); ++a) {
    const std::int64_t na = k1.numerator_at(a);
    if (na == 0) continue;
    for (std::int64_t b = -k2.radius(); b <= k2.radius(); ++b) {
      const std::int64_t nb = k2.numerator_at(b);
      if (nb == 0) continue;
      out[static_cast<std::size_t>(a * m1 + b * m2 + r1 + r2)] += na * nb;
    }
  }
  return Kernel(g, k1.halfwidth() + k2.halfwidth(), std::move(out), static_cast<std::int64_t>(den));
}

void set_fft_crossover(std::int64_t product) { g_fft_crossover = product; }
std::int64_t fft_crossover() { return g_fft_crossover; }

void fft_forward(std::vector<Complex>& data) {
  if (data.empty()) return;
  FftwBuffer buf(data.size());
  FftwPlan plan(buf, buf, FFTW_FORWARD);
  std::copy(data.begin(), data.end(), buf.as_complex());
  plan.execute();
  std::copy(buf.as_complex(), buf.as_complex() + data.size(), data.begin());
}

std::vector<Complex> fft_linear_convolve(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  FftwBuffer fa(n), fb(n);
  FftwPlan pa(fa, fa, FFTW_FORWARD), pb(fb, fb, FFTW_FORWARD), inv(fa, fa, FFTW_BACKWARD);
  Complex* xa = fa.as_complex();
  Complex* xb = fb.as_complex();
  std::fill(xa, xa + n, Complex{});
  std::fill(xb, xb + n, Complex{});
  std::copy(a.begin(), a.end(), xa);
  std::copy(b.begin(), b.end(), xb);
  pa.execute();
  pb.execute();
  for (std::size_t i = 0; i < n; ++i) xa[i] *= xb[i];
  inv.execute();
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<Complex> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = xa[i] * scale;
  return out;
}

Fiber convolve(const Fiber& f, const Kernel& k, ConvolveMethod method) {
  const std::int64_t r = k.max_offset();
  if (f.empty()) return Fiber(f.lo() - r, {});
  const std::int64_t out_lo = f.lo() - r;
  const auto out_len = static_cast<std::size_t>(f.size() + 2 * r);

  if (method == ConvolveMethod::kAuto)
    method = (f.size() * k.support_size() > fft_crossover()) ? ConvolveMethod::kFft : ConvolveMethod::kDirect;

  if (method == ConvolveMethod::kFft) {
    // Dense kernel table over offsets [-r, r]; output index i corresponds to
    // y = out_lo + i, matching the direct path below.
    std::vector<Complex> dense(static_cast<std::size_t>(2 * r + 1));
    for (std::int64_t j = -k.radius(); j <= k.radius(); ++j)
      dense[static_cast<std::size_t>(j * k.stride() + r)] = k.weights()[static_cast<std::size_t>(j + k.radius())];
    auto out = fft_linear_convolve(f.values(), dense);
    return Fiber(out_lo, std::move(out));
  }

  std::vector<Complex> out(out_len);
  const auto& w = k.weights();
  const auto& src = f.values();
  for (std::int64_t j = -k.radius(); j <= k.radius(); ++j) {
    const double wj = w[static_cast<std::size_t>(j + k.radius())];
    if (wj == 0.0) continue;
    // f(y - h) lands at output index (y - out_lo) = i_src + h + r.
    const auto shift = static_cast<std::size_t>(j * k.stride() + r);
    for (std::size_t i = 0; i < src.size(); ++i) out[i + shift] += wj * src[i];
  }
  return Fiber(out_lo, std::move(out));
}

void print_kernel(std::ostream& out, const Kernel& k) {
  for (std::int64_t j = -k.radius(); j <= k.radius(); ++j) {
    const std::int64_t n = k.numerator_at(j);
    if (n == 0) continue;
    const std::int64_t g = std::gcd(n, k.denominator());
    out << j * k.stride() << " " << n / g << "/" << k.denominator() / g << "\n";
  }
}

}  // namespace nlroth
