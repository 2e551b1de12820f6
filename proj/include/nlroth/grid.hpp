#pragma once

// Substrate types: the box [N1]x[N2], bit-packed subsets of it, and dense
// complex functions on rectangles of Z^2. Coordinates are 1-indexed
// everywhere in the public API.

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nlroth {

using Complex = std::complex<double>;
using Point = std::pair<std::int64_t, std::int64_t>;

/// Largest admissible N1*N2; keeps every count exact in 64 bits.
inline constexpr std::int64_t kMaxWindowArea = std::int64_t{1} << 31;

class GridWindow {
 public:
  GridWindow(std::int64_t n1, std::int64_t n2);

  std::int64_t n1() const { return n1_; }
  std::int64_t n2() const { return n2_; }
  std::int64_t area() const { return n1_ * n2_; }
  bool contains(std::int64_t x, std::int64_t y) const {
    return x >= 1 && x <= n1_ && y >= 1 && y <= n2_;
  }
  bool operator==(const GridWindow&) const = default;

 private:
  std::int64_t n1_;
  std::int64_t n2_;
};

/// A subset of a window stored as one packed bit row over y per x.
/// Bit (y-1) of row x is set iff (x, y) is in the set.
class SetIndicator {
 public:
  explicit SetIndicator(GridWindow window);

  static SetIndicator from_predicate(GridWindow window,
                                     const std::function<bool(std::int64_t, std::int64_t)>& pred);

  const GridWindow& window() const { return window_; }
  std::int64_t cardinality() const { return cardinality_; }
  std::size_t words_per_row() const { return words_per_row_; }

  bool contains(std::int64_t x, std::int64_t y) const;
  /// Packed row for x in [1, N1].
  std::span<const std::uint64_t> row(std::int64_t x) const;
  std::int64_t row_count(std::int64_t x) const;

  std::vector<Point> points() const;
  /// Fresh population count of all rows, independent of the cache.
  std::int64_t recount() const;

  bool operator==(const SetIndicator& other) const {
    return window_ == other.window_ && bits_ == other.bits_;
  }

 private:
  friend SetIndicator indicator_from_points(std::span<const Point>, GridWindow, bool*);
  void set_unchecked(std::int64_t x, std::int64_t y);
  void refresh_cardinality();

  GridWindow window_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> bits_;
  std::int64_t cardinality_ = 0;
};

/// Builds the indicator of the given points. Throws DomainError naming the
/// first point outside the window. Duplicates are collapsed; if
/// `had_duplicates` is non-null it reports whether any were seen.
SetIndicator indicator_from_points(std::span<const Point> points, GridWindow window,
                                   bool* had_duplicates = nullptr);

/// |A| / (N1 N2).
double density(const SetIndicator& a);

/// Closed integer rectangle [x_lo, x_hi] x [y_lo, y_hi]. Empty when lo > hi.
struct Box {
  std::int64_t x_lo = 1;
  std::int64_t x_hi = 0;
  std::int64_t y_lo = 1;
  std::int64_t y_hi = 0;

  std::int64_t width() const { return x_hi >= x_lo ? x_hi - x_lo + 1 : 0; }
  std::int64_t height() const { return y_hi >= y_lo ? y_hi - y_lo + 1 : 0; }
  bool empty() const { return width() == 0 || height() == 0; }
  bool contains(std::int64_t x, std::int64_t y) const {
    return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
  }
  bool operator==(const Box&) const = default;

  static Box of(const GridWindow& w) { return {1, w.n1(), 1, w.n2()}; }
};

/// Closed integer interval [lo, hi].
struct IntInterval {
  std::int64_t lo = 1;
  std::int64_t hi = 0;
};

/// A finitely supported sequence on Z: values[i] is the value at lo + i.
class Fiber {
 public:
  Fiber() = default;
  Fiber(std::int64_t lo, std::vector<Complex> values);

  static Fiber zeros(std::int64_t lo, std::int64_t length);
  static Fiber indicator(std::int64_t lo, std::int64_t hi);

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(values_.size()) - 1; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  bool empty() const { return values_.empty(); }

  Complex at(std::int64_t y) const {
    const std::int64_t i = y - lo_;
    return (i >= 0 && i < size()) ? values_[static_cast<std::size_t>(i)] : Complex{};
  }
  const std::vector<Complex>& values() const { return values_; }

 private:
  std::int64_t lo_ = 0;
  std::vector<Complex> values_;
};

/// A complex function on Z^2 that vanishes outside `box()`.
class DenseFunction {
 public:
  DenseFunction() = default;
  /// `values` are row-major in x: the y-fiber of column x is contiguous.
  /// Throws ContractError on non-finite values or, when `bounded` is set, on
  /// any |value| > 1 + 2^-40.
  DenseFunction(Box box, std::vector<Complex> values, bool bounded);

  static DenseFunction zeros(Box box);
  static DenseFunction from_indicator(const SetIndicator& a);
  static DenseFunction from_fn(Box box, const std::function<Complex(std::int64_t, std::int64_t)>& fn,
                               bool bounded);

  const Box& box() const { return box_; }
  bool bounded() const { return bounded_; }

  Complex at(std::int64_t x, std::int64_t y) const {
    if (!box_.contains(x, y)) return {};
    return values_[index(x, y)];
  }
  /// Contiguous y-values for column x; empty span outside the box.
  std::span<const Complex> column(std::int64_t x) const;
  const std::vector<Complex>& values() const { return values_; }

  /// Sum of |f|^2 over the box.
  double l2_squared() const;

 private:
  std::size_t index(std::int64_t x, std::int64_t y) const {
    return static_cast<std::size_t>((x - box_.x_lo) * box_.height() + (y - box_.y_lo));
  }

  Box box_;
  std::vector<Complex> values_;
  bool bounded_ = true;
};

inline constexpr double kBoundSlack = 0x1.0p-40;

/// y -> f(x, y) over the box's y-interval; all zeros when x is outside.
Fiber fiber(const DenseFunction& f, std::int64_t x);

// Text formats.
//   set file:      "N1 N2" then one "x y" per line; '#' lines ignored.
//   function file: "x_lo x_hi y_lo y_hi" then "x y re im" per line.
SetIndicator read_set(std::istream& in, std::ostream* diagnostics = nullptr);
SetIndicator read_set_file(const std::string& path, std::ostream* diagnostics = nullptr);
void write_set(std::ostream& out, const SetIndicator& a);

DenseFunction read_function(std::istream& in);
DenseFunction read_function_file(const std::string& path);
void write_function(std::ostream& out, const DenseFunction& f);

}  // namespace nlroth
