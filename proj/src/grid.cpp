#include "nlroth/grid.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nlroth/errors.hpp"

namespace nlroth {

namespace {

std::string point_str(std::int64_t x, std::int64_t y) {
  std::ostringstream os;
  os << "(" << x << "," << y << ")";
  return os.str();
}

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

GridWindow::GridWindow(std::int64_t n1, std::int64_t n2) : n1_(n1), n2_(n2) {
  if (n1 < 1 || n2 < 1) throw DomainError("window extents must be positive");
  if (n1 > kMaxWindowArea / n2) throw DomainError("window area exceeds 2^31");
}

SetIndicator::SetIndicator(GridWindow window)
    : window_(window),
      words_per_row_(static_cast<std::size_t>((window.n2() + 63) / 64)),
      bits_(static_cast<std::size_t>(window.n1()) * words_per_row_, 0) {}

SetIndicator SetIndicator::from_predicate(
    GridWindow window, const std::function<bool(std::int64_t, std::int64_t)>& pred) {
  SetIndicator s(window);
  for (std::int64_t x = 1; x <= window.n1(); ++x)
    for (std::int64_t y = 1; y <= window.n2(); ++y)
      if (pred(x, y)) s.set_unchecked(x, y);
  s.refresh_cardinality();
  return s;
}

bool SetIndicator::contains(std::int64_t x, std::int64_t y) const {
  if (!window_.contains(x, y)) return false;
  const auto r = row(x);
  const auto b = static_cast<std::uint64_t>(y - 1);
  return (r[b >> 6] >> (b & 63)) & 1U;
}

std::span<const std::uint64_t> SetIndicator::row(std::int64_t x) const {
  return {bits_.data() + static_cast<std::size_t>(x - 1) * words_per_row_, words_per_row_};
}

std::int64_t SetIndicator::row_count(std::int64_t x) const {
  std::int64_t c = 0;
  for (auto w : row(x)) c += std::popcount(w);
  return c;
}

std::vector<Point> SetIndicator::points() const {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(cardinality_));
  for (std::int64_t x = 1; x <= window_.n1(); ++x) {
    const auto r = row(x);
    for (std::size_t w = 0; w < r.size(); ++w) {
      for (std::uint64_t word = r[w]; word != 0; word &= word - 1) {
        const auto bit = static_cast<std::int64_t>(std::countr_zero(word));
        out.emplace_back(x, static_cast<std::int64_t>(w) * 64 + bit + 1);
      }
    }
  }
  return out;
}

std::int64_t SetIndicator::recount() const {
  std::int64_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

void SetIndicator::set_unchecked(std::int64_t x, std::int64_t y) {
  const auto b = static_cast<std::uint64_t>(y - 1);
  bits_[static_cast<std::size_t>(x - 1) * words_per_row_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
}

void SetIndicator::refresh_cardinality() { cardinality_ = recount(); }

SetIndicator indicator_from_points(std::span<const Point> points, GridWindow window,
                                   bool* had_duplicates) {
  SetIndicator s(window);
  bool dup = false;
  for (const auto& [x, y] : points) {
    if (!window.contains(x, y)) throw DomainError("point outside window: " + point_str(x, y));
    if (s.contains(x, y)) dup = true;
    s.set_unchecked(x, y);
  }
  s.refresh_cardinality();
  if (had_duplicates) *had_duplicates = dup;
  return s;
}

double density(const SetIndicator& a) {
  return static_cast<double>(a.cardinality()) / static_cast<double>(a.window().area());
}

Fiber::Fiber(std::int64_t lo, std::vector<Complex> values) : lo_(lo), values_(std::move(values)) {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ContractError("fiber values must be finite");
}

Fiber Fiber::zeros(std::int64_t lo, std::int64_t length) {
  return Fiber(lo, std::vector<Complex>(static_cast<std::size_t>(std::max<std::int64_t>(length, 0))));
}

Fiber Fiber::indicator(std::int64_t lo, std::int64_t hi) {
  return Fiber(lo, std::vector<Complex>(static_cast<std::size_t>(std::max<std::int64_t>(hi - lo + 1, 0)),
                                        Complex{1.0, 0.0}));
}

DenseFunction::DenseFunction(Box box, std::vector<Complex> values, bool bounded)
    : box_(box), values_(std::move(values)), bounded_(bounded) {
  if (box_.empty()) {
    box_ = Box{};
    values_.clear();
  }
  if (static_cast<std::int64_t>(values_.size()) != box_.width() * box_.height())
    throw ContractError("value array does not match the support box");
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ContractError("function values must be finite");
    if (bounded_ && std::abs(v) > 1.0 + kBoundSlack)
      throw ContractError("function flagged 1-bounded has a value of modulus > 1");
  }
}

DenseFunction DenseFunction::zeros(Box box) {
  const auto n = static_cast<std::size_t>(box.width() * box.height());
  return DenseFunction(box, std::vector<Complex>(n), true);
}

DenseFunction DenseFunction::from_indicator(const SetIndicator& a) {
  const Box box = Box::of(a.window());
  std::vector<Complex> v(static_cast<std::size_t>(box.width() * box.height()));
  for (const auto& [x, y] : a.points())
    v[static_cast<std::size_t>((x - 1) * box.height() + (y - 1))] = 1.0;
  return DenseFunction(box, std::move(v), true);
}

DenseFunction DenseFunction::from_fn(Box box,
                                     const std::function<Complex(std::int64_t, std::int64_t)>& fn,
                                     bool bounded) {
  std::vector<Complex> v;
  v.reserve(static_cast<std::size_t>(box.width() * box.height()));
  for (std::int64_t x = box.x_lo; x <= box.x_hi; ++x)
    for (std::int64_t y = box.y_lo; y <= box.y_hi; ++y) v.push_back(fn(x, y));
  return DenseFunction(box, std::move(v), bounded);
}

std::span<const Complex> DenseFunction::column(std::int64_t x) const {
  if (x < box_.x_lo || x > box_.x_hi) return {};
  return {values_.data() + index(x, box_.y_lo), static_cast<std::size_t>(box_.height())};
}

double DenseFunction::l2_squared() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s;
}

Fiber fiber(const DenseFunction& f, std::int64_t x) {
  const Box& b = f.box();
  const auto col = f.column(x);
  if (col.empty()) return Fiber::zeros(b.y_lo, b.height());
  return Fiber(b.y_lo, std::vector<Complex>(col.begin(), col.end()));
}

SetIndicator read_set(std::istream& in, std::ostream* diagnostics) {
  std::string line;
  std::int64_t lineno = 0;
  std::int64_t n1 = 0, n2 = 0;
  bool have_header = false;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::istringstream ls(line);
    std::int64_t a = 0, b = 0;
    if (!(ls >> a >> b)) throw ValidationError("set file line " + std::to_string(lineno) + ": expected two integers");
    if (!have_header) {
      n1 = a;
      n2 = b;
      have_header = true;
    } else {
      pts.emplace_back(a, b);
    }
  }
  if (!have_header) throw ValidationError("set file: missing 'N1 N2' header");
  bool dup = false;
  SetIndicator s = [&] {
    try {
      return indicator_from_points(pts, GridWindow(n1, n2), &dup);
    } catch (const DomainError& e) {
      throw ValidationError(std::string("set file: ") + e.what());
    }
  }();
  if (dup && diagnostics) *diagnostics << "warning: duplicate points ignored in set file\n";
  return s;
}

SetIndicator read_set_file(const std::string& path, std::ostream* diagnostics) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open set file: " + path);
  return read_set(in, diagnostics);
}

void write_set(std::ostream& out, const SetIndicator& a) {
  out << a.window().n1() << " " << a.window().n2() << "\n";
  for (const auto& [x, y] : a.points()) out << x << " " << y << "\n";
}

DenseFunction read_function(std::istream& in) {
  std::string line;
  std::int64_t lineno = 0;
  bool have_header = false;
  Box box;
  std::vector<Complex> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::istringstream ls(line);
    if (!have_header) {
      if (!(ls >> box.x_lo >> box.x_hi >> box.y_lo >> box.y_hi))
        throw ValidationError("function file: expected 'x_lo x_hi y_lo y_hi' header");
      values.assign(static_cast<std::size_t>(box.width() * box.height()), Complex{});
      have_header = true;
      continue;
    }
    std::int64_t x = 0, y = 0;
    double re = 0, im = 0;
    if (!(ls >> x >> y >> re >> im))
      throw ValidationError("function file line " + std::to_string(lineno) + ": expected 'x y re im'");
    if (!box.contains(x, y))
      throw ValidationError("function file line " + std::to_string(lineno) + ": point outside box " +
                            point_str(x, y));
    values[static_cast<std::size_t>((x - box.x_lo) * box.height() + (y - box.y_lo))] = {re, im};
  }
  if (!have_header) throw ValidationError("function file: missing header");
  bool bounded = true;
  for (const auto& v : values) bounded = bounded && std::abs(v) <= 1.0 + kBoundSlack;
  try {
    return DenseFunction(box, std::move(values), bounded);
  } catch (const ContractError& e) {
    throw ValidationError(std::string("function file: ") + e.what());
  }
}

DenseFunction read_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open function file: " + path);
  return read_function(in);
}

void write_function(std::ostream& out, const DenseFunction& f) {
  const Box& b = f.box();
  out << b.x_lo << " " << b.x_hi << " " << b.y_lo << " " << b.y_hi << "\n";
  out.precision(17);
  for (std::int64_t x = b.x_lo; x <= b.x_hi; ++x)
    for (std::int64_t y = b.y_lo; y <= b.y_hi; ++y) {
      const Complex v = f.at(x, y);
      if (v != Complex{}) out << x << " " << y << " " << v.real() << " " << v.imag() << "\n";
    }
}

}  // namespace nlroth
