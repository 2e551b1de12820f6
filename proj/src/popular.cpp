#include "nlroth/popular.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include <json.hpp>

#include "nlroth/counting.hpp"
#include "nlroth/errors.hpp"
#include "nlroth/format.hpp"
#include "nlroth/kernels.hpp"
#include "nlroth/parallel.hpp"

namespace nlroth {

namespace {

std::int64_t floor_sqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// a beats b: larger count, then smaller |d|, then positive.
bool better(std::int64_t da, std::int64_t ca, std::int64_t db, std::int64_t cb) {
  if (ca != cb) return ca > cb;
  if (std::abs(da) != std::abs(db)) return std::abs(da) < std::abs(db);
  return da > db;
}

BestDifference best_of(const SetIndicator& a, const std::vector<std::int64_t>& ds) {
  const auto counts = parallel_map<std::int64_t>(static_cast<std::int64_t>(ds.size()), [&](std::int64_t i) {
    return count_for_difference(a, ds[static_cast<std::size_t>(i)]);
  });
  BestDifference best{ds.front(), counts.front()};
  for (std::size_t i = 1; i < ds.size(); ++i)
    if (better(ds[i], counts[i], best.d, best.count)) best = {ds[i], counts[i]};
  return best;
}

std::vector<std::int64_t> symmetric_range(std::int64_t step, std::int64_t kmax) {
  std::vector<std::int64_t> ds;
  for (std::int64_t k = 1; k <= kmax; ++k) {
    ds.push_back(step * k);
    ds.push_back(-step * k);
  }
  return ds;
}

std::vector<std::int64_t> distinct_elements(std::span<const std::int64_t> a1, std::int64_t n) {
  if (n < 1) throw DomainError("N must be >= 1");
  std::set<std::int64_t> s;
  for (auto a : a1) {
    if (a < 1 || a > n) throw DomainError("element " + std::to_string(a) + " outside [1, " + std::to_string(n) + "]");
    s.insert(a);
  }
  return {s.begin(), s.end()};
}

}  // namespace

BestDifference brute_force_best_difference(const SetIndicator& a, IntInterval range) {
  std::vector<std::int64_t> ds;
  for (std::int64_t d = range.lo; d <= range.hi; ++d)
    if (d != 0) ds.push_back(d);
  if (ds.empty()) throw DomainError("difference range contains no nonzero d");
  return best_of(a, ds);
}

PopularDifferenceReport popular_difference_search(const SetIndicator& a, double epsilon, IncrementConfig cfg) {
  if (!(epsilon > 0 && epsilon <= 0.5)) throw DomainError("epsilon must lie in (0, 1/2]");
  const auto& w = a.window();
  if (static_cast<__int128>(w.n1()) * w.n1() < w.n2()) throw DomainError("popular difference search needs N1 >= sqrt(N2)");
  cfg.epsilon = epsilon;

  PopularDifferenceReport r;
  r.delta = density(a);
  r.epsilon = epsilon;
  r.threshold = (r.delta * r.delta * r.delta - epsilon) * static_cast<double>(w.area());

  const DenseFunction f = DenseFunction::from_indicator(a);
  r.trace = energy_increment_run(f, f, f, cfg, w);
  r.q = r.trace.final_state().q;
  r.m = r.trace.final_state().m;

  const Kernel mu = fejer(static_cast<double>(r.m));
  __int128 num = 0;
  for (std::int64_t k = -mu.radius(); k <= mu.radius(); ++k)
    num += static_cast<__int128>(mu.numerator_at(k)) * count_for_difference(a, r.q * k);
  r.weighted_count = static_cast<double>(static_cast<long double>(num) / mu.denominator());

  const std::int64_t full = std::min(w.n1() - 1, floor_sqrt(w.n2() - 1));
  BestDifference best{1, 0};
  bool found = false;
  if (r.trace.termination == Termination::kIrregularitySmall && r.m > 1) {
    best = best_of(a, symmetric_range(r.q, r.m - 1));
    found = best.count > 0;
  }
  if (!found && full >= 1) best = best_of(a, symmetric_range(1, full));
  r.best_d = best.d;
  r.best_count = best.count;
  r.pass = r.trace.termination == Termination::kIrregularitySmall
               ? r.weighted_count >= r.threshold
               : static_cast<double>(r.best_count) >= r.threshold;
  return r;
}

ThresholdReport verify_2d_threshold(const SetIndicator& a, double epsilon) {
  const auto& w = a.window();
  if (w.n1() != w.n2()) throw DomainError("verify_2d_threshold needs a square window");
  const double delta = density(a);
  ThresholdReport r;
  r.threshold = (delta * delta * delta - epsilon) * static_cast<double>(w.area());
  if (w.n1() > 1) {
    const auto best = best_of(a, symmetric_range(1, w.n1() - 1));
    r.witness_d = best.d;
    r.count = best.count;
  }
  r.margin = static_cast<double>(r.count) - r.threshold;
  r.holds = static_cast<double>(r.count) >= r.threshold;
  return r;
}

SetIndicator lift_1d(std::span<const std::int64_t> a1, std::int64_t n) {
  const auto elems = distinct_elements(a1, n);
  const GridWindow w(floor_sqrt(n), n);
  std::vector<Point> pts;
  for (std::int64_t x = 1; x <= w.n1(); ++x)
    for (auto e : elems)
      if (w.contains(x, e - x)) pts.emplace_back(x, e - x);
  return indicator_from_points(pts, w);
}

std::int64_t lift_cardinality_by_rows(std::span<const std::int64_t> a1, std::int64_t n) {
  const auto elems = distinct_elements(a1, n);
  std::int64_t total = 0;
  for (std::int64_t x = 1; x <= floor_sqrt(n); ++x)
    total += std::distance(std::lower_bound(elems.begin(), elems.end(), x + 1), elems.end());
  return total;
}

std::int64_t lift_cardinality_by_elements(std::span<const std::int64_t> a1, std::int64_t n) {
  const auto elems = distinct_elements(a1, n);
  const std::int64_t n1 = floor_sqrt(n);
  std::int64_t total = 0;
  for (auto e : elems)
    for (std::int64_t x = 1; x <= n1; ++x)
      if (e - x >= 1 && e - x <= n) ++total;
  return total;
}

OneDimReport verify_1d_threshold(std::span<const std::int64_t> a1, std::int64_t n, double epsilon) {
  const auto elems = distinct_elements(a1, n);
  const SetIndicator lifted = lift_1d(elems, n);
  const std::int64_t n1 = lifted.window().n1();
  OneDimReport r;
  r.delta = static_cast<double>(elems.size()) / static_cast<double>(n);
  const double de = r.delta - epsilon;
  r.threshold = (de * de * de - epsilon) * static_cast<double>(n);
  r.binomial_floor = (r.delta * r.delta * r.delta - 5 * epsilon) * static_cast<double>(n);

  // Differences reach the lifted window when |d| < n1 and d^2 < N.
  const std::int64_t dmax = std::min(n1 - 1, floor_sqrt(n - 1));
  if (dmax >= 1) {
    const auto best = best_of(lifted, symmetric_range(1, dmax));
    r.d = best.d;
    r.lifted_count = best.count;
  }
  const std::set<std::int64_t> in(elems.begin(), elems.end());
  const auto d2 = r.d * r.d;
  for (std::int64_t x = 1; x <= n1; ++x) {
    std::int64_t row = 0;
    for (std::int64_t y = 1; y <= n; ++y)
      if (lifted.contains(x, y) && lifted.contains(x + r.d, y) && lifted.contains(x, y + d2)) ++row;
    if (row > r.row_count || x == 1) {
      r.row_count = row;
      r.x0 = x;
    }
  }
  for (std::int64_t y = 1; y <= n; ++y)
    if (in.count(r.x0 + y) && in.count(r.x0 + y + r.d) && in.count(r.x0 + y + d2)) ++r.count;
  r.holds = static_cast<double>(r.count) >= r.threshold;
  return r;
}

std::string report_to_json(const PopularDifferenceReport& r) {
  nlohmann::ordered_json j;
  j["delta"] = round12(r.delta);
  j["epsilon"] = round12(r.epsilon);
  j["q"] = r.q;
  j["M"] = r.m;
  j["weighted_count"] = round12(r.weighted_count);
  j["threshold"] = round12(r.threshold);
  j["pass"] = r.pass;
  j["best_d"] = r.best_d;
  j["best_count"] = r.best_count;
  j["trace"] = nlohmann::ordered_json::parse(trace_to_json(r.trace));
  return j.dump(2);
}

void write_report_csv(std::ostream& out, const PopularDifferenceReport& r) {
  out << "delta,epsilon,q,M,weighted_count,threshold,pass,best_d,best_count\n";
  out << fmt12(r.delta) << "," << fmt12(r.epsilon) << "," << r.q << "," << r.m << "," << fmt12(r.weighted_count)
      << "," << fmt12(r.threshold) << "," << (r.pass ? "true" : "false") << "," << r.best_d << "," << r.best_count
      << "\n";
}

}  // namespace nlroth
