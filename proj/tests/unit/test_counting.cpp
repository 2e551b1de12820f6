#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "nlroth/counting.hpp"
#include "nlroth/errors.hpp"
#include "oracles.hpp"

using namespace nlroth;

namespace {

SetIndicator full(std::int64_t n1, std::int64_t n2) {
  return SetIndicator::from_predicate(GridWindow(n1, n2), [](auto, auto) { return true; });
}

DenseFunction ones(Box b) { return DenseFunction::from_fn(b, [](auto, auto) { return Complex(1.0); }, true); }

Complex inner(const DenseFunction& a, const DenseFunction& b) {
  Complex acc{};
  for (std::int64_t x = a.box().x_lo; x <= a.box().x_hi; ++x)
    for (std::int64_t y = a.box().y_lo; y <= a.box().y_hi; ++y) acc += a.at(x, y) * b.at(x, y);
  return acc;
}

double blakley_roy_brute(const SetIndicator& a) {
  const auto& w = a.window();
  double s = 0;
  for (std::int64_t x = 1; x <= w.n1(); ++x)
    for (std::int64_t y = 1; y <= w.n2(); ++y) {
      if (!a.contains(x, y)) continue;
      for (std::int64_t x2 = 1; x2 <= w.n1(); ++x2)
        for (std::int64_t y2 = 1; y2 <= w.n2(); ++y2) s += a.contains(x2, y) && a.contains(x, y2);
    }
  return s / static_cast<double>(w.area() * w.area());
}

}  // namespace

TEST(Lambda, SmallIndicatorExample) {
  const DenseFunction f = ones(Box{1, 2, 1, 4});
  const CountingParams p{2, 1, 2, GridWindow(2, 4)};
  const Complex v = lambda(f, f, f, p);
  EXPECT_NEAR(v.real(), 11.0 / 16, 1e-15);
  EXPECT_EQ(v.imag(), 0.0);
  EXPECT_NEAR(lambda_indicator(full(2, 4), p), 11.0 / 16, 1e-15);
}

TEST(Lambda, ZeroFactorAndContract) {
  std::mt19937_64 rng(1);
  const Box b{1, 3, 1, 9};
  const auto f = oracle::random_function(b, rng);
  const CountingParams p{3, 1, 0, GridWindow(3, 9)};
  EXPECT_EQ(lambda(f, f, DenseFunction::zeros(b), p), Complex{});
  const DenseFunction loose(b, std::vector<Complex>(27, Complex(0.5)), false);
  EXPECT_THROW(lambda(loose, f, f, p), ContractError);
}

TEST(Lambda, MatchesDirectSumIncludingLocalised) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const std::int64_t n = 3 + t % 3;
    const GridWindow w(n, n * n * 16);
    const Box b = Box::of(w);
    const auto f0 = oracle::random_function(b, rng), f1 = oracle::random_function(Box{-n, 2 * n, 1, w.n2()}, rng),
               f2 = oracle::random_function(b, rng);
    const std::int64_t q = 1 + t % 2, m = 1 + t % 4;
    const CountingParams p{n, q, m, w};
    const Complex got = lambda(f0, f1, f2, p);
    const Complex ref = oracle::lambda(f0, f1, f2, m, q, w.n1(), w.n2());
    EXPECT_LT(std::abs(got - ref), 1e-12);
    EXPECT_LE(std::abs(got), 1.0 + 1e-12);
  }
}

TEST(Lambda, LocalisationHypothesis) {
  const auto f = ones(Box{1, 4, 1, 16});
  EXPECT_THROW(lambda(f, f, f, CountingParams{4, 2, 3, GridWindow(4, 16)}), DomainError);
  EXPECT_NO_THROW(lambda(f, f, f, CountingParams{4, 2, 2, GridWindow(4, 16)}));
}

TEST(Lambda, IndicatorPathAgreesWithComplexPath) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::int64_t n = 4 + t % 5;
    const auto a = oracle::random_set(n, n * n, 0.2 + 0.03 * t, rng);
    const auto f = DenseFunction::from_indicator(a);
    const CountingParams p{n, 1, 0, a.window()};
    const double v = lambda_indicator(a, p);
    EXPECT_NEAR(lambda(f, f, f, p).real(), v, 1e-9 * std::max(v, 1e-300));
  }
}

TEST(CountForDifference, FullGridExamples) {
  const auto a = full(3, 3);
  for (auto m : {CountMethod::kNaive, CountMethod::kBitparallel}) {
    EXPECT_EQ(count_for_difference(a, 0, m), 9);
    EXPECT_EQ(count_for_difference(a, 1, m), 4);
    EXPECT_EQ(count_for_difference(a, 2, m), 0);
    EXPECT_EQ(count_for_difference(a, -1, m), 4);
    EXPECT_EQ(count_for_difference(a, 1000000, m), 0);
  }
}

TEST(CountForDifference, NaiveBitparallelAndOracleAgree) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 60; ++t) {
    const std::int64_t n1 = 1 + t % 37, n2 = 1 + (t * 13) % 200;
    const auto a = oracle::random_set(n1, n2, 0.1 + 0.8 * (t % 3) / 2.0, rng);
    const auto pts = a.points();
    for (std::int64_t d = -n1; d <= n1; ++d) {
      const auto ref = oracle::count(pts, d);
      EXPECT_EQ(count_for_difference(a, d, CountMethod::kNaive), ref);
      EXPECT_EQ(count_for_difference(a, d, CountMethod::kBitparallel), ref) << n1 << "x" << n2 << " d=" << d;
    }
  }
}

TEST(CountProfile, Examples) {
  const auto p = count_profile(full(3, 3), -2, 2);
  EXPECT_EQ(p.d_values, (std::vector<std::int64_t>{-2, -1, 0, 1, 2}));
  EXPECT_EQ(p.counts, (std::vector<std::int64_t>{0, 4, 9, 4, 0}));
  EXPECT_EQ(count_profile(SetIndicator(GridWindow(4, 4)), -3, 3).counts, std::vector<std::int64_t>(7, 0));
  const std::vector<Point> one{{1, 1}};
  EXPECT_EQ(count_profile(indicator_from_points(one, GridWindow(3, 3)), -1, 1).counts,
            (std::vector<std::int64_t>{0, 1, 0}));
}

TEST(CountProfile, ZeroColumnIsCardinality) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_set(1 + t, 3 + 5 * t, 0.4, rng);
    const auto p = count_profile(a, -2, 2, CountMethod::kNaive);
    EXPECT_EQ(p.counts[2], a.cardinality());
  }
}

TEST(Dual, PointValues) {
  const auto f = ones(Box{1, 2, 1, 4});
  EXPECT_NEAR(dual_F(f, f, 2).at(1, 2).real(), 0.75, 1e-15);
  EXPECT_NEAR(dual_G(f, f, 2).at(2, 1).real(), 0.75, 1e-15);
  const auto z = DenseFunction::zeros(Box{1, 2, 1, 4});
  const auto zf = dual_F(z, z, 2), zg = dual_G(z, z, 2);
  for (const auto& v : zf.values()) EXPECT_EQ(v, Complex{});
  for (const auto& v : zg.values()) EXPECT_EQ(v, Complex{});
}

TEST(Dual, AgreesWithDefinitionPointwise) {
  std::mt19937_64 rng(6);
  const std::int64_t n = 4;
  const auto f0 = oracle::random_function(Box{1, 4, 1, 16}, rng), f1 = oracle::random_function(Box{-3, 8, 1, 16}, rng);
  const auto big_f = dual_F(f0, f1, n), big_g = dual_G(f0, f1, n);
  for (std::int64_t x = -5; x <= 10; ++x)
    for (std::int64_t y = -3; y <= 30; ++y) {
      Complex rf{}, rg{};
      for (std::int64_t d = -3; d <= 3; ++d) {
        rf += oracle::fejer(4, d) * f0.at(x, y - d * d) * f1.at(x + d, y - d * d);
        rg += oracle::fejer(4, d) * f0.at(x - d, y) * f1.at(x - d, y + d * d);
      }
      EXPECT_LT(std::abs(big_f.at(x, y) - rf), 1e-15);
      EXPECT_LT(std::abs(big_g.at(x, y) - rg), 1e-15);
    }
  EXPECT_TRUE(big_f.bounded());
  EXPECT_TRUE(big_g.bounded());
}

TEST(Dual, Identities) {
  std::mt19937_64 rng(7);
  for (std::int64_t n : {4, 8}) {
    const GridWindow w(n, n * n);
    const Box b = Box::of(w);
    for (int t = 0; t < 10; ++t) {
      const auto f0 = oracle::random_function(b, rng), f1 = oracle::random_function(b, rng),
                 f2 = oracle::random_function(b, rng);
      const CountingParams p{n, 1, 0, w};
      const Complex lam = lambda(f0, f1, f2, p);
      const double n3 = static_cast<double>(n * n * n);
      const double mass = static_cast<double>(w.area()) / n3;
      EXPECT_LE(std::abs(lam - inner(dual_F(f0, f1, n), f2) / n3), 1e-9 * mass);
      EXPECT_LE(std::abs(lam - inner(f1, dual_G(f0, f2, n)) / n3), 1e-9 * mass);
    }
  }
}

TEST(BlakleyRoy, Examples) {
  EXPECT_DOUBLE_EQ(blakley_roy_lhs(full(4, 7)), 1.0);
  const std::vector<Point> one{{2, 3}};
  EXPECT_DOUBLE_EQ(blakley_roy_lhs(indicator_from_points(one, GridWindow(3, 3))), 1.0 / 81);
  const auto prod = SetIndicator::from_predicate(GridWindow(6, 6), [](auto x, auto y) { return x <= 2 && y % 3 == 0; });
  EXPECT_NEAR(blakley_roy_lhs(prod), std::pow(2.0 / 6, 2) * std::pow(2.0 / 6, 2), 1e-15);
  EXPECT_NEAR(blakley_roy_lhs(prod), blakley_roy_brute(prod), 1e-15);
}

TEST(BlakleyRoy, InequalityAndBruteForce) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto a = oracle::random_set(1 + t % 9, 1 + (t * 7) % 11, (t % 10) / 9.0, rng);
    const double lhs = blakley_roy_lhs(a);
    EXPECT_NEAR(lhs, blakley_roy_brute(a), 1e-12);
    EXPECT_GE(lhs, std::pow(density(a), 3) - 1e-12);
  }
}

TEST(Output, CsvAndLambdaText) {
  std::ostringstream csv;
  write_profile_csv(csv, count_profile(full(3, 3), -1, 1));
  EXPECT_EQ(csv.str(), "d,count\n-1,4\n0,9\n1,4\n");
  std::ostringstream lam;
  write_lambda(lam, Complex(0.6875, 0.0));
  EXPECT_EQ(lam.str(), "0.6875 0\n");
}
