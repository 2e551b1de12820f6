// End-to-end acceptance run. One line per criterion; nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlroth/counting.hpp"
#include "nlroth/expsums.hpp"
#include "nlroth/gowers.hpp"
#include "nlroth/grid.hpp"
#include "nlroth/harness.hpp"
#include "nlroth/kernels.hpp"
#include "nlroth/popular.hpp"
#include "oracles.hpp"

using namespace nlroth;

namespace {

struct Check {
  bool ok = true;
  std::string why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

Check counting_oracle() {
  Check c;
  std::mt19937_64 rng(101);
  const std::int64_t sides[] = {8, 16, 32};
  const double dens[] = {0.1, 0.5, 0.9};
  for (int i = 0; i < 200; ++i) {
    const std::int64_t n = sides[i % 3];
    const auto a = oracle::random_set(n, n, dens[(i / 3) % 3], rng);
    for (std::int64_t d = -(n - 1); d <= n - 1; ++d) {
      const auto naive = count_for_difference(a, d, CountMethod::kNaive);
      const auto fast = count_for_difference(a, d, CountMethod::kBitparallel);
      c.expect(naive == fast, "set " + std::to_string(i) + " d=" + std::to_string(d));
    }
  }
  return c;
}

Check dual_identities() {
  Check c;
  std::mt19937_64 rng(102);
  for (int i = 0; i < 50; ++i) {
    const std::int64_t n = i % 2 ? 8 : 4;
    const Box box{1, n, 1, n * n};
    const auto f0 = oracle::random_function(box, rng);
    const auto f1 = oracle::random_function(box, rng);
    const auto f2 = oracle::random_function(box, rng);
    const GridWindow w(n, n * n);
    const Complex lam = lambda(f0, f1, f2, CountingParams{n, 1, 0, w});
    const auto big_f = dual_F(f0, f1, n);
    const auto big_g = dual_G(f0, f2, n);
    Complex via_f{}, via_g{};
    for (std::int64_t x = 1; x <= n; ++x)
      for (std::int64_t y = 1; y <= n * n; ++y) {
        via_f += big_f.at(x, y) * f2.at(x, y);
        via_g += f1.at(x, y) * big_g.at(x, y);
      }
    const double n3 = static_cast<double>(n * n * n);
    c.expect(rel_err(lam, via_f / n3) <= 1e-9, "F identity, triple " + std::to_string(i));
    c.expect(rel_err(lam, via_g / n3) <= 1e-9, "G identity, triple " + std::to_string(i));
  }
  return c;
}

Check blakley_roy() {
  Check c;
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const auto a = oracle::random_set(1 + i % 23, 1 + (i * 7) % 41, p(rng), rng);
    const double d = density(a);
    c.expect(blakley_roy_lhs(a) >= d * d * d - 1e-12, "random set " + std::to_string(i));
  }
  // Products B x C, including lopsided and arithmetic factors.
  std::vector<std::pair<std::function<bool(std::int64_t)>, std::function<bool(std::int64_t)>>> factors = {
      {[](std::int64_t x) { return x <= 1; }, [](std::int64_t) { return true; }},
      {[](std::int64_t) { return true; }, [](std::int64_t y) { return y <= 1; }},
      {[](std::int64_t x) { return x % 2 == 0; }, [](std::int64_t y) { return y % 3 == 0; }},
      {[](std::int64_t x) { return x > 20; }, [](std::int64_t y) { return y % 7 < 2; }},
  };
  for (int i = 0; i < 20; ++i) {
    std::vector<bool> bx(33), cy(33);
    for (auto&& v : bx) v = p(rng) < 0.3;
    for (auto&& v : cy) v = p(rng) < 0.8;
    factors.push_back({[bx](std::int64_t x) { return bool(bx[x]); }, [cy](std::int64_t y) { return bool(cy[y]); }});
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& [fb, fc] = factors[i];
    const auto a = SetIndicator::from_predicate(GridWindow(32, 32), [&](auto x, auto y) { return fb(x) && fc(y); });
    const double d = density(a);
    c.expect(blakley_roy_lhs(a) >= d * d * d - 1e-12, "product set " + std::to_string(i));
  }
  return c;
}

Check kernel_exactness() {
  Check c;
  auto exact = [&](const Kernel& k, const std::string& name) {
    __int128 sum = 0;
    for (std::int64_t j = -k.radius(); j <= k.radius(); ++j) {
      sum += k.numerator_at(j);
      c.expect(k.numerator_at(j) == k.numerator_at(-j), name + " asymmetric");
      c.expect(k.numerator_at(j) >= 0, name + " negative");
    }
    c.expect(sum == k.denominator(), name + " mass != 1");
    c.expect(k.exact_unit_mass() && k.exact_symmetric(), name + " self-check");
  };
  for (int h = 1; h <= 300; ++h) {
    const Kernel f = fejer(h + 0.5 * (h % 2));
    exact(f, "fejer " + std::to_string(h));
    for (std::int64_t q : {2, 3, 7, 16}) exact(stretch(f, q), "stretch " + std::to_string(h));
  }
  exact(compose(fejer(5), stretch(fejer(4), 3)), "compose");
  exact(compose(stretch(fejer(9), 2), fejer(30)), "compose");

  std::mt19937_64 rng(104);
  std::uniform_int_distribution<std::int64_t> len(1, 4096), hw(1, 200), lo(-50, 50);
  for (int i = 0; i < 100; ++i) {
    std::vector<Complex> v(static_cast<std::size_t>(len(rng)));
    for (auto& z : v) z = oracle::random_unit(rng);
    const Fiber f(lo(rng), std::move(v));
    Kernel k = fejer(static_cast<double>(hw(rng)));
    if (i % 3 == 0) k = stretch(k, 1 + i % 5);
    const Fiber a = convolve(f, k, ConvolveMethod::kDirect);
    const Fiber b = convolve(f, k, ConvolveMethod::kFft);
    c.expect(a.lo() == b.lo() && a.size() == b.size(), "convolution ranges differ");
    double err = 0;
    for (std::int64_t y = a.lo(); y <= a.hi(); ++y) err = std::max(err, std::abs(a.at(y) - b.at(y)));
    c.expect(err <= 1e-9, "direct vs FFT fiber " + std::to_string(i));
  }
  return c;
}

Check gowers_cross() {
  Check c;
  const Fiber pair = Fiber::indicator(1, 2);
  c.expect(gowers_power(pair, GowersOrder(2)) == 6.0, "U2 power of {1,2}");
  c.expect(gowers_power(pair, GowersOrder(3)) == 8.0, "U3 power of {1,2}");
  c.expect(std::abs(oracle::gowers_power(pair.values(), 1, 2) - Complex(6)) == 0.0, "U2 oracle");
  c.expect(std::abs(oracle::gowers_power(pair.values(), 1, 3) - Complex(8)) == 0.0, "U3 oracle");

  std::mt19937_64 rng(105);
  std::uniform_int_distribution<int> len(1, 64);
  for (int i = 0; i < 20; ++i) {
    const int l = len(rng);
    std::vector<Complex> v(static_cast<std::size_t>(l));
    for (auto& z : v) z = oracle::random_unit(rng);
    // Fourth moment of the transform on a grid fine enough to be exact.
    const int k = 4 * l;
    double m4 = 0;
    for (int t = 0; t < k; ++t) {
      Complex s{};
      for (int y = 0; y < l; ++y) s += v[static_cast<std::size_t>(y)] * oracle::e(-static_cast<double>(t) * y / k);
      m4 += std::pow(std::abs(s), 4);
    }
    m4 /= k;
    const Fiber f(1, v);
    const double direct = gowers_power(f, GowersOrder(2));
    const double fft = gowers_u2_power_fft(f);
    c.expect(std::abs(direct - m4) <= 1e-6 * std::max(1.0, m4), "direct U2 vs moment, fiber " + std::to_string(i));
    c.expect(std::abs(fft - m4) <= 1e-6 * std::max(1.0, m4), "FFT U2 vs moment, fiber " + std::to_string(i));
  }
  return c;
}

Check major_arcs() {
  Check c;
  std::mt19937_64 rng(106);
  std::uniform_int_distribution<std::int64_t> qd(1, 20);
  std::uniform_real_distribution<double> th(-5.0, 5.0);
  const double s = 1e4;
  for (int i = 0; i < 100; ++i) {
    const std::int64_t q0 = qd(rng);
    std::int64_t a = std::uniform_int_distribution<std::int64_t>(0, q0 - 1)(rng);
    const long double alpha = static_cast<long double>(a) / q0 + th(rng) / s;
    const auto cert = rationalize(Frequency(alpha), 100, s);
    c.expect(cert.has_value(), "planted " + std::to_string(i) + " not certified");
    if (cert) {
      c.expect(cert->q() <= 100 && cert->achieved() <= 100.0, "certificate bound");
      const double recheck = torus_norm(cert->q() * Frequency(alpha).value()) * s;
      c.expect(recheck <= 100.0, "certificate recheck");
    }
  }
  int found = 0;
  for (std::int64_t m = 2; found < 20; ++m) {
    const auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m)));
    if (r * r == m) continue;
    ++found;
    c.expect(!rationalize(Frequency(std::sqrt(static_cast<long double>(m))), 5, 1e6).has_value(),
             "sqrt(" + std::to_string(m) + ") certified");
  }
  return c;
}

Check energy_stripes() {
  Check c;
  for (std::int64_t r : {2, 3}) {
    const auto a = SetIndicator::from_predicate(GridWindow(8, 4096), [r](auto, auto y) { return y % r == 0; });
    const auto f = DenseFunction::from_indicator(a);
    auto cfg = IncrementConfig::defaults(0.125);
    cfg.m_shrink = 0.75;
    const auto t = energy_increment_run(f, f, f, cfg, a.window());
    const std::string tag = "r=" + std::to_string(r) + ": ";
    c.expect(t.states.size() == 2, tag + std::to_string(t.states.size()) + " stages");
    if (t.states.size() < 2) continue;
    c.expect(t.states[0].accepted_q_tilde == r, tag + "stage 0 picked q~=" + std::to_string(t.states[0].accepted_q_tilde));
    c.expect(t.termination == Termination::kIrregularitySmall, tag + termination_name(t.termination));
    c.expect(t.final_state().stage == 1, tag + "final stage");
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      const auto& s = t.states[i];
      c.expect(static_cast<double>(s.q * s.m) <= 0.125 * 64.0, tag + "q*M exceeds eps sqrt(N2)");
      if (i > 0) c.expect(s.energy > t.states[i - 1].energy, tag + "energy not increasing");
    }
  }
  return c;
}

Check popular_verdicts() {
  Check c;
  for (std::int64_t n : {10, 32, 64}) {
    const auto a = SetIndicator::from_predicate(GridWindow(n, n), [](auto, auto) { return true; });
    const std::string tag = "N=" + std::to_string(n) + ": ";
    const auto bf = brute_force_best_difference(a, IntInterval{-(n - 1), n - 1});
    c.expect(bf.d == 1 && bf.count == (n - 1) * (n - 1), tag + "brute force");
    const auto r = popular_difference_search(a, 0.5, IncrementConfig::defaults(0.5));
    c.expect(r.best_d == 1 && r.best_count == (n - 1) * (n - 1), tag + "search best");
    for (double eps : {0.05, 0.1, 0.2, 0.3}) {
      const auto v = verify_2d_threshold(a, eps);
      const double expect = static_cast<double>((n - 1) * (n - 1)) - (1.0 - eps) * static_cast<double>(n * n);
      c.expect(std::abs(v.margin - expect) <= 1e-9, tag + "margin");
      c.expect(v.holds == (expect >= 0), tag + "verdict");
      c.expect(v.witness_d == 1 && v.count == (n - 1) * (n - 1), tag + "witness");
    }
  }
  const auto empty = verify_2d_threshold(SetIndicator(GridWindow(10, 10)), 0.1);
  c.expect(empty.holds && empty.count == 0 && std::abs(empty.margin - 10.0) <= 1e-9, "empty set");
  const std::vector<Point> one{{3, 3}};
  const auto single = verify_2d_threshold(indicator_from_points(one, GridWindow(5, 5)), 0.1);
  const double th = (std::pow(1.0 / 25, 3) - 0.1) * 25;
  c.expect(single.holds && single.count == 0 && std::abs(single.threshold - th) <= 1e-12, "singleton");
  const auto sbf = brute_force_best_difference(indicator_from_points(one, GridWindow(5, 5)), IntInterval{-4, 4});
  c.expect(sbf.d == 1 && sbf.count == 0, "singleton brute force");
  return c;
}

Check phase_counterexample() {
  Check c;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (std::int64_t n : {2, 5, 8}) {
      GeneratorSpec g;
      g.kind = GeneratorKind::kRandomPhaseTriple;
      g.n = n;
      g.seed = seed;
      const auto t = generate_triple(g);
      const Box box = t[0].box();
      for (std::int64_t x = 1; x <= n; ++x)
        for (std::int64_t y = 1; y <= n * n; ++y)
          for (std::int64_t d = -(n - 1); d <= n - 1; ++d) {
            if (!box.contains(x + d, y) || !box.contains(x, y + d * d)) continue;
            const Complex prod = t[0].at(x, y) * t[1].at(x + d, y) * t[2].at(x, y + d * d);
            c.expect(prod == Complex(1.0), "product identity fails");
          }
      const auto ones = DenseFunction::from_fn(box, [](auto, auto) { return Complex(1.0); }, true);
      const GridWindow w(n, n * n);
      const CountingParams p{n, 1, 0, w};
      c.expect(rel_err(lambda(t[0], t[1], t[2], p), lambda(ones, ones, ones, p)) <= 1e-9, "lambda mismatch");
    }
  }
  return c;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Check reproducibility() {
  Check c;
  const auto root = std::filesystem::temp_directory_path() / "nlroth_acceptance_repro";
  std::vector<ExperimentConfig> cfgs;
  GeneratorSpec dense;
  dense.kind = GeneratorKind::kRandomDensity;
  dense.n1 = 16;
  dense.n2 = 256;
  dense.delta = 0.5;
  dense.seed = 2024;
  GeneratorSpec square = dense;
  square.n2 = 16;
  GeneratorSpec phase;
  phase.kind = GeneratorKind::kRandomPhaseTriple;
  phase.n = 8;
  phase.seed = 2024;
  auto add = [&](GeneratorSpec g, Task t, std::optional<double> eps) {
    ExperimentConfig cfg;
    cfg.generator = std::move(g);
    cfg.task = t;
    cfg.epsilon = eps;
    cfgs.push_back(cfg);
  };
  add(dense, Task::kCount, std::nullopt);
  add(dense, Task::kGowers, std::nullopt);
  add(dense, Task::kWeyl, std::nullopt);
  add(phase, Task::kDual, std::nullopt);
  add(dense, Task::kDual, std::nullopt);
  add(dense, Task::kEnergy, 0.25);
  add(phase, Task::kEnergy, 0.25);
  add(dense, Task::kPopdiff, 0.25);
  add(square, Task::kVerify, 0.1);

  for (auto cfg : cfgs) {
    std::optional<std::uint64_t> ref;
    for (unsigned threads : {1U, 2U, 8U}) {
      for (int rerun = 0; rerun < 2; ++rerun) {
        const auto dir = root / (std::string(task_name(cfg.task)) + "_" + std::to_string(threads));
        std::filesystem::remove_all(dir);
        cfg.threads = threads;
        cfg.output_dir = dir.string();
        const auto res = run_experiment(cfg);
        std::uint64_t h = fnv1a(res.json);
        h = fnv1a(res.csv, h);
        for (const auto& f : res.files) h = fnv1a(slurp(dir / f), h);
        if (!ref) ref = h;
        c.expect(*ref == h, std::string(task_name(cfg.task)) + " differs at " + std::to_string(threads) + " threads");
      }
    }
  }
  // gen output
  for (const GeneratorSpec& g : {dense, phase}) {
    std::optional<std::uint64_t> ref;
    for (int i = 0; i < 3; ++i) {
      std::ostringstream ss;
      if (g.kind == GeneratorKind::kRandomPhaseTriple) {
        for (const auto& f : generate_triple(g)) write_function(ss, f);
      } else {
        write_set(ss, generate_set(g));
      }
      const auto h = fnv1a(ss.str());
      if (!ref) ref = h;
      c.expect(*ref == h, "gen output differs");
    }
  }
  std::filesystem::remove_all(root);
  return c;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Check (*run)();
};

}  // namespace

int main() {
  const Criterion all[] = {
      {1, "counting oracle equivalence", 10, counting_oracle},
      {2, "dual identities", 5, dual_identities},
      {3, "Blakley-Roy lower bound", 5, blakley_roy},
      {4, "kernel exactness and FFT agreement", 5, kernel_exactness},
      {5, "Gowers cross-checks", 10, gowers_cross},
      {6, "major-arc certificates", 2, major_arcs},
      {7, "energy increment on stripes", 60, energy_stripes},
      {8, "popular-difference verdicts", 30, popular_verdicts},
      {9, "random phase counterexample", 10, phase_counterexample},
      {10, "reproducibility across threads", 60, reproducibility},
  };
  int failures = 0;
  for (const auto& cr : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.ok && secs >= cr.budget_s) {
      c.ok = false;
      c.why = "over the " + std::to_string(static_cast<int>(cr.budget_s)) + " s budget";
    }
    std::printf("[%s] %d %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, secs, c.ok ? "" : ": ",
                c.why.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
