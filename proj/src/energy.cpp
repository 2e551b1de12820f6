#include "nlroth/energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "nlroth/errors.hpp"
#include "nlroth/expsums.hpp"
#include "nlroth/format.hpp"
#include "nlroth/kernels.hpp"
#include "nlroth/parallel.hpp"

namespace nlroth {

namespace {

// Frequencies from the scan that are rationalised into candidates.
constexpr std::size_t kScanTop = 16;

Kernel smoothing_kernel(std::int64_t q, std::int64_t m) {
  if (q < 1 || m < 1) throw DomainError("energy requires q >= 1 and M >= 1");
  return stretch(fejer(static_cast<double>(m * m)), q * q);
}

}  // namespace

IncrementConfig IncrementConfig::defaults(double epsilon) {
  IncrementConfig c;
  c.epsilon = epsilon;
  c.eta = std::pow(epsilon, 4);
  c.q_tilde_max = static_cast<std::int64_t>(std::ceil(1.0 / (epsilon * epsilon) - 1e-9));
  c.m_shrink = epsilon * epsilon;
  c.max_stages = static_cast<std::int64_t>(std::ceil(1.0 / c.eta - 1e-9)) + 2;
  return c;
}

void IncrementConfig::validate() const {
  if (!(epsilon > 0 && epsilon <= 0.5)) throw DomainError("epsilon must lie in (0, 1/2]");
  if (!(eta > 0)) throw DomainError("gain threshold eta must be positive");
  if (q_tilde_max < 1) throw DomainError("q_tilde_max must be >= 1");
  if (!(m_shrink > 0 && m_shrink < 1)) throw DomainError("m_shrink must lie in (0, 1)");
  if (static_cast<double>(max_stages) < std::ceil(1.0 + 1.0 / eta - 1e-9))
    throw DomainError("max_stages must be at least ceil(1 + 1/eta)");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::kIrregularitySmall: return "irregularity_small";
    case Termination::kWindowExhausted: return "window_exhausted";
    case Termination::kStageCap: return "stage_cap";
  }
  return "unknown";
}

double energy(const DenseFunction& f2, std::int64_t q, std::int64_t m) {
  const Kernel k = smoothing_kernel(q, m);
  const Box& b = f2.box();
  if (b.empty()) return 0.0;
  const auto parts = parallel_map<double>(b.width(), [&](std::int64_t i) {
    const Fiber s = convolve(fiber(f2, b.x_lo + i), k);
    double acc = 0.0;
    for (const auto& v : s.values()) acc += std::norm(v);
    return acc;
  });
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

DenseFunction bracket(const DenseFunction& f2, std::int64_t q, std::int64_t m) {
  const Kernel k = smoothing_kernel(q, m);
  const Box& b = f2.box();
  if (b.empty()) return DenseFunction(Box{}, {}, false);
  const std::int64_t r = k.max_offset();
  const Box out{b.x_lo, b.x_hi, b.y_lo - r, b.y_hi + r};
  const std::int64_t h = out.height();
  std::vector<Complex> values(static_cast<std::size_t>(out.width() * h));
  parallel_for(out.width(), [&](std::int64_t i) {
    const Fiber f = fiber(f2, b.x_lo + i);
    const Fiber s = convolve(f, k);
    for (std::int64_t j = 0; j < h; ++j) {
      const std::int64_t y = out.y_lo + j;
      values[static_cast<std::size_t>(i * h + j)] = f.at(y) - s.at(y);
    }
  });
  return DenseFunction(out, std::move(values), false);
}

double irregularity_at_width(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
                             std::int64_t q, std::int64_t m, std::int64_t width) {
  if (width < 1) throw DomainError("irregularity kernel width must be >= 1");
  const DenseFunction g = bracket(f2, q, m);
  const Kernel mu = fejer(static_cast<double>(width));
  const Box& b0 = f0.box();
  if (b0.empty()) return 0.0;
  const std::int64_t r = mu.radius();
  const auto parts = parallel_map<Complex>(b0.width(), [&](std::int64_t i) {
    const std::int64_t x = b0.x_lo + i;
    Complex acc{};
    for (std::int64_t d = -r; d <= r; ++d) {
      const double w = mu.weights()[static_cast<std::size_t>(d + r)];
      const std::int64_t dy = q * q * d * d;
      Complex part{};
      for (std::int64_t y = b0.y_lo; y <= b0.y_hi; ++y) {
        const Complex a = f0.at(x, y);
        if (a == Complex{}) continue;
        part += a * f1.at(x + q * d, y) * g.at(x, y + dy);
      }
      acc += w * part;
    }
    return acc;
  });
  Complex total{};
  for (const auto& p : parts) total += p;
  return std::abs(total);
}

double irregularity(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2, std::int64_t q,
                    std::int64_t m, double epsilon) {
  const auto width = static_cast<std::int64_t>(std::floor(epsilon * static_cast<double>(m)));
  if (width < 1) throw DomainError("irregularity needs floor(eps*M) >= 1");
  return irregularity_at_width(f0, f1, f2, q, m, width);
}

std::vector<SpectralCandidate> spectral_candidate(const DenseFunction& f2, std::int64_t q, std::int64_t m,
                                                  const IncrementConfig& cfg) {
  const DenseFunction g = bracket(f2, q, m);
  if (g.box().empty()) return {};
  const auto len = static_cast<double>(g.box().height());
  const auto scan = fiber_correlation_scan(g, ScanDirection::kVertical, cfg.q_tilde_max, len, kScanTop);
  // Certify to within half a Fourier bin of the fiber length.
  const double cert_scale = 2.0 * static_cast<double>(cfg.q_tilde_max) * len;
  std::map<std::int64_t, double> best;
  for (const auto& e : scan) {
    if (!(e.score > 0)) continue;
    const auto cert = rationalize(e.freq, cfg.q_tilde_max, cert_scale);
    if (!cert) continue;
    auto [it, inserted] = best.emplace(cert->q(), e.score);
    if (!inserted) it->second = std::max(it->second, e.score);
  }
  std::vector<SpectralCandidate> out;
  for (const auto& [qt, s] : best) out.push_back({qt, s});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  return out;
}

IncrementTrace energy_increment_run(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
                                    const IncrementConfig& cfg, const GridWindow& window) {
  cfg.validate();
  if (window.n2() < 4) throw DomainError("energy increment needs N2 >= 4");
  const double eps = cfg.epsilon;
  const double root = std::sqrt(static_cast<double>(window.n2()));
  const auto m0 = static_cast<std::int64_t>(std::floor(eps * root));
  if (m0 < 1) throw DomainError("initial scale floor(eps*sqrt(N2)) must be >= 1");
  const double area = static_cast<double>(window.area());

  IncrementTrace trace;
  std::int64_t q = 1, m = m0;
  double e = energy(f2, q, m);
  for (std::int64_t stage = 0;; ++stage) {
    const std::int64_t width = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(eps * m)));
    const double irr = irregularity_at_width(f0, f1, f2, q, m, width);
    trace.states.push_back({stage, q, m, e, irr, 0});
    if (irr <= eps * area) {
      trace.termination = Termination::kIrregularitySmall;
      break;
    }
    if (stage + 1 >= cfg.max_stages) {
      trace.termination = Termination::kStageCap;
      break;
    }
    std::int64_t best_qt = 0, best_m = 0;
    double best_e = 0, best_gain = -1;
    for (const auto& c : spectral_candidate(f2, q, m, cfg)) {
      const auto shrink = static_cast<std::int64_t>(std::floor(cfg.m_shrink * static_cast<double>(m) /
                                                                static_cast<double>(c.q_tilde)));
      const auto cap = static_cast<std::int64_t>(std::floor(eps * root / static_cast<double>(q * c.q_tilde)));
      const std::int64_t mt = std::min(shrink, cap);
      if (mt < 2) continue;
      const double et = energy(f2, q * c.q_tilde, mt);
      if (et - e > best_gain) {
        best_gain = et - e;
        best_qt = c.q_tilde;
        best_m = mt;
        best_e = et;
      }
    }
    if (best_qt == 0 || best_gain < cfg.eta * area) {
      trace.termination = Termination::kWindowExhausted;
      break;
    }
    trace.states.back().accepted_q_tilde = best_qt;
    q *= best_qt;
    m = best_m;
    e = best_e;
  }
  return trace;
}

std::string trace_to_json(const IncrementTrace& trace) {
  nlohmann::ordered_json states = nlohmann::ordered_json::array();
  for (const auto& s : trace.states) {
    nlohmann::ordered_json j;
    j["stage"] = s.stage;
    j["q"] = s.q;
    j["M"] = s.m;
    j["energy"] = round12(s.energy);
    j["irregularity"] = round12(s.irregularity);
    if (s.accepted_q_tilde > 0)
      j["accepted_q_tilde"] = s.accepted_q_tilde;
    else
      j["accepted_q_tilde"] = nullptr;
    states.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["states"] = std::move(states);
  out["termination"] = termination_name(trace.termination);
  return out.dump(2);
}

}  // namespace nlroth
