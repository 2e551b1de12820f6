#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlroth/grid.hpp"

namespace nlroth {

struct EnergyState {
  std::int64_t stage = 0;
  std::int64_t q = 1;
  std::int64_t m = 1;
  double energy = 0;
  double irregularity = 0;
  std::int64_t accepted_q_tilde = 0;  ///< 0 when no step was taken from this state
};

/// Knobs of the increment loop. Defaults follow epsilon:
/// eta = eps^4, q_tilde_max = ceil(eps^-2), m_shrink = eps^2, max_stages = ceil(1/eta) + 2.
struct IncrementConfig {
  double epsilon = 0.25;
  double eta = 0;
  std::int64_t q_tilde_max = 0;
  double m_shrink = 0;
  std::int64_t max_stages = 0;

  static IncrementConfig defaults(double epsilon);
  /// Throws DomainError on out-of-range fields.
  void validate() const;
};

enum class Termination { kIrregularitySmall, kWindowExhausted, kStageCap };
const char* termination_name(Termination t);

struct IncrementTrace {
  std::vector<EnergyState> states;
  Termination termination = Termination::kIrregularitySmall;

  const EnergyState& final_state() const { return states.back(); }
};

/// sum_x || f2(x, .) * mu_{q^2, M^2} ||_2^2.
double energy(const DenseFunction& f2, std::int64_t q, std::int64_t m);

/// y -> f2(x,y) - (f2(x, .) * mu_{q^2, M^2})(y), on the smoothed support.
DenseFunction bracket(const DenseFunction& f2, std::int64_t q, std::int64_t m);

/// |sum_{x,y,d} mu_w(d) f0(x,y) f1(x+qd,y) [f2(x,y+q^2 d^2) - s(x,y+q^2 d^2)]|
/// with s the smoothed f2 of bracket(), (x,y) over the box of f0.
double irregularity_at_width(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
                             std::int64_t q, std::int64_t m, std::int64_t width);

/// irregularity_at_width with width floor(eps*M); DomainError if that is 0.
double irregularity(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2, std::int64_t q,
                    std::int64_t m, double epsilon);

struct SpectralCandidate {
  std::int64_t q_tilde = 1;
  double score = 0;
};

/// Vertical scan of the bracket fibers on the q_tilde_max major arcs, top
/// frequencies rationalised to half a Fourier bin; best score per q_tilde,
/// sorted by descending score then ascending q_tilde.
std::vector<SpectralCandidate> spectral_candidate(const DenseFunction& f2, std::int64_t q, std::int64_t m,
                                                  const IncrementConfig& cfg);

/// Iterates from (q, M) = (1, floor(eps sqrt(N2))) until the irregularity is at
/// most eps N1 N2, no stride refinement gains eta N1 N2 energy, or max_stages.
/// Within the loop the short kernel width is max(1, floor(eps M)).
IncrementTrace energy_increment_run(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
                                    const IncrementConfig& cfg, const GridWindow& window);

std::string trace_to_json(const IncrementTrace& trace);

}  // namespace nlroth
