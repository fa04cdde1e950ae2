#pragma once

#include <vector>

#include "rsfutures/rng.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

// Generator of a continuous-time Markov chain on states 1..M. Off-diagonal
// entries are jump intensities; rows sum to zero. Stored exactly as given,
// never renormalized.
struct GeneratorMatrix {
  Matrix rates;
  Index size() const { return rates.rows(); }
};

GeneratorMatrix validate_generator(const Matrix& rates);

// exp(rates * dt). Rows sum to one; entries are probabilities.
Matrix transition_matrix(const GeneratorMatrix& gen, double dt);

// Chain generators under the physical and the pricing measure. Both must have
// the same transition structure: an intensity may not vanish under one measure
// while being positive under the other.
struct MeasurePair {
  GeneratorMatrix physical;
  GeneratorMatrix risk_neutral;
  Index size() const { return physical.size(); }
};

MeasurePair make_measure_pair(const Matrix& physical_rates,
                              const Matrix& risk_neutral_rates);

struct RegimeJump {
  double time;
  int state;  // state entered at `time`, 1-based
};

// Right-continuous piecewise-constant trajectory on [t0, t1].
struct RegimePath {
  double t0 = 0.0;
  double t1 = 0.0;
  int initial_state = 1;
  std::vector<RegimeJump> jumps;  // strictly increasing times in (t0, t1]

  int state_at(double t) const;
};

// Embedded-chain sampling: exponential holding times, next state drawn from
// the normalized off-diagonal intensities of the current row.
RegimePath sample_path(const GeneratorMatrix& gen, double t0, double t1,
                       int initial_state, Rng& rng);

}  // namespace rsf
