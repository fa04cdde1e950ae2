#include "rsfutures/regime_chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsfutures/errors.hpp"
#include "rsfutures/numerics.hpp"

namespace rsf {

GeneratorMatrix validate_generator(const Matrix& rates) {
  if (rates.rows() != rates.cols() || rates.rows() == 0)
    throw NonSquare("generator must be a non-empty square matrix");
  const Index m = rates.rows();
  for (Index i = 0; i < m; ++i) {
    double scale = 1.0;
    for (Index j = 0; j < m; ++j) {
      if (i != j && rates(i, j) < 0.0)
        throw NegativeOffDiagonal("generator entry (" + std::to_string(i + 1) +
                                  "," + std::to_string(j + 1) +
                                  ") is negative");
      scale = std::max(scale, std::abs(rates(i, j)));
    }
    if (std::abs(rates.row(i).sum()) > 1e-12 * scale)
      throw RowSumNonzero("generator row " + std::to_string(i + 1) +
                          " does not sum to zero");
  }
  return GeneratorMatrix{rates};
}

Matrix transition_matrix(const GeneratorMatrix& gen, double dt) {
  if (!(dt >= 0.0))
    throw ValidationError("transition_matrix: dt must be >= 0");
  return matrix_exponential<double>(gen.rates * dt);
}

MeasurePair make_measure_pair(const Matrix& physical_rates,
                              const Matrix& risk_neutral_rates) {
  GeneratorMatrix p = validate_generator(physical_rates);
  GeneratorMatrix q = validate_generator(risk_neutral_rates);
  if (p.size() != q.size())
    throw NonSquare("measure pair: generators differ in size");
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = 0; j < p.size(); ++j) {
      if (i == j) continue;
      const bool zp = p.rates(i, j) == 0.0;
      const bool zq = q.rates(i, j) == 0.0;
      if (zp != zq)
        throw MeasureInequivalence(
            "intensity (" + std::to_string(i + 1) + "," +
            std::to_string(j + 1) +
            ") vanishes under one measure but not the other");
    }
  return MeasurePair{std::move(p), std::move(q)};
}

int RegimePath::state_at(double t) const {
  if (!(t >= t0 && t <= t1))
    throw ValidationError("state_at: time outside the path interval");
  int s = initial_state;
  for (const auto& j : jumps) {
    if (j.time <= t)
      s = j.state;
    else
      break;
  }
  return s;
}

RegimePath sample_path(const GeneratorMatrix& gen, double t0, double t1,
                       int initial_state, Rng& rng) {
  const Index m = gen.size();
  if (initial_state < 1 || initial_state > m)
    throw RegimeOutOfRange("sample_path: initial state out of range");
  if (!(t1 >= t0)) throw ValidationError("sample_path: t1 must be >= t0");

  RegimePath path;
  path.t0 = t0;
  path.t1 = t1;
  path.initial_state = initial_state;

  double t = t0;
  Index i = initial_state - 1;
  for (;;) {
    const double rate = -gen.rates(i, i);
    if (!(rate > 0.0)) break;  // absorbing state
    t += rng.exponential(rate);
    if (t > t1) break;
    const double u = rng.uniform() * rate;
    double acc = 0.0;
    Index next = i;
    for (Index j = 0; j < m; ++j) {
      if (j == i) continue;
      const double q = gen.rates(i, j);
      if (q <= 0.0) continue;
      acc += q;
      next = j;
      if (u <= acc) break;
    }
    path.jumps.push_back({t, static_cast<int>(next) + 1});
    i = next;
  }
  return path;
}

}  // namespace rsf
