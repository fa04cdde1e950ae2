#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rsfutures/errors.hpp"
#include "rsfutures/market_models.hpp"

using namespace rsf;

namespace {

MeasurePair pair_2x2() {
  Matrix q(2, 2), qt(2, 2);
  q << -2, 2, 4, -4;
  qt << -1, 1, 3, -3;
  return make_measure_pair(q, qt);
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("gbm spec wires coefficients through drift and vol") {
  RegimeModelSpec spec = make_gbm_spec(vec2(-0.2, 0.2), vec2(0.2, 0.3),
                                       vec2(0.1, 0.3), pair_2x2());
  CHECK(spec.regimes() == 2);
  CHECK(drift_q(spec, 5.0, 1) == doctest::Approx(-0.2));
  CHECK(drift_q(spec, -5.0, 2) == doctest::Approx(0.2));
  CHECK(drift_p(spec, 0.0, 1) == doctest::Approx(-0.2 + 0.1 * 0.2));
  CHECK(drift_p(spec, 0.0, 2) == doctest::Approx(0.2 + 0.3 * 0.3));
  CHECK(vol(spec, 1) == doctest::Approx(0.2));
  CHECK(vol(spec, 2) == doctest::Approx(0.3));
}

TEST_CASE("xou spec drift reverts toward theta") {
  RegimeModelSpec spec =
      make_xou_spec(vec2(1.0, 2.0), vec2(2.5, 2.7), vec2(0.2, 0.3),
                    vec2(0.1, 0.3), pair_2x2());
  CHECK(drift_q(spec, 2.5, 1) == doctest::Approx(0.0));
  CHECK(drift_q(spec, 2.0, 1) == doctest::Approx(0.5));
  CHECK(drift_q(spec, 3.7, 2) == doctest::Approx(-2.0));
  CHECK(drift_p(spec, 2.5, 1) == doctest::Approx(0.1 * 0.2));
}

TEST_CASE("spec construction validates sizes and signs") {
  MeasurePair mp = pair_2x2();
  CHECK_THROWS_AS(make_gbm_spec(Vector::Zero(3), vec2(0.2, 0.3),
                                vec2(0.1, 0.3), mp),
                  ValidationError);
  CHECK_THROWS_AS(make_gbm_spec(vec2(0.1, 0.1), vec2(0.2, -0.3),
                                vec2(0.1, 0.3), mp),
                  ValidationError);
  CHECK_THROWS_AS(make_xou_spec(vec2(-1.0, 2.0), vec2(2.5, 2.7),
                                vec2(0.2, 0.3), vec2(0.1, 0.3), mp),
                  ValidationError);
}

TEST_CASE("regime access is one-based and bounds-checked") {
  RegimeModelSpec spec = make_gbm_spec(vec2(-0.2, 0.2), vec2(0.2, 0.3),
                                       vec2(0.1, 0.3), pair_2x2());
  CHECK(regime_index(spec, 1) == 0);
  CHECK(regime_index(spec, 2) == 1);
  CHECK_THROWS_AS(regime_index(spec, 0), RegimeOutOfRange);
  CHECK_THROWS_AS(regime_index(spec, 3), RegimeOutOfRange);
  CHECK_THROWS_AS(vol(spec, 5), RegimeOutOfRange);
}
