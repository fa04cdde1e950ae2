#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "rsfutures/errors.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

namespace detail {

// Diagonal Pade coefficients for exp, orders 3..13, and the matching 1-norm
// switching thresholds (Higham 2005).
inline constexpr double pade3[] = {120.0, 60.0, 12.0, 1.0};
inline constexpr double pade5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
inline constexpr double pade7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                   25200.0,    1512.0,    56.0,      1.0};
inline constexpr double pade9[] = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
inline constexpr double pade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

inline constexpr double theta3 = 1.495585217958292e-2;
inline constexpr double theta5 = 2.539398330063230e-1;
inline constexpr double theta7 = 9.504178996162932e-1;
inline constexpr double theta9 = 2.097847961257068e0;
inline constexpr double theta13 = 5.371920351148152e0;

template <class Scalar, int N>
mat_t<Scalar> pade_solve(const mat_t<Scalar>& u, const mat_t<Scalar>& v) {
  return (v - u).partialPivLu().solve(v + u);
}

// U = A * sum b_{2k+1} A^{2k}, V = sum b_{2k} A^{2k} for low orders.
template <class Scalar>
mat_t<Scalar> pade_low(const mat_t<Scalar>& a, const double* b, int order) {
  const Index n = a.rows();
  const mat_t<Scalar> a2 = a * a;
  mat_t<Scalar> even = mat_t<Scalar>::Identity(n, n) * Scalar(b[0]);
  mat_t<Scalar> odd = mat_t<Scalar>::Identity(n, n) * Scalar(b[1]);
  mat_t<Scalar> pow = mat_t<Scalar>::Identity(n, n);
  for (int k = 2; k <= order; k += 2) {
    pow = pow * a2;
    even += Scalar(b[k]) * pow;
    if (k + 1 <= order) odd += Scalar(b[k + 1]) * pow;
  }
  const mat_t<Scalar> u = a * odd;
  return pade_solve<Scalar, 0>(u, even);
}

template <class Scalar>
mat_t<Scalar> pade13_scaled(const mat_t<Scalar>& a) {
  const double* b = pade13;
  const Index n = a.rows();
  const mat_t<Scalar> a2 = a * a;
  const mat_t<Scalar> a4 = a2 * a2;
  const mat_t<Scalar> a6 = a2 * a4;
  const mat_t<Scalar> id = mat_t<Scalar>::Identity(n, n);
  const mat_t<Scalar> u =
      a * (a6 * (Scalar(b[13]) * a6 + Scalar(b[11]) * a4 + Scalar(b[9]) * a2) +
           Scalar(b[7]) * a6 + Scalar(b[5]) * a4 + Scalar(b[3]) * a2 +
           Scalar(b[1]) * id);
  const mat_t<Scalar> v =
      a6 * (Scalar(b[12]) * a6 + Scalar(b[10]) * a4 + Scalar(b[8]) * a2) +
      Scalar(b[6]) * a6 + Scalar(b[4]) * a4 + Scalar(b[2]) * a2 +
      Scalar(b[0]) * id;
  return pade_solve<Scalar, 0>(u, v);
}

}  // namespace detail

// exp(a) by Pade approximation with scaling and squaring.
template <class Scalar>
mat_t<Scalar> matrix_exponential(const mat_t<Scalar>& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw NonSquare("matrix_exponential: matrix must be square and non-empty");
  if (!a.allFinite())
    throw NonFinite("matrix_exponential: input has non-finite entries");

  const double eta = a.cwiseAbs().colwise().sum().maxCoeff();
  using detail::theta13;
  if (eta <= detail::theta3) return detail::pade_low(a, detail::pade3, 3);
  if (eta <= detail::theta5) return detail::pade_low(a, detail::pade5, 5);
  if (eta <= detail::theta7) return detail::pade_low(a, detail::pade7, 7);
  if (eta <= detail::theta9) return detail::pade_low(a, detail::pade9, 9);

  int s = 0;
  if (eta > theta13) s = static_cast<int>(std::ceil(std::log2(eta / theta13)));
  mat_t<Scalar> scaled = a / Scalar(std::pow(2.0, s));
  mat_t<Scalar> e = detail::pade13_scaled(scaled);
  for (int k = 0; k < s; ++k) e = e * e;
  if (!e.allFinite())
    throw NonFinite("matrix_exponential: result has non-finite entries");
  return e;
}

// integral_0^tau exp(a s) v ds, via the top-right block of the exponential of
// the augmented matrix [[a, v], [0, 0]]. Exact for singular a; no inverse.
template <class Scalar>
vec_t<Scalar> integrated_matexp_action(const mat_t<Scalar>& a,
                                       const vec_t<Scalar>& v, Scalar tau) {
  if (a.rows() != a.cols())
    throw NonSquare("integrated_matexp_action: matrix must be square");
  if (a.rows() != v.size())
    throw NonSquare("integrated_matexp_action: vector length mismatch");
  if (!(tau >= Scalar(0)))
    throw NonFinite("integrated_matexp_action: tau must be >= 0");
  const Index n = a.rows();
  mat_t<Scalar> b = mat_t<Scalar>::Zero(n + 1, n + 1);
  b.topLeftCorner(n, n) = a;
  b.topRightCorner(n, 1) = v;
  const mat_t<Scalar> e = matrix_exponential<Scalar>(b * tau);
  return e.topRightCorner(n, 1);
}

struct TridiagonalSystem {
  Vector lower;  // length n-1, subdiagonal of rows 1..n-1
  Vector diag;   // length n
  Vector upper;  // length n-1, superdiagonal of rows 0..n-2
  Vector rhs;    // length n
};

// Thomas algorithm. Throws ZeroPivot when elimination meets a pivot that is
// zero relative to its row scale.
Vector solve_tridiagonal(const TridiagonalSystem& sys);

// Radix-2 FFT, length must be a power of two.
void fft_inplace(CVector& data, bool inverse);
CVector dft(const CVector& x);
CVector idft(const CVector& x);

}  // namespace rsf
