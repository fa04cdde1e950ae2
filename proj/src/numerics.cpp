#include "rsfutures/numerics.hpp"

#include <cmath>
#include <numbers>

namespace rsf {

namespace {

bool power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Vector solve_tridiagonal(const TridiagonalSystem& sys) {
  const Index n = sys.diag.size();
  if (n == 0) throw NonSquare("solve_tridiagonal: empty system");
  if (sys.lower.size() != n - 1 || sys.upper.size() != n - 1 ||
      sys.rhs.size() != n)
    throw NonSquare("solve_tridiagonal: band/rhs length mismatch");

  Vector c(n);  // modified superdiagonal
  Vector d(n);  // modified rhs
  auto pivot_check = [&](double p, Index row) {
    double scale = std::abs(sys.diag[row]);
    if (row > 0) scale += std::abs(sys.lower[row - 1]);
    if (row + 1 < n) scale += std::abs(sys.upper[row]);
    if (!(std::abs(p) > 1e-14 * scale))
      throw ZeroPivot("solve_tridiagonal: zero pivot at row " +
                      std::to_string(row));
  };

  double p = sys.diag[0];
  pivot_check(p, 0);
  c[0] = (n > 1) ? sys.upper[0] / p : 0.0;
  d[0] = sys.rhs[0] / p;
  for (Index i = 1; i < n; ++i) {
    p = sys.diag[i] - sys.lower[i - 1] * c[i - 1];
    pivot_check(p, i);
    c[i] = (i + 1 < n) ? sys.upper[i] / p : 0.0;
    d[i] = (sys.rhs[i] - sys.lower[i - 1] * d[i - 1]) / p;
  }
  for (Index i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
  return d;
}

void fft_inplace(CVector& data, bool inverse) {
  const Index n = data.size();
  if (!power_of_two(n))
    throw LengthNotPowerOfTwo("fft: length " + std::to_string(n) +
                              " is not a power of two");
  for (Index i = 1, j = 0; i < n; ++i) {
    Index bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (Index len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    for (Index i = 0; i < n; i += len) {
      for (Index k = 0; k < len / 2; ++k) {
        const Complex w = std::polar(1.0, ang * static_cast<double>(k));
        const Complex u = data[i + k];
        const Complex v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) data /= static_cast<double>(n);
}

CVector dft(const CVector& x) {
  CVector y = x;
  fft_inplace(y, false);
  return y;
}

CVector idft(const CVector& x) {
  CVector y = x;
  fft_inplace(y, true);
  return y;
}

}  // namespace rsf
