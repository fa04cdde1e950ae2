#pragma once

#include <Eigen/Dense>

#include <complex>

namespace rsf {

template <class Scalar>
using mat_t = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using vec_t = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = mat_t<double>;
using Vector = vec_t<double>;
using Complex = std::complex<double>;
using CVector = vec_t<Complex>;
using Index = Eigen::Index;

}  // namespace rsf
