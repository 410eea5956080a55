#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>

namespace ncm {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default tolerances shared by the numerical modules.
struct Tolerances {
  double psd = 1e-10;   // relative to the largest Gram eigenvalue
  double null = 1e-10;  // numerical rank threshold, relative
};

/// Eigendecomposition of a Hermitian matrix, ascending eigenvalues.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};

inline HermitianEigen hermitian_eigen(const Matrix& a) {
  // symmetrize first; assembled Grams can carry last-bit asymmetry
  Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Spectral (operator 2-) norm.
inline double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline double hermitian_deviation(const Matrix& a) {
  return a.size() == 0 ? 0.0 : (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Rounds a double to the given number of significant digits (decimal, via
/// the C formatter so the result is stable across platforms).
inline double round_significant(double x, int digits) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // drop negative zero
}

}  // namespace ncm
