#pragma once

// Truncated evaluation of the Herglotz and Cauchy transforms, the NC Szegő
// kernel and the μ-kernel at matrix points of the open row ball. Every value
// comes with a bound on the operator-norm truncation error.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ncmeasure/errors.hpp"
#include "ncmeasure/linalg.hpp"
#include "ncmeasure/measures.hpp"

namespace ncm {

/// A d-tuple of n×n matrices.
struct MatrixPoint {
  std::vector<Matrix> z;

  int alphabet() const { return static_cast<int>(z.size()); }
  Eigen::Index size() const { return z.empty() ? 0 : z.front().rows(); }

  /// ||Σ Z_j Z_j*||^{1/2}
  double row_norm() const {
    Matrix s = Matrix::Zero(size(), size());
    for (const auto& zj : z) s += zj * zj.adjoint();
    return std::sqrt(op_norm(s));
  }

  static MatrixPoint scalars(std::initializer_list<cplx> values) {
    MatrixPoint p;
    for (cplx v : values) p.z.push_back(Matrix::Constant(1, 1, v));
    return p;
  }
};

struct TransformValue {
  Matrix value;
  double tail_bound = 0.0;
};

namespace detail {

inline void check_point(const MatrixPoint& p, int d) {
  if (p.alphabet() != d)
    throw SpecError("matrix point has " + std::to_string(p.alphabet()) + " components, expected " + std::to_string(d));
  for (const auto& zj : p.z)
    if (zj.rows() != p.size() || zj.cols() != p.size()) throw SpecError("matrix point components must be square of equal size");
  const double r = p.row_norm();
  if (!(r < 1.0)) throw DomainError("matrix point row norm " + std::to_string(r) + " is not below 1");
}

/// Σ_{|α|<=N} c_α Z^α by nested evaluation over appended letters:
/// P(w) = c_w I + Σ_k Z_k P(w k).
inline Matrix word_series(const WordIndex& idx, const std::vector<cplx>& coeffs, const MatrixPoint& p, int degree) {
  const Eigen::Index n = p.size();
  auto eval = [&](auto&& self, std::size_t i) -> Matrix {
    Matrix acc = coeffs[i] * Matrix::Identity(n, n);
    if (idx[i].size() < static_cast<std::size_t>(degree))
      for (int k = 1; k <= idx.alphabet(); ++k)
        acc.noalias() += p.z[static_cast<std::size_t>(k - 1)] * self(self, idx.append_index(i, k));
    return acc;
  };
  return eval(eval, 0);
}

inline double geometric_tail(double r, int degree) { return std::pow(r, degree + 1) / (1.0 - r); }

}  // namespace detail

/// Majorant M >= sup_α |μ(L^α)| used by the tail bounds: sqrt(μ(1) ||gram(μ,1)||).
inline double moment_majorant(const NcMeasure& mu) {
  return std::sqrt(mu.mass() * op_norm(assemble_gram(mu, std::min(1, mu.budget()))));
}

/// H_μ(Z) ≈ μ(1) I + 2 Σ_{1<=|α|<=N} conj(μ(L^α)) Z^α.
inline TransformValue herglotz(const NcMeasure& mu, const MatrixPoint& z, int degree) {
  detail::check_point(z, mu.alphabet());
  if (degree > mu.budget()) throw BudgetError("Herglotz degree exceeds the moment budget");
  const WordIndex idx(mu.alphabet(), degree);
  std::vector<cplx> c(idx.size());
  c[0] = mu.mass();
  for (std::size_t i = 1; i < idx.size(); ++i) c[i] = 2.0 * std::conj(mu.moment_at(i));
  return {detail::word_series(idx, c, z, degree),
          2.0 * moment_majorant(mu) * detail::geometric_tail(z.row_norm(), degree)};
}

/// Cauchy transform of the class of p: Σ_{|α|<=N} μ(L^{α*} p(L)) Z^α.
inline TransformValue cauchy(const NcMeasure& mu, const Polynomial& p, const MatrixPoint& z, int degree) {
  detail::check_point(z, mu.alphabet());
  int p_degree = 0;
  double p_l1 = 0.0;
  for (const auto& [w, c] : p) {
    p_degree = std::max(p_degree, static_cast<int>(w.size()));
    p_l1 += std::abs(c);
  }
  if (std::max(degree, p_degree) > mu.budget()) throw BudgetError("Cauchy transform needs moments beyond the budget");
  const WordIndex idx(mu.alphabet(), degree);
  std::vector<cplx> c(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    cplx s{};
    for (const auto& [w, coeff] : p) s += coeff * sesquimoment(mu, idx[i], w);
    c[i] = s;
  }
  return {detail::word_series(idx, c, z, degree), moment_majorant(mu) * p_l1 * detail::geometric_tail(z.row_norm(), degree)};
}

/// K(Z,W)[A] ≈ Σ_{|α|<=N} Z^α A (W^α)*.
inline TransformValue szego_kernel(const MatrixPoint& z, const MatrixPoint& w, const Matrix& a, int degree) {
  if (z.alphabet() != w.alphabet()) throw SpecError("kernel points must have the same number of components");
  detail::check_point(z, z.alphabet());
  detail::check_point(w, w.alphabet());
  if (a.rows() != z.size() || a.cols() != w.size())
    throw SpecError("kernel argument must be " + std::to_string(z.size()) + "x" + std::to_string(w.size()));
  Matrix k = a;
  for (int j = 0; j < degree; ++j) {
    Matrix next = a;
    for (std::size_t i = 0; i < z.z.size(); ++i) next.noalias() += z.z[i] * k * w.z[i].adjoint();
    k = std::move(next);
  }
  const double rr = z.row_norm() * w.row_norm();
  return {std::move(k), op_norm(a) * detail::geometric_tail(rr, degree)};
}

/// ½[H_μ(Z) K(Z,W)[A] + K(Z,W)[A] H_μ(W)*], composed from the truncations
/// above. The formula is evaluated as written for any A, no normalization.
inline TransformValue mu_kernel(const NcMeasure& mu, const MatrixPoint& z, const MatrixPoint& w, const Matrix& a,
                                int degree) {
  const TransformValue hz = herglotz(mu, z, degree);
  const TransformValue hw = herglotz(mu, w, degree);
  const TransformValue k = szego_kernel(z, w, a, degree);
  TransformValue out;
  out.value = 0.5 * (hz.value * k.value + k.value * hw.value.adjoint());
  const double nk = op_norm(k.value);
  auto product_error = [&](const TransformValue& h) {
    return h.tail_bound * nk + op_norm(h.value) * k.tail_bound + h.tail_bound * k.tail_bound;
  };
  out.tail_bound = 0.5 * (product_error(hz) + product_error(hw));
  return out;
}

/// Coefficients β ↦ μ(L^{γ*} L^β), |β| <= N, of the coefficient-evaluation kernel at γ.
inline std::vector<cplx> coefficient_kernel(const NcMeasure& mu, const Word& gamma, int degree) {
  if (std::max(static_cast<int>(gamma.size()), degree) > mu.budget())
    throw BudgetError("coefficient kernel needs moments beyond the budget");
  const WordIndex idx(mu.alphabet(), degree);
  std::vector<cplx> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = sesquimoment(mu, gamma, idx[i]);
  return out;
}

}  // namespace ncm
