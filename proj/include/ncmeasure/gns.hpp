#pragma once

// Truncated GNS spaces: the quotient of degree-<=N polynomials by the
// zero-length classes, the left-shift row isometry on it, and co-embeddings
// H²(σ) -> H²(λ) for λ <= σ.

#include <string>
#include <vector>

#include "ncmeasure/errors.hpp"
#include "ncmeasure/linalg.hpp"
#include "ncmeasure/measures.hpp"

namespace ncm {

/// Degree-N truncation of H²(μ).
///
/// With gram = V Λ V*, the r retained eigenpairs give
///   quotient_basis B = V_r Λ_r^{-1/2}  (word coords -> orthonormal quotient basis),
///   coords         C = Λ_r^{1/2} V_r*  (word coefficient vector -> quotient coords),
/// so C B = I_r, B* G B = I_r and C* C reproduces G up to the discarded spectrum.
struct GnsTruncation {
  int alphabet = 1;
  int degree = 0;
  Generator generator = Generator::Residual;
  GramMatrix gram;
  RealVector eigenvalues;
  Matrix quotient_basis;
  Matrix coords;
  Matrix null_basis;
  Eigen::Index rank = 0;

  Eigen::Index size() const { return gram.entries.rows(); }
  Eigen::Index null_dimension() const { return size() - rank; }

  /// Quotient coordinates of the class of word number `idx`.
  auto word_class(Eigen::Index idx) const { return coords.col(idx); }
};

/// Factors a validated Gram matrix. Eigenvalues below tol.null * max are the kernel.
inline GnsTruncation factor_gram(int d, Generator gen, GramMatrix g, const Tolerances& tol) {
  GnsTruncation t;
  t.alphabet = d;
  t.degree = g.degree;
  t.generator = gen;
  const auto eig = hermitian_eigen(g.entries);
  const Eigen::Index n = g.entries.rows();
  const double top = n > 0 ? eig.values(n - 1) : 0.0;
  if (n > 0 && eig.values(0) < -tol.psd * std::max(top, 0.0))
    throw NumericalError("Gram matrix at degree " + std::to_string(g.degree) + " is not PSD: eigenvalue " +
                         std::to_string(eig.values(0)) + " against largest " + std::to_string(top));
  Eigen::Index first = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (top > 0.0 && eig.values(i) > tol.null * top) {
      first = i;
      break;
    }
  }
  t.rank = n - first;
  t.eigenvalues = eig.values;
  const RealVector kept = eig.values.tail(t.rank);
  const Matrix v = eig.vectors.rightCols(t.rank);
  t.quotient_basis = v * kept.cwiseSqrt().cwiseInverse().asDiagonal();
  t.coords = kept.cwiseSqrt().asDiagonal() * v.adjoint();
  t.null_basis = eig.vectors.leftCols(first);
  t.gram = std::move(g);
  return t;
}

inline GnsTruncation build_gns(const NcMeasure& mu, int degree, const Tolerances& tol = {}) {
  return factor_gram(mu.alphabet(), mu.generator(), gram(mu, degree, tol), tol);
}

/// Truncation at a lower degree, read off the leading block of the Gram matrix.
inline GnsTruncation restrict_to(const GnsTruncation& t, int degree, const Tolerances& tol = {}) {
  if (degree > t.degree || degree < 0) throw SpecError("restriction degree out of range");
  const auto n = static_cast<Eigen::Index>(word_count(t.alphabet, degree));
  return factor_gram(t.alphabet, t.generator, GramMatrix{degree, t.gram.entries.topLeftCorner(n, n)}, tol);
}

/// Left multiplication by each letter, from the degree-(N-1) quotient into the
/// degree-N quotient, plus the inclusion of the former into the latter.
struct RowIsometryMatrices {
  std::vector<Matrix> shifts;
  Matrix inclusion;
  GnsTruncation lower;
};

inline RowIsometryMatrices row_isometry(const GnsTruncation& t, const Tolerances& tol = {}) {
  if (t.degree < 1) throw SpecError("row isometry needs degree >= 1");
  RowIsometryMatrices out;
  out.lower = restrict_to(t, t.degree - 1, tol);
  const WordIndex idx(t.alphabet, t.degree);
  const auto n_low = out.lower.size();
  for (int k = 1; k <= t.alphabet; ++k) {
    Matrix shifted(t.coords.rows(), n_low);
    for (Eigen::Index i = 0; i < n_low; ++i)
      shifted.col(i) = t.coords.col(static_cast<Eigen::Index>(idx.prepend_index(k, static_cast<std::size_t>(i))));
    out.shifts.push_back(shifted * out.lower.quotient_basis);
  }
  out.inclusion = t.coords.leftCols(n_low) * out.lower.quotient_basis;
  return out;
}

/// max_{j,k} ||Π_j* Π_k − δ_jk I|| on the degree-(N-1) quotient.
inline double row_isometry_defect(const RowIsometryMatrices& pi) {
  double worst = 0.0;
  for (std::size_t j = 0; j < pi.shifts.size(); ++j)
    for (std::size_t k = 0; k < pi.shifts.size(); ++k) {
      Matrix p = pi.shifts[j].adjoint() * pi.shifts[k];
      if (j == k) p -= Matrix::Identity(p.rows(), p.cols());
      worst = std::max(worst, op_norm(p));
    }
  return worst;
}

/// p + N_σ ↦ p + N_λ, written in the two orthonormal quotient bases.
struct CoEmbedding {
  Matrix map;
  double norm = 0.0;
};

inline CoEmbedding coembed(const GnsTruncation& sigma, const GnsTruncation& lambda, double norm_slack = 1e-6) {
  if (sigma.degree != lambda.degree || sigma.alphabet != lambda.alphabet)
    throw SpecError("co-embedding needs truncations of equal degree and alphabet");
  CoEmbedding e;
  e.map = lambda.coords * sigma.quotient_basis;
  e.norm = op_norm(e.map);
  if (e.norm > 1.0 + norm_slack)
    throw NumericalError("co-embedding norm " + std::to_string(e.norm) +
                         " exceeds 1: the target measure is not dominated by the source");
  return e;
}

/// max_k ||E_N Π_{σ,k} − Π_{λ,k} E_{N-1}|| on degree <= N-1 inputs.
inline double intertwining_defect(const GnsTruncation& sigma, const GnsTruncation& lambda,
                                  const Tolerances& tol = {}) {
  const auto pi_s = row_isometry(sigma, tol);
  const auto pi_l = row_isometry(lambda, tol);
  const Matrix e_top = coembed(sigma, lambda).map;
  const Matrix e_low = coembed(pi_s.lower, pi_l.lower).map;
  double worst = 0.0;
  for (std::size_t k = 0; k < pi_s.shifts.size(); ++k)
    worst = std::max(worst, op_norm(e_top * pi_s.shifts[k] - pi_l.shifts[k] * e_low));
  return worst;
}

/// Squared H²(μ) distance from the constant 1 to the span of the nonconstant
/// words of length <= N, divided by μ(1).
///
/// Computed as the last pivot of a thresholded Cholesky elimination that
/// treats the constant word last; pivots below tol.null * max diagonal count
/// as dependent. Appending words never increases the value.
inline double cuntz_distance(const NcMeasure& mu, int degree, const Tolerances& tol = {}) {
  if (degree < 1) throw SpecError("Cuntz distance needs degree >= 1");
  if (!(mu.mass() > 0.0)) throw NumericalError("Cuntz distance undefined for a measure of zero mass");
  const Matrix g = assemble_gram(mu, degree);
  const Eigen::Index n = g.rows();
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 1; i < n; ++i) order.push_back(i);
  order.push_back(0);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, g(i, i).real());

  Matrix l = Matrix::Zero(n, n);
  std::vector<Eigen::Index> accepted;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index gj = order[static_cast<std::size_t>(j)];
    double pivot = g(gj, gj).real();
    for (Eigen::Index k : accepted) pivot -= std::norm(l(j, k));
    if (j == n - 1) return std::clamp(pivot / mu.mass(), 0.0, 1.0);
    if (pivot <= tol.null * scale) continue;
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      cplx s = g(order[static_cast<std::size_t>(i)], gj);
      for (Eigen::Index k : accepted) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / root;
    }
    accepted.push_back(j);
  }
  return 1.0;
}

struct CuntzTrace {
  std::vector<int> degrees;
  std::vector<double> distances;
  bool cuntz = false;  // heuristic: last distance below the threshold
  double threshold = 1e-6;
};

inline CuntzTrace cuntz_trace(const NcMeasure& mu, const std::vector<int>& degrees, const Tolerances& tol = {},
                              double threshold = 1e-6) {
  CuntzTrace t;
  t.threshold = threshold;
  for (int n : degrees) {
    t.degrees.push_back(n);
    t.distances.push_back(cuntz_distance(mu, n, tol));
  }
  t.cuntz = !t.distances.empty() && t.distances.back() < threshold;
  return t;
}

}  // namespace ncm
