#pragma once

// Lebesgue decomposition of μ against a splitting measure λ on truncated GNS
// spaces, following Simon's construction for forms:
//
//   σ = μ + λ,  E : H²(σ) -> H²(λ) the contractive co-embedding,
//   Q_s = projection onto (the numerical) Ker E,  Q_ac = I − Q_s,
//   D = Q_ac − E*E,
//   μ_ac(L^γ) = <1, D L^γ>_σ,  μ_s = μ − μ_ac.
//
// The same formulas are evaluated whether λ is Cuntz or not.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncmeasure/concurrency.hpp"
#include "ncmeasure/errors.hpp"
#include "ncmeasure/gns.hpp"
#include "ncmeasure/linalg.hpp"
#include "ncmeasure/measures.hpp"

namespace ncm {

struct SimonOptions {
  Tolerances tol;
  /// Singular values of E below this are its exact kernel.
  double kernel_tol = 1e-8;
  /// Directions where E*E <= singular_cut / sqrt(N + 1) are also assigned to
  /// Q_s. A finite truncation of an injective E has no exact kernel, but the
  /// part of H²(σ) carried by μ_s shows up there as eigenvalues of E*E that
  /// decay with the degree. Zero keeps only the exact kernel.
  double singular_cut = 0.45;
  /// Verdict thresholds.
  double toeplitz_threshold = 1e-6;
  double singular_trace_threshold = 1e-6;
  double cuntz_threshold = 1e-6;

  double cut_at(int degree) const { return singular_cut / std::sqrt(static_cast<double>(degree) + 1.0); }
};

struct SimonState {
  int degree = 0;
  GnsTruncation sigma;
  GnsTruncation lambda;
  CoEmbedding e;
  RealVector singular_values;  // of E, one per σ-quotient direction (ascending)
  Matrix right_vectors;        // columns: matching right singular vectors
  Matrix q_s;
  Matrix q_ac;
  Matrix d;
  Eigen::Index kernel_dim = 0;     // singular values below kernel_tol
  Eigen::Index singular_dim = 0;   // rank of Q_s
  std::optional<double> smallest_nonzero_singular;
  double cut = 0.0;
};

/// Builds σ, λ truncations, the co-embedding and Simon's operators at degree N.
inline SimonState simon_state(const NcMeasure& mu, const NcMeasure& lambda, int degree, const SimonOptions& opt = {}) {
  if (mu.alphabet() != lambda.alphabet()) throw SpecError("measures live on different alphabets");
  if (degree < 0 || degree > mu.budget() || degree > lambda.budget())
    throw BudgetError("decomposition degree " + std::to_string(degree) + " exceeds a moment budget");
  const NcMeasure sigma = add(mu.truncated(degree), lambda.truncated(degree));
  if (!(sigma.mass() > 0.0)) throw NumericalError("degenerate splitting: (mu + lambda)(1) = 0");

  SimonState s;
  s.degree = degree;
  s.sigma = build_gns(sigma, degree, opt.tol);
  s.lambda = build_gns(lambda, degree, opt.tol);
  s.e = coembed(s.sigma, s.lambda);

  const Eigen::Index r = s.sigma.rank;
  s.singular_values = RealVector::Zero(r);
  s.right_vectors = Matrix::Identity(r, r);
  if (s.e.map.size() > 0) {
    Eigen::BDCSVD<Matrix> svd(s.e.map, Eigen::ComputeFullV);
    const RealVector sv = svd.singularValues();  // descending, length min(rows, cols)
    const Matrix v = svd.matrixV();
    // reorder ascending; directions beyond min(rows, cols) have singular value 0
    for (Eigen::Index i = 0; i < r; ++i) {
      const Eigen::Index src = r - 1 - i;
      s.singular_values(i) = src < sv.size() ? sv(src) : 0.0;
      s.right_vectors.col(i) = v.col(src);
    }
  }
  s.cut = opt.cut_at(degree);
  s.q_s = Matrix::Zero(r, r);
  s.d = Matrix::Zero(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double sv = s.singular_values(i);
    const auto vi = s.right_vectors.col(i);
    if (sv < opt.kernel_tol) ++s.kernel_dim;
    if (sv < opt.kernel_tol || sv * sv <= s.cut) {
      ++s.singular_dim;
      s.q_s += vi * vi.adjoint();
    } else {
      s.d += (1.0 - sv * sv) * (vi * vi.adjoint());
      if (!s.smallest_nonzero_singular || sv < *s.smallest_nonzero_singular) s.smallest_nonzero_singular = sv;
    }
  }
  s.q_ac = Matrix::Identity(r, r) - s.q_s;
  return s;
}

/// max_{i,j} ||Π_{σ,i}* D Π_{σ,j} − δ_ij D|| with D compressed to the
/// degree-(N-1) quotient on the right-hand side.
inline double toeplitz_residual(const SimonState& s, const Tolerances& tol = {}) {
  if (s.degree < 2) throw SpecError("Toeplitz residual needs degree >= 2");
  const auto pi = row_isometry(s.sigma, tol);
  const Matrix d_low = pi.inclusion.adjoint() * s.d * pi.inclusion;
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.shifts.size(); ++i)
    for (std::size_t j = 0; j < pi.shifts.size(); ++j) {
      Matrix m = pi.shifts[i].adjoint() * s.d * pi.shifts[j];
      if (i == j) m -= d_low;
      worst = std::max(worst, op_norm(m));
    }
  return worst;
}

struct DecompositionResult {
  int degree = 0;
  int alphabet = 1;
  std::vector<cplx> moments_ac;  // graded-lex words of length <= degree
  std::vector<cplx> moments_s;
  Matrix gram_ac;
  Matrix gram_s;
  PsdReport psd_ac;
  PsdReport psd_s;
  double psd_scale = 0.0;  // largest eigenvalue of σ's Gram, for relative checks
  double additivity_defect = 0.0;  // max |q_ac + <·, Q_s ·>_σ − q_μ| over word pairs
  std::optional<double> toeplitz_residual;
  std::optional<double> cuntz_distance_lambda;
  Eigen::Index kernel_dim = 0;
  Eigen::Index singular_dim = 0;
  std::optional<double> smallest_nonzero_singular;
  double d_trace = 0.0;

  bool parts_psd(double tol) const {
    return psd_ac.min_eigenvalue >= -tol * psd_scale && psd_s.min_eigenvalue >= -tol * psd_scale;
  }
};

namespace detail {

/// Splits m into (a', s) with a' ≈ a on the grid 2^(E−50), 2^E bounding |m|
/// and |a|. When m lies on that grid, a' + s == m holds in floating point;
/// otherwise (|m| far below |a|) the sum is off by one rounding.
inline std::pair<double, double> exact_split(double m, double a) {
  const double big = std::max(std::abs(m), std::abs(a));
  if (big == 0.0 || !std::isfinite(big)) return {a, m - a};
  const double q = std::ldexp(1.0, std::ilogb(big) - 50);
  const double s = std::nearbyint((m - a) / q) * q;
  return {m - s, s};
}

}  // namespace detail

inline DecompositionResult extract(const SimonState& s, const NcMeasure& mu, const NcMeasure& lambda,
                                   const SimonOptions& opt) {
  DecompositionResult out;
  out.degree = s.degree;
  out.alphabet = mu.alphabet();
  const Matrix& c = s.sigma.coords;  // r × n
  const Matrix dc = s.d * c;
  const Eigen::Index n = c.cols();

  // <1, D L^γ>_σ for every word γ
  const Eigen::RowVectorXcd ac_row = c.col(0).adjoint() * dc;
  out.moments_ac.resize(static_cast<std::size_t>(n));
  out.moments_s.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const cplx m = i == 0 ? cplx{mu.mass(), 0.0} : mu.moment_at(k);
    const cplx a = i == 0 ? cplx{ac_row(0).real(), 0.0} : ac_row(i);
    const auto [ar, sr] = detail::exact_split(m.real(), a.real());
    const auto [ai, si] = detail::exact_split(m.imag(), a.imag());
    out.moments_ac[k] = {ar, ai};
    out.moments_s[k] = {sr, si};
  }

  const Matrix g_mu = assemble_gram(mu, s.degree);
  out.gram_ac = c.adjoint() * dc;
  out.gram_ac = 0.5 * (out.gram_ac + out.gram_ac.adjoint());
  out.gram_s = g_mu - out.gram_ac;
  out.psd_ac = check_psd(out.gram_ac, opt.tol.psd);
  out.psd_s = check_psd(out.gram_s, opt.tol.psd);
  out.psd_scale = s.sigma.eigenvalues.size() > 0 ? std::max(s.sigma.eigenvalues.maxCoeff(), 0.0) : 0.0;
  out.additivity_defect = (out.gram_ac + c.adjoint() * s.q_s * c - g_mu).cwiseAbs().maxCoeff();

  if (s.degree >= 2) out.toeplitz_residual = toeplitz_residual(s, opt.tol);
  if (s.degree >= 1 && lambda.mass() > 0.0) out.cuntz_distance_lambda = cuntz_distance(lambda, s.degree, opt.tol);
  out.kernel_dim = s.kernel_dim;
  out.singular_dim = s.singular_dim;
  out.smallest_nonzero_singular = s.smallest_nonzero_singular;
  out.d_trace = s.d.trace().real();
  return out;
}

/// Lebesgue decomposition of μ with respect to λ at truncation degree N.
inline DecompositionResult simon_decompose(const NcMeasure& mu, const NcMeasure& lambda, int degree,
                                           const SimonOptions& opt = {}) {
  return extract(simon_state(mu, lambda, degree, opt), mu, lambda, opt);
}

/// Moment table of the absolutely continuous part as a measure.
inline NcMeasure ac_part(const DecompositionResult& r) { return make_residual(r.alphabet, r.degree, r.moments_ac); }
inline NcMeasure singular_part(const DecompositionResult& r) { return make_residual(r.alphabet, r.degree, r.moments_s); }

enum class Verdict { Ac, Singular, Mixed, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Ac: return "ac";
    case Verdict::Singular: return "singular";
    case Verdict::Mixed: return "mixed";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct DegreeDiagnostics {
  int degree = 0;
  Eigen::Index kernel_dim = 0;
  Eigen::Index singular_dim = 0;
  std::optional<double> smallest_nonzero_singular;
  std::optional<double> toeplitz_residual;
  std::optional<double> cuntz_distance_lambda;
  double d_trace = 0.0;
};

struct AcDetection {
  std::vector<DegreeDiagnostics> degrees;
  Verdict verdict = Verdict::Inconclusive;
};

inline DegreeDiagnostics diagnostics_of(const DecompositionResult& r) {
  return {r.degree, r.kernel_dim, r.singular_dim, r.smallest_nonzero_singular, r.toeplitz_residual,
          r.cuntz_distance_lambda, r.d_trace};
}

/// Advisory verdict from per-degree traces (the traces are the contract):
///   singular  trace(D) below threshold at the top degree;
///   ac        Ker E = 0 at every degree and Toeplitz residual below threshold at the top;
///   mixed     Q_s ≠ 0 and D ≠ 0 at the top degree;
///   otherwise inconclusive.
inline Verdict classify(const std::vector<DegreeDiagnostics>& trace, const SimonOptions& opt) {
  if (trace.empty()) return Verdict::Inconclusive;
  const auto& top = trace.back();
  if (top.d_trace < opt.singular_trace_threshold) return Verdict::Singular;
  bool injective = true;
  for (const auto& t : trace) injective = injective && t.kernel_dim == 0;
  if (injective && top.toeplitz_residual && *top.toeplitz_residual < opt.toeplitz_threshold) return Verdict::Ac;
  if (top.singular_dim > 0) return Verdict::Mixed;
  return Verdict::Inconclusive;
}

inline void check_ladder(const std::vector<int>& ladder, std::size_t min_size) {
  if (ladder.size() < min_size) throw SpecError("degree ladder needs at least " + std::to_string(min_size) + " degrees");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1]) throw SpecError("degree ladder must be strictly increasing");
  if (!ladder.empty() && ladder.front() < 0) throw SpecError("degree ladder entries must be non-negative");
}

struct DecompositionReport {
  std::vector<DecompositionResult> per_degree;
  std::vector<double> convergence;  // max |Δ moments_ac| against the previous ladder degree
  AcDetection detection;

  const DecompositionResult& top() const { return per_degree.back(); }
};

/// simon_decompose along a ladder, with the convergence trace and verdict.
inline DecompositionReport decompose_report(const NcMeasure& mu, const NcMeasure& lambda, const std::vector<int>& ladder,
                                            const SimonOptions& opt = {}) {
  check_ladder(ladder, 1);
  DecompositionReport rep;
  rep.per_degree = parallel_map(ladder.size(), [&](std::size_t i) { return simon_decompose(mu, lambda, ladder[i], opt); });
  for (std::size_t i = 0; i < rep.per_degree.size(); ++i) {
    rep.detection.degrees.push_back(diagnostics_of(rep.per_degree[i]));
    if (i == 0) continue;
    const auto& prev = rep.per_degree[i - 1].moments_ac;
    const auto& cur = rep.per_degree[i].moments_ac;
    double change = 0.0;
    for (std::size_t k = 0; k < prev.size(); ++k) change = std::max(change, std::abs(cur[k] - prev[k]));
    rep.convergence.push_back(change);
  }
  rep.detection.verdict = classify(rep.detection.degrees, opt);
  return rep;
}

/// Per-degree kernel, singular-value, Toeplitz and Cuntz traces with a verdict.
inline AcDetection ac_detect(const NcMeasure& mu, const NcMeasure& lambda, const std::vector<int>& ladder,
                             const SimonOptions& opt = {}) {
  check_ladder(ladder, 3);
  return decompose_report(mu, lambda, ladder, opt).detection;
}

}  // namespace ncm
