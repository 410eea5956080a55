#pragma once

// Positive NC measures represented by their moment tables μ(L^γ), |γ| <= budget.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ncmeasure/circle_measure.hpp"
#include "ncmeasure/errors.hpp"
#include "ncmeasure/linalg.hpp"
#include "ncmeasure/words.hpp"

namespace ncm {

enum class Generator { Lebesgue, Weighted, Atoms1d, Density1d, RowUnitary, Sum, Scaled, Residual };

inline const char* to_string(Generator g) {
  switch (g) {
    case Generator::Lebesgue: return "lebesgue";
    case Generator::Weighted: return "weighted";
    case Generator::Atoms1d: return "atoms1d";
    case Generator::Density1d: return "density1d";
    case Generator::RowUnitary: return "row_unitary";
    case Generator::Sum: return "sum";
    case Generator::Scaled: return "scaled";
    case Generator::Residual: return "residual";
  }
  return "unknown";
}

/// Moment table of a positive NC measure on d letters.
///
/// Immutable once built. Requests beyond the budget throw BudgetError; the
/// table never extrapolates.
class NcMeasure {
 public:
  NcMeasure(int d, int budget, std::vector<cplx> moments, Generator generator)
      : index_(std::make_shared<const WordIndex>(d, budget)), moments_(std::move(moments)), generator_(generator) {
    if (moments_.size() != index_->size()) throw SpecError("moment table size does not match the word index");
    if (std::abs(moments_[0].imag()) > 1e-12 * std::max(1.0, std::abs(moments_[0])) || moments_[0].real() < 0.0)
      throw NumericalError("total mass must be real and non-negative");
    moments_[0] = cplx{moments_[0].real(), 0.0};
  }

  int alphabet() const { return index_->alphabet(); }
  int budget() const { return index_->degree(); }
  Generator generator() const { return generator_; }
  const WordIndex& index() const { return *index_; }
  const std::vector<cplx>& moments() const { return moments_; }

  double mass() const { return moments_[0].real(); }

  cplx moment(const Word& gamma) const {
    if (gamma.size() > static_cast<std::size_t>(budget()))
      throw BudgetError("moment " + gamma.to_string() + " requested beyond budget " + std::to_string(budget()));
    return moments_[index_->index_of(gamma)];
  }

  cplx moment_at(std::size_t idx) const { return moments_.at(idx); }

  /// Same measure with the table cut down to a smaller budget.
  NcMeasure truncated(int new_budget) const {
    if (new_budget > budget()) throw BudgetError("cannot extend a moment budget");
    std::vector<cplx> m(moments_.begin(), moments_.begin() + static_cast<std::ptrdiff_t>(word_count(alphabet(), new_budget)));
    return NcMeasure(alphabet(), new_budget, std::move(m), generator_);
  }

 private:
  std::shared_ptr<const WordIndex> index_;
  std::vector<cplx> moments_;
  Generator generator_;
};

/// μ(L^{α*} L^β) through the row-isometry reduction.
inline cplx sesquimoment(const NcMeasure& mu, const Word& alpha, const Word& beta) {
  const Reduction r = reduce(alpha, beta);
  switch (r.kind) {
    case Reduction::Kind::Zero: return {};
    case Reduction::Kind::Right: return mu.moment(r.word);
    case Reduction::Kind::Left: return std::conj(mu.moment(r.word));
  }
  return {};
}

struct GramMatrix {
  int degree = 0;
  Matrix entries;  // entries(a, b) = μ(L^{a*} L^b), graded-lex word order
};

/// Extreme eigenvalues of a Gram matrix, with the PSD verdict at tolerance `tol`.
struct PsdReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool ok = true;
};

inline PsdReport check_psd(const Matrix& g, double tol) {
  if (g.size() == 0) return {};
  const auto eig = hermitian_eigen(g);
  PsdReport r{eig.values(0), eig.values(eig.values.size() - 1), true};
  r.ok = r.min_eigenvalue >= -tol * std::max(r.max_eigenvalue, 0.0);
  return r;
}

/// Gram matrix of μ on words of length <= degree, without validation.
inline Matrix assemble_gram(const NcMeasure& mu, int degree) {
  if (degree > mu.budget())
    throw BudgetError("Gram degree " + std::to_string(degree) + " exceeds moment budget " + std::to_string(mu.budget()));
  const WordIndex& idx = mu.index();
  const auto n = static_cast<Eigen::Index>(idx.block(degree));
  Matrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Word& wa = idx[static_cast<std::size_t>(a)];
    g(a, a) = mu.mass();
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const Word& wb = idx[static_cast<std::size_t>(b)];
      cplx v{};
      // a < b in graded order, so only L^{a*}L^b = L^g with b = a g can survive
      if (wb.starts_with(wa)) v = mu.moment_at(idx.index_of(wb.drop(wa.size())));
      g(a, b) = v;
      g(b, a) = std::conj(v);
    }
  }
  return g;
}

/// Validated Gram matrix: Hermitian by construction, PSD within tol.psd.
inline GramMatrix gram(const NcMeasure& mu, int degree, const Tolerances& tol = {}) {
  GramMatrix out{degree, assemble_gram(mu, degree)};
  const PsdReport r = check_psd(out.entries, tol.psd);
  if (!r.ok)
    throw NumericalError("Gram matrix at degree " + std::to_string(degree) + " is not PSD: eigenvalue " +
                         std::to_string(r.min_eigenvalue) + " against largest " + std::to_string(r.max_eigenvalue));
  return out;
}

// ---- generators ---------------------------------------------------------

/// NC Lebesgue measure (vacuum state): moments δ_{γ,∅}.
inline NcMeasure make_lebesgue(int d, int budget) {
  std::vector<cplx> m(word_count(d, budget), cplx{});
  m[0] = 1.0;
  return NcMeasure(d, budget, std::move(m), Generator::Lebesgue);
}

/// Finitely supported coefficient table of an NC polynomial h.
using Polynomial = std::map<Word, cplx>;

/// μ_h(a) = <h, a(L) h> on the Fock space: μ_h(L^γ) = Σ_ω conj(h_{γω}) h_ω.
inline NcMeasure make_weighted(int d, const Polynomial& h, int budget) {
  for (const auto& [w, c] : h)
    if (w.max_letter() > d) throw SpecError("weighted: word " + w.to_string() + " uses a letter beyond d");
  const WordIndex idx(d, budget);
  std::vector<cplx> m(idx.size(), cplx{});
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const Word& gamma = idx[i];
    cplx s{};
    for (const auto& [w, c] : h) {
      if (!w.starts_with(gamma)) continue;
      auto it = h.find(w.drop(gamma.size()));
      if (it != h.end()) s += std::conj(c) * it->second;
    }
    m[i] = s;
  }
  return NcMeasure(d, budget, std::move(m), Generator::Weighted);
}

/// μ(L^α) = <ξ, U^α ξ> for a row coisometry Σ U_k U_k* = I and unit ξ.
inline NcMeasure make_row_unitary(const std::vector<Matrix>& u, const Vector& xi, int budget, double tol = 1e-10) {
  if (u.empty()) throw SpecError("row_unitary: need at least one matrix");
  const Eigen::Index n = u.front().rows();
  Matrix row_sum = Matrix::Zero(n, n);
  for (const auto& uk : u) {
    if (uk.rows() != n || uk.cols() != n) throw SpecError("row_unitary: matrices must be square of equal size");
    row_sum += uk * uk.adjoint();
  }
  if (xi.size() != n) throw SpecError("row_unitary: vector size does not match the matrices");
  const double defect = op_norm(row_sum - Matrix::Identity(n, n));
  if (defect > tol) throw SpecError("row_unitary: sum of U_k U_k^* deviates from I by " + std::to_string(defect));
  if (std::abs(xi.norm() - 1.0) > tol) throw SpecError("row_unitary: vector is not a unit vector");

  const int d = static_cast<int>(u.size());
  const WordIndex idx(d, budget);
  std::vector<Vector> images(idx.size());
  std::vector<cplx> m(idx.size());
  images[0] = xi;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    m[i] = xi.dot(images[i]);  // dot conjugates the left operand
    if (idx[i].size() < static_cast<std::size_t>(budget))
      for (int k = 1; k <= d; ++k) images[idx.prepend_index(k, i)] = u[static_cast<std::size_t>(k - 1)] * images[i];
  }
  return NcMeasure(d, budget, std::move(m), Generator::RowUnitary);
}

/// One-variable measure from atoms and a density on the circle.
inline NcMeasure make_classical(const ClassicalSpec& spec, int budget) {
  validate(spec);
  auto m = circle_moments(spec, budget);
  return NcMeasure(1, budget, std::move(m), spec.density.empty() ? Generator::Atoms1d : Generator::Density1d);
}

/// Measure from an explicit table (e.g. a decomposition part).
inline NcMeasure make_residual(int d, int budget, std::vector<cplx> moments) {
  return NcMeasure(d, budget, std::move(moments), Generator::Residual);
}

inline NcMeasure add(const NcMeasure& mu, const NcMeasure& nu) {
  if (mu.alphabet() != nu.alphabet()) throw SpecError("cannot add measures over different alphabets");
  const int budget = std::min(mu.budget(), nu.budget());
  std::vector<cplx> m(word_count(mu.alphabet(), budget));
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = mu.moment_at(i) + nu.moment_at(i);
  return NcMeasure(mu.alphabet(), budget, std::move(m), Generator::Sum);
}

inline NcMeasure scale(const NcMeasure& mu, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw SpecError("scale factor must be non-negative");
  std::vector<cplx> m = mu.moments();
  for (auto& v : m) v *= t;
  return NcMeasure(mu.alphabet(), mu.budget(), std::move(m), Generator::Scaled);
}

}  // namespace ncm
