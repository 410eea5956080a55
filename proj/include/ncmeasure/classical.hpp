#pragma once

// Textbook Lebesgue decomposition of circle measures given as atoms plus
// piecewise trigonometric densities, used as an oracle for the engine.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "ncmeasure/circle_measure.hpp"
#include "ncmeasure/decompose.hpp"

namespace ncm {

struct ClassicalDecomposition {
  ClassicalSpec ac;
  ClassicalSpec sing;
};

inline constexpr double support_threshold = 1e-12;

namespace detail {

inline bool same_angle(double a, double b) {
  const double diff = std::abs(a - b);
  return std::min(diff, two_pi - diff) <= atom_angle_tolerance;
}

/// Sorted breakpoints of all density pieces of both specs, including 0 and 2π.
inline std::vector<double> breakpoints(const ClassicalSpec& a, const ClassicalSpec& b) {
  std::vector<double> cuts{0.0, two_pi};
  for (const auto* s : {&a, &b})
    for (const auto& p : s->density) {
      cuts.push_back(p.from);
      cuts.push_back(p.to);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return y - x <= 1e-15; }), cuts.end());
  return cuts;
}

/// Whether the density of `s` is positive almost everywhere on (lo, hi).
/// Between breakpoints the density is one trigonometric polynomial, which is
/// either identically zero there or vanishes only at finitely many points.
inline bool positive_on(const ClassicalSpec& s, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  TrigPoly sum;
  for (const auto& p : s.density)
    if (p.contains(mid)) sum = sum + p.poly;
  constexpr int probes = 64;
  for (int j = 0; j < probes; ++j) {
    const double t = lo + (hi - lo) * (j + 0.5) / probes;
    if (sum(t) > support_threshold) return true;
  }
  return false;
}

}  // namespace detail

/// μ_ac = μ's density on λ's density support plus μ's atoms sitting on λ's atoms.
inline ClassicalDecomposition oracle_decompose(const ClassicalSpec& mu, const ClassicalSpec& lambda) {
  ClassicalDecomposition out;
  for (const auto& a : mu.atoms) {
    const bool shared = std::any_of(lambda.atoms.begin(), lambda.atoms.end(),
                                    [&](const Atom& b) { return detail::same_angle(a.angle, b.angle); });
    (shared ? out.ac : out.sing).atoms.push_back(a);
  }
  const auto cuts = detail::breakpoints(mu, lambda);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double mid = 0.5 * (lo + hi);
    auto& target = detail::positive_on(lambda, lo, hi) ? out.ac : out.sing;
    for (const auto& p : mu.density)
      if (p.contains(mid) && !p.poly.is_zero()) target.density.push_back(DensityPiece{lo, hi, p.poly});
  }
  return out;
}

struct OracleMoments {
  std::vector<cplx> ac;
  std::vector<cplx> sing;
};

inline OracleMoments oracle_moments(const ClassicalDecomposition& dec, int degree) {
  return {circle_moments(dec.ac, degree), circle_moments(dec.sing, degree)};
}

struct OracleComparison {
  int degree = 0;
  double ac_error = 0.0;
  double sing_error = 0.0;
};

/// Largest moment discrepancy of each part, over z^0..z^N.
inline OracleComparison compare(const DecompositionResult& engine, const OracleMoments& oracle, int degree) {
  if (engine.alphabet != 1) throw SpecError("oracle comparison is one-variable only");
  if (degree > engine.degree || oracle.ac.size() < static_cast<std::size_t>(degree) + 1 ||
      oracle.sing.size() < static_cast<std::size_t>(degree) + 1)
    throw BudgetError("oracle comparison degree exceeds the available tables");
  OracleComparison c{degree};
  for (std::size_t n = 0; n <= static_cast<std::size_t>(degree); ++n) {
    c.ac_error = std::max(c.ac_error, std::abs(engine.moments_ac[n] - oracle.ac[n]));
    c.sing_error = std::max(c.sing_error, std::abs(engine.moments_s[n] - oracle.sing[n]));
  }
  return c;
}

}  // namespace ncm
