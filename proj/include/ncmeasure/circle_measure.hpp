#pragma once

// Finite-parameter measures on the unit circle: point masses plus a density
// built from trigonometric polynomials supported on arcs. Densities are taken
// relative to normalized arc length dθ/2π, so density 1 is Lebesgue measure.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ncmeasure/errors.hpp"
#include "ncmeasure/linalg.hpp"

namespace ncm {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2π).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, two_pi);
  if (t < 0) t += two_pi;
  if (t >= two_pi) t -= two_pi;
  return t;
}

/// Real-valued trigonometric polynomial Σ_{|k|<=K} c_k e^{ikθ}, c_{-k} = conj(c_k).
class TrigPoly {
 public:
  TrigPoly() : coeffs_{cplx{0.0, 0.0}} {}

  static TrigPoly constant(double value) {
    TrigPoly p;
    p.coeffs_[0] = value;
    return p;
  }

  /// f(θ) = cos[0] + Σ_{k>=1} cos[k] cos kθ + sin[k] sin kθ. sin[0] is ignored.
  static TrigPoly from_cos_sin(const std::vector<double>& cos, const std::vector<double>& sin) {
    const std::size_t k_max = std::max(cos.size(), sin.size());
    TrigPoly p;
    if (k_max == 0) return p;
    const int deg = static_cast<int>(k_max) - 1;
    p.coeffs_.assign(2 * static_cast<std::size_t>(deg) + 1, cplx{});
    auto a = [&](std::size_t k) { return k < cos.size() ? cos[k] : 0.0; };
    auto b = [&](std::size_t k) { return k < sin.size() ? sin[k] : 0.0; };
    p.coeffs_[static_cast<std::size_t>(deg)] = a(0);
    for (int k = 1; k <= deg; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      p.at_mut(k) = cplx{a(uk) / 2, -b(uk) / 2};
      p.at_mut(-k) = cplx{a(uk) / 2, b(uk) / 2};
    }
    return p;
  }

  int degree() const { return static_cast<int>(coeffs_.size() / 2); }

  /// Coefficient of e^{ikθ}; zero outside the support.
  cplx coeff(int k) const {
    const int deg = degree();
    if (k < -deg || k > deg) return {};
    return coeffs_[static_cast<std::size_t>(k + deg)];
  }

  double operator()(double theta) const {
    cplx s{};
    const int deg = degree();
    for (int k = -deg; k <= deg; ++k) s += coeff(k) * std::polar(1.0, k * theta);
    return s.real();
  }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (std::abs(c) != 0.0) return false;
    return true;
  }

  TrigPoly scaled(double t) const {
    TrigPoly p = *this;
    for (auto& c : p.coeffs_) c *= t;
    return p;
  }

  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
    const int deg = std::max(a.degree(), b.degree());
    TrigPoly p;
    p.coeffs_.assign(2 * static_cast<std::size_t>(deg) + 1, cplx{});
    for (int k = -deg; k <= deg; ++k) p.at_mut(k) = a.coeff(k) + b.coeff(k);
    return p;
  }

 private:
  cplx& at_mut(int k) { return coeffs_[static_cast<std::size_t>(k + degree())]; }

  std::vector<cplx> coeffs_;
};

/// A density term: `poly` restricted to the arc [from, to). to - from = 2π is the whole circle.
struct DensityPiece {
  double from = 0.0;
  double to = two_pi;
  TrigPoly poly;

  bool full_circle() const { return to - from >= two_pi - 1e-15; }
  bool contains(double theta) const {
    if (full_circle()) return true;
    const double t = wrap_angle(theta - from);
    return t < to - from;
  }
};

struct Atom {
  double angle = 0.0;  // in [0, 2π)
  double weight = 0.0;
};

/// Point masses plus a density relative to dθ/2π.
struct ClassicalSpec {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> density;

  bool empty() const { return atoms.empty() && density.empty(); }

  double density_at(double theta) const {
    double f = 0.0;
    for (const auto& p : density)
      if (p.contains(theta)) f += p.poly(theta);
    return f;
  }
};

inline constexpr double atom_angle_tolerance = 1e-12;

/// Piece restricted to an arc given in canonical form; empty arcs are dropped.
inline std::vector<DensityPiece> make_arc_pieces(double from, double to, const TrigPoly& poly) {
  if (!(to > from)) throw SpecError("density arc must satisfy from < to");
  if (to - from >= two_pi - 1e-15) return {DensityPiece{0.0, two_pi, poly}};
  const double a = wrap_angle(from);
  const double b = a + (to - from);
  if (b <= two_pi) return {DensityPiece{a, b, poly}};
  return {DensityPiece{a, two_pi, poly}, DensityPiece{0.0, b - two_pi, poly}};
}

/// Checks weights and non-negativity of every density piece on a uniform grid.
inline void validate(const ClassicalSpec& spec, int grid_log2 = 12) {
  for (const auto& a : spec.atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw SpecError("atom weights must be strictly positive (angle " + std::to_string(a.angle) + ")");
    if (!(a.angle >= 0.0 && a.angle < two_pi)) throw SpecError("atom angle not normalized to [0, 2pi)");
  }
  const std::size_t m = std::size_t{1} << grid_log2;
  for (const auto& p : spec.density) {
    if (!(p.from >= 0.0 && p.to <= two_pi + 1e-15 && p.from < p.to)) throw SpecError("density arc out of range");
    for (std::size_t j = 0; j < m; ++j) {
      const double theta = two_pi * static_cast<double>(j) / static_cast<double>(m);
      if (p.contains(theta) && p.poly(theta) < -1e-12)
        throw SpecError("density is negative at angle " + std::to_string(theta));
    }
  }
}

/// ∫_a^b e^{ijθ} dθ/2π.
inline cplx arc_integral(int j, double a, double b) {
  if (j == 0) return cplx{(b - a) / two_pi, 0.0};
  const cplx num = std::polar(1.0, j * b) - std::polar(1.0, j * a);
  return num / (cplx{0.0, two_pi * j});
}

/// Moments ∫ ζ^n f dθ/2π, n = 0..max_n, of a full-circle trigonometric
/// density by the periodic trapezoid rule on 2^k nodes, doubling until no
/// moment moves by more than `tol`.
inline std::vector<cplx> trapezoid_moments(const TrigPoly& f, int max_n, double tol = 1e-12) {
  std::size_t m = 8;
  while (m < static_cast<std::size_t>(max_n) + 2) m *= 2;
  auto rule = [&](std::size_t nodes) {
    std::vector<double> values(nodes);
    for (std::size_t j = 0; j < nodes; ++j) values[j] = f(two_pi * static_cast<double>(j) / static_cast<double>(nodes));
    std::vector<cplx> out(static_cast<std::size_t>(max_n) + 1);
    for (int n = 0; n <= max_n; ++n) {
      cplx s{};
      for (std::size_t j = 0; j < nodes; ++j)
        s += values[j] * std::polar(1.0, two_pi * static_cast<double>((static_cast<std::size_t>(n) * j) % nodes) /
                                             static_cast<double>(nodes));
      out[static_cast<std::size_t>(n)] = s / static_cast<double>(nodes);
    }
    return out;
  };
  auto prev = rule(m);
  for (int iter = 0; iter < 20; ++iter) {
    m *= 2;
    auto next = rule(m);
    double change = 0.0;
    for (std::size_t n = 0; n < next.size(); ++n) change = std::max(change, std::abs(next[n] - prev[n]));
    prev = std::move(next);
    if (change <= tol) break;
  }
  return prev;
}

/// Moments ∫ ζ^n dμ for n = 0..max_n. Atoms in closed form, arcs by exact
/// antiderivatives, whole-circle densities by the trapezoid rule.
inline std::vector<cplx> circle_moments(const ClassicalSpec& spec, int max_n) {
  std::vector<cplx> out(static_cast<std::size_t>(max_n) + 1, cplx{});
  for (const auto& a : spec.atoms)
    for (int n = 0; n <= max_n; ++n) out[static_cast<std::size_t>(n)] += a.weight * std::polar(1.0, n * a.angle);
  for (const auto& p : spec.density) {
    if (p.full_circle()) {
      const auto t = trapezoid_moments(p.poly, max_n);
      for (int n = 0; n <= max_n; ++n) out[static_cast<std::size_t>(n)] += t[static_cast<std::size_t>(n)];
      continue;
    }
    const int deg = p.poly.degree();
    for (int n = 0; n <= max_n; ++n) {
      cplx s{};
      for (int k = -deg; k <= deg; ++k) {
        const cplx c = p.poly.coeff(k);
        if (c != cplx{}) s += c * arc_integral(n + k, p.from, p.to);
      }
      out[static_cast<std::size_t>(n)] += s;
    }
  }
  return out;
}

/// Total mass.
inline double circle_mass(const ClassicalSpec& spec) { return circle_moments(spec, 0)[0].real(); }

inline ClassicalSpec scaled(const ClassicalSpec& spec, double t) {
  ClassicalSpec out = spec;
  for (auto& a : out.atoms) a.weight *= t;
  for (auto& p : out.density) p.poly = p.poly.scaled(t);
  return out;
}

/// Union of two specs; coincident atoms are merged.
inline ClassicalSpec merged(const ClassicalSpec& a, const ClassicalSpec& b) {
  ClassicalSpec out = a;
  for (const auto& atom : b.atoms) {
    bool found = false;
    for (auto& existing : out.atoms) {
      if (std::abs(existing.angle - atom.angle) <= atom_angle_tolerance) {
        existing.weight += atom.weight;
        found = true;
        break;
      }
    }
    if (!found) out.atoms.push_back(atom);
  }
  out.density.insert(out.density.end(), b.density.begin(), b.density.end());
  return out;
}

}  // namespace ncm
