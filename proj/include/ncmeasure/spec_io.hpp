#pragma once

// JSON measure and evaluation-point specs.
//
// Measure spec:
//   {"d": 2, "kind": "lebesgue", "budget": 6}
//   {"d": 2, "kind": "weighted", "h": [{"word": [], "coeff": 0.7}, {"word": [1], "coeff": [0, 0.7]}]}
//   {"d": 1, "kind": "atoms", "angle_unit": "pi", "atoms": [{"angle": 0, "weight": 1}]}
//   {"d": 1, "kind": "density", "density": {"trig": {"cos": [1, 1]}, "pieces": [{"from": 0, "to": 1, "value": 1}]}}
//   {"d": 2, "kind": "row_unitary", "U": [M1, M2], "xi": [1, 0]}
//   {"d": 1, "kind": "sum", "terms": [spec, spec]}
// Any spec may carry "scale": t >= 0. Matrices are arrays of rows; scalars
// are numbers or [re, im].

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncmeasure/circle_measure.hpp"
#include "ncmeasure/errors.hpp"
#include "ncmeasure/measures.hpp"
#include "ncmeasure/transforms.hpp"

namespace ncm::io {

using json = nlohmann::json;

/// Parses a JSON file; syntax errors carry line and column.
inline json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SpecError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
  }
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SpecError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SpecError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SpecError(where + ": value is not finite");
  return v;
}

inline int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SpecError(where + ": expected an integer");
  return j.get<int>();
}

inline cplx scalar(const json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  throw SpecError(where + ": expected a number or [re, im]");
}

inline Matrix matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SpecError(where + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw SpecError(where + "[0]: expected a non-empty row");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw SpecError(rw + ": ragged matrix row");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = scalar(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

/// A point component: a scalar (1×1) or a matrix.
inline Matrix component(const json& j, const std::string& where) {
  if (j.is_array() && !j.empty() && j[0].is_array()) return matrix(j, where);
  return Matrix::Constant(1, 1, scalar(j, where));
}

inline Word word(const json& j, int d, const std::string& where) {
  if (!j.is_array()) throw SpecError(where + ": expected an array of letters");
  Word w;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int l = integer(j[i], where + "[" + std::to_string(i) + "]");
    if (l < 1 || l > d) throw SpecError(where + ": letter " + std::to_string(l) + " outside 1.." + std::to_string(d));
    w.push_back(l);
  }
  return w;
}

inline Polynomial polynomial(const json& j, int d, const std::string& where) {
  if (!j.is_array()) throw SpecError(where + ": expected an array of {word, coeff}");
  Polynomial p;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    p[word(field(j[i], "word", w), d, w + ".word")] += scalar(field(j[i], "coeff", w), w + ".coeff");
  }
  return p;
}

inline double angle_factor(const json& j, const std::string& where) {
  if (!j.contains("angle_unit")) return 1.0;
  const auto& u = j["angle_unit"];
  if (u == "rad") return 1.0;
  if (u == "pi") return std::numbers::pi;
  throw SpecError(where + ".angle_unit: expected \"rad\" or \"pi\"");
}

inline TrigPoly trig(const json& j, const std::string& where) {
  auto coeffs = [&](const char* key) {
    std::vector<double> v;
    if (!j.contains(key)) return v;
    const auto& a = j[key];
    if (!a.is_array()) throw SpecError(where + "." + key + ": expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(number(a[i], where + "." + key + "[" + std::to_string(i) + "]"));
    return v;
  };
  return TrigPoly::from_cos_sin(coeffs("cos"), coeffs("sin"));
}

inline void classical_parts(const json& j, ClassicalSpec& out, const std::string& where) {
  const double unit = angle_factor(j, where);
  if (j.contains("atoms")) {
    const auto& atoms = j["atoms"];
    if (!atoms.is_array()) throw SpecError(where + ".atoms: expected an array");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      out.atoms.push_back({wrap_angle(unit * number(field(atoms[i], "angle", w), w + ".angle")),
                           number(field(atoms[i], "weight", w), w + ".weight")});
    }
  }
  if (j.contains("density")) {
    const auto& dens = j["density"];
    const std::string w = where + ".density";
    if (!dens.is_object()) throw SpecError(w + ": expected an object");
    if (dens.contains("trig")) out.density.push_back(DensityPiece{0.0, two_pi, trig(dens["trig"], w + ".trig")});
    if (dens.contains("pieces")) {
      const auto& pieces = dens["pieces"];
      if (!pieces.is_array()) throw SpecError(w + ".pieces: expected an array");
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string pw = w + ".pieces[" + std::to_string(i) + "]";
        const auto& pj = pieces[i];
        const double from = unit * number(field(pj, "from", pw), pw + ".from");
        const double to = unit * number(field(pj, "to", pw), pw + ".to");
        TrigPoly poly;
        if (pj.contains("value")) poly = TrigPoly::constant(number(pj["value"], pw + ".value"));
        else if (pj.contains("trig")) poly = trig(pj["trig"], pw + ".trig");
        else throw SpecError(pw + ": needs \"value\" or \"trig\"");
        if (!(to > from)) throw SpecError(pw + ": needs from < to");
        for (auto& piece : make_arc_pieces(from, to, poly)) out.density.push_back(std::move(piece));
      }
    }
  }
}

inline double scale_of(const json& j, const std::string& where) {
  if (!j.contains("scale")) return 1.0;
  const double t = number(j["scale"], where + ".scale");
  if (t < 0.0) throw SpecError(where + ".scale: must be non-negative");
  return t;
}

inline std::string kind_of(const json& j, const std::string& where) {
  const auto& k = field(j, "kind", where);
  if (!k.is_string()) throw SpecError(where + ".kind: expected a string");
  return k.get<std::string>();
}

inline int alphabet_of(const json& j, int inherited, const std::string& where) {
  if (!j.contains("d")) {
    if (inherited > 0) return inherited;
    throw SpecError(where + ": missing field \"d\"");
  }
  const int d = integer(j["d"], where + ".d");
  if (d < 1) throw SpecError(where + ".d: alphabet size must be at least 1");
  if (inherited > 0 && d != inherited) throw SpecError(where + ".d: differs from the enclosing spec");
  return d;
}

inline NcMeasure build(const json& j, int budget, int inherited_d, const std::string& where) {
  const int d = alphabet_of(j, inherited_d, where);
  const std::string kind = kind_of(j, where);
  const double t = scale_of(j, where);
  auto finish = [&](NcMeasure m) { return t == 1.0 ? m : scale(m, t); };
  try {
    if (kind == "lebesgue") return finish(make_lebesgue(d, budget));
    if (kind == "weighted") return finish(make_weighted(d, polynomial(field(j, "h", where), d, where + ".h"), budget));
    if (kind == "atoms" || kind == "density") {
      if (d != 1) throw SpecError(where + ": kind \"" + kind + "\" needs d = 1");
      ClassicalSpec spec;
      classical_parts(j, spec, where);
      return finish(make_classical(spec, budget));
    }
    if (kind == "row_unitary") {
      const auto& uj = field(j, "U", where);
      if (!uj.is_array()) throw SpecError(where + ".U: expected an array of matrices");
      std::vector<Matrix> u;
      for (std::size_t i = 0; i < uj.size(); ++i) u.push_back(matrix(uj[i], where + ".U[" + std::to_string(i) + "]"));
      if (static_cast<int>(u.size()) != d) throw SpecError(where + ".U: expected " + std::to_string(d) + " matrices");
      const auto& xj = field(j, "xi", where);
      if (!xj.is_array()) throw SpecError(where + ".xi: expected an array");
      Vector xi(static_cast<Eigen::Index>(xj.size()));
      for (std::size_t i = 0; i < xj.size(); ++i)
        xi(static_cast<Eigen::Index>(i)) = scalar(xj[i], where + ".xi[" + std::to_string(i) + "]");
      return finish(make_row_unitary(u, xi, budget));
    }
    if (kind == "sum") {
      const auto& terms = field(j, "terms", where);
      if (!terms.is_array() || terms.empty()) throw SpecError(where + ".terms: expected a non-empty array");
      std::optional<NcMeasure> acc;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        NcMeasure m = build(terms[i], budget, d, where + ".terms[" + std::to_string(i) + "]");
        acc = acc ? add(*acc, m) : m;
      }
      return finish(*acc);
    }
  } catch (const SpecError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0 || msg.rfind("$", 0) == 0) throw;
    throw SpecError(where + ": " + msg);
  }
  throw SpecError(where + ".kind: unknown kind \"" + kind + "\"");
}

inline void classical_collect(const json& j, ClassicalSpec& out, double factor, const std::string& where, bool& ok) {
  const std::string kind = kind_of(j, where);
  const double t = factor * scale_of(j, where);
  if (kind == "lebesgue") {
    out = merged(out, ClassicalSpec{{}, {DensityPiece{0.0, two_pi, TrigPoly::constant(t)}}});
  } else if (kind == "atoms" || kind == "density") {
    ClassicalSpec s;
    classical_parts(j, s, where);
    out = merged(out, scaled(s, t));
  } else if (kind == "sum") {
    const auto& terms = field(j, "terms", where);
    for (std::size_t i = 0; i < terms.size(); ++i)
      classical_collect(terms[i], out, t, where + ".terms[" + std::to_string(i) + "]", ok);
  } else {
    ok = false;
  }
}

}  // namespace detail

/// Alphabet size of a measure spec.
inline int spec_alphabet(const json& j) { return detail::alphabet_of(j, 0, "$"); }

/// Moment budget declared in the spec, if any.
inline std::optional<int> spec_budget(const json& j) {
  if (!j.is_object() || !j.contains("budget")) return std::nullopt;
  const int b = detail::integer(j["budget"], "$.budget");
  if (b < 0) throw SpecError("$.budget: must be non-negative");
  return b;
}

/// Builds the measure; a missing "budget" falls back to `default_budget`.
inline NcMeasure measure_from_json(const json& j, int default_budget) {
  const int budget = spec_budget(j).value_or(default_budget);
  return detail::build(j, budget, 0, "$");
}

/// The spec as a circle measure, when d = 1 and every part is lebesgue, atoms or density.
inline std::optional<ClassicalSpec> classical_view(const json& j) {
  if (spec_alphabet(j) != 1) return std::nullopt;
  ClassicalSpec out;
  bool ok = true;
  detail::classical_collect(j, out, 1.0, "$", ok);
  if (!ok) return std::nullopt;
  return out;
}

struct PointSpec {
  struct Entry {
    MatrixPoint z;
    std::optional<MatrixPoint> w;
  };
  std::vector<Entry> points;
  Polynomial cauchy_p;
  std::optional<Matrix> kernel_a;
  std::optional<int> degree;
};

inline constexpr Eigen::Index max_point_size = 8;

namespace detail {

inline MatrixPoint point(const json& j, int d, const std::string& where) {
  if (!j.is_array()) throw SpecError(where + ": expected an array of " + std::to_string(d) + " components");
  if (static_cast<int>(j.size()) != d)
    throw SpecError(where + ": expected " + std::to_string(d) + " components, got " + std::to_string(j.size()));
  MatrixPoint p;
  for (std::size_t i = 0; i < j.size(); ++i) p.z.push_back(component(j[i], where + "[" + std::to_string(i) + "]"));
  for (const auto& zk : p.z)
    if (zk.rows() != p.size() || zk.cols() != p.size())
      throw SpecError(where + ": components must be square matrices of equal size");
  if (p.size() > max_point_size) throw SpecError(where + ": matrix size exceeds 8");
  return p;
}

/// Random point with row norm uniform in (0, radius].
inline MatrixPoint random_point(std::mt19937_64& rng, int d, Eigen::Index n, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixPoint p;
  for (int k = 0; k < d; ++k) {
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = cplx{u(rng), u(rng)};
    p.z.push_back(std::move(m));
  }
  const double target = radius * (0.5 * (u(rng) + 1.0));
  const double norm = p.row_norm();
  for (auto& zk : p.z) zk *= (norm > 0.0 ? std::max(target, 1e-3) / norm : 0.0);
  return p;
}

}  // namespace detail

inline PointSpec points_from_json(const json& j, int d, std::uint64_t seed) {
  if (!j.is_object()) throw SpecError("$: expected an object");
  PointSpec out;
  if (j.contains("points")) {
    const auto& pts = j["points"];
    if (!pts.is_array()) throw SpecError("$.points: expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string w = "$.points[" + std::to_string(i) + "]";
      PointSpec::Entry e{detail::point(detail::field(pts[i], "Z", w), d, w + ".Z"), std::nullopt};
      if (pts[i].contains("W")) e.w = detail::point(pts[i]["W"], d, w + ".W");
      out.points.push_back(std::move(e));
    }
  }
  if (j.contains("random")) {
    const auto& r = j["random"];
    const int count = detail::integer(detail::field(r, "count", "$.random"), "$.random.count");
    const int n = r.contains("n") ? detail::integer(r["n"], "$.random.n") : 1;
    const double radius = r.contains("radius") ? detail::number(r["radius"], "$.random.radius") : 0.7;
    if (count < 0 || n < 1 || n > max_point_size) throw SpecError("$.random: count >= 0 and 1 <= n <= 8 required");
    if (!(radius > 0.0 && radius < 1.0)) throw SpecError("$.random.radius: must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) out.points.push_back({detail::random_point(rng, d, n, radius), std::nullopt});
  }
  if (out.points.empty()) throw SpecError("$: no evaluation points given");
  if (j.contains("cauchy_p")) out.cauchy_p = detail::polynomial(j["cauchy_p"], d, "$.cauchy_p");
  else out.cauchy_p[Word{}] = 1.0;
  if (j.contains("kernel_A")) out.kernel_a = detail::matrix(j["kernel_A"], "$.kernel_A");
  if (j.contains("degree")) {
    out.degree = detail::integer(j["degree"], "$.degree");
    if (*out.degree < 0) throw SpecError("$.degree: must be non-negative");
  }
  return out;
}

}  // namespace ncm::io
