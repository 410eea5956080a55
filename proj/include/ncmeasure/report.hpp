#pragma once

// Deterministic JSON and text rendering of decomposition, transform and
// diagnostic results. Doubles are rounded to 15 significant digits and
// complex numbers are written as [re, im].

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncmeasure/classical.hpp"
#include "ncmeasure/decompose.hpp"
#include "ncmeasure/gns.hpp"
#include "ncmeasure/transforms.hpp"
#include "ncmeasure/version.hpp"

namespace ncm::report {

using json = nlohmann::ordered_json;

inline constexpr int digits = 15;
inline constexpr int schema = 1;

inline json real(double x) { return round_significant(x, digits); }

inline json real(const std::optional<double>& x) { return x ? real(*x) : json(nullptr); }

inline json complex(cplx z) { return json::array({real(z.real()), real(z.imag())}); }

inline json complex_table(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(complex(z));
  return a;
}

inline json matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json word(const Word& w) {
  json a = json::array();
  for (std::size_t i = 0; i < w.size(); ++i) a.push_back(w[i]);
  return a;
}

inline json words(int d, int degree) {
  json a = json::array();
  const WordIndex idx(d, degree);
  for (const auto& w : idx.words()) a.push_back(word(w));
  return a;
}

inline json measure_info(const std::string& path, const NcMeasure& m) {
  return {{"path", path}, {"d", m.alphabet()}, {"budget", m.budget()}, {"generator", to_string(m.generator())},
          {"mass", real(m.mass())}};
}

inline json header(const char* command, json config) {
  return {{"schema", schema}, {"version", version}, {"command", command}, {"config", std::move(config)}};
}

inline json psd(const PsdReport& r) {
  return {{"min_eigenvalue", real(r.min_eigenvalue)}, {"max_eigenvalue", real(r.max_eigenvalue)}};
}

inline json degree_entry(const DecompositionResult& r) {
  return {{"degree", r.degree},
          {"moments_ac", complex_table(r.moments_ac)},
          {"moments_s", complex_table(r.moments_s)},
          {"kernel_dim", r.kernel_dim},
          {"singular_dim", r.singular_dim},
          {"smallest_nonzero_singular", real(r.smallest_nonzero_singular)},
          {"trace_d", real(r.d_trace)},
          {"toeplitz_residual", real(r.toeplitz_residual)},
          {"cuntz_distance_lambda", real(r.cuntz_distance_lambda)},
          {"additivity_defect", real(r.additivity_defect)},
          {"psd_ac", psd(r.psd_ac)},
          {"psd_s", psd(r.psd_s)}};
}

inline json cuntz(const CuntzTrace& t) {
  json d = json::array();
  for (double x : t.distances) d.push_back(real(x));
  return {{"degrees", t.degrees}, {"distances", std::move(d)}, {"threshold", real(t.threshold)},
          {"cuntz", t.cuntz}, {"heuristic", true}};
}

inline json decomposition(const DecompositionReport& rep) {
  json out;
  out["words"] = words(rep.top().alphabet, rep.top().degree);
  json degrees = json::array();
  for (const auto& r : rep.per_degree) degrees.push_back(degree_entry(r));
  out["degrees"] = std::move(degrees);
  json conv = json::array();
  for (double c : rep.convergence) conv.push_back(real(c));
  out["convergence"] = std::move(conv);
  out["verdict"] = to_string(rep.detection.verdict);
  return out;
}

inline json oracle(const std::vector<OracleComparison>& cmp) {
  json a = json::array();
  for (const auto& c : cmp) a.push_back({{"degree", c.degree}, {"ac_error", real(c.ac_error)}, {"sing_error", real(c.sing_error)}});
  return a;
}

inline json transform_value(const TransformValue& v) {
  return {{"value", matrix(v.value)}, {"tail_bound", real(v.tail_bound)}};
}

// ---- text rendering ------------------------------------------------------

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, round_significant(x, digits));
  return buf;
}

inline std::string fmt(cplx z) {
  const double re = round_significant(z.real(), digits), im = round_significant(z.imag(), digits);
  if (im == 0.0) return fmt(re);
  return fmt(re) + (im < 0 ? " - " : " + ") + fmt(std::abs(im)) + "i";
}

inline std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string("n/a"); }

inline std::string decomposition_text(const DecompositionReport& rep, const std::vector<OracleComparison>& cmp) {
  std::string s;
  const auto& top = rep.top();
  const WordIndex idx(top.alphabet, top.degree);
  for (const auto& r : rep.per_degree) {
    s += "degree " + std::to_string(r.degree) + ": kernel_dim " + std::to_string(r.kernel_dim) + ", singular_dim " +
         std::to_string(r.singular_dim) + ", trace(D) " + fmt(r.d_trace) + ", toeplitz " + fmt(r.toeplitz_residual) +
         ", cuntz(lambda) " + fmt(r.cuntz_distance_lambda) + "\n";
  }
  s += "moments at degree " + std::to_string(top.degree) + " (word: ac | s)\n";
  for (std::size_t i = 0; i < top.moments_ac.size(); ++i)
    s += "  " + idx[i].to_string() + ": " + fmt(top.moments_ac[i]) + " | " + fmt(top.moments_s[i]) + "\n";
  for (std::size_t i = 0; i < rep.convergence.size(); ++i)
    s += "change " + std::to_string(rep.per_degree[i].degree) + " -> " + std::to_string(rep.per_degree[i + 1].degree) +
         ": " + fmt(rep.convergence[i]) + "\n";
  for (const auto& c : cmp)
    s += "oracle degree " + std::to_string(c.degree) + ": ac error " + fmt(c.ac_error) + ", sing error " +
         fmt(c.sing_error) + "\n";
  s += std::string("verdict: ") + to_string(rep.detection.verdict) + "\n";
  return s;
}

inline std::string matrix_text(const Matrix& m) {
  std::string s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    s += "    [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) s += (c ? ", " : "") + fmt(m(r, c));
    s += "]\n";
  }
  return s;
}

}  // namespace ncm::report
