// ncmeasure: Lebesgue decompositions, transforms and Cuntz diagnostics for
// NC measures given as JSON spec files.
//
// Exit codes: 0 ok, 2 spec or validation error, 3 numerical failure,
// 4 internal invariant breach.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "ncmeasure/ncmeasure.hpp"
#include "ncmeasure/report.hpp"
#include "ncmeasure/spec_io.hpp"

namespace {

using ncm::report::json;

struct RunConfig {
  std::vector<int> ladder{2, 4, 6};
  double tol_psd = 1e-10;
  double tol_null = 1e-10;
  double singular_cut = 0.45;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 42;

  ncm::Tolerances tolerances() const { return {tol_psd, tol_null}; }

  ncm::SimonOptions simon() const {
    ncm::SimonOptions o;
    o.tol = tolerances();
    o.singular_cut = singular_cut;
    return o;
  }

  json to_json() const {
    return {{"degree_ladder", ladder},
            {"tol_psd", ncm::report::real(tol_psd)},
            {"tol_null", ncm::report::real(tol_null)},
            {"singular_cut", ncm::report::real(singular_cut)},
            {"verdict_thresholds",
             {{"toeplitz", 1e-6}, {"singular_trace", 1e-6}, {"cuntz", 1e-6}, {"kernel_singular_value", 1e-8}}},
            {"format", format},
            {"seed", seed}};
  }
};

int hard_cap(int d) {
  if (d == 1) return 128;
  if (d == 2) return 8;
  int n = 0;
  while (ncm::word_count(d, n + 1) <= 1000) ++n;
  return n;
}

void check_ladder(const RunConfig& cfg, int d, std::size_t min_size) {
  ncm::check_ladder(cfg.ladder, min_size);
  if (cfg.ladder.back() > hard_cap(d))
    throw ncm::SpecError("degree " + std::to_string(cfg.ladder.back()) + " exceeds the cap " +
                         std::to_string(hard_cap(d)) + " for d = " + std::to_string(d));
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  const std::filesystem::path target(cfg.out);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ncm::SpecError("cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw ncm::SpecError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string render(const RunConfig& cfg, const json& doc, const std::string& text) {
  return cfg.format == "json" ? doc.dump(2) + "\n" : text;
}

void check_invariants(const ncm::DecompositionReport& rep, const ncm::NcMeasure& mu, double tol_psd) {
  for (const auto& r : rep.per_degree) {
    for (std::size_t i = 0; i < r.moments_ac.size(); ++i)
      if (r.moments_ac[i] + r.moments_s[i] != mu.moment_at(i) &&
          std::abs(r.moments_ac[i] + r.moments_s[i] - mu.moment_at(i)) > 1e-12 * std::max(1.0, mu.mass()))
        throw ncm::InvariantError("moments_ac + moments_s differs from mu at degree " + std::to_string(r.degree));
    if (!r.parts_psd(tol_psd))
      throw ncm::InvariantError("decomposition part is not PSD at degree " + std::to_string(r.degree));
  }
}

int cmd_decompose(const RunConfig& cfg, const std::string& mu_path, const std::string& lambda_path) {
  const auto mu_spec = ncm::io::load_json(mu_path);
  const auto lambda_spec = ncm::io::load_json(lambda_path);
  const int d = ncm::io::spec_alphabet(mu_spec);
  if (ncm::io::spec_alphabet(lambda_spec) != d) throw ncm::SpecError("mu and lambda specs have different d");
  check_ladder(cfg, d, 1);
  const int top = cfg.ladder.back();
  const auto mu = ncm::io::measure_from_json(mu_spec, top);
  const auto lambda = ncm::io::measure_from_json(lambda_spec, top);

  const auto rep = ncm::decompose_report(mu, lambda, cfg.ladder, cfg.simon());
  check_invariants(rep, mu, cfg.tol_psd);

  std::vector<int> cuntz_degrees;
  for (int n : cfg.ladder)
    if (n >= 1) cuntz_degrees.push_back(n);
  const auto trace = ncm::cuntz_trace(lambda, cuntz_degrees, cfg.tolerances());

  std::vector<ncm::OracleComparison> cmp;
  if (d == 1) {
    const auto mu_c = ncm::io::classical_view(mu_spec);
    const auto lambda_c = ncm::io::classical_view(lambda_spec);
    if (mu_c && lambda_c) {
      const auto oracle = ncm::oracle_moments(ncm::oracle_decompose(*mu_c, *lambda_c), top);
      for (const auto& r : rep.per_degree) cmp.push_back(ncm::compare(r, oracle, r.degree));
    }
  }

  json doc = ncm::report::header("decompose", cfg.to_json());
  doc["inputs"] = {{"mu", ncm::report::measure_info(mu_path, mu)}, {"lambda", ncm::report::measure_info(lambda_path, lambda)}};
  const json body = ncm::report::decomposition(rep);
  for (const auto& [k, v] : body.items()) doc[k] = v;
  doc["cuntz_trace_lambda"] = ncm::report::cuntz(trace);
  if (!cmp.empty()) doc["oracle"] = ncm::report::oracle(cmp);

  std::string text = "ncmeasure " + std::string(ncm::version) + " decompose " + mu_path + " " + lambda_path + "\n";
  text += ncm::report::decomposition_text(rep, cmp);
  emit(cfg, render(cfg, doc, text));
  return 0;
}

int cmd_transform(const RunConfig& cfg, const std::string& mu_path, const std::string& points_path) {
  const auto mu_spec = ncm::io::load_json(mu_path);
  const int d = ncm::io::spec_alphabet(mu_spec);
  const auto pts = ncm::io::points_from_json(ncm::io::load_json(points_path), d, cfg.seed);
  const int degree = pts.degree.value_or(cfg.ladder.back());
  if (degree > hard_cap(d)) throw ncm::SpecError("transform degree exceeds the cap for d = " + std::to_string(d));
  int p_degree = 0;
  for (const auto& [w, c] : pts.cauchy_p) p_degree = std::max(p_degree, static_cast<int>(w.size()));
  const auto mu = ncm::io::measure_from_json(mu_spec, std::max({degree, p_degree, 1}));

  struct Evaluated {
    double row_norm;
    ncm::TransformValue h, c, k, mk;
  };
  const auto values = ncm::parallel_map(pts.points.size(), [&](std::size_t i) {
    const auto& e = pts.points[i];
    const ncm::MatrixPoint& w = e.w ? *e.w : e.z;
    const ncm::Matrix a = pts.kernel_a ? *pts.kernel_a : ncm::Matrix::Identity(e.z.size(), w.size());
    return Evaluated{e.z.row_norm(), ncm::herglotz(mu, e.z, degree), ncm::cauchy(mu, pts.cauchy_p, e.z, degree),
                     ncm::szego_kernel(e.z, w, a, degree), ncm::mu_kernel(mu, e.z, w, a, degree)};
  });

  json doc = ncm::report::header("transform", cfg.to_json());
  doc["inputs"] = {{"mu", ncm::report::measure_info(mu_path, mu)}, {"points", points_path}};
  doc["degree"] = degree;
  json arr = json::array();
  std::string text = "ncmeasure " + std::string(ncm::version) + " transform " + mu_path + " " + points_path + "\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& v = values[i];
    json p;
    p["Z"] = json::array();
    for (const auto& zk : pts.points[i].z.z) p["Z"].push_back(ncm::report::matrix(zk));
    p["row_norm"] = ncm::report::real(v.row_norm);
    p["herglotz"] = ncm::report::transform_value(v.h);
    p["cauchy"] = ncm::report::transform_value(v.c);
    p["szego_kernel"] = ncm::report::transform_value(v.k);
    p["mu_kernel"] = ncm::report::transform_value(v.mk);
    arr.push_back(std::move(p));
    text += "point " + std::to_string(i) + " (row norm " + ncm::report::fmt(v.row_norm) + ")\n";
    text += "  herglotz (tail " + ncm::report::fmt(v.h.tail_bound) + ")\n" + ncm::report::matrix_text(v.h.value);
    text += "  cauchy (tail " + ncm::report::fmt(v.c.tail_bound) + ")\n" + ncm::report::matrix_text(v.c.value);
    text += "  szego kernel (tail " + ncm::report::fmt(v.k.tail_bound) + ")\n" + ncm::report::matrix_text(v.k.value);
    text += "  mu kernel (tail " + ncm::report::fmt(v.mk.tail_bound) + ")\n" + ncm::report::matrix_text(v.mk.value);
  }
  doc["points"] = std::move(arr);
  emit(cfg, render(cfg, doc, text));
  return 0;
}

int cmd_diagnose(const RunConfig& cfg, const std::string& lambda_path) {
  const auto spec = ncm::io::load_json(lambda_path);
  const int d = ncm::io::spec_alphabet(spec);
  check_ladder(cfg, d, 1);
  const auto lambda = ncm::io::measure_from_json(spec, cfg.ladder.back());

  const auto truncs = ncm::parallel_map(cfg.ladder.size(), [&](std::size_t i) {
    return ncm::build_gns(lambda, cfg.ladder[i], cfg.tolerances());
  });
  std::vector<int> cuntz_degrees;
  for (int n : cfg.ladder)
    if (n >= 1) cuntz_degrees.push_back(n);
  const auto trace = ncm::cuntz_trace(lambda, cuntz_degrees, cfg.tolerances());

  json doc = ncm::report::header("diagnose", cfg.to_json());
  doc["inputs"] = {{"lambda", ncm::report::measure_info(lambda_path, lambda)}};
  json degrees = json::array();
  std::string text = "ncmeasure " + std::string(ncm::version) + " diagnose " + lambda_path + "\n";
  for (const auto& t : truncs) {
    degrees.push_back({{"degree", t.degree}, {"size", t.size()}, {"rank", t.rank}, {"null_dimension", t.null_dimension()}});
    text += "degree " + std::to_string(t.degree) + ": size " + std::to_string(t.size()) + ", rank " +
            std::to_string(t.rank) + ", null " + std::to_string(t.null_dimension()) + "\n";
  }
  doc["degrees"] = std::move(degrees);
  doc["cuntz_trace"] = ncm::report::cuntz(trace);
  for (std::size_t i = 0; i < trace.degrees.size(); ++i)
    text += "cuntz distance at " + std::to_string(trace.degrees[i]) + ": " + ncm::report::fmt(trace.distances[i]) + "\n";
  text += std::string("cuntz (heuristic): ") + (trace.cuntz ? "yes" : "no") + "\n";
  emit(cfg, render(cfg, doc, text));
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--degree-ladder", cfg.ladder, "Truncation degrees, strictly increasing")->delimiter(',');
  cmd->add_option("--tol-psd", cfg.tol_psd, "Relative PSD tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-null", cfg.tol_null, "Relative numerical-rank threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--singular-cut", cfg.singular_cut,
                  "Directions with |E v|^2 <= cut/sqrt(N+1) count as singular; 0 keeps the exact kernel only")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--out", cfg.out, "Write the report here instead of stdout");
  cmd->add_option("--seed", cfg.seed, "Seed for random evaluation points");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lebesgue decomposition of NC measures on truncated Fock spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ncm::version));
  RunConfig cfg;
  std::string a, b;

  auto* dec = app.add_subcommand("decompose", "Decompose MU against the splitting measure LAMBDA");
  dec->add_option("mu", a, "Measure spec (JSON)")->required()->check(CLI::ExistingFile);
  dec->add_option("lambda", b, "Splitting measure spec (JSON)")->required()->check(CLI::ExistingFile);
  add_common(dec, cfg);

  auto* tr = app.add_subcommand("transform", "Evaluate transforms of MU at matrix points");
  tr->add_option("mu", a, "Measure spec (JSON)")->required()->check(CLI::ExistingFile);
  tr->add_option("points", b, "Point spec (JSON)")->required()->check(CLI::ExistingFile);
  add_common(tr, cfg);

  auto* diag = app.add_subcommand("diagnose", "Gram ranks and Cuntz distance trace of LAMBDA");
  diag->add_option("lambda", a, "Measure spec (JSON)")->required()->check(CLI::ExistingFile);
  add_common(diag, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dec->parsed()) return cmd_decompose(cfg, a, b);
    if (tr->parsed()) return cmd_transform(cfg, a, b);
    return cmd_diagnose(cfg, a);
  } catch (const ncm::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ncm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const ncm::InvariantError& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
