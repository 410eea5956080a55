#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "ncmeasure/measures.hpp"

using corpus::pi;
using ncm::cplx;
using ncm::Word;

namespace {

/// ∫_a^b e^{inθ} dθ/2π written out independently of the library.
cplx arc_moment(int n, double a, double b) {
  if (n == 0) return (b - a) / (2 * pi);
  return (std::exp(cplx{0, n * b}) - std::exp(cplx{0, n * a})) / cplx{0, 2 * pi * n};
}

}  // namespace

TEST(Moments, Lebesgue) {
  const auto m = ncm::make_lebesgue(2, 3);
  EXPECT_EQ(m.moment(Word{}), cplx(1.0));
  EXPECT_EQ(m.moment(Word{1, 2}), cplx(0.0));
  EXPECT_THROW(m.moment(Word{1, 1, 1, 1}), ncm::BudgetError);
}

TEST(Moments, DiracMasses) {
  const auto d0 = corpus::classical(corpus::atoms({{0.0, 1.0}}), 10);
  for (int n = 0; n <= 10; ++n) EXPECT_NEAR(std::abs(d0.moment(Word::power(1, n)) - 1.0), 0.0, 1e-15);
  const auto d0pi = corpus::classical(corpus::atoms({{0.0, 1.0}, {pi, 1.0}}), 10);
  for (int n = 0; n <= 10; ++n)
    EXPECT_NEAR(std::abs(d0pi.moment(Word::power(1, n)) - (1.0 + std::exp(cplx{0, n * pi}))), 0.0, 1e-14);
}

TEST(Moments, SesquimomentReduction) {
  const auto d0pi = corpus::classical(corpus::atoms({{0.0, 1.0}, {pi, 1.0}}), 8);
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 4; ++m)
      EXPECT_NEAR(std::abs(ncm::sesquimoment(d0pi, Word::power(1, n), Word::power(1, m)) - (1.0 + std::exp(cplx{0, (m - n) * pi}))),
                  0.0, 1e-14);
  const auto m2 = ncm::make_lebesgue(2, 3);
  EXPECT_EQ(ncm::sesquimoment(m2, Word{1, 2}, Word{1, 2}), cplx(1.0));
  EXPECT_EQ(ncm::sesquimoment(m2, Word{1, 2}, Word{2, 1}), cplx(0.0));
  EXPECT_EQ(ncm::sesquimoment(corpus::row_unitary_example(3), Word{1}, Word{2}), cplx(0.0));
}

TEST(Gram, Examples) {
  EXPECT_TRUE(ncm::gram(ncm::make_lebesgue(2, 3), 3).entries.isIdentity(0.0));
  const auto g = ncm::gram(corpus::classical(corpus::atoms({{0.0, 1.0}}), 1), 1).entries;
  EXPECT_TRUE(g.isApprox(ncm::Matrix::Ones(2, 2), 1e-15));
  const auto g2 = ncm::gram(corpus::classical(corpus::atoms({{0.0, 1.0}, {pi, 1.0}}), 2), 2).entries;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) EXPECT_NEAR(std::abs(g2(a, b) - (1.0 + std::exp(cplx{0, (b - a) * pi}))), 0.0, 1e-14);
  Eigen::SelfAdjointEigenSolver<ncm::Matrix> es(g2);
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-12);
  EXPECT_GT(es.eigenvalues()(1), 1.0);
}

TEST(Gram, RejectsNonPositiveTable) {
  std::vector<cplx> m{1.0, 2.0};  // |μ(z)| > μ(1)
  const auto bad = ncm::make_residual(1, 1, m);
  try {
    ncm::gram(bad, 1);
    FAIL() << "expected NumericalError";
  } catch (const ncm::NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("eigenvalue"), std::string::npos);
  }
}

TEST(Generators, WeightedVacuumIsLebesgue) {
  const auto w = ncm::make_weighted(2, {{Word{}, 1.0}}, 4);
  EXPECT_EQ(w.moments(), ncm::make_lebesgue(2, 4).moments());
}

TEST(Generators, WeightedMomentsByHand) {
  // h = a + b z_1: μ(L_1) = conj(b)·a, μ(L_2) = 0, μ(1) = |a|² + |b|²
  const cplx a{0.8, 0.1}, b{0.3, -0.2};
  const auto w = ncm::make_weighted(2, {{Word{}, a}, {Word{1}, b}}, 3);
  EXPECT_NEAR(std::abs(w.moment(Word{}) - (std::norm(a) + std::norm(b))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.moment(Word{1}) - std::conj(b) * a), 0.0, 1e-15);
  EXPECT_EQ(w.moment(Word{2}), cplx(0.0));
  EXPECT_EQ(w.moment(Word{1, 1}), cplx(0.0));
}

TEST(Generators, RowUnitaryScalarIsPointMass) {
  ncm::Vector xi(1);
  xi << 1.0;
  const auto m = ncm::make_row_unitary({ncm::Matrix::Constant(1, 1, std::exp(cplx{0, pi}))}, xi, 6);
  for (int n = 0; n <= 6; ++n) EXPECT_NEAR(std::abs(m.moment(Word::power(1, n)) - std::pow(-1.0, n)), 0.0, 1e-14);
}

TEST(Generators, RowUnitaryValidation) {
  ncm::Vector xi(1);
  xi << 1.0;
  EXPECT_THROW(ncm::make_row_unitary({ncm::Matrix::Constant(1, 1, 0.5)}, xi, 2), ncm::SpecError);
  ncm::Vector long_xi(1);
  long_xi << 2.0;
  EXPECT_THROW(ncm::make_row_unitary({ncm::Matrix::Constant(1, 1, 1.0)}, long_xi, 2), ncm::SpecError);
}

TEST(Generators, RowUnitaryMatchesDirectProducts) {
  std::mt19937_64 rng(11);
  const auto m = corpus::random_row_unitary(rng, 2, 3, 4);
  // rebuild with the same seed to recover U and ξ, then compare against <ξ, U^α ξ>
  std::mt19937_64 again(11);
  const ncm::Matrix w = corpus::random_unitary(again, 6);
  const ncm::Matrix v = corpus::random_unitary(again, 3);
  const ncm::Vector xi = v.col(0);
  for (const auto& word : m.index().words()) {
    ncm::Matrix p = ncm::Matrix::Identity(3, 3);
    for (std::size_t i = 0; i < word.size(); ++i) p = p * w.block(0, (word[i] - 1) * 3, 3, 3);
    EXPECT_NEAR(std::abs(m.moment(word) - xi.dot(p * xi)), 0.0, 1e-13) << word.to_string();
  }
}

TEST(Generators, ClassicalDensityOneIsLebesgue) {
  const auto m = corpus::classical(corpus::lebesgue_circle(), 12);
  EXPECT_NEAR(m.mass(), 1.0, 1e-12);
  for (int n = 1; n <= 12; ++n) EXPECT_LT(std::abs(m.moment(Word::power(1, n))), 1e-12);
}

TEST(Generators, ClassicalArcsAndTrigDensity) {
  const auto m1 = corpus::classical(corpus::upper_half(), 9);
  for (int n = 0; n <= 9; ++n) EXPECT_NEAR(std::abs(m1.moment(Word::power(1, n)) - arc_moment(n, 0, pi)), 0.0, 1e-14);
  const auto wrap = corpus::classical(corpus::arc(1.5 * pi, 2.5 * pi), 5);
  for (int n = 0; n <= 5; ++n)
    EXPECT_NEAR(std::abs(wrap.moment(Word::power(1, n)) - arc_moment(n, 1.5 * pi, 2.5 * pi)), 0.0, 1e-14);
  // (1 + cos θ): moments 1, 1/2, 0, ...
  const auto c = corpus::classical({{}, {{0.0, ncm::two_pi, ncm::TrigPoly::from_cos_sin({1.0, 1.0}, {})}}}, 6);
  EXPECT_NEAR(std::abs(c.moment(Word{}) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c.moment(Word{1}) - 0.5), 0.0, 1e-12);
  for (int n = 2; n <= 6; ++n) EXPECT_LT(std::abs(c.moment(Word::power(1, n))), 1e-12);
}

TEST(Generators, ClassicalValidation) {
  EXPECT_THROW(ncm::make_classical(corpus::atoms({{0.0, -1.0}}), 2), ncm::SpecError);
  ncm::ClassicalSpec neg{{}, {{0.0, ncm::two_pi, ncm::TrigPoly::from_cos_sin({0.5, 1.0}, {})}}};
  EXPECT_THROW(ncm::make_classical(neg, 2), ncm::SpecError);
}

TEST(Generators, MergedAtomsUseAngleTolerance) {
  const auto s = ncm::merged(corpus::atoms({{1.0, 1.0}}), corpus::atoms({{1.0 + 1e-13, 2.0}, {2.0, 1.0}}));
  ASSERT_EQ(s.atoms.size(), 2u);
  EXPECT_DOUBLE_EQ(s.atoms[0].weight, 3.0);
}

TEST(Generators, AddAndScaleAreLinear) {
  const auto a = corpus::row_unitary_example(4);
  const auto b = ncm::make_weighted(2, corpus::h_degree_one(), 4);
  const auto s = ncm::add(ncm::scale(a, 2.0), b);
  for (std::size_t i = 0; i < s.moments().size(); ++i)
    EXPECT_EQ(s.moment_at(i), 2.0 * a.moment_at(i) + b.moment_at(i));
  const ncm::Matrix diff = ncm::assemble_gram(ncm::add(a, b), 3) - ncm::assemble_gram(a, 3) - ncm::assemble_gram(b, 3);
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(ncm::scale(a, -1.0), ncm::SpecError);
}

TEST(Properties, ToeplitzIdentityAndPsdForRandomMeasures) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 30; ++t) {
    const int d = 1 + t % 2;
    const auto mu = corpus::random_measure(rng, d, 4);
    const ncm::WordIndex& idx = mu.index();
    for (std::size_t a = 0; a < idx.block(3); ++a)
      for (std::size_t b = 0; b < idx.block(3); ++b)
        for (int i = 1; i <= d; ++i)
          for (int j = 1; j <= d; ++j) {
            const cplx lhs = ncm::sesquimoment(mu, idx[a].prepend(i), idx[b].prepend(j));
            const cplx rhs = i == j ? ncm::sesquimoment(mu, idx[a], idx[b]) : cplx{};
            ASSERT_LE(std::abs(lhs - rhs), 1e-12);
          }
    for (int n = 0; n <= 4; ++n) EXPECT_NO_THROW(ncm::gram(mu, n));
  }
}

TEST(Properties, TruncationKeepsLeadingTable) {
  const auto m = ncm::make_weighted(2, corpus::h_degree_one(), 5);
  const auto t = m.truncated(3);
  EXPECT_EQ(t.budget(), 3);
  for (std::size_t i = 0; i < t.moments().size(); ++i) EXPECT_EQ(t.moment_at(i), m.moment_at(i));
  EXPECT_THROW(m.truncated(6), ncm::BudgetError);
}

TEST(Circle, TrapezoidMatchesExactTrigCoefficients) {
  const auto f = ncm::TrigPoly::from_cos_sin({2.0, 0.3, -0.4, 0.1}, {0.0, 0.2, 0.5});
  const auto m = ncm::trapezoid_moments(f, 6);
  // ∫ ζ^n f dθ/2π picks the coefficient of e^{-inθ}
  for (int n = 0; n <= 6; ++n) EXPECT_NEAR(std::abs(m[static_cast<std::size_t>(n)] - f.coeff(-n)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(f.coeff(-1) - cplx(0.15, 0.1)), 0.0, 1e-15);
}
