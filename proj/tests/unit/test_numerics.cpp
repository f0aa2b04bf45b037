#include <gtest/gtest.h>

#include <cmath>

#include "schmidtfock/errors.hpp"
#include "schmidtfock/numerics.hpp"
#include "schmidtfock/random.hpp"

using namespace schmidtfock;

TEST(Numerics, IdentityAndDiagonalSpectra) {
  const auto id = hermitian_eigen(Matrix::Identity(3, 3));
  for (double v : id.spectrum.values) EXPECT_NEAR(v, 1.0, 1e-14);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const auto e = hermitian_eigen(d);
  EXPECT_NEAR(e.spectrum.values[0], 2.0, 1e-14);
  EXPECT_NEAR(e.spectrum.values[1], 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-14);
}

TEST(Numerics, RandomHermitianReconstruction) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_hermitian(1 + trial % 9, rng);
    const auto e = hermitian_eigen(a);
    Eigen::VectorXd lam(static_cast<Eigen::Index>(e.spectrum.size()));
    for (std::size_t i = 0; i < e.spectrum.size(); ++i) lam[static_cast<Eigen::Index>(i)] = e.spectrum.values[i];
    const Matrix rebuilt = e.vectors * lam.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((rebuilt - a).norm(), 1e-9 * std::max(1.0, a.norm()));
    for (std::size_t i = 0; i + 1 < e.spectrum.size(); ++i) {
      EXPECT_GE(e.spectrum.values[i], e.spectrum.values[i + 1]);
    }
  }
}

TEST(Numerics, NonHermitianRejected) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eigen(a), NumericalError);
}

TEST(Numerics, SvdExamples) {
  Matrix diag = Matrix::Zero(3, 3);
  diag(0, 0) = -1.0;
  diag(1, 1) = 3.0;
  diag(2, 2) = Complex(0.0, 2.0);
  const auto s = svd(diag);
  EXPECT_NEAR(s.sigma.values[0], 3.0, 1e-14);
  EXPECT_NEAR(s.sigma.values[1], 2.0, 1e-14);
  EXPECT_NEAR(s.sigma.values[2], 1.0, 1e-14);

  Rng rng(3);
  Vector x(4), y(5);
  for (auto& v : x) v = rng.complex_normal();
  for (auto& v : y) v = rng.complex_normal();
  const auto r1 = svd(x * y.adjoint());
  EXPECT_NEAR(r1.sigma.values[0], x.norm() * y.norm(), 1e-12);
  EXPECT_NEAR(r1.sigma.values[1], 0.0, 1e-12);
}

TEST(Numerics, SvdMatchesGramEigenvalues) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a(4 + trial % 3, 3 + trial % 4);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.complex_normal();
    const auto s = svd(a);
    const auto e = hermitian_eigen(a * a.adjoint());
    for (std::size_t i = 0; i < s.sigma.size(); ++i) {
      EXPECT_NEAR(s.sigma.values[i] * s.sigma.values[i], e.spectrum.values[i], 1e-9);
    }
    Eigen::VectorXd sig(static_cast<Eigen::Index>(s.sigma.size()));
    for (std::size_t i = 0; i < s.sigma.size(); ++i) sig[static_cast<Eigen::Index>(i)] = s.sigma.values[i];
    EXPECT_LT((s.u * sig.cast<Complex>().asDiagonal() * s.v.adjoint() - a).norm(), 1e-9 * a.norm());
  }
}

TEST(Numerics, LowestEigenpairMatchesFullSolve) {
  Rng rng(5);
  for (int n : {1, 2, 7, 40}) {
    RealMatrix a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    a = 0.5 * (a + a.transpose()).eval();
    const auto low = lowest_eigenpair(a);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
    EXPECT_NEAR(low.value, es.eigenvalues()[0], 1e-10);
    EXPECT_LT((a * low.vector - low.value * low.vector).norm(), 1e-9 * std::max(1.0, a.norm()));
  }
}

TEST(Numerics, EntropyExamples) {
  const auto vn = EntropyKind::von_neumann();
  EXPECT_NEAR(entropy(std::vector<double>{1.0}, vn), 0.0, 1e-15);
  EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.5}, vn), 1.0, 1e-15);
  for (int n : {1, 3, 10}) {
    std::vector<double> p(static_cast<std::size_t>(2 * n), 1.0 / (2 * n));
    EXPECT_NEAR(entropy(p, vn), std::log2(2.0 * n), 1e-12);
  }
  EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.5}, EntropyKind::linear()), 0.5, 1e-15);
  EXPECT_NEAR(entropy(std::vector<double>{1.0, -5e-10}, vn), 0.0, 1e-15);
  EXPECT_THROW(entropy(std::vector<double>{1.1, -0.1}, vn), NumericalError);
  EXPECT_THROW(entropy(std::vector<double>{0.5, 0.4}, vn), InvalidArgument);
  const auto tsallis = EntropyKind::trace_form([](double p) { return p * (1 - p) * (1 + p); }, "cubic");
  EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.5}, tsallis), 0.75, 1e-15);
  EXPECT_THROW(EntropyKind::parse("renyi"), InvalidArgument);
  EXPECT_EQ(EntropyKind::parse("linear").tag(), EntropyKind::Tag::linear);
}

TEST(Numerics, MajorizationExamples) {
  const auto r = majorization_compare(make_spectrum({0.5, 0.5}), make_spectrum({1.0, 0.0}));
  EXPECT_EQ(r.relation, MajorizationRelation::majorized_by);
  EXPECT_EQ(majorization_compare(make_spectrum({0.3, 0.7}), make_spectrum({0.7, 0.3})).relation,
            MajorizationRelation::equal);
  EXPECT_EQ(majorization_compare(make_spectrum({0.6, 0.25, 0.15}), make_spectrum({0.5, 0.4, 0.1})).relation,
            MajorizationRelation::incomparable);
  // Different lengths are zero padded.
  EXPECT_EQ(majorization_compare(make_spectrum({0.25, 0.25, 0.25, 0.25}), make_spectrum({0.5, 0.5})).relation,
            MajorizationRelation::majorized_by);
  EXPECT_THROW(majorization_compare(make_spectrum({1.0}), make_spectrum({0.5})), InvalidArgument);
}

// p = T q for a T-transform (convex mix of identity and a transposition)
// yields p ≺ q, so Schur-concave entropies must not decrease.
TEST(Numerics, SchurConcavityUnderTTransforms) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.uniform_int(2, 8);
    std::vector<double> q(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : q) total += (x = rng.uniform() + 1e-3);
    for (auto& x : q) x /= total;
    std::vector<double> p = q;
    for (int step = 0; step < 3; ++step) {
      const int i = rng.uniform_int(0, n - 1);
      const int j = rng.uniform_int(0, n - 1);
      const double t = rng.uniform();
      const double pi = p[static_cast<std::size_t>(i)];
      const double pj = p[static_cast<std::size_t>(j)];
      p[static_cast<std::size_t>(i)] = t * pi + (1 - t) * pj;
      p[static_cast<std::size_t>(j)] = t * pj + (1 - t) * pi;
    }
    const auto rel = majorization_compare(make_spectrum(p), make_spectrum(q));
    EXPECT_GE(rel.margin_p_below_q, -1e-12);
    for (const auto& kind : {EntropyKind::von_neumann(), EntropyKind::linear()}) {
      EXPECT_GE(entropy(p, kind), entropy(q, kind) - 1e-12);
    }
  }
}

TEST(Numerics, DecompositionsAreDeterministic) {
  Rng rng(99);
  const Matrix a = random_hermitian(12, rng);
  const auto e1 = hermitian_eigen(a);
  const auto e2 = hermitian_eigen(a);
  EXPECT_EQ(e1.spectrum.values, e2.spectrum.values);
  EXPECT_TRUE((e1.vectors.array() == e2.vectors.array()).all());
}
