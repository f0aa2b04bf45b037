#include <gtest/gtest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "dense_fock.hpp"
#include "schmidtfock/errors.hpp"
#include "schmidtfock/random.hpp"
#include "schmidtfock/states.hpp"

using namespace schmidtfock;

namespace {

OccupationVector occ(Statistics st, std::vector<int> v) { return OccupationVector(st, std::move(v)); }

FockVector ket(Statistics st, std::vector<int> v) { return FockVector::basis_state(occ(st, std::move(v))); }

double distance(const FockVector& a, const FockVector& b) { return (a - b).norm(); }

}  // namespace

TEST(States, MakeStateExamples) {
  const FockBasis b = enumerate_basis(Statistics::boson, 2, 1);
  Vector one(2);
  one << 1.0, 0.0;
  EXPECT_NO_THROW(make_state(b, one, false));
  Vector two(2);
  two << 1.0, 1.0;
  const PureState s = make_state(b, two, true);
  EXPECT_NEAR(std::abs(s.amplitude(b[0]) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude(b[1]) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_THROW(make_state(b, Vector::Zero(2), true), InvalidArgument);
  EXPECT_THROW(make_state(b, Vector::Zero(3), true), InvalidArgument);
  EXPECT_THROW(make_state(b, two, false), InvalidArgument);
}

TEST(States, LadderExamples) {
  const auto B = Statistics::boson;
  const auto F = Statistics::fermion;
  EXPECT_LT(distance(apply_annihilator(ket(B, {2, 0}), 0), std::sqrt(2.0) * ket(B, {1, 0})), 1e-15);
  EXPECT_LT(distance(apply_annihilator(ket(F, {1, 1}), 1), -1.0 * ket(F, {1, 0})), 1e-15);
  EXPECT_EQ(apply_annihilator(ket(F, {0, 1}), 0).nonzeros(), 0u);
  EXPECT_LT(distance(apply_creator(ket(B, {1, 0}), 0), std::sqrt(2.0) * ket(B, {2, 0})), 1e-15);
  EXPECT_LT(distance(apply_creator(ket(F, {0, 1}), 0), ket(F, {1, 1})), 1e-15);
  EXPECT_EQ(apply_creator(ket(F, {1, 0}), 0).nonzeros(), 0u);
  EXPECT_THROW(apply_annihilator(ket(F, {1, 0}), 2), InvalidArgument);
}

TEST(States, AnnihilationProductExamples) {
  const auto F = Statistics::fermion;
  // alpha = full occupation of a determinant leaves the vacuum with unit weight.
  const FockVector full = apply_annihilation_product(ket(F, {1, 0, 1, 1}), occ(F, {1, 0, 1, 1}));
  ASSERT_EQ(full.nonzeros(), 1u);
  EXPECT_NEAR(std::abs(full.entries()[0].value), 1.0, 1e-15);
  // c_1^2 / sqrt(2) on |2,0> is |0>, norm^2 = C(2,2) = 1.
  const auto B = Statistics::boson;
  const FockVector v = apply_annihilation_product(ket(B, {2, 0}), occ(B, {2, 0}));
  EXPECT_NEAR(v.squared_norm(), 1.0, 1e-15);
}

TEST(States, ComposeExamples) {
  const auto F = Statistics::fermion;
  const auto B = Statistics::boson;
  EXPECT_LT(distance(compose_product_state(ket(F, {1, 0, 0}), ket(F, {0, 1, 0})), ket(F, {1, 1, 0})), 1e-15);
  EXPECT_LT(distance(compose_product_state(ket(F, {0, 1, 0}), ket(F, {1, 0, 0})), -1.0 * ket(F, {1, 1, 0})),
            1e-15);
  EXPECT_LT(distance(compose_product_state(ket(B, {1, 0}), ket(B, {1, 0})), std::sqrt(2.0) * ket(B, {2, 0})),
            1e-15);
  EXPECT_THROW(compose_product_state(ket(F, {1, 0}), ket(F, {1, 0, 0})), InvalidArgument);
}

// Every ladder and product operation agrees with the brute-force matrices.
TEST(States, OperatorsMatchDenseOracle) {
  for (Statistics st : {Statistics::boson, Statistics::fermion}) {
    const bool f = st == Statistics::fermion;
    const int d = 4;
    const int nmax = 4;
    const oracle::DenseFock fock(f, d, nmax);
    Rng rng(17);
    for (int N = 1; N <= 3; ++N) {
      const PureState psi = random_state(st, d, N, rng);
      const oracle::Vec v = fock.embed(psi);
      for (int i = 0; i < d; ++i) {
        EXPECT_LT((fock.embed(apply_annihilator(psi.vector(), i)) - fock.annihilator(i) * v).norm(), 1e-12);
        EXPECT_LT((fock.embed(apply_creator(psi.vector(), i)) - fock.creator(i) * v).norm(), 1e-12);
      }
      for (int M = 0; M <= N; ++M) {
        for (const auto& alpha : enumerate_basis(st, d, M)) {
          const oracle::Vec expect = fock.annihilation_string(alpha.occupations()) * v;
          EXPECT_LT((fock.embed(apply_annihilation_product(psi.vector(), alpha)) - expect).norm(), 1e-12);
          const oracle::Vec up = fock.creation_string(alpha.occupations()) * v;
          if (N + M <= nmax) {
            EXPECT_LT((fock.embed(apply_creation_product(psi.vector(), alpha)) - up).norm(), 1e-12);
          }
        }
      }
    }
  }
}

TEST(States, CanonicalCommutatorsOnSmallBases) {
  for (Statistics st : {Statistics::boson, Statistics::fermion}) {
    const double sign = st == Statistics::boson ? -1.0 : 1.0;  // [.,.]_- or {.,.}
    const int d = 3;
    for (int N = 0; N <= 2; ++N) {
      for (const auto& b : enumerate_basis(st, d, N)) {
        const FockVector v = FockVector::basis_state(b);
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            // c_i |0> = 0 has no (-1)-particle sector to live in.
            FockVector lhs = apply_annihilator(apply_creator(v, j), i);
            if (N > 0) lhs = lhs + sign * apply_creator(apply_annihilator(v, i), j);
            const FockVector rhs = i == j ? v : FockVector(v.space());
            EXPECT_LT(distance(lhs, rhs), 1e-14) << b.to_string() << " " << i << " " << j;
          }
        }
      }
    }
  }
}

TEST(States, OperatorSumIdentity) {
  Rng rng(8);
  for (Statistics st : {Statistics::boson, Statistics::fermion}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int d = rng.uniform_int(2, 6);
      const int N = rng.uniform_int(1, st == Statistics::fermion ? std::min(5, d) : 5);
      const PureState psi = random_state(st, d, N, rng);
      for (int M = 0; M <= N; ++M) {
        FockAccumulator acc(psi.space());
        for (const auto& a : enumerate_basis(st, d, M)) {
          acc.add(apply_creation_product(apply_annihilation_product(psi.vector(), a), a));
        }
        const double c = static_cast<double>(binomial(N, M));
        EXPECT_LT(distance(acc.finish(), c * psi.vector()), 1e-10 * c);
      }
    }
  }
}

TEST(States, SpUnitaryExamples) {
  const auto B = Statistics::boson;
  const FockVector v = ket(B, {1, 0});
  EXPECT_LT(distance(apply_sp_unitary(v, SpUnitary(Matrix::Identity(2, 2))), v), 1e-15);
  Matrix swap = Matrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  EXPECT_LT(distance(apply_sp_unitary(v, SpUnitary(swap)), ket(B, {0, 1})), 1e-15);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 1.1;
  EXPECT_THROW(SpUnitary{bad}, InvalidArgument);
  EXPECT_THROW(apply_sp_unitary(ket(B, {1, 0, 0}), SpUnitary(swap)), InvalidArgument);
}

// Rotated creators: compare with exp(-i sum h_ij c_i^dagger c_j) built densely.
TEST(States, SpUnitaryMatchesDenseExponential) {
  for (Statistics st : {Statistics::boson, Statistics::fermion}) {
    const bool f = st == Statistics::fermion;
    const int d = 3;
    const oracle::DenseFock fock(f, d, 3);
    Rng rng(23);
    const Matrix h = 0.7 * random_hermitian(d, rng);
    oracle::SpMat gen(fock.size(), fock.size());
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) gen += h(i, j) * oracle::SpMat(fock.creator(i) * fock.annihilator(j));
    }
    const Eigen::MatrixXcd dense_gen(gen);
    const Eigen::MatrixXcd U = (Complex(0.0, -1.0) * dense_gen).exp();
    for (int N = 1; N <= 3; ++N) {
      const PureState psi = random_state(st, d, N, rng);
      const PureState out = apply_sp_unitary(psi, SpUnitary::from_generator(h));
      EXPECT_LT((fock.embed(out) - U * fock.embed(psi)).norm(), 1e-10);
      EXPECT_NEAR(out.vector().norm(), 1.0, 1e-10);
    }
  }
}
