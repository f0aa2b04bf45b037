#include <gtest/gtest.h>

#include <cmath>

#include "schmidtfock/bipartite.hpp"
#include "schmidtfock/errors.hpp"
#include "schmidtfock/measure.hpp"
#include "schmidtfock/pairing.hpp"
#include "schmidtfock/random.hpp"
#include "schmidtfock/rdm.hpp"

using namespace schmidtfock;

namespace {

constexpr Statistics kBoth[] = {Statistics::boson, Statistics::fermion};

PureState fock_state(Statistics st, std::vector<int> v) {
  return make_state(FockVector::basis_state(OccupationVector(st, std::move(v))), false);
}

}  // namespace

TEST(Measure, UniformPairBranches) {
  const PureState psi = embed_paired_state(uniform_paired_state(Statistics::fermion, 2, 1));
  const MeasurementEnsemble e = annihilation_measurement(psi, 1);
  ASSERT_EQ(e.branches.size(), 4u);
  for (const auto& b : e.branches) {
    EXPECT_NEAR(b.probability, 0.25, 1e-12);
    EXPECT_NEAR(b.post_state.vector().norm(), 1.0, 1e-12);
  }
  EXPECT_NEAR(e.total_probability(), 1.0, 1e-12);
}

TEST(Measure, ProbabilitiesFollowTheRemovedBodyMatrix) {
  Rng rng(1);
  for (Statistics st : kBoth) {
    for (int trial = 0; trial < 5; ++trial) {
      const int d = rng.uniform_int(3, 5);
      const int N = rng.uniform_int(2, st == Statistics::fermion ? std::min(4, d) : 4);
      const int M = rng.uniform_int(1, N - 1);
      const PureState psi = random_state(st, d, N, rng);
      const MeasurementEnsemble e = annihilation_measurement(psi, M);
      const ReducedDensityMatrix removed = rdm(psi, N - M);
      const double c = static_cast<double>(binomial(N, M));
      double total = 0.0;
      for (const auto& b : e.branches) {
        // Labels are the occupation strings of the removed configuration.
        std::size_t row = removed.basis.size();
        for (std::size_t i = 0; i < removed.basis.size(); ++i) {
          if (removed.basis[i].to_string() == b.label) row = i;
        }
        ASSERT_LT(row, removed.basis.size()) << b.label;
        const auto r = static_cast<Eigen::Index>(row);
        EXPECT_NEAR(b.probability, removed.matrix(r, r).real() / c, 1e-12);
        EXPECT_EQ(b.post_state.particles(), M);
        total += b.probability;
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
      EXPECT_LT(e.completeness_residual, 1e-10);
    }
  }
}

TEST(Measure, FockStateBranchesAreSubOccupations) {
  const auto st = Statistics::boson;
  const PureState psi = fock_state(st, {2, 1, 0});
  const MeasurementEnsemble e = annihilation_measurement(psi, 1);
  for (const auto& b : e.branches) {
    EXPECT_TRUE(b.label == "(2,0,0)" || b.label == "(1,1,0)") << b.label;
  }
  EXPECT_LT(verify_mixture_identity(psi, 2, 1), 1e-14);
}

TEST(Measure, NormalMeasurement) {
  Rng rng(2);
  for (Statistics st : kBoth) {
    const PureState psi = random_state(st, 5, 3, rng);
    const int M = 2;
    const MeasurementEnsemble e = normal_measurement(psi, M);
    const auto lam = schmidt_decompose(build_gamma(psi, 3 - M)).sigma.values;
    ASSERT_LE(e.branches.size(), lam.size());
    for (std::size_t i = 0; i < e.branches.size(); ++i) {
      EXPECT_NEAR(e.branches[i].probability, lam[i] * lam[i] / binomial(3, M), 1e-10);
      EXPECT_EQ(e.branches[i].post_state.particles(), M);
    }
    EXPECT_NEAR(e.total_probability(), 1.0, 1e-9);

    // The branch average of L-body matrices rebuilds the original.
    for (int L = 1; L <= M; ++L) {
      const Matrix target = normalized(rdm(psi, L)).matrix;
      Matrix mix = Matrix::Zero(target.rows(), target.cols());
      for (const auto& b : e.branches) mix += b.probability * normalized(rdm(b.post_state, L)).matrix;
      EXPECT_LT((mix - target).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
  const PureState cond = fock_state(Statistics::boson, {3, 0});
  const MeasurementEnsemble c = normal_measurement(cond, 1);
  ASSERT_EQ(c.branches.size(), 1u);
  EXPECT_NEAR(c.branches[0].probability, 1.0, 1e-12);
}

TEST(Measure, MixtureIdentity) {
  Rng rng(3);
  const PureState psi = random_state(Statistics::fermion, 6, 4, rng);
  EXPECT_LT(verify_mixture_identity(psi, 2, 1), 1e-9);
  EXPECT_LT(verify_mixture_identity(psi, 3, 3), 1e-9);
  EXPECT_THROW(verify_mixture_identity(psi, 2, 3), InvalidArgument);
}

TEST(Measure, MajorizationOnRandomStates) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const Statistics st = kBoth[trial % 2];
    const int d = rng.uniform_int(2, 6);
    const int N = rng.uniform_int(2, st == Statistics::fermion ? std::max(2, std::min(5, d)) : 5);
    const int M = rng.uniform_int(1, N - 1);
    const int L = rng.uniform_int(1, M);
    const PureState psi = random_state(st, std::max(d, N), N, rng);
    for (const auto& kind : {EntropyKind::von_neumann(), EntropyKind::linear()}) {
      const MajorizationReport r = check_majorization(psi, M, L, kind);
      EXPECT_TRUE(r.holds) << r.min_margin;
      EXPECT_GE(r.min_margin, -1e-10);
      EXPECT_TRUE(r.entropy_holds);
      EXPECT_GE(r.entropy_before, r.entropy_after - 1e-9);
    }
  }
}

TEST(Measure, FockStateMarginsVanish) {
  const PureState psi = fock_state(Statistics::fermion, {1, 1, 0, 1});
  const MajorizationReport r = check_majorization(psi, 2, 1);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.min_margin, 0.0, 1e-12);
  // Uniform 1/3 over three occupied modes before; every branch is a
  // two-particle determinant with spectrum (1/2, 1/2).
  EXPECT_NEAR(r.entropy_before, std::log2(3.0), 1e-12);
  EXPECT_NEAR(r.entropy_after, 1.0, 1e-12);
}

TEST(Measure, PairingGroundStateEntropyDecreases) {
  const GroundState gs = ground_state(PairingModel::uniform(Statistics::fermion, 4, 2, 1.0, 1.0));
  const MajorizationReport r = check_majorization(embed_paired_state(gs.state), 2, 1);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.entropy_holds);
  EXPECT_GT(r.entropy_before, r.entropy_after);
}

namespace {

struct TransferSetup {
  ModeSubspace source;
  ModeSubspace target;
};

TransferSetup halves(int d0, int dt) {
  std::vector<int> s, t;
  for (int k = 0; k < d0; ++k) s.push_back(k);
  for (int k = 0; k < dt; ++k) t.push_back(d0 + k);
  return {ModeSubspace(s, d0 + dt), ModeSubspace(t, d0 + dt)};
}

}  // namespace

TEST(Measure, TransferWithOneUnitaryPreservesEntropy) {
  Rng rng(5);
  for (Statistics st : kBoth) {
    const auto [source, target] = halves(3, 3);
    const PureState psi = random_sector_state(st, source, 2, 2, rng);
    const int M = 1;
    const int rows = static_cast<int>(subspace_configurations(st, target, M).size());
    const TransferReport r = particle_transfer(psi, source, target, M, {random_unitary(rows, rng)});
    ASSERT_EQ(r.branches.size(), 1u);
    EXPECT_NEAR(r.branches[0].probability, 1.0, 1e-12);
    EXPECT_NEAR(r.average_entropy, r.initial_entropy, 1e-9);
    // Entanglement between the moved particle and the stay-behind one.
    const double bip = bipartite_entanglement(r.branches[0].post_state, target,
                                              EntropyKind::von_neumann());
    EXPECT_NEAR(bip, r.initial_entropy, 1e-9);
  }
}

TEST(Measure, DiagonalTransferFamilyRespectsBound) {
  Rng rng(6);
  for (Statistics st : kBoth) {
    const auto [source, target] = halves(3, 3);
    const PureState psi = random_sector_state(st, source, 2, 2, rng);
    const int M = 1;
    const auto rows = static_cast<Eigen::Index>(subspace_configurations(st, target, M).size());
    std::vector<Matrix> family;
    for (Eigen::Index a = 0; a < rows; ++a) {
      Matrix t = Matrix::Zero(rows, rows);
      t(a, a) = 1.0;
      family.push_back(t);
    }
    const TransferReport r = particle_transfer(psi, source, target, M, family);
    EXPECT_TRUE(r.entropy_bound_holds);
    EXPECT_TRUE(r.majorization_holds);
    EXPECT_LT(r.completeness_residual, 1e-12);
  }
}

TEST(Measure, TransferRejectsBadInput) {
  Rng rng(7);
  const auto st = Statistics::fermion;
  const auto [source, target] = halves(3, 3);
  const PureState psi = random_sector_state(st, source, 2, 2, rng);
  const Matrix id = Matrix::Identity(3, 3);
  EXPECT_THROW(particle_transfer(psi, source, source, 1, {id}), InvalidArgument);
  EXPECT_THROW(particle_transfer(psi, source, target, 1, {0.5 * id}), InvalidArgument);
  EXPECT_THROW(particle_transfer(psi, source, target, 1, {Matrix::Identity(2, 3)}), InvalidArgument);
  EXPECT_THROW(particle_transfer(random_state(st, 6, 2, rng), source, target, 1, {id}), InvalidArgument);
}

TEST(Measure, RandomKrausFamiliesRespectBound) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Statistics st = kBoth[trial % 2];
    const auto [source, target] = halves(3, 3);
    const int N = rng.uniform_int(1, 3);
    const int M = rng.uniform_int(1, N);
    const PureState psi = random_sector_state(st, source, N, N, rng);
    const int rows = static_cast<int>(subspace_configurations(st, target, M).size());
    const int cols = static_cast<int>(subspace_configurations(st, source, M).size());
    const auto family = random_kraus_family(rows, cols, (cols + rows - 1) / rows + 1, rng);
    const TransferReport r = particle_transfer(psi, source, target, M, family);
    EXPECT_TRUE(r.majorization_holds) << r.majorization_margin;
    EXPECT_TRUE(r.entropy_bound_holds);
    double total = 0.0;
    for (const auto& b : r.branches) total += b.probability;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}
