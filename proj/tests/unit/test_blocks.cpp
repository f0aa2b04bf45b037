#include <gtest/gtest.h>

#include <cmath>

#include "dense_fock.hpp"
#include "schmidtfock/blocks.hpp"
#include "schmidtfock/errors.hpp"
#include "schmidtfock/pairing.hpp"
#include "schmidtfock/random.hpp"
#include "schmidtfock/rdm.hpp"

using namespace schmidtfock;

namespace {

constexpr Statistics kBoth[] = {Statistics::boson, Statistics::fermion};

PureState uniform(Statistics st, int n, int m) { return embed_paired_state(uniform_paired_state(st, n, m)); }

int count_in(const OccupationVector& o, const ModeSubspace& S) {
  int c = 0;
  for (int k : S.members()) c += o[k];
  return c;
}

}  // namespace

TEST(Blocks, SubspaceValidation) {
  EXPECT_THROW(ModeSubspace({}, 4), InvalidArgument);
  EXPECT_THROW(ModeSubspace({0, 1, 2, 3}, 4), InvalidArgument);
  EXPECT_THROW(ModeSubspace({5}, 4), InvalidArgument);
  const ModeSubspace S({2, 0, 2}, 4);
  EXPECT_EQ(S.members(), (std::vector<int>{0, 2}));
  EXPECT_EQ(S.complement_members(), (std::vector<int>{1, 3}));
  EXPECT_TRUE(S.contains(2));
  EXPECT_FALSE(S.contains(1));
}

TEST(Blocks, SectorNumberExamples) {
  const ModeSubspace S = ModeSubspace::leading(4, 8);
  EXPECT_EQ(sector_number(uniform(Statistics::fermion, 4, 2), S), 2);
  const auto st = Statistics::fermion;
  const FockVector mix = FockVector::basis_state(OccupationVector(st, {1, 0, 0, 0, 1, 0, 0, 0})) +
                         FockVector::basis_state(OccupationVector(st, {1, 1, 0, 0, 0, 0, 0, 0}));
  EXPECT_FALSE(sector_number(make_state(mix, true), S).has_value());
  const PureState f = make_state(FockVector::basis_state(OccupationVector(Statistics::boson, {2, 0, 1, 0, 3, 0, 0, 0})), false);
  EXPECT_EQ(sector_number(f, S), 3);
}

TEST(Blocks, BlocksAreSubmatricesOfTheFullMatrix) {
  Rng rng(3);
  for (Statistics st : kBoth) {
    for (int trial = 0; trial < 6; ++trial) {
      const int d = rng.uniform_int(3, 6);
      const int dS = rng.uniform_int(1, d - 1);
      const int N = rng.uniform_int(2, st == Statistics::fermion ? std::min(4, d) : 4);
      const ModeSubspace S = ModeSubspace::leading(dS, d);
      const int lo = st == Statistics::fermion ? std::max(0, N - (d - dS)) : 0;
      const int hi = st == Statistics::fermion ? std::min(N, dS) : N;
      const int NS = rng.uniform_int(lo, hi);
      const PureState psi = random_sector_state(st, S, NS, N, rng);
      for (int M = 1; M <= N; ++M) {
        const ReducedDensityMatrix full = rdm(psi, M);
        std::vector<double> merged;
        for (const SectorBlock& b : blocked_rdm(psi, S, M)) {
          EXPECT_NEAR(b.matrix.trace().real(), b.expected_trace, 1e-9);
          EXPECT_NEAR(b.expected_trace,
                      static_cast<double>(binomial(NS, b.m) * binomial(N - NS, b.l)), 0.0);
          for (std::size_t i = 0; i < b.basis.size(); ++i) {
            EXPECT_EQ(count_in(b.basis[i], S), b.m);
            for (std::size_t j = 0; j < b.basis.size(); ++j) {
              const auto fi = static_cast<Eigen::Index>(full.basis.index_of(b.basis[i]));
              const auto fj = static_cast<Eigen::Index>(full.basis.index_of(b.basis[j]));
              EXPECT_LT(std::abs(b.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                 full.matrix(fi, fj)),
                        1e-12);
            }
          }
          const auto ev = hermitian_eigen(b.matrix).spectrum.values;
          merged.insert(merged.end(), ev.begin(), ev.end());
          // The sector Gamma reproduces its block.
          const GammaMatrix g = sector_gamma(psi, S, b.m, b.l);
          EXPECT_NEAR(g.entries.squaredNorm(), b.expected_trace, 1e-9);
        }
        std::sort(merged.rbegin(), merged.rend());
        const auto all = full.spectrum().values;
        for (std::size_t i = 0; i < merged.size(); ++i) EXPECT_NEAR(merged[i], all[i], 1e-9);
        for (std::size_t i = merged.size(); i < all.size(); ++i) EXPECT_NEAR(all[i], 0.0, 1e-9);
        // Elements joining different sectors vanish.
        for (std::size_t i = 0; i < full.basis.size(); ++i) {
          for (std::size_t j = 0; j < full.basis.size(); ++j) {
            if (count_in(full.basis[i], S) != count_in(full.basis[j], S)) {
              EXPECT_LT(std::abs(full.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))), 1e-12);
            }
          }
        }
      }
    }
  }
}

TEST(Blocks, HalfFilledPairTraces) {
  const PureState psi = uniform(Statistics::fermion, 10, 5);
  const auto blocks = blocked_rdm(psi, ModeSubspace::leading(10, 20), 2);
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[0].m, 2);
  EXPECT_NEAR(blocks[0].matrix.trace().real(), 10.0, 1e-9);
  EXPECT_NEAR(blocks[1].matrix.trace().real(), 25.0, 1e-9);
  EXPECT_NEAR(blocks[2].matrix.trace().real(), 10.0, 1e-9);
  const auto one = blocked_rdm(psi, ModeSubspace::leading(10, 20), 1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_NEAR(one[0].matrix.trace().real(), 5.0, 1e-9);
  EXPECT_NEAR(one[1].matrix.trace().real(), 5.0, 1e-9);
}

TEST(Blocks, NonConservingStateRejected) {
  Rng rng(1);
  const PureState psi = random_state(Statistics::boson, 4, 2, rng);
  EXPECT_THROW(blocked_rdm(psi, ModeSubspace::leading(2, 4), 1), InvalidArgument);
  EXPECT_THROW(sector_gamma(uniform(Statistics::fermion, 3, 1), ModeSubspace::leading(3, 6), 2, 0),
               InvalidArgument);
}

TEST(Blocks, BipartiteSectorGammaIsStandardCoefficientMatrix) {
  // All particles in S go to the rows: Gamma^(N_S, 0) has entries psi(a, b).
  Rng rng(2);
  const ModeSubspace S = ModeSubspace::leading(3, 6);
  const PureState psi = random_sector_state(Statistics::fermion, S, 2, 4, rng);
  const GammaMatrix g = sector_gamma(psi, S, 2, 0);
  const auto s = svd(g.entries).sigma.values;
  double total = 0.0;
  for (double x : s) total += x * x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(g.prefactor, 1.0, 0.0);
}

TEST(Blocks, SectorExpansionsAreExact) {
  Rng rng(4);
  for (Statistics st : kBoth) {
    const ModeSubspace S = ModeSubspace::leading(3, 6);
    const PureState psi = random_sector_state(st, S, 2, 4, rng);
    FockAccumulator weighted(psi.space());
    for (const auto& [m, l] : {std::pair{2, 0}, std::pair{1, 1}, std::pair{0, 2}}) {
      const FockVector sum = sector_expansion_sum(psi, S, m, l);
      EXPECT_LT((sum - psi.vector()).norm(), 1e-10) << m << l;
      EXPECT_GT(std::abs(overlap(psi, sector_reconstruct(psi, S, m, l))), 1 - 1e-10);
      weighted.add(sum, static_cast<double>(binomial(2, m) * binomial(2, l)) / binomial(4, 2));
    }
    EXPECT_LT((weighted.finish() - psi.vector()).norm(), 1e-10);
    EXPECT_THROW(sector_reconstruct(psi, S, 1, 1, 0), InvalidArgument);
  }
}

TEST(Blocks, UniformPairedLeadingTermIsExact) {
  for (Statistics st : kBoth) {
    for (int n : {2, 3, 5}) {
      const PureState psi = uniform(st, n, 2);
      const PureState one = sector_reconstruct(psi, ModeSubspace::leading(n, 2 * n), 1, 1, 1);
      EXPECT_NEAR(std::abs(overlap(psi, one)), 1.0, 1e-10);
    }
  }
}

TEST(Blocks, BipartiteEntanglementExamples) {
  const auto vn = EntropyKind::von_neumann();
  const auto st = Statistics::fermion;
  const PureState prod = make_state(FockVector::basis_state(OccupationVector(st, {1, 0, 1, 0, 1, 1})), false);
  EXPECT_NEAR(bipartite_entanglement(prod, ModeSubspace::leading(3, 6), vn), 0.0, 1e-12);
  EXPECT_NEAR(bipartite_entanglement(uniform(st, 4, 2), ModeSubspace::leading(4, 8), vn), std::log2(6.0), 1e-10);
  EXPECT_NEAR(bipartite_entanglement(uniform(Statistics::boson, 2, 2), ModeSubspace::leading(2, 4), vn),
              std::log2(3.0), 1e-10);
  Rng rng(5);
  const ModeSubspace S = ModeSubspace::leading(2, 5);
  const PureState psi = random_sector_state(Statistics::boson, S, 2, 3, rng);
  EXPECT_NEAR(bipartite_entanglement(psi, S, vn), bipartite_entanglement(psi, S.complement(), vn), 1e-8);
}

TEST(Blocks, CollectivePairBlockMatchesDenseOracle) {
  for (Statistics st : kBoth) {
    const int n = 3;
    const oracle::DenseFock fock(st == Statistics::fermion, 2 * n, 4);
    Rng rng(6);
    const PureState psi = embed_paired_state(random_pair_amplitudes(st, n, 2, rng));
    const oracle::Vec v = fock.embed(psi);
    const CollectivePairBlock c = collective_pair_block(psi, ModePairing::standard(n));
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        const oracle::Vec ap = fock.annihilator(n + p) * (fock.annihilator(p) * v);
        const oracle::Vec aq = fock.annihilator(n + q) * (fock.annihilator(q) * v);
        EXPECT_LT(std::abs(c.matrix(p, q) - aq.dot(ap)), 1e-12);
      }
    }
  }
}

TEST(Blocks, CollectivePairBlockExamples) {
  const int n = 10;
  const auto f = collective_pair_block(uniform(Statistics::fermion, n, 5), ModePairing::standard(n));
  EXPECT_NEAR(f.dominant(), 3.0, 1e-9);
  for (std::size_t i = 1; i < f.spectrum.size(); ++i) EXPECT_NEAR(f.spectrum.values[i], 2.0 / 9.0, 1e-9);
  const auto b = collective_pair_block(uniform(Statistics::boson, n, 5), ModePairing::standard(n));
  EXPECT_NEAR(b.dominant(), 7.0, 1e-9);

  // Two disjoint two-pair products in equal superposition.
  for (Statistics st : kBoth) {
    PairAmplitudes pa;
    pa.basis = paired_basis(st, 4, 2);
    pa.amplitudes = Vector::Zero(static_cast<Eigen::Index>(pa.basis.size()));
    pa.amplitudes[static_cast<Eigen::Index>(pa.basis.index_of(OccupationVector(st, {1, 1, 0, 0})))] = 1 / std::sqrt(2.0);
    pa.amplitudes[static_cast<Eigen::Index>(pa.basis.index_of(OccupationVector(st, {0, 0, 1, 1})))] = 1 / std::sqrt(2.0);
    const auto ev = rdm(embed_paired_state(pa), 2).spectrum().values;
    for (double x : ev) {
      if (std::abs(x) > 1e-9) EXPECT_NEAR(x, 0.5, 1e-10);
    }
  }
  EXPECT_THROW(ModePairing({0, 1}, {2, 2}, 4), InvalidArgument);
  EXPECT_THROW(ModePairing({0}, {1}, 4), InvalidArgument);
}

TEST(Blocks, PairExpansion) {
  Rng rng(7);
  for (int n : {2, 3, 4, 5}) {
    for (int m = 1; m <= n; ++m) {
      const PureState psi = embed_paired_state(random_pair_amplitudes(Statistics::fermion, n, m, rng));
      const ModePairing pairing = ModePairing::standard(n);
      EXPECT_LT((pair_expansion_sum(psi, pairing) - psi.vector()).norm(), 1e-10);
      EXPECT_LE(collective_pair_block(psi, pairing).spectrum.size(), static_cast<std::size_t>(n));
      EXPECT_GT(std::abs(overlap(psi, pair_expansion(psi, pairing, static_cast<std::size_t>(n)))), 1 - 1e-10);
      const PureState one = pair_expansion(psi, pairing, 1);
      EXPECT_NEAR(one.vector().norm(), 1.0, 1e-12);
    }
  }
  // One full pair plus a configuration with none: not a pair-number eigenstate.
  const auto st = Statistics::fermion;
  const FockVector broken = FockVector::basis_state(OccupationVector(st, {1, 0, 1, 0})) +
                            FockVector::basis_state(OccupationVector(st, {1, 1, 0, 0}));
  EXPECT_THROW(pair_expansion(make_state(broken, true), ModePairing::standard(2)), InvalidArgument);
  EXPECT_THROW(pair_expansion(uniform(Statistics::boson, 2, 1), ModePairing::standard(2)), InvalidArgument);
}

TEST(Blocks, EntangledFermionPairsFailProductTest) {
  const PureState psi = uniform(Statistics::fermion, 4, 2);
  const ModeSubspace S = ModeSubspace::leading(4, 8);
  const auto cross = hermitian_eigen(sector_block(psi, S, 1, 1).matrix).spectrum;
  ASSERT_GT(cross.max(), 1.0);
  const SectorBlock local = sector_block(psi, S, 2, 0);
  const Matrix rho = local.matrix / local.matrix.trace();
  EXPECT_LT((rho * rho).trace().real(), 1.0 - 1e-6);
}

TEST(Blocks, IdempotencyCarriesToLocalBlocks) {
  // A determinant built in rotated orbitals that each stay inside S or Sbar.
  Rng rng(8);
  const int d = 6;
  Matrix u = Matrix::Zero(d, d);
  u.topLeftCorner(3, 3) = random_unitary(3, rng);
  u.bottomRightCorner(3, 3) = random_unitary(3, rng);
  const auto st = Statistics::fermion;
  const PureState sd = apply_sp_unitary(
      make_state(FockVector::basis_state(OccupationVector(st, {1, 1, 0, 1, 0, 0})), false), SpUnitary(u));
  const Matrix r1 = rdm(sd, 1).matrix;
  ASSERT_LT((r1 * r1 - r1).norm(), 1e-10);
  const ModeSubspace S = ModeSubspace::leading(3, d);
  for (const SectorBlock& b : blocked_rdm(sd, S, 1)) {
    EXPECT_LT((b.matrix * b.matrix - b.matrix).norm(), 1e-10);
  }
}
