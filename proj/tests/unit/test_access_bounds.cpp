#include <cmath>

#include "qmac/access_bounds.hpp"
#include "qmac/random.hpp"
#include "test_support.hpp"

using namespace qmac;

namespace {

using Cube = std::vector<std::vector<std::vector<double>>>;

// Straight transcription of the defining double sums over a joint
// distribution p(a, b, g), kept independent from the library code.
struct Sums {
  double i_sum = 0.0, i_1 = 0.0, i_2 = 0.0;
};

Sums direct_sums(const std::vector<std::vector<double>>& p_ab, const Cube& cond) {
  const std::size_t na = p_ab.size(), nb = p_ab[0].size(), ng = cond[0][0].size();
  std::vector<double> pg(ng, 0.0);
  std::vector<std::vector<double>> pgb(nb, std::vector<double>(ng, 0.0)),
      pga(na, std::vector<double>(ng, 0.0));
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      pa[a] += p_ab[a][b];
      pb[b] += p_ab[a][b];
      for (std::size_t g = 0; g < ng; ++g) {
        const double w = p_ab[a][b] * cond[a][b][g];
        pg[g] += w;
        pgb[b][g] += w;
        pga[a][g] += w;
      }
    }
  }
  Sums s;
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t g = 0; g < ng; ++g) {
        const double q = cond[a][b][g];
        const double w = p_ab[a][b] * q;
        if (w == 0.0) continue;
        s.i_sum += w * std::log(q / pg[g]);
        s.i_1 += w * std::log(q / (pgb[b][g] / pb[b]));
        s.i_2 += w * std::log(q / (pga[a][g] / pa[a]));
      }
    }
  }
  return s;
}

std::vector<std::vector<double>> product(const std::vector<double>& pa,
                                         const std::vector<double>& pb) {
  std::vector<std::vector<double>> out(pa.size(), std::vector<double>(pb.size()));
  for (std::size_t a = 0; a < pa.size(); ++a) {
    for (std::size_t b = 0; b < pb.size(); ++b) out[a][b] = pa[a] * pb[b];
  }
  return out;
}

CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

JointChannelTable random_table(std::size_t na, std::size_t nb, std::size_t ng, Philox4x32& rng) {
  Cube cond(na, std::vector<std::vector<double>>(nb));
  for (auto& row : cond) {
    for (auto& slice : row) slice = random_probabilities(static_cast<int>(ng), rng);
  }
  return JointChannelTable(cond, random_probabilities(static_cast<int>(na), rng),
                           random_probabilities(static_cast<int>(nb), rng));
}

// g = 2a + b, uniform binary inputs.
JointChannelTable noiseless_table() {
  Cube cond(2, std::vector<std::vector<double>>(2, std::vector<double>(4, 0.0)));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) cond[a][b][2 * a + b] = 1.0;
  }
  return JointChannelTable(cond, {0.5, 0.5}, {0.5, 0.5});
}

LabeledEnsemble orthogonal_pair() {
  CVector e0 = CVector::Zero(2), e1 = CVector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  return LabeledEnsemble({DensityMatrix::pure(e0), DensityMatrix::pure(e1)}, {0.5, 0.5});
}

}  // namespace

TEST_CASE("table validation") {
  CHECK_THROWS_AS(JointChannelTable({{{0.5, 0.6}}}, {1.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(JointChannelTable({{{1.2, -0.2}}}, {1.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(JointChannelTable({{{1.0, 0.0}}}, {0.5, 0.5}, {1.0}), ValidationError);
  CHECK_THROWS_AS(JointChannelTable({{{1.0, 0.0}, {1.0}}}, {1.0}, {0.5, 0.5}), ValidationError);
}

TEST_CASE("noiseless distinguishable table") {
  const auto rp = rate_region(noiseless_table());
  CHECK(rp.r1_bound == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(rp.r2_bound == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(rp.sum_bound == doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("input-independent and one-sided tables") {
  const Cube flat(2, std::vector<std::vector<double>>(2, {0.2, 0.3, 0.5}));
  const JointChannelTable indep(flat, {0.4, 0.6}, {0.7, 0.3});
  CHECK(mutual_information(indep) == doctest::Approx(0.0));
  CHECK(conditional_mutual_information(indep, Conditioning::kOnBeta) == doctest::Approx(0.0));

  // g = b: source 1 carries nothing.
  Cube only_b(2, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) only_b[a][b][b] = 1.0;
  }
  const auto rp = rate_region(JointChannelTable(only_b, {0.5, 0.5}, {0.5, 0.5}));
  CHECK(rp.r1_bound == doctest::Approx(0.0));
  CHECK(rp.r2_bound == doctest::Approx(std::log(2.0)));
  CHECK(rp.sum_bound == doctest::Approx(std::log(2.0)));
}

TEST_CASE("rates match an independent summation") {
  Philox4x32 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_table(2 + trial % 2, 2 + trial % 3, 2 + trial % 4, rng);
    const auto want = direct_sums(product(t.p_alpha(), t.p_beta()), t.conditional());
    const auto rp = rate_region(t);
    CHECK(rp.sum_bound == doctest::Approx(want.i_sum).epsilon(1e-12));
    CHECK(rp.r1_bound == doctest::Approx(want.i_1).epsilon(1e-12));
    CHECK(rp.r2_bound == doctest::Approx(want.i_2).epsilon(1e-12));
  }
}

TEST_CASE("region inequality holds for independent inputs") {
  Philox4x32 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rp = rate_region(random_table(2 + trial % 3, 2 + trial % 2, 2 + trial % 5, rng));
    CHECK(rp.r1_bound >= 0.0);
    CHECK(rp.r2_bound >= 0.0);
    CHECK(rp.r1_bound + rp.r2_bound >= rp.sum_bound - 1e-9);
    // I(a:g/b) <= H(a) <= ln |alphabet|.
    CHECK(rp.r1_bound <= std::log(static_cast<double>(2 + trial % 3)) + 1e-12);
  }
}

TEST_CASE("region inequality can fail for correlated inputs") {
  // a = b uniformly, g = a: revealing either source reveals everything.
  Cube copy(2, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) copy[a][b][a] = 1.0;
  }
  const auto s = direct_sums({{0.5, 0.0}, {0.0, 0.5}}, copy);
  CHECK(s.i_1 == doctest::Approx(0.0));
  CHECK(s.i_2 == doctest::Approx(0.0));
  CHECK(s.i_sum == doctest::Approx(std::log(2.0)));
  CHECK(s.i_1 + s.i_2 < s.i_sum - 0.5);
}

TEST_CASE("merging outcomes never increases any rate") {
  Philox4x32 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_table(3, 2, 4, rng);
    const auto before = rate_region(t);
    const auto after = rate_region(t.merge_outcomes(trial % 4, (trial + 1) % 4));
    CHECK(after.sum_bound <= before.sum_bound + 1e-12);
    CHECK(after.r1_bound <= before.r1_bound + 1e-12);
    CHECK(after.r2_bound <= before.r2_bound + 1e-12);
  }
  CHECK_THROWS_AS(noiseless_table().merge_outcomes(1, 1), ValidationError);
}

TEST_CASE("rates are invariant under outcome relabeling") {
  Philox4x32 rng(24);
  const auto t = random_table(2, 3, 4, rng);
  Cube perm = t.conditional();
  for (auto& row : perm) {
    for (auto& slice : row) std::rotate(slice.begin(), slice.begin() + 1, slice.end());
  }
  const auto a = rate_region(t);
  const auto b = rate_region(JointChannelTable(perm, t.p_alpha(), t.p_beta()));
  CHECK(a.sum_bound == doctest::Approx(b.sum_bound).epsilon(1e-13));
  CHECK(a.r1_bound == doctest::Approx(b.r1_bound).epsilon(1e-13));
  CHECK(a.r2_bound == doctest::Approx(b.r2_bound).epsilon(1e-13));
}

TEST_CASE("induced channel") {
  const auto pair = orthogonal_pair();
  const auto id = KrausChannel::identity(4);

  const auto t = induce_channel(pair, pair, id, Povm::computational_basis(4));
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t g = 0; g < 4; ++g) CHECK(t.p(a, b, g) == (g == 2 * a + b ? 1.0 : 0.0));
    }
  }

  const auto mixed = LabeledEnsemble::singleton(DensityMatrix::maximally_mixed(2));
  const auto flat = induce_channel(mixed, mixed, id, Povm::computational_basis(4));
  for (std::size_t g = 0; g < 4; ++g) CHECK(flat.p(0, 0, g) == doctest::Approx(0.25));

  // Nonorthogonal pairs, random 4-outcome POVM: compare each cell to a direct trace.
  Philox4x32 rng(25);
  const auto s1 = random_ensemble(2, 2, rng, 1);
  const auto s2 = random_ensemble(2, 2, rng, 1);
  const auto povm = random_povm(4, 4, rng);
  const auto table = induce_channel(s1, s2, id, povm);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const CMatrix joint = kron(s1.state(a).matrix(), s2.state(b).matrix());
      for (std::size_t g = 0; g < 4; ++g) {
        CHECK(table.p(a, b, g) ==
              doctest::Approx((povm.elements()[g] * joint).trace().real()).epsilon(1e-12));
      }
    }
  }

  CHECK_THROWS_AS(induce_channel(pair, pair, KrausChannel::identity(2), povm), ValidationError);
  CHECK_THROWS_AS(induce_channel(pair, pair, id, Povm::computational_basis(2)), ValidationError);
}

TEST_CASE("Holevo-type bounds") {
  const auto pair = orthogonal_pair();
  const auto mixed = LabeledEnsemble::singleton(DensityMatrix::maximally_mixed(2));
  const auto id = KrausChannel::identity(4);

  CHECK(holevo_conditional_bound(mixed, pair, id) == doctest::Approx(0.0));
  CHECK(holevo_sum_bound(mixed, mixed, id) == doctest::Approx(0.0));
  CHECK(holevo_conditional_bound(pair, mixed, id) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(holevo_sum_bound(pair, pair, id) == doctest::Approx(std::log(4.0)).epsilon(1e-13));
  const auto hb = holevo_rate_bounds(mixed, pair, id);
  CHECK(hb.r1_bound == doctest::Approx(0.0));
  CHECK(hb.r2_bound == doctest::Approx(std::log(2.0)).epsilon(1e-13));

  Philox4x32 rng(26);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s1 = random_ensemble(2 + trial % 2, 2, rng);
    const auto s2 = random_ensemble(2, 2, rng);
    const auto ch = random_kraus_channel(4, 4, 1 + trial % 3, rng);
    const auto bounds = holevo_rate_bounds(s1, s2, ch);
    for (int m = 0; m < 5; ++m) {
      const auto rp = rate_region(induce_channel(s1, s2, ch, random_povm(4, 2 + m, rng)));
      CHECK(rp.r1_bound <= bounds.r1_bound + 1e-9);
      CHECK(rp.r2_bound <= bounds.r2_bound + 1e-9);
      CHECK(rp.sum_bound <= bounds.sum_bound + 1e-9);
    }
  }
}
