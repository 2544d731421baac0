#include <cmath>

#include "qmac/oracles.hpp"
#include "test_support.hpp"

using namespace qmac;

namespace {

const ChannelParams kRef{1.0, 1.2, 0.2, 0.5, 0.3};

LabeledEnsemble basis_pair() {
  CVector e0 = CVector::Zero(2), e1 = CVector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  return LabeledEnsemble({DensityMatrix::pure(e0), DensityMatrix::pure(e1)}, {0.5, 0.5});
}

}  // namespace

TEST_CASE("Monte-Carlo mutual information agrees with the closed form") {
  const auto ch = heterodyne_channel(kRef, 1.7);
  const RMatrix ka = SourceSpec::heterodyne(2.0).input_cov;
  const RMatrix kb = SourceSpec::heterodyne(1.0).input_cov;
  const auto exact = gaussian_rate_point(ch, ka, kb);
  const auto mc = mc_gaussian_mi(ch, ka, kb, 100000, 7);
  CHECK(mc.n_samples == 100000);
  CHECK(mc.seed == 7);
  CHECK(std::abs(mc.sum.estimate - exact.sum_bound) < 4 * mc.sum.stderr_);
  CHECK(std::abs(mc.source1.estimate - exact.r1_bound) < 4 * mc.source1.stderr_);
  CHECK(std::abs(mc.source2.estimate - exact.r2_bound) < 4 * mc.source2.stderr_);
  CHECK(mc.sum.stderr_ > 0.0);
  CHECK(mc.sum.stderr_ < 0.02);
}

TEST_CASE("Monte-Carlo estimates are reproducible and thread-count independent") {
  const auto ch = homodyne_channel(kRef, 0.8, 0.3, 0.1);
  const auto s1 = SourceSpec::homodyne(2.0, 0.3), s2 = SourceSpec::homodyne(1.0, 0.1);
  const auto a = mc_gaussian_mi(ch, s1.input_cov, s2.input_cov, 20000, 99, 1);
  const auto b = mc_gaussian_mi(ch, s1.input_cov, s2.input_cov, 20000, 99, 4);
  const auto c = mc_gaussian_mi(ch, s1.input_cov, s2.input_cov, 20000, 100, 1);
  CHECK(a.sum.estimate == b.sum.estimate);
  CHECK(a.source1.stderr_ == b.source1.stderr_);
  CHECK(a.sum.estimate != c.sum.estimate);
  CHECK_THROWS_AS(mc_gaussian_mi(ch, s1.input_cov, s2.input_cov, 9999, 1), ValidationError);
}

TEST_CASE("Langevin trajectories reproduce the transfer coefficients") {
  const ChannelParams p{1.0, 1.2, 0.2, 0.5, 0.3};
  const double t = 1.7;
  const auto tc = transfer_coefficients(p, t);
  const auto est = simulate_langevin(p, t, 4000, 5, 2);
  CHECK(est.dt <= 0.01 / normal_modes(p).lambda1 + 1e-15);
  CHECK(est.steps * est.dt == doctest::Approx(t));
  CHECK(std::abs(est.c1_abs2 - std::norm(tc.c1)) < 4 * est.c1_abs2_sigma);
  CHECK(std::abs(est.c2_abs2 - std::norm(tc.c2)) < 4 * est.c2_abs2_sigma);
  CHECK(std::abs(est.psi - tc.psi) < 4 * est.psi_sigma);
  CHECK(std::abs(est.c1_mean - tc.c1) < 0.05);

  // Zero temperature, no coupling: single-mode decay.
  const ChannelParams cold{2.0, 1.0, 0.0, 0.4, 0.0};
  const auto e2 = simulate_langevin(cold, 2.0, 2000, 6);
  CHECK(std::abs(e2.c1_abs2 - std::exp(-0.8)) < 4 * e2.c1_abs2_sigma);
  CHECK(e2.c2_abs2 < 4 * e2.c2_abs2_sigma + 1e-12);

  const auto again = simulate_langevin(p, t, 4000, 5, 3);
  CHECK(again.psi == est.psi);
  CHECK_THROWS_AS(simulate_langevin(p, -1.0, 100, 1), ValidationError);
  CHECK_THROWS_AS(simulate_langevin(p, 1.0, 1, 1), ValidationError);
}

TEST_CASE("POVM search on a perfectly distinguishable instance") {
  const auto pair = basis_pair();
  AccessibleInfoOptions opts;
  opts.n_outcomes = 4;
  opts.n_restarts = 3;
  opts.iterations = 800;
  opts.seed = 3;
  const auto res = brute_force_accessible_info(pair, pair, KrausChannel::identity(4), opts);
  CHECK(res.best.sum_bound == doctest::Approx(std::log(4.0)).epsilon(1e-6));
  CHECK(res.best.r1_bound == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(res.best.r2_bound == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(res.best_povm.size() == 4);
  REQUIRE(res.best_tables[2].has_value());
  CHECK(rate_region(*res.best_tables[2]).sum_bound == doctest::Approx(res.best.sum_bound));
}

TEST_CASE("POVM search stays below the Holevo-type bounds") {
  Philox4x32 rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s1 = random_ensemble(2, 2, rng);
    const auto s2 = random_ensemble(2, 2, rng);
    const auto ch = random_kraus_channel(4, 4, 2, rng);
    AccessibleInfoOptions opts;
    opts.n_restarts = 2;
    opts.iterations = 400;
    opts.seed = 100 + trial;
    opts.jobs = 2;
    const auto res = brute_force_accessible_info(s1, s2, ch, opts);
    const auto hb = holevo_rate_bounds(s1, s2, ch);
    CHECK(res.best.r1_bound <= hb.r1_bound + 1e-6);
    CHECK(res.best.r2_bound <= hb.r2_bound + 1e-6);
    CHECK(res.best.sum_bound <= hb.sum_bound + 1e-6);
    CHECK(res.best.sum_bound > 0.0);
    CHECK(res.dispersion.sum_bound >= 0.0);
  }
}

TEST_CASE("POVM search is deterministic and validates its options") {
  const auto pair = basis_pair();
  const auto mixed = LabeledEnsemble::singleton(DensityMatrix::maximally_mixed(2));
  AccessibleInfoOptions opts;
  opts.n_restarts = 2;
  opts.iterations = 200;
  opts.jobs = 1;
  const auto a = brute_force_accessible_info(pair, mixed, KrausChannel::identity(4), opts);
  opts.jobs = 2;
  const auto b = brute_force_accessible_info(pair, mixed, KrausChannel::identity(4), opts);
  CHECK(a.best.r1_bound == b.best.r1_bound);
  CHECK(a.best.r2_bound == doctest::Approx(0.0));

  opts.n_outcomes = 7;
  CHECK_THROWS_AS(brute_force_accessible_info(pair, pair, KrausChannel::identity(4), opts),
                  ValidationError);
  opts.n_outcomes = 3;
  opts.n_restarts = 0;
  CHECK_THROWS_AS(brute_force_accessible_info(pair, pair, KrausChannel::identity(4), opts),
                  ValidationError);
  opts.n_restarts = 1;
  const LabeledEnsemble qutrit = LabeledEnsemble::singleton(DensityMatrix::maximally_mixed(3));
  CHECK_THROWS_AS(brute_force_accessible_info(qutrit, pair, KrausChannel::identity(6), opts),
                  ValidationError);
}
