#include <cmath>
#include <numbers>

#include "qmac/gaussian_mac.hpp"
#include "qmac/random.hpp"
#include "test_support.hpp"

using namespace qmac;
using qmac::testing::rel_err;

namespace {

const ChannelParams kRef{1.0, 1.2, 0.2, 0.5, 0.3};

RMatrix iso(Eigen::Index n, double v) { return RMatrix::Identity(n, n) * v; }

}  // namespace

TEST_CASE("Gaussian mutual information basics") {
  LinearGaussianChannel ch;
  ch.a1 = RMatrix::Constant(1, 1, 1.0);
  ch.a2 = RMatrix::Constant(1, 1, 0.5);
  ch.noise_cov = RMatrix::Constant(1, 1, 0.25);
  const RMatrix ka = RMatrix::Constant(1, 1, 2.0), kb = RMatrix::Constant(1, 1, 3.0);
  CHECK(gaussian_mutual_info(ch, ka, kb, GaussianRate::kSum) ==
        doctest::Approx(0.5 * std::log(1.0 + (2.0 + 0.75) / 0.25)).epsilon(1e-15));
  CHECK(gaussian_mutual_info(ch, ka, kb, GaussianRate::kSource1Conditional) ==
        doctest::Approx(0.5 * std::log(1.0 + 2.0 / 0.25)).epsilon(1e-15));
  CHECK(gaussian_mutual_info(ch, ka, kb, GaussianRate::kSource2Conditional) ==
        doctest::Approx(0.5 * std::log(1.0 + 0.75 / 0.25)).epsilon(1e-15));

  // Small rates keep full relative precision.
  const double tiny = gaussian_mutual_info(ch, RMatrix::Constant(1, 1, 1e-14), RMatrix::Zero(1, 1),
                                           GaussianRate::kSum);
  CHECK(tiny == doctest::Approx(0.5 * 4e-14).epsilon(1e-12));

  LinearGaussianChannel bad = ch;
  bad.noise_cov = RMatrix::Constant(1, 1, -1.0);
  CHECK_THROWS_AS(gaussian_mutual_info(bad, ka, kb, GaussianRate::kSum), ValidationError);
  CHECK_THROWS_AS(gaussian_mutual_info(ch, iso(2, 1.0), kb, GaussianRate::kSum), ValidationError);
  CHECK_THROWS_AS(gaussian_mutual_info(ch, RMatrix::Constant(1, 1, -1.0), kb, GaussianRate::kSum),
                  NumericalError);
}

TEST_CASE("Gaussian region inequality") {
  Philox4x32 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    LinearGaussianChannel ch;
    ch.a1 = RMatrix::NullaryExpr(n, 2, [&] { return rng.uniform() - 0.5; });
    ch.a2 = RMatrix::NullaryExpr(n, 2, [&] { return rng.uniform() - 0.5; });
    const RMatrix l = RMatrix::NullaryExpr(n, n, [&] { return rng.uniform() - 0.5; });
    ch.noise_cov = l * l.transpose() + 0.1 * RMatrix::Identity(n, n);
    const RMatrix ma = RMatrix::NullaryExpr(2, 2, [&] { return rng.uniform(); });
    const RMatrix mb = RMatrix::NullaryExpr(2, 2, [&] { return rng.uniform(); });
    const auto rp = gaussian_rate_point(ch, ma * ma.transpose(), mb * mb.transpose());
    CHECK(rp.r1_bound + rp.r2_bound >= rp.sum_bound - 1e-9);
    CHECK(rp.sum_bound >= std::max(rp.r1_bound, rp.r2_bound) - 1e-12);
  }
}

TEST_CASE("source specs") {
  const auto het = SourceSpec::heterodyne(3.0);
  CHECK(het.input_cov.isApprox(iso(2, 1.5)));
  const auto hom = SourceSpec::homodyne(3.0, 0.5);
  CHECK(hom.input_cov(0, 0) == doctest::Approx(3.0 - std::pow(std::sinh(0.5), 2)));
  CHECK_NOTHROW(SourceSpec::homodyne(1.0, max_squeezing(1.0)));
  CHECK_THROWS_AS(SourceSpec::homodyne(1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(SourceSpec::homodyne(1.0, -0.1), ValidationError);
  CHECK_THROWS_AS(SourceSpec::heterodyne(-1.0), ValidationError);
  CHECK(max_squeezing(1.0) == doctest::Approx(std::asinh(1.0)));
}

TEST_CASE("heterodyne closed form") {
  for (double n : {0.5, 1.0, 10.0}) {
    CHECK(heterodyne_rates(kRef, 0.0, n, 2.0).r1_bound ==
          doctest::Approx(std::log1p(n)).epsilon(1e-15));
  }
  // Frozen reference (tests/oracles/frozen_values.py).
  const auto h = heterodyne_rates(kRef, 1.7, 2.0, 1.0);
  CHECK(h.sum_bound == doctest::Approx(0.58089968201803263246).epsilon(1e-13));
  CHECK(h.r1_bound == doctest::Approx(0.55488649514382452158).epsilon(1e-13));
  CHECK(h.r2_bound == doctest::Approx(0.04488038161368283296).epsilon(1e-13));

  const auto ch = heterodyne_channel(kRef, 1.7);
  CHECK(ch.output_dim() == 2);
  const auto tc = transfer_coefficients(kRef, 1.7);
  CHECK(ch.noise_cov.isApprox(iso(2, 0.25 * (std::exp(-0.5 * 1.7) + tc.psi + 1.0)), 1e-14));
  Eigen::Vector2d x(0.3, -1.1);
  CHECK((ch.a1 * x).squaredNorm() == doctest::Approx(std::norm(tc.c1) * x.squaredNorm()));
  CHECK((ch.a2 * x).squaredNorm() == doctest::Approx(std::norm(tc.c2) * x.squaredNorm()));

  CHECK_THROWS_AS(heterodyne_rates(kRef, -1.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(heterodyne_rates(kRef, 1.0, -1.0, 1.0), ValidationError);
}

TEST_CASE("heterodyne closed form matches the assembled channel") {
  Philox4x32 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelParams p{0.5 + rng.uniform(), 0.5 + rng.uniform(), 0.3 * rng.uniform(),
                          0.4 * rng.uniform(), 1.5 * rng.uniform()};
    const double t = 8.0 * rng.uniform(), n1 = 5.0 * rng.uniform(), n2 = 5.0 * rng.uniform();
    const auto closed = heterodyne_rates(p, t, n1, n2);
    const auto built = gaussian_rate_point(heterodyne_channel(p, t), SourceSpec::heterodyne(n1).input_cov,
                                           SourceSpec::heterodyne(n2).input_cov);
    CHECK(rel_err(closed.sum_bound, built.sum_bound) < 1e-10);
    CHECK(rel_err(closed.r1_bound, built.r1_bound) < 1e-10);
    CHECK(rel_err(closed.r2_bound, built.r2_bound) < 1e-9);
  }
}

TEST_CASE("homodyne two-user rates") {
  const auto o = homodyne_two_user_rates(kRef, 1.7, SourceSpec::homodyne(2.0, 0.3),
                                         SourceSpec::homodyne(1.0, 0.2));
  CHECK(o.sum_bound == doctest::Approx(0.071996035473930196083).epsilon(1e-13));
  CHECK(o.r1_bound == doctest::Approx(0.015828753845984837598).epsilon(1e-12));
  CHECK(o.r2_bound == doctest::Approx(0.057873154745209531242).epsilon(1e-13));
  CHECK_THROWS_AS(homodyne_two_user_rates(kRef, 1.0, SourceSpec::heterodyne(1.0),
                                          SourceSpec::homodyne(1.0, 0.1)),
                  ValidationError);

  Philox4x32 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelParams p{0.5 + rng.uniform(), 0.5 + rng.uniform(), 0.3 * rng.uniform(),
                          0.4 * rng.uniform(), 1.5 * rng.uniform()};
    const double t = 8.0 * rng.uniform(), n1 = 0.1 + 5.0 * rng.uniform(), n2 = 0.1 + 5.0 * rng.uniform();
    const double r1 = max_squeezing(n1) * rng.uniform(), r2 = max_squeezing(n2) * rng.uniform();
    const auto s1 = SourceSpec::homodyne(n1, r1), s2 = SourceSpec::homodyne(n2, r2);
    const auto closed = homodyne_two_user_rates(p, t, s1, s2);
    const auto built = gaussian_rate_point(homodyne_channel(p, t, r1, r2), s1.input_cov, s2.input_cov);
    CHECK(rel_err(closed.sum_bound, built.sum_bound) < 1e-9);
    CHECK(rel_err(closed.r1_bound, built.r1_bound) < 1e-9);
    CHECK(rel_err(closed.r2_bound, built.r2_bound) < 1e-9);
  }
}

TEST_CASE("anti-squeezing of the second user only adds noise") {
  // Where |v2| > |v1| the leakage v1^2 e^{-2 r2} + v2^2 e^{2 r2} grows with r2.
  double t = 0.1;
  while (true) {
    const auto tc = transfer_coefficients(kRef, t);
    if (std::abs(tc.v2) > 2.0 * std::abs(tc.v1) && std::abs(tc.v1) > 1e-3) break;
    t += 0.01;
  }
  double prev1 = INFINITY, prev2 = INFINITY;
  for (int i = 0; i <= 20; ++i) {
    const double r2 = max_squeezing(1.0) * i / 20.0;
    const auto rp = homodyne_two_user_rates(kRef, t, SourceSpec::homodyne(2.0, 0.1),
                                            SourceSpec::homodyne(1.0, r2));
    CHECK(rp.r1_bound < prev1);
    CHECK(rp.r2_bound < prev2);
    prev1 = rp.r1_bound;
    prev2 = rp.r2_bound;
  }
}

TEST_CASE("single-user homodyne") {
  const ChannelParams p{1.0, 2.0, 0.0, 0.1, 0.5};
  // At t = 0 the rate is (1/2) ln(1 + 4 (n - sh^2 r) e^{2r}).
  for (double n : {0.5, 1.0, 10.0}) {
    const double r = 0.5 * max_squeezing(n);
    CHECK(homodyne_single_user_capacity(p, 0.0, n, r) ==
          doctest::Approx(0.5 * std::log1p(4.0 * (n - std::pow(std::sinh(r), 2)) * std::exp(2 * r)))
              .epsilon(1e-14));
  }
  // Equal to the two-user expression with the second user silent.
  Philox4x32 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const ChannelParams q{0.5 + rng.uniform(), 0.5 + rng.uniform(), 0.0, 0.5 * rng.uniform(),
                          rng.uniform()};
    const double t = 6.0 * rng.uniform(), n = 0.1 + 4.0 * rng.uniform();
    const double r = max_squeezing(n) * rng.uniform();
    const auto two = homodyne_two_user_rates(q, t, SourceSpec::homodyne(n, r), SourceSpec::homodyne(1.0, 0.0));
    CHECK(rel_err(homodyne_single_user_capacity(q, t, n, r), two.r1_bound) < 1e-9);
  }
  CHECK_THROWS_AS(homodyne_single_user_capacity(kRef, 1.0, 1.0, 0.1), ValidationError);
  CHECK_THROWS_AS(homodyne_single_user_capacity(p, 1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("optimal squeezing") {
  const ChannelParams p{1.0, 2.0, 0.0, 0.1, 0.5};
  for (double n : {0.5, 1.0, 10.0}) {
    const auto opt = optimal_squeezing(p, 0.0, n);
    CHECK(std::abs(opt.r_star - 0.5 * std::log(2 * n + 1)) < 1e-8);
    CHECK(opt.capacity == doctest::Approx(std::log1p(2 * n)).epsilon(1e-12));
    // The closed-form stationary point lands at e^{2r} = 2(2n+1) at t = 0.
    CHECK(std::exp(2 * opt.r_closed_form) == doctest::Approx(2 * (2 * n + 1)).epsilon(1e-12));
    CHECK(opt.capacity_closed_form <= opt.capacity);
  }
  Philox4x32 rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const double t = 10.0 * rng.uniform(), n = 0.1 + 5 * rng.uniform();
    const auto opt = optimal_squeezing(p, t, n);
    CHECK(opt.capacity >= homodyne_single_user_capacity(p, t, n, 0.0) - 1e-15);
    for (int i = 0; i <= 20; ++i) {
      CHECK(opt.capacity >= homodyne_single_user_capacity(p, t, n, max_squeezing(n) * i / 20.0) - 1e-12);
    }
  }
  // Squeezing strictly beats coherent input at t = 0.
  CHECK(optimal_squeezing(p, 0.0, 1.0).capacity > homodyne_single_user_capacity(p, 0.0, 1.0, 0.0));
  CHECK(optimal_squeezing({1.0, 2.0, 0.0, 0.5, 0.5}, 40.0, 1.0).r_star < 0.01);
  CHECK_THROWS_AS(optimal_squeezing(p, 1.0, 0.0), ValidationError);
}

TEST_CASE("two-user squeezing optimization") {
  const ChannelParams p{20.0, 21.0, 0.3, 0.5, 0.3};
  for (double t : {0.01, 0.05, 0.078, 0.7, 3.1, 9.0}) {
    const auto o = optimize_two_user_squeezing(p, t, 2.0, 1.0);
    CHECK(o.converged);
    CHECK(o.r1_star >= 0.0);
    CHECK(o.r1_star <= max_squeezing(2.0));
    CHECK(o.r2_star <= max_squeezing(1.0));
    // r1 is a coordinate maximum of the first user's rate.
    for (int i = 0; i <= 20; ++i) {
      const double r = max_squeezing(2.0) * i / 20.0;
      const auto alt = homodyne_two_user_rates(p, t, SourceSpec::homodyne(2.0, r),
                                               SourceSpec::homodyne(1.0, o.r2_star));
      CHECK(o.rates.r1_bound >= alt.r1_bound - 1e-12);
    }
  }
  for (double t : {16.0, 20.0, 30.0}) {
    const auto o = optimize_two_user_squeezing(p, t, 2.0, 1.0);
    CHECK(o.r1_star < 0.01);
    CHECK(o.r2_star < 0.01);
  }
  CHECK_THROWS_AS(optimize_two_user_squeezing(p, 1.0, 0.0, 1.0), ValidationError);
}

TEST_CASE("capacity region polygon") {
  const auto rect = capacity_region({0.3, 0.2, 0.6});
  CHECK(rect.rectangle);
  CHECK(rect.corners.size() == 4);

  const auto pent = capacity_region({0.5, 0.4, 0.7});
  CHECK_FALSE(pent.rectangle);
  REQUIRE(pent.corners.size() == 5);
  CHECK(pent.corners[2][0] == doctest::Approx(0.5));
  CHECK(pent.corners[2][1] == doctest::Approx(0.2));
  CHECK(pent.corners[3][0] == doctest::Approx(0.3));
  CHECK(pent.corners[3][1] == doctest::Approx(0.4));

  // Sum constraint equal to one bound: degenerate triangle-like shapes lose duplicate corners.
  const auto tri = capacity_region({0.5, 0.5, 0.5});
  CHECK(tri.corners.size() == 3);
  CHECK_THROWS_AS(capacity_region({-0.1, 0.2, 0.3}), ValidationError);
}

TEST_CASE("maximize_scalar") {
  CHECK(maximize_scalar([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0) ==
        doctest::Approx(0.3).epsilon(1e-7));
  CHECK(maximize_scalar([](double x) { return x; }, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(maximize_scalar([](double) { return 1.0; }, 0.2, 1.0) == 0.2);
  CHECK(maximize_scalar([](double x) { return x; }, 0.5, 0.5) == 0.5);
  CHECK_THROWS_AS(maximize_scalar([](double x) { return x; }, 1.0, 0.0), ValidationError);
}

TEST_CASE("heterodyne rates keep full precision at small t") {
  // 50-digit reference (mpmath, matrix exponential of the generator). Here
  // (lambda1 - lambda2) t ~ 1e-4, where 1 - cos(x) would lose eight digits.
  const ChannelParams p{0.52907205029602222, 0.70589341087372737, 0.017470716677578657,
                        0.32776206096727833, 0.91576108818124657};
  const auto r = heterodyne_rates(p, 0.00063258295201651382, 0.61593462983482761, 3.0554078720497522);
  CHECK(r.r1_bound == doctest::Approx(0.47973335743918243668).epsilon(1e-14));
  CHECK(r.r2_bound == doctest::Approx(3.7300985825131431022e-10).epsilon(1e-13));
  const auto tc = transfer_coefficients(p, 0.00063258295201651382);
  CHECK(std::norm(tc.c2) == doctest::Approx(1.22114e-10).epsilon(1e-5));
}
