#include "qmac/gaussian_mac.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace qmac {

namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("time must be finite and nonnegative");
}

void require_nbar(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw ValidationError("mean photon number must be finite and nonnegative");
  }
}

double squared(double x) { return x * x; }

}  // namespace

void LinearGaussianChannel::validate() const {
  const Eigen::Index n = noise_cov.rows();
  if (n == 0 || noise_cov.cols() != n) throw ValidationError("noise covariance must be square");
  if (a1.rows() != n || a2.rows() != n) {
    throw ValidationError("transfer matrices must have one row per output coordinate");
  }
  if ((noise_cov - noise_cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * noise_cov.norm()) {
    throw ValidationError("noise covariance is not symmetric");
  }
  Eigen::LLT<RMatrix> llt(noise_cov);
  if (llt.info() != Eigen::Success) throw ValidationError("noise covariance is singular");
}

double gaussian_mutual_info(const LinearGaussianChannel& ch, const RMatrix& k_alpha,
                            const RMatrix& k_beta, GaussianRate which) {
  ch.validate();
  if (k_alpha.rows() != ch.a1.cols() || k_alpha.cols() != ch.a1.cols() ||
      k_beta.rows() != ch.a2.cols() || k_beta.cols() != ch.a2.cols()) {
    throw ValidationError("input covariance shape does not match the transfer matrices");
  }
  const Eigen::Index n = ch.output_dim();
  RMatrix signal = RMatrix::Zero(n, n);
  if (which != GaussianRate::kSource2Conditional) {
    signal += ch.a1 * k_alpha * ch.a1.transpose();
  }
  if (which != GaussianRate::kSource1Conditional) {
    signal += ch.a2 * k_beta * ch.a2.transpose();
  }
  // det(I + N^{-1} S) = det(I + L^{-1} S L^{-T}) with N = L L^T; the
  // symmetric form keeps small rates accurate through log1p.
  Eigen::LLT<RMatrix> llt(ch.noise_cov);
  const RMatrix half = llt.matrixL().solve(signal);
  const RMatrix whitened = llt.matrixL().solve(half.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (whitened + whitened.transpose()),
                                            Eigen::EigenvaluesOnly);
  double info = 0.0;
  for (double mu : es.eigenvalues()) {
    if (mu < -1e-12) throw NumericalError("input covariance is not positive semidefinite");
    info += std::log1p(std::max(mu, 0.0));
  }
  return 0.5 * info;
}

RatePoint gaussian_rate_point(const LinearGaussianChannel& ch, const RMatrix& k_alpha,
                              const RMatrix& k_beta) {
  return RatePoint{
      gaussian_mutual_info(ch, k_alpha, k_beta, GaussianRate::kSource1Conditional),
      gaussian_mutual_info(ch, k_alpha, k_beta, GaussianRate::kSource2Conditional),
      gaussian_mutual_info(ch, k_alpha, k_beta, GaussianRate::kSum)};
}

double max_squeezing(double nbar) {
  require_nbar(nbar);
  return std::asinh(std::sqrt(nbar));
}

SourceSpec SourceSpec::heterodyne(double nbar) {
  require_nbar(nbar);
  SourceSpec s;
  s.detection = Detection::kHeterodyne;
  s.nbar = nbar;
  s.r = 0.0;
  s.input_cov = RMatrix::Identity(2, 2) * (0.5 * nbar);
  return s;
}

SourceSpec SourceSpec::homodyne(double nbar, double r) {
  require_nbar(nbar);
  if (!std::isfinite(r) || r < 0.0) throw ValidationError("squeezing parameter must be nonnegative");
  const double cost = squared(std::sinh(r));
  if (cost > nbar * (1.0 + 1e-12)) {
    throw ValidationError("squeezing r = " + std::to_string(r) + " needs sinh^2 r = " +
                          std::to_string(cost) + " photons, more than nbar = " +
                          std::to_string(nbar));
  }
  SourceSpec s;
  s.detection = Detection::kHomodyne;
  s.nbar = nbar;
  s.r = r;
  s.input_cov = RMatrix::Constant(1, 1, std::max(nbar - cost, 0.0));
  return s;
}

LinearGaussianChannel heterodyne_channel(const ChannelParams& params, double t) {
  require_time(t);
  const TransferCoefficients tc = transfer_coefficients(params, t);
  const GaussianModeState out = output_mode_state(params, t, GaussianModeState::vacuum(),
                                                  GaussianModeState::vacuum());
  LinearGaussianChannel ch;
  ch.a1 = complex_gain_matrix(tc.c1);
  ch.a2 = complex_gain_matrix(tc.c2);
  ch.noise_cov = out.covariance() + 0.25 * Eigen::Matrix2d::Identity();
  return ch;
}

LinearGaussianChannel homodyne_channel(const ChannelParams& params, double t, double r1, double r2,
                                       double lo_phase) {
  require_time(t);
  const TransferCoefficients tc = transfer_coefficients(params, t);
  const GaussianModeState out = output_mode_state(params, t, GaussianModeState::squeezed(r1),
                                                  GaussianModeState::squeezed(r2));
  const Eigen::RowVector2d probe(std::cos(lo_phase), std::sin(lo_phase));
  const Eigen::Vector2d modulated(1.0, 0.0);
  LinearGaussianChannel ch;
  ch.a1 = RMatrix::Constant(1, 1, probe * complex_gain_matrix(tc.c1) * modulated);
  ch.a2 = RMatrix::Constant(1, 1, probe * complex_gain_matrix(tc.c2) * modulated);
  ch.noise_cov = RMatrix::Constant(1, 1, probe * out.covariance() * probe.transpose());
  return ch;
}

RatePoint heterodyne_rates(const ChannelParams& params, double t, double nbar1, double nbar2) {
  require_time(t);
  require_nbar(nbar1);
  require_nbar(nbar2);
  const NormalModeData m = normal_modes(params);
  const double eps = m.epsilon;
  const double g = params.gamma_damp;
  const double decay = std::exp(-g * t);
  // 1 - cos(x) as 2 sin^2(x/2): no cancellation at small t.
  const double beat = 2.0 * squared(std::sin(0.5 * t * (m.lambda1 - m.lambda2)));
  const double psi = -std::expm1(-g * t) * (2.0 * eps * m.nbar1 + 2.0 * (1.0 - eps) * m.nbar2 + 1.0);
  const double noise = 0.5 * (decay + psi + 1.0);

  RatePoint out;
  out.sum_bound =
      std::log1p((nbar1 * decay + 2.0 * (nbar2 - nbar1) * eps * (1.0 - eps) * decay * beat) / noise);
  out.r1_bound = std::log1p(nbar1 * decay * (1.0 - 2.0 * eps * (1.0 - eps) * beat) / noise);
  // Source 2 reaches mode 1 with weight |c2|^2 = 2 eps (1 - eps) e^{-gt} (1 - cos).
  out.r2_bound = std::log1p(nbar2 * 2.0 * eps * (1.0 - eps) * decay * beat / noise);
  return out;
}

namespace {

double single_user_rate(double cos2, double sin2, double nbar, double r, double c_noise) {
  const double signal = cos2 * (nbar - squared(std::sinh(r)));
  const double noise =
      0.25 * (std::exp(-2.0 * r) + 2.0 * sin2 * std::sinh(2.0 * r) + c_noise);
  return 0.5 * std::log1p(std::max(signal, 0.0) / noise);
}

struct SingleUserSetup {
  double cos2;
  double sin2;
  double c_noise;
};

SingleUserSetup single_user_setup(const ChannelParams& params, double t) {
  params.validate();
  require_time(t);
  if (params.coupling != 0.0) {
    throw ValidationError("single-user homodyne capacity requires zero coupling");
  }
  const double w = params.omega1;
  const double nbar_t = thermal_occupancy(w, params.temperature);
  const double phase = w * t;
  return {squared(std::cos(phase)), squared(std::sin(phase)),
          std::expm1(params.gamma_damp * t) * (2.0 * nbar_t + 1.0)};
}

}  // namespace

double homodyne_single_user_capacity(const ChannelParams& params, double t, double nbar, double r) {
  const SingleUserSetup s = single_user_setup(params, t);
  SourceSpec::homodyne(nbar, r);  // feasibility check
  return single_user_rate(s.cos2, s.sin2, nbar, r, s.c_noise);
}

double maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       int grid_points) {
  if (!(hi >= lo)) throw ValidationError("maximize_scalar: empty interval");
  if (hi == lo) return lo;
  grid_points = std::max(grid_points, 3);
  const double step = (hi - lo) / (grid_points - 1);
  int best = 0;
  double best_val = f(lo);
  double worst_val = best_val;
  for (int i = 1; i < grid_points; ++i) {
    const double v = f(lo + step * i);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
    worst_val = std::min(worst_val, v);
  }
  // Flat objective: every point is optimal, prefer the lower end.
  if (best_val - worst_val <= 1e-15 * std::max(1.0, std::abs(best_val))) return lo;

  const double a = lo + step * std::max(best - 1, 0);
  const double b = std::min(hi, lo + step * std::min(best + 1, grid_points - 1));

  // Near a smooth maximum f is flat to O(dx^2), so comparing values pins x
  // only to ~sqrt(eps). The derivative crosses zero linearly; bracket its root.
  const double h = 1e-6 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  const auto slope = [&](double x) {
    x = std::clamp(x, lo + h, hi - h);
    return (f(x + h) - f(x - h)) / (2.0 * h);
  };
  if (b - a > 4.0 * h) {
    const double da = slope(a), db = slope(b);
    if (da > 0.0 && db < 0.0) {
      std::uintmax_t iters = 100;
      const auto [ra, rb] = boost::math::tools::toms748_solve(
          slope, a, b, da, db, boost::math::tools::eps_tolerance<double>(40), iters);
      const double x = 0.5 * (ra + rb);
      if (f(x) >= best_val - 1e-14 * std::max(1.0, std::abs(best_val))) return x;
    }
  }

  const auto neg = [&](double x) { return -f(x); };
  const auto [x, fx] =
      boost::math::tools::brent_find_minima(neg, a, b, std::numeric_limits<double>::digits / 2);
  return -fx >= best_val ? x : lo + step * best;
}

SqueezingOptimum optimal_squeezing(const ChannelParams& params, double t, double nbar) {
  if (!(nbar > 0.0)) throw ValidationError("optimal squeezing needs a positive mean photon number");
  const SingleUserSetup s = single_user_setup(params, t);
  const double r_max = max_squeezing(nbar);
  const auto rate = [&](double r) { return single_user_rate(s.cos2, s.sin2, nbar, r, s.c_noise); };

  SqueezingOptimum out;
  out.r_star = maximize_scalar(rate, 0.0, r_max);
  out.capacity = rate(out.r_star);

  // e^{2r} = (C + 4(2n+1)c^2) / (sqrt(c^4 + C^2 + 4C(2n+1)c^2) + c^2), the
  // rationalized form of the closed-form stationary point; finite at C = 0.
  const double c2 = s.cos2;
  const double big_c = s.c_noise;
  const double root = std::sqrt(c2 * c2 + big_c * big_c + 4.0 * big_c * (2.0 * nbar + 1.0) * c2);
  const double denom = root + c2;
  if (denom > 0.0) {
    const double e2r = (big_c + 4.0 * (2.0 * nbar + 1.0) * c2) / denom;
    out.r_closed_form = 0.5 * std::log(e2r);
  }
  out.capacity_closed_form = rate(std::clamp(out.r_closed_form, 0.0, r_max));
  return out;
}

namespace {

struct HomodyneTerms {
  double u1, u2, v1, v2, psi;
};

HomodyneTerms homodyne_terms(const ChannelParams& params, double t) {
  require_time(t);
  const TransferCoefficients tc = transfer_coefficients(params, t);
  return {tc.u1, tc.u2, tc.v1, tc.v2, tc.psi};
}

struct HomodyneSnr {
  double signal1;  // (nbar1 - sh^2 r1) u1^2
  double signal2;  // (nbar2 - sh^2 r2) v1^2
  double noise;    // shared denominator
};

HomodyneSnr homodyne_snr(const HomodyneTerms& k, double x, double r1, double y, double r2) {
  return {x * k.u1 * k.u1, y * k.v1 * k.v1,
          0.25 * (k.u1 * k.u1 * std::exp(-2.0 * r1) + k.u2 * k.u2 * std::exp(2.0 * r1)) +
              0.25 * (k.v1 * k.v1 * std::exp(-2.0 * r2) + k.v2 * k.v2 * std::exp(2.0 * r2)) +
              0.25 * k.psi};
}

RatePoint homodyne_rates_from_terms(const HomodyneTerms& k, double x, double r1, double y,
                                    double r2) {
  const HomodyneSnr s = homodyne_snr(k, x, r1, y, r2);
  RatePoint out;
  out.r1_bound = 0.5 * std::log1p(s.signal1 / s.noise);
  out.r2_bound = 0.5 * std::log1p(s.signal2 / s.noise);
  out.sum_bound = 0.5 * std::log1p((s.signal1 + s.signal2) / s.noise);
  return out;
}

}  // namespace

RatePoint homodyne_two_user_rates(const ChannelParams& params, double t, const SourceSpec& source1,
                                  const SourceSpec& source2) {
  if (source1.detection != Detection::kHomodyne || source2.detection != Detection::kHomodyne) {
    throw ValidationError("homodyne rates need homodyne source specs");
  }
  const double x = source1.nbar - squared(std::sinh(source1.r));
  const double y = source2.nbar - squared(std::sinh(source2.r));
  return homodyne_rates_from_terms(homodyne_terms(params, t), x, source1.r, y, source2.r);
}

TwoUserSqueezing optimize_two_user_squeezing(const ChannelParams& params, double t, double nbar1,
                                             double nbar2) {
  if (!(nbar1 > 0.0) || !(nbar2 > 0.0)) {
    throw ValidationError("two-user squeezing optimization needs positive photon numbers");
  }
  const HomodyneTerms terms = homodyne_terms(params, t);
  const double r1_max = max_squeezing(nbar1);
  const double r2_max = max_squeezing(nbar2);
  auto rates = [&](double r1, double r2) {
    return homodyne_rates_from_terms(terms, nbar1 - squared(std::sinh(r1)), r1,
                                     nbar2 - squared(std::sinh(r2)), r2);
  };
  auto snr = [&](double r1, double r2) {
    return homodyne_snr(terms, nbar1 - squared(std::sinh(r1)), r1, nbar2 - squared(std::sinh(r2)),
                        r2);
  };
  // I(sum) - I(1|2) = (1/2) ln(1 + S2 / (N + S1)), evaluated without cancellation.
  auto user2 = [&](double r1, double r2) {
    const HomodyneSnr s = snr(r1, r2);
    return 0.5 * std::log1p(s.signal2 / (s.noise + s.signal1));
  };

  TwoUserSqueezing out;
  constexpr double kStep = 1e-6;
  constexpr int kMaxSweeps = 200;
  double r1 = 0.0;
  double r2 = 0.0;
  for (out.sweeps = 1; out.sweeps <= kMaxSweeps; ++out.sweeps) {
    const double next_r1 =
        maximize_scalar([&](double r) { return rates(r, r2).r1_bound; }, 0.0, r1_max);
    const double next_r2 =
        maximize_scalar([&](double r) { return user2(next_r1, r); }, 0.0, r2_max);
    const bool settled = std::abs(next_r1 - r1) < kStep && std::abs(next_r2 - r2) < kStep;
    r1 = next_r1;
    r2 = next_r2;
    if (settled) {
      out.converged = true;
      break;
    }
  }
  out.sweeps = std::min(out.sweeps, kMaxSweeps);
  out.r1_star = r1;
  out.r2_star = r2;
  out.rates = rates(r1, r2);
  return out;
}

RateRegion capacity_region(const RatePoint& point) {
  if (point.r1_bound < 0.0 || point.r2_bound < 0.0 || point.sum_bound < 0.0) {
    throw ValidationError("rate bounds must be nonnegative");
  }
  RateRegion region;
  region.point = point;
  const double r1 = std::min(point.r1_bound, point.sum_bound);
  const double r2 = std::min(point.r2_bound, point.sum_bound);
  std::vector<std::array<double, 2>> raw;
  if (point.sum_bound >= r1 + r2) {
    region.rectangle = true;
    raw = {{0.0, 0.0}, {r1, 0.0}, {r1, r2}, {0.0, r2}};
  } else {
    raw = {{0.0, 0.0}, {r1, 0.0}, {r1, point.sum_bound - r1}, {point.sum_bound - r2, r2}, {0.0, r2}};
  }
  for (const auto& c : raw) {
    if (region.corners.empty() || region.corners.back() != c) region.corners.push_back(c);
  }
  if (region.corners.size() > 1 && region.corners.back() == region.corners.front()) {
    region.corners.pop_back();
  }
  return region;
}

}  // namespace qmac
