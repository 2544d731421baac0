#include "qmac/mode_dynamics.hpp"

#include <string>

namespace qmac {

void ChannelParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(omega1) || !finite(omega2) || !finite(coupling) || !finite(gamma_damp) ||
      !finite(temperature)) {
    throw ValidationError("channel parameters must be finite");
  }
  if (omega1 <= 0.0 || omega2 <= 0.0) throw ValidationError("mode frequencies must be positive");
  if (gamma_damp < 0.0) throw ValidationError("damping constant must be nonnegative");
  if (temperature < 0.0) throw ValidationError("temperature must be nonnegative");
}

GaussianModeState GaussianModeState::squeezed(double r, double re, double im) {
  return {re, im, 0.25 * std::exp(-2.0 * r), 0.25 * std::exp(2.0 * r), 0.0};
}

Eigen::Matrix2d GaussianModeState::covariance() const {
  Eigen::Matrix2d cov;
  cov << c11, c12, c12, c22;
  return cov;
}

bool GaussianModeState::is_physical(double tol) const {
  return c11 > 0.0 && c22 > 0.0 && determinant() >= 1.0 / 16.0 - tol;
}

double thermal_occupancy(double lambda, double temperature) {
  if (temperature < 0.0) throw ValidationError("temperature must be nonnegative");
  if (temperature == 0.0) return 0.0;
  if (lambda <= 0.0) {
    throw ValidationError("thermal occupancy undefined for nonpositive frequency " +
                          std::to_string(lambda));
  }
  return 1.0 / std::expm1(lambda / temperature);
}

NormalModeData normal_modes(const ChannelParams& p) {
  p.validate();
  const double k = p.coupling;
  const double split = std::sqrt((p.omega1 - p.omega2) * (p.omega1 - p.omega2) + 4.0 * k * k);
  NormalModeData out;
  out.lambda1 = 0.5 * (p.omega1 + p.omega2 + split);
  out.lambda2 = 0.5 * (p.omega1 + p.omega2 - split);
  if (out.lambda2 <= 0.0) {
    throw ValidationError("lower normal frequency " + std::to_string(out.lambda2) +
                          " is not positive; reduce the coupling");
  }
  // (1 - eps)/eps = (lambda1 - omega1)^2 / k^2
  const double detune = out.lambda1 - p.omega1;
  if (k == 0.0) {
    out.epsilon = p.omega1 >= p.omega2 ? 1.0 : 0.0;
  } else {
    out.epsilon = k * k / (k * k + detune * detune);
  }
  out.nbar1 = thermal_occupancy(out.lambda1, p.temperature);
  out.nbar2 = thermal_occupancy(out.lambda2, p.temperature);
  return out;
}

TransferCoefficients transfer_coefficients(const ChannelParams& params, double t) {
  return transfer_coefficients(params, normal_modes(params), t);
}

TransferCoefficients transfer_coefficients(const ChannelParams& params, const NormalModeData& m,
                                           double t) {
  if (!(t >= 0.0)) throw ValidationError("time must be nonnegative");
  const double eps = m.epsilon;
  const double mix = std::sqrt(eps * (1.0 - eps));
  const double decay = std::exp(-0.5 * params.gamma_damp * t);
  const Complex ph1 = std::polar(1.0, -m.lambda1 * t);
  const Complex ph2 = std::polar(1.0, -m.lambda2 * t);

  // Differences of the two phases in product form, which keeps c2 accurate
  // when (lambda1 - lambda2) t is small.
  const double half_sum = 0.5 * (m.lambda1 + m.lambda2) * t;
  const double half_diff = std::sin(0.5 * (m.lambda1 - m.lambda2) * t);

  TransferCoefficients tc;
  tc.time = t;
  tc.c1 = decay * (eps * ph1 + (1.0 - eps) * ph2);
  tc.c2 = -decay * mix * Complex(0.0, -2.0 * half_diff) * std::polar(1.0, -half_sum);
  tc.u1 = decay * (eps * std::cos(m.lambda1 * t) + (1.0 - eps) * std::cos(m.lambda2 * t));
  tc.u2 = -decay * (eps * std::sin(m.lambda1 * t) + (1.0 - eps) * std::sin(m.lambda2 * t));
  tc.v1 = -decay * mix * (-2.0 * std::sin(half_sum) * half_diff);
  tc.v2 = decay * mix * (2.0 * std::cos(half_sum) * half_diff);
  tc.psi = -std::expm1(-params.gamma_damp * t) *
           (2.0 * eps * m.nbar1 + 2.0 * (1.0 - eps) * m.nbar2 + 1.0);
  return tc;
}

Eigen::Matrix2d complex_gain_matrix(Complex c) {
  Eigen::Matrix2d g;
  g << c.real(), -c.imag(), c.imag(), c.real();
  return g;
}

GaussianModeState output_mode_state(const ChannelParams& params, double t,
                                    const GaussianModeState& mode1_in,
                                    const GaussianModeState& mode2_in) {
  if (!mode1_in.is_physical() || !mode2_in.is_physical()) {
    throw ValidationError("input Gaussian state violates the uncertainty bound");
  }
  const TransferCoefficients tc = transfer_coefficients(params, t);
  const Eigen::Matrix2d g1 = complex_gain_matrix(tc.c1);
  const Eigen::Matrix2d g2 = complex_gain_matrix(tc.c2);

  const Eigen::Vector2d mean = g1 * Eigen::Vector2d(mode1_in.mean_re, mode1_in.mean_im) +
                               g2 * Eigen::Vector2d(mode2_in.mean_re, mode2_in.mean_im);
  const Eigen::Matrix2d cov = g1 * mode1_in.covariance() * g1.transpose() +
                              g2 * mode2_in.covariance() * g2.transpose() +
                              0.25 * tc.psi * Eigen::Matrix2d::Identity();

  GaussianModeState out;
  out.mean_re = mean(0);
  out.mean_im = mean(1);
  out.c11 = cov(0, 0);
  out.c22 = cov(1, 1);
  out.c12 = 0.5 * (cov(0, 1) + cov(1, 0));
  return out;
}

}  // namespace qmac
