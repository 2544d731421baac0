#pragma once

#include "qmac/common.hpp"

namespace qmac {

/// Physical parameters of two linearly coupled, equally damped bosonic modes
/// driven by thermal Langevin forces. Units: hbar = k_B = 1, so frequencies,
/// coupling and temperature share one energy/frequency unit and time is its
/// inverse.
struct ChannelParams {
  double omega1 = 1.0;      ///< frequency of mode 1 (the measured mode)
  double omega2 = 1.0;      ///< frequency of mode 2
  double coupling = 0.0;    ///< cross-mode coupling k
  double gamma_damp = 0.0;  ///< energy damping rate, shared by both modes
  double temperature = 0.0; ///< bath temperature T >= 0

  /// Throws ValidationError unless omega1, omega2 > 0, gamma_damp >= 0,
  /// temperature >= 0 and all fields are finite.
  void validate() const;
};

struct NormalModeData {
  double lambda1 = 0.0;  ///< upper normal frequency
  double lambda2 = 0.0;  ///< lower normal frequency
  double epsilon = 1.0;  ///< weight of the upper normal mode in mode 1
  double nbar1 = 0.0;    ///< thermal occupancy at lambda1
  double nbar2 = 0.0;    ///< thermal occupancy at lambda2
};

/// How the initial amplitudes a1(0), a2(0) reach a1(t):
///   a1(t) = c1 a1(0) + c2 a2(0) + noise.
/// (u1, u2) and (v1, v2) are the real and imaginary parts of c1 and c2.
struct TransferCoefficients {
  double time = 0.0;
  Complex c1{1.0, 0.0};
  Complex c2{0.0, 0.0};
  double u1 = 1.0;
  double u2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  /// Accumulated noise: the Wigner variance of each quadrature of a1 added by
  /// the bath is psi / 4.
  double psi = 0.0;
};

/// Gaussian single-mode state: quadrature means (x = Re a, p = Im a) and the
/// symmetrized covariance. Vacuum has covariance diag(1/4, 1/4).
struct GaussianModeState {
  double mean_re = 0.0;
  double mean_im = 0.0;
  double c11 = 0.25;
  double c22 = 0.25;
  double c12 = 0.0;

  static GaussianModeState vacuum() { return {}; }
  static GaussianModeState coherent(double re, double im) { return {re, im, 0.25, 0.25, 0.0}; }
  /// Squeezed along x: variance e^{-2r}/4 in x and e^{2r}/4 in p.
  static GaussianModeState squeezed(double r, double re = 0.0, double im = 0.0);

  Eigen::Matrix2d covariance() const;
  double determinant() const { return c11 * c22 - c12 * c12; }

  /// Symmetric, positive definite and det >= 1/16 - tol.
  bool is_physical(double tol = kDefaultTol) const;
};

/// Bose-Einstein occupancy 1/(exp(lambda/T) - 1); zero at T = 0.
/// Throws ValidationError for lambda <= 0 when T > 0.
double thermal_occupancy(double lambda, double temperature);

/// Normal frequencies (omega1 + omega2 +- sqrt((omega1 - omega2)^2 + 4k^2))/2,
/// the mixing ratio and thermal occupancies. At k = 0 the mixing ratio is 1
/// when omega1 >= omega2 and 0 otherwise.
NormalModeData normal_modes(const ChannelParams& params);

TransferCoefficients transfer_coefficients(const ChannelParams& params, double t);
TransferCoefficients transfer_coefficients(const ChannelParams& params, const NormalModeData& modes,
                                           double t);

/// Real 2x2 matrix acting on (Re z, Im z) as multiplication by c.
Eigen::Matrix2d complex_gain_matrix(Complex c);

/// State of mode 1 at time t for independent Gaussian inputs in both modes.
GaussianModeState output_mode_state(const ChannelParams& params, double t,
                                    const GaussianModeState& mode1_in,
                                    const GaussianModeState& mode2_in);

}  // namespace qmac
