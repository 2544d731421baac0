#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qmac/access_bounds.hpp"
#include "qmac/mode_dynamics.hpp"

namespace qmac {

/// g = A1 alpha + A2 beta + z with z ~ N(0, noise_cov).
struct LinearGaussianChannel {
  RMatrix a1;
  RMatrix a2;
  RMatrix noise_cov;

  Eigen::Index output_dim() const { return noise_cov.rows(); }
  /// Shapes agree and noise_cov is symmetric positive definite.
  void validate() const;
};

enum class GaussianRate {
  kSum,                 ///< I(g : alpha (x) beta)
  kSource1Conditional,  ///< I(g : alpha / beta)
  kSource2Conditional,  ///< I(g : beta / alpha)
};

/// (1/2) ln det(I + N^{-1} A1 Ka A1^T + N^{-1} A2 Kb A2^T), dropping the term
/// of the revealed source for the conditional rates. Ka, Kb are the input
/// covariances (positive semidefinite).
double gaussian_mutual_info(const LinearGaussianChannel& channel, const RMatrix& k_alpha,
                            const RMatrix& k_beta, GaussianRate which);

/// All three rates of a Gaussian channel as a pentagon.
RatePoint gaussian_rate_point(const LinearGaussianChannel& channel, const RMatrix& k_alpha,
                              const RMatrix& k_beta);

enum class Detection { kHeterodyne, kHomodyne };

/// Gaussian input ensemble of one sender.
///
/// Heterodyne: unsqueezed coherent displacements with covariance
/// diag(nbar/2, nbar/2). Homodyne: displacements of the squeezed quadrature
/// only, with variance nbar - sinh^2 r; the unmodulated quadrature is dropped,
/// so input_cov is 1x1.
struct SourceSpec {
  Detection detection = Detection::kHeterodyne;
  double nbar = 0.0;
  double r = 0.0;
  RMatrix input_cov;

  static SourceSpec heterodyne(double nbar);
  static SourceSpec homodyne(double nbar, double r);
};

/// Both quadratures of mode 1 measured; noise includes the heterodyne vacuum
/// unit (1/4 per quadrature).
LinearGaussianChannel heterodyne_channel(const ChannelParams& params, double t);

/// Quadrature cos(phase) Re a1 + sin(phase) Im a1 measured, with squeezed
/// inputs (squeezing r1, r2 along Re a). The input coordinate is the
/// modulated (Re) quadrature of each source.
LinearGaussianChannel homodyne_channel(const ChannelParams& params, double t, double r1, double r2,
                                       double lo_phase = 0.0);

/// Closed-form heterodyne region for coherent inputs with mean photon
/// numbers nbar1, nbar2.
RatePoint heterodyne_rates(const ChannelParams& params, double t, double nbar1, double nbar2);

/// Closed-form single-user homodyne rate for uncoupled modes (coupling must be
/// zero) with squeezed input r and mean photon number nbar >= sinh^2 r:
///   (1/2) ln(1 + cos^2(wt)(nbar - sh^2 r) / ((1/4)(e^{-2r} + 2 sin^2(wt) sh 2r + C))),
///   C = (e^{gt} - 1)(2 nbar_T + 1).
double homodyne_single_user_capacity(const ChannelParams& params, double t, double nbar, double r);

struct SqueezingOptimum {
  double r_star = 0.0;    ///< numeric maximizer
  double capacity = 0.0;  ///< rate at r_star
  /// Closed-form stationary point e^{2r} = (sqrt(c^4 + C^2 + 4C(2n+1)c^2) - c^2)/C
  /// with c = cos(wt), reported for comparison.
  double r_closed_form = 0.0;
  /// Rate at r_closed_form clipped into the feasible range.
  double capacity_closed_form = 0.0;
};

SqueezingOptimum optimal_squeezing(const ChannelParams& params, double t, double nbar);

/// Closed-form homodyne rates with the receiver measuring Re a1:
/// r1_bound = I(alpha : g1 / beta), r2_bound = I(beta : g1 / alpha),
/// sum_bound = I(alpha (x) beta : g1).
RatePoint homodyne_two_user_rates(const ChannelParams& params, double t, const SourceSpec& source1,
                                  const SourceSpec& source2);

/// Rate the second user obtains when the first decodes at its conditional
/// rate: I(alpha (x) beta : g) - I(alpha : g / beta).
inline double second_user_rate(const RatePoint& p) { return p.sum_bound - p.r1_bound; }

struct TwoUserSqueezing {
  double r1_star = 0.0;
  double r2_star = 0.0;
  RatePoint rates;
  int sweeps = 0;
  bool converged = false;
};

/// Alternates: r1 maximizing I(alpha : g1 / beta) at the current r2, then r2
/// maximizing the second user's rate at the new r1, until both move by less
/// than 1e-6.
TwoUserSqueezing optimize_two_user_squeezing(const ChannelParams& params, double t, double nbar1,
                                             double nbar2);

struct RateRegion {
  RatePoint point;
  /// Polygon vertices, counter-clockwise from the origin.
  std::vector<std::array<double, 2>> corners;
  /// True when the sum constraint is inactive.
  bool rectangle = false;
};

RateRegion capacity_region(const RatePoint& point);

/// Largest squeezing compatible with a mean photon number: asinh(sqrt(nbar)).
double max_squeezing(double nbar);

/// Maximizes a smooth scalar function on [lo, hi]: coarse grid scan followed
/// by a root search on the numerical derivative around the best grid point
/// (Brent on the values when the derivative does not change sign there).
double maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       int grid_points = 200);

}  // namespace qmac
