#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qmac/access_bounds.hpp"
#include "qmac/gaussian_mac.hpp"
#include "qmac/mode_dynamics.hpp"
#include "qmac/random.hpp"

namespace qmac {

// Independent numerical checks for the closed forms. Everything here is
// seeded: the same seed gives bit-identical output on one platform, whatever
// the number of worker threads.

struct McEstimate {
  double estimate = 0.0;  ///< nats
  double stderr_ = 0.0;   ///< standard error from batch means
};

struct McMutualInfo {
  McEstimate sum;      ///< I(g : alpha (x) beta)
  McEstimate source1;  ///< I(g : alpha / beta)
  McEstimate source2;  ///< I(g : beta / alpha)
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  int batches = 0;
};

/// Samples g = A1 alpha + A2 beta + z and estimates the three rates from the
/// empirical joint covariance of (g, alpha, beta) through the Gaussian entropy
/// formula. Requires n_samples >= 10^4.
McMutualInfo mc_gaussian_mi(const LinearGaussianChannel& channel, const RMatrix& k_alpha,
                            const RMatrix& k_beta, std::int64_t n_samples, std::uint64_t seed,
                            int jobs = 1);

struct LangevinEstimate {
  double c1_abs2 = 0.0;
  double c1_abs2_sigma = 0.0;
  double c2_abs2 = 0.0;
  double c2_abs2_sigma = 0.0;
  double psi = 0.0;
  double psi_sigma = 0.0;
  Complex c1_mean;
  Complex c2_mean;
  std::int64_t n_traj = 0;
  std::int64_t steps = 0;
  double dt = 0.0;
};

/// Integrates the two-mode Langevin equation with thermal forces attached to
/// the normal modes, starting once from a = (1, 0) and once from a = (0, 1).
/// Uses exact exponential propagation over steps of at most
/// 0.01 / max(lambda1, gamma). Throws NumericalError if the one-step
/// propagator is not contractive.
LangevinEstimate simulate_langevin(const ChannelParams& params, double t, std::int64_t n_traj,
                                   std::uint64_t seed, int jobs = 1);

struct AccessibleInfoResult {
  /// Best value found for each region quantity, maximized separately.
  RatePoint best;
  /// Standard deviation across restarts of each quantity's best value.
  RatePoint dispersion;
  /// POVM achieving best.sum_bound.
  Povm best_povm;
  /// Induced tables of the best POVM for r1, r2 and sum respectively.
  std::array<std::optional<JointChannelTable>, 3> best_tables;
  int evaluations = 0;
};

struct AccessibleInfoOptions {
  int n_outcomes = 4;
  int n_restarts = 4;
  int iterations = 1500;
  std::uint64_t seed = 1;
  int jobs = 1;
};

/// Random-restart local search over POVMs maximizing each of the three
/// region quantities. Values found are lower bounds on the accessible
/// quantities. Requires output dimension <= 4 and 2 <= n_outcomes <= 6.
AccessibleInfoResult brute_force_accessible_info(const LabeledEnsemble& source1,
                                                 const LabeledEnsemble& source2,
                                                 const KrausChannel& channel,
                                                 const AccessibleInfoOptions& options);

}  // namespace qmac
