#pragma once

#include <cstddef>
#include <vector>

#include "qmac/quantum_core.hpp"

namespace qmac {

/// Classical two-input channel p(g | a, b) together with the (independent)
/// input distributions of both sources.
class JointChannelTable {
 public:
  /// `conditional` is indexed [a][b][g].
  JointChannelTable(std::vector<std::vector<std::vector<double>>> conditional,
                    std::vector<double> p_alpha, std::vector<double> p_beta,
                    double tol = kDefaultTol);

  std::size_t n_alpha() const { return p_alpha_.size(); }
  std::size_t n_beta() const { return p_beta_.size(); }
  std::size_t n_outcomes() const { return n_outcomes_; }

  double p(std::size_t a, std::size_t b, std::size_t g) const { return cond_[a][b][g]; }
  const std::vector<std::vector<std::vector<double>>>& conditional() const { return cond_; }
  const std::vector<double>& p_alpha() const { return p_alpha_; }
  const std::vector<double>& p_beta() const { return p_beta_; }

  /// Merges outcome `from` into outcome `into` (a classical post-processing).
  JointChannelTable merge_outcomes(std::size_t into, std::size_t from) const;

 private:
  std::vector<std::vector<std::vector<double>>> cond_;
  std::vector<double> p_alpha_;
  std::vector<double> p_beta_;
  std::size_t n_outcomes_ = 0;
};

/// The three bounds of the two-user capacity pentagon, in nats:
/// R1 < r1_bound, R2 < r2_bound, R1 + R2 < sum_bound.
struct RatePoint {
  double r1_bound = 0.0;
  double r2_bound = 0.0;
  double sum_bound = 0.0;
};

/// Which source's letter is revealed to the decoder.
enum class Conditioning {
  kOnBeta,   ///< I(alpha : g / beta)
  kOnAlpha,  ///< I(beta : g / alpha)
};

/// p(g | a, b) = tr(E_g S(rho_a (x) rho_b)).
JointChannelTable induce_channel(const LabeledEnsemble& source1, const LabeledEnsemble& source2,
                                 const KrausChannel& channel, const Povm& povm);

/// Same, for output states already computed: `outputs[a][b] = S(rho_a (x) rho_b)`.
JointChannelTable induce_channel(const std::vector<std::vector<DensityMatrix>>& outputs,
                                 const std::vector<double>& p_alpha,
                                 const std::vector<double>& p_beta, const Povm& povm);

/// I(alpha (x) beta : g).
double mutual_information(const JointChannelTable& table);

/// I(alpha : g / beta) for kOnBeta, I(beta : g / alpha) for kOnAlpha.
double conditional_mutual_information(const JointChannelTable& table, Conditioning which);

/// (I(alpha:g/beta), I(beta:g/alpha), I(alpha (x) beta:g)).
RatePoint rate_region(const JointChannelTable& table);

/// S(channel(rho1_a (x) rho2_b)) for every letter pair.
std::vector<std::vector<DensityMatrix>> channel_outputs(const LabeledEnsemble& source1,
                                                        const LabeledEnsemble& source2,
                                                        const KrausChannel& channel);

/// Measurement-independent upper bound on I(alpha : g / beta):
///   -sum_ab p_a p_b S(S(rho_a (x) rho_b)) + sum_b p_b S(S(rho1 (x) rho_b)).
double holevo_conditional_bound(const LabeledEnsemble& source1, const LabeledEnsemble& source2,
                                const KrausChannel& channel);

/// Upper bound on I(alpha (x) beta : g):
///   -sum_ab p_a p_b S(S(rho_a (x) rho_b)) + S(S(rho1 (x) rho2)).
double holevo_sum_bound(const LabeledEnsemble& source1, const LabeledEnsemble& source2,
                        const KrausChannel& channel);

/// Holevo-type bounds arranged as a rate point: the conditional bound for each
/// source (the second one with the roles of the sources exchanged) and the
/// sum bound.
RatePoint holevo_rate_bounds(const LabeledEnsemble& source1, const LabeledEnsemble& source2,
                             const KrausChannel& channel);

}  // namespace qmac
