#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "qmac/quantum_core.hpp"

namespace qmac {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit seed is the key; the 128-bit counter is (block, stream), so
/// independent streams for parallel workers come from the same seed with
/// different stream ids. Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// The raw bijection: ten rounds applied to `counter` under `key`.
  static Block encrypt(Block counter, Key key);

 private:
  Key key_;
  Block counter_;
  Block buffer_{};
  int next_ = 4;
};

/// Haar-random unitary.
CMatrix random_unitary(Eigen::Index dim, Philox4x32& rng);

/// Random density matrix GG^dagger / tr(GG^dagger) with G a dim x rank
/// complex Ginibre matrix.
DensityMatrix random_density(Eigen::Index dim, Philox4x32& rng, Eigen::Index rank = 0);

DensityMatrix random_pure_state(Eigen::Index dim, Philox4x32& rng);

/// Random CPTP map from a Haar isometry split into `n_ops` blocks.
KrausChannel random_kraus_channel(Eigen::Index dim_in, Eigen::Index dim_out, int n_ops,
                                  Philox4x32& rng);

/// Random POVM: E_g = S^{-1/2} M_g^dagger M_g S^{-1/2} with S = sum M^dagger M.
Povm random_povm(Eigen::Index dim, int n_outcomes, Philox4x32& rng);

/// Flat-Dirichlet probability vector.
std::vector<double> random_probabilities(int n, Philox4x32& rng);

LabeledEnsemble random_ensemble(int n_states, Eigen::Index dim, Philox4x32& rng,
                                Eigen::Index rank = 0);

/// Normalizes positive operators into a POVM: E_g = S^{-1/2} P_g S^{-1/2}.
Povm normalize_to_povm(const std::vector<CMatrix>& positive_ops);

}  // namespace qmac
