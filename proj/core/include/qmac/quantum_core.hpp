#pragma once

#include <span>
#include <string>
#include <vector>

#include "qmac/common.hpp"

namespace qmac {

/// Which density-matrix invariant a candidate matrix violated.
enum class DensityDefect { kNotSquare, kHermiticity, kTrace, kPositivity };

const char* to_string(DensityDefect defect);

class DensityError : public ValidationError {
 public:
  DensityError(DensityDefect defect, double magnitude);

  DensityDefect defect() const { return defect_; }
  /// Size of the violation: max |m - m^dagger|, |tr m - 1| or the most
  /// negative eigenvalue, depending on the defect.
  double magnitude() const { return magnitude_; }

 private:
  DensityDefect defect_;
  double magnitude_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. Only constructible
/// through validation, so every instance satisfies the invariants.
class DensityMatrix {
 public:
  static DensityMatrix maximally_mixed(Eigen::Index dim);
  static DensityMatrix pure(const CVector& psi);
  static DensityMatrix diagonal(std::span<const double> weights);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

  /// Ascending eigenvalues.
  RVector eigenvalues() const;

  friend DensityMatrix validate_density(const CMatrix& m, double tol);

 private:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Checks the three density-matrix invariants within `tol` and throws
/// DensityError naming the first one that fails. The stored matrix is the
/// Hermitian part of `m`; nothing is renormalized.
DensityMatrix validate_density(const CMatrix& m, double tol = kDefaultTol);

/// Probability-weighted family of states sharing one dimension.
class LabeledEnsemble {
 public:
  LabeledEnsemble(std::vector<DensityMatrix> states, std::vector<double> probs,
                  double tol = kDefaultTol);

  static LabeledEnsemble singleton(DensityMatrix state);

  std::size_t size() const { return states_.size(); }
  Eigen::Index dim() const { return states_.front().dim(); }
  const std::vector<DensityMatrix>& states() const { return states_; }
  const std::vector<double>& probs() const { return probs_; }
  const DensityMatrix& state(std::size_t i) const { return states_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }

  /// Sum_i p_i rho_i.
  const DensityMatrix& average() const { return average_; }

 private:
  std::vector<DensityMatrix> states_;
  std::vector<double> probs_;
  DensityMatrix average_;
};

/// Completely positive trace-preserving map in operator-sum form.
///
/// Operators are stored as B_mu with rho -> sum_mu B_mu rho B_mu^dagger and
/// sum_mu B_mu^dagger B_mu = 1. The form written as
/// rho -> sum_mu A_mu^dagger rho A_mu with sum_mu A_mu A_mu^dagger = 1 is the
/// same map with B_mu = A_mu^dagger; use from_adjoint_form() for it.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix> operators, double tol = kDefaultTol);

  static KrausChannel from_adjoint_form(const std::vector<CMatrix>& adjoint_ops,
                                        double tol = kDefaultTol);
  static KrausChannel identity(Eigen::Index dim);

  Eigen::Index dim_in() const { return ops_.front().cols(); }
  Eigen::Index dim_out() const { return ops_.front().rows(); }
  const std::vector<CMatrix>& operators() const { return ops_; }

 private:
  std::vector<CMatrix> ops_;
};

/// Resolution of the identity by positive semidefinite elements.
class Povm {
 public:
  explicit Povm(std::vector<CMatrix> elements, double tol = kDefaultTol);

  /// Rank-one projectors onto the columns of a unitary.
  static Povm projective(const CMatrix& basis, double tol = kDefaultTol);
  static Povm computational_basis(Eigen::Index dim);

  Eigen::Index dim() const { return elements_.front().rows(); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<CMatrix>& elements() const { return elements_; }

 private:
  std::vector<CMatrix> elements_;
};

/// Kronecker product a (x) b; index (i_a * dim_b + i_b).
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// -sum lambda ln lambda in nats.
double von_neumann_entropy(const DensityMatrix& rho);

/// tr(rho1 ln rho1 - rho1 ln rho2) in nats. Returns +infinity when the
/// support of rho1 is not contained in the support of rho2.
double relative_entropy(const DensityMatrix& rho1, const DensityMatrix& rho2);

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho,
                            double tol = kDefaultTol);

/// Outcome probabilities tr(E_g rho), in POVM element order.
std::vector<double> measure(const Povm& povm, const DensityMatrix& rho);

/// The measurement viewed as a quantum channel: rho -> diag(tr(E_g rho)).
DensityMatrix measurement_as_channel(const Povm& povm, const DensityMatrix& rho);

/// Kraus form of measurement_as_channel: B_{g,j} = |g><j| sqrt(E_g).
KrausChannel measurement_channel(const Povm& povm);

/// Principal square root of a Hermitian PSD matrix (negative eigenvalues
/// clamped to zero).
CMatrix psd_sqrt(const CMatrix& m);

}  // namespace qmac
