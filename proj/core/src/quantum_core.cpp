#include "qmac/quantum_core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qmac {

namespace {

std::string describe(DensityDefect defect, double magnitude) {
  std::ostringstream os;
  os << "invalid density matrix: " << to_string(defect) << " violated (magnitude "
     << magnitude << ")";
  return os.str();
}

double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// sum_i p_i log p_i with 0 log 0 = 0 and eigenvalues in [-tol, 0) treated as 0.
double neg_entropy_of(const RVector& eigenvalues) {
  double acc = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda > 0.0) acc += lambda * std::log(lambda);
  }
  return acc;
}

DensityMatrix checked_average(const std::vector<DensityMatrix>& states,
                              const std::vector<double>& probs, double tol) {
  if (states.empty()) throw ValidationError("ensemble must contain at least one state");
  if (states.size() != probs.size()) {
    throw ValidationError("ensemble has " + std::to_string(states.size()) + " states but " +
                          std::to_string(probs.size()) + " probabilities");
  }
  const Eigen::Index dim = states.front().dim();
  CMatrix avg = CMatrix::Zero(dim, dim);
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != dim) throw ValidationError("ensemble states differ in dimension");
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
      throw ValidationError("ensemble probability " + std::to_string(i) + " is negative");
    }
    total += probs[i];
    avg += probs[i] * states[i].matrix();
  }
  if (std::abs(total - 1.0) > tol) {
    throw ValidationError("ensemble probabilities sum to " + std::to_string(total));
  }
  return validate_density(avg, tol);
}

}  // namespace

const char* to_string(DensityDefect defect) {
  switch (defect) {
    case DensityDefect::kNotSquare: return "squareness";
    case DensityDefect::kHermiticity: return "hermiticity";
    case DensityDefect::kTrace: return "unit trace";
    case DensityDefect::kPositivity: return "positivity";
  }
  return "unknown";
}

DensityError::DensityError(DensityDefect defect, double magnitude)
    : ValidationError(describe(defect, magnitude)), defect_(defect), magnitude_(magnitude) {}

DensityMatrix validate_density(const CMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DensityError(DensityDefect::kNotSquare, static_cast<double>(m.rows() - m.cols()));
  }
  if (!m.allFinite()) {
    throw DensityError(DensityDefect::kHermiticity, std::numeric_limits<double>::infinity());
  }
  const double herm = hermiticity_defect(m);
  if (herm > tol) throw DensityError(DensityDefect::kHermiticity, herm);

  CMatrix h = 0.5 * (m + m.adjoint());
  const double trace_dev = std::abs(h.trace().real() - 1.0);
  if (trace_dev > tol) throw DensityError(DensityDefect::kTrace, trace_dev);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol) throw DensityError(DensityDefect::kPositivity, min_eig);
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  if (dim <= 0) throw ValidationError("dimension must be positive");
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ValidationError("pure state vector must be nonzero");
  const CVector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> weights) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(weights.size()),
                            static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = weights[i];
  }
  return validate_density(m);
}

RVector DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

LabeledEnsemble::LabeledEnsemble(std::vector<DensityMatrix> states, std::vector<double> probs,
                                 double tol)
    : states_(std::move(states)),
      probs_(std::move(probs)),
      average_(checked_average(states_, probs_, tol)) {}

LabeledEnsemble LabeledEnsemble::singleton(DensityMatrix state) {
  return LabeledEnsemble({std::move(state)}, {1.0});
}

KrausChannel::KrausChannel(std::vector<CMatrix> operators, double tol) : ops_(std::move(operators)) {
  if (ops_.empty()) throw ValidationError("Kraus channel needs at least one operator");
  const Eigen::Index rows = ops_.front().rows();
  const Eigen::Index cols = ops_.front().cols();
  CMatrix completeness = CMatrix::Zero(cols, cols);
  for (const auto& b : ops_) {
    if (b.rows() != rows || b.cols() != cols) {
      throw ValidationError("Kraus operators differ in shape");
    }
    completeness += b.adjoint() * b;
  }
  const double dev = (completeness - CMatrix::Identity(cols, cols)).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw ValidationError("Kraus operators are not trace preserving (completeness deviation " +
                          std::to_string(dev) + ")");
  }
}

KrausChannel KrausChannel::from_adjoint_form(const std::vector<CMatrix>& adjoint_ops, double tol) {
  std::vector<CMatrix> ops;
  ops.reserve(adjoint_ops.size());
  for (const auto& a : adjoint_ops) ops.emplace_back(a.adjoint());
  return KrausChannel(std::move(ops), tol);
}

KrausChannel KrausChannel::identity(Eigen::Index dim) {
  return KrausChannel({CMatrix::Identity(dim, dim)});
}

Povm::Povm(std::vector<CMatrix> elements, double tol) : elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("POVM needs at least one element");
  const Eigen::Index dim = elements_.front().rows();
  CMatrix total = CMatrix::Zero(dim, dim);
  for (std::size_t g = 0; g < elements_.size(); ++g) {
    const CMatrix& e = elements_[g];
    if (e.rows() != dim || e.cols() != dim) throw ValidationError("POVM elements differ in shape");
    if (hermiticity_defect(e) > tol) {
      throw ValidationError("POVM element " + std::to_string(g) + " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
      throw ValidationError("POVM element " + std::to_string(g) + " is not positive semidefinite");
    }
    total += e;
  }
  const double dev = (total - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw ValidationError("POVM elements do not sum to identity (deviation " +
                          std::to_string(dev) + ")");
  }
}

Povm Povm::projective(const CMatrix& basis, double tol) {
  std::vector<CMatrix> elements;
  elements.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    elements.emplace_back(basis.col(j) * basis.col(j).adjoint());
  }
  return Povm(std::move(elements), tol);
}

Povm Povm::computational_basis(Eigen::Index dim) {
  return projective(CMatrix::Identity(dim, dim));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const Eigen::Index da = a.dim();
  const Eigen::Index db = b.dim();
  CMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return validate_density(out);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return std::max(0.0, -neg_entropy_of(rho.eigenvalues()));
}

double relative_entropy(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw ValidationError("relative entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<CMatrix> es1(rho1.matrix());
  Eigen::SelfAdjointEigenSolver<CMatrix> es2(rho2.matrix());
  const RVector& p = es1.eigenvalues();
  const RVector& q = es2.eigenvalues();
  // |<x_i|y_j>|^2
  const RMatrix overlap = (es1.eigenvectors().adjoint() * es2.eigenvectors()).cwiseAbs2();

  double cross = 0.0;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    double weight = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) weight += std::max(p(i), 0.0) * overlap(i, j);
    if (q(j) <= kSupportThreshold) {
      if (weight > kSupportThreshold) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log(q(j));
  }
  return std::max(0.0, neg_entropy_of(p) - cross);
}

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho, double tol) {
  if (channel.dim_in() != rho.dim()) {
    throw ValidationError("channel input dimension " + std::to_string(channel.dim_in()) +
                          " does not match state dimension " + std::to_string(rho.dim()));
  }
  CMatrix out = CMatrix::Zero(channel.dim_out(), channel.dim_out());
  for (const auto& b : channel.operators()) out.noalias() += b * rho.matrix() * b.adjoint();
  return validate_density(out, tol);
}

std::vector<double> measure(const Povm& povm, const DensityMatrix& rho) {
  if (povm.dim() != rho.dim()) throw ValidationError("POVM and state dimensions differ");
  std::vector<double> probs;
  probs.reserve(povm.size());
  for (const auto& e : povm.elements()) {
    // tr(E rho) = sum_ij E_ij rho_ji
    const double p = (e.cwiseProduct(rho.matrix().transpose())).sum().real();
    probs.push_back(std::max(p, 0.0));
  }
  return probs;
}

DensityMatrix measurement_as_channel(const Povm& povm, const DensityMatrix& rho) {
  const std::vector<double> probs = measure(povm, rho);
  return DensityMatrix::diagonal(probs);
}

CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const RVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

KrausChannel measurement_channel(const Povm& povm) {
  const Eigen::Index dim = povm.dim();
  const auto outcomes = static_cast<Eigen::Index>(povm.size());
  std::vector<CMatrix> ops;
  ops.reserve(povm.size() * static_cast<std::size_t>(dim));
  for (Eigen::Index g = 0; g < outcomes; ++g) {
    const CMatrix root = psd_sqrt(povm.elements()[static_cast<std::size_t>(g)]);
    for (Eigen::Index j = 0; j < dim; ++j) {
      CMatrix b = CMatrix::Zero(outcomes, dim);
      b.row(g) = root.row(j);
      ops.push_back(std::move(b));
    }
  }
  return KrausChannel(std::move(ops), 1e-8);
}

}  // namespace qmac
