#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmac {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Default tolerance for Hermiticity / trace / positivity checks.
inline constexpr double kDefaultTol = 1e-9;

/// Eigenvalues of the second argument of a relative entropy below this are
/// treated as outside its support.
inline constexpr double kSupportThreshold = 1e-12;

/// Input violates a documented precondition (bad matrix, bad config, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a result outside its mathematical range.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double nats_to_bits(double nats) { return nats / std::log(2.0); }

}  // namespace qmac
