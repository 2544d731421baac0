#include "qmac/random.hpp"

#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace qmac {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Philox4x32& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

// Q factor of a Ginibre matrix with the phases of R's diagonal divided out,
// giving Haar-distributed orthonormal columns.
CMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Philox4x32& rng) {
  const CMatrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

Philox4x32::Block Philox4x32::encrypt(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (next_ == 4) {
    buffer_ = encrypt(counter_, key_);
    if (++counter_[0] == 0) ++counter_[1];
    next_ = 0;
  }
  return buffer_[static_cast<std::size_t>(next_++)];
}

double Philox4x32::uniform() {
  const std::uint64_t hi = (*this)() >> 5;  // 27 bits
  const std::uint64_t lo = (*this)() >> 6;  // 26 bits
  return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

CMatrix random_unitary(Eigen::Index dim, Philox4x32& rng) { return haar_isometry(dim, dim, rng); }

DensityMatrix random_density(Eigen::Index dim, Philox4x32& rng, Eigen::Index rank) {
  if (rank <= 0 || rank > dim) rank = dim;
  const CMatrix g = ginibre(dim, rank, rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return validate_density(0.5 * (m + m.adjoint()));
}

DensityMatrix random_pure_state(Eigen::Index dim, Philox4x32& rng) {
  return DensityMatrix::pure(ginibre(dim, 1, rng).col(0));
}

KrausChannel random_kraus_channel(Eigen::Index dim_in, Eigen::Index dim_out, int n_ops,
                                  Philox4x32& rng) {
  if (n_ops < 1 || n_ops * dim_out < dim_in) {
    throw ValidationError("random Kraus channel needs n_ops * dim_out >= dim_in");
  }
  const CMatrix v = haar_isometry(n_ops * dim_out, dim_in, rng);
  std::vector<CMatrix> ops;
  ops.reserve(static_cast<std::size_t>(n_ops));
  for (int mu = 0; mu < n_ops; ++mu) ops.emplace_back(v.middleRows(mu * dim_out, dim_out));
  return KrausChannel(std::move(ops));
}

Povm normalize_to_povm(const std::vector<CMatrix>& positive_ops) {
  if (positive_ops.empty()) throw ValidationError("cannot normalize an empty operator list");
  const Eigen::Index dim = positive_ops.front().rows();
  CMatrix total = CMatrix::Zero(dim, dim);
  for (const auto& p : positive_ops) total += p;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (total + total.adjoint()));
  if (es.eigenvalues().minCoeff() <= 1e-14 * es.eigenvalues().maxCoeff()) {
    throw NumericalError("operators do not span the space; cannot normalize to a POVM");
  }
  const CMatrix inv_root = es.eigenvectors() *
                           es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                           es.eigenvectors().adjoint();
  std::vector<CMatrix> elements;
  elements.reserve(positive_ops.size());
  for (const auto& p : positive_ops) {
    CMatrix e = inv_root * p * inv_root;
    elements.emplace_back(0.5 * (e + e.adjoint()));
  }
  return Povm(std::move(elements), 1e-8);
}

Povm random_povm(Eigen::Index dim, int n_outcomes, Philox4x32& rng) {
  std::vector<CMatrix> ops;
  ops.reserve(static_cast<std::size_t>(n_outcomes));
  for (int g = 0; g < n_outcomes; ++g) {
    const CMatrix m = ginibre(dim, dim, rng);
    ops.emplace_back(m.adjoint() * m);
  }
  return normalize_to_povm(ops);
}

std::vector<double> random_probabilities(int n, Philox4x32& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& v : p) {
    v = expo(rng);
    total += v;
  }
  for (auto& v : p) v /= total;
  return p;
}

LabeledEnsemble random_ensemble(int n_states, Eigen::Index dim, Philox4x32& rng, Eigen::Index rank) {
  std::vector<DensityMatrix> states;
  states.reserve(static_cast<std::size_t>(n_states));
  for (int i = 0; i < n_states; ++i) states.push_back(random_density(dim, rng, rank));
  return LabeledEnsemble(std::move(states), random_probabilities(n_states, rng));
}

}  // namespace qmac
