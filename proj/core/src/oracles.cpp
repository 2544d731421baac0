#include "qmac/oracles.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace qmac {

namespace {

// Runs task(i) for i in [0, n) on up to `jobs` threads. Results are indexed
// by i, so the outcome does not depend on scheduling.
template <typename Result, typename Task>
std::vector<Result> parallel_indexed(int n, int jobs, Task task) {
  std::vector<Result> results(static_cast<std::size_t>(n));
  jobs = std::clamp(jobs, 1, std::max(n, 1));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = task(i);
    return results;
  }
  std::vector<std::future<void>> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < n; i += jobs) results[static_cast<std::size_t>(i)] = task(i);
    }));
  }
  for (auto& f : workers) f.get();
  return results;
}

// ---------------------------------------------------------------------------
// Monte-Carlo mutual information

// Factor F with F F^T = K, keeping only directions of positive variance.
RMatrix psd_factor(const RMatrix& k) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (k + k.transpose()));
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 1e-14 * scale) keep.push_back(i);
  }
  RMatrix f(k.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    f.col(static_cast<Eigen::Index>(j)) =
        es.eigenvectors().col(keep[j]) * std::sqrt(es.eigenvalues()(keep[j]));
  }
  return f;
}

double log_det_block(const RMatrix& cov, const std::vector<Eigen::Index>& idx) {
  if (idx.empty()) return 0.0;
  const auto n = static_cast<Eigen::Index>(idx.size());
  RMatrix sub(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = cov(idx[i], idx[j]);
  }
  Eigen::LLT<RMatrix> llt(sub);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("degenerate empirical covariance; increase the sample count");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

struct Moments {
  RVector sum;
  RMatrix outer;
  std::int64_t n = 0;

  explicit Moments(Eigen::Index dim) : sum(RVector::Zero(dim)), outer(RMatrix::Zero(dim, dim)) {}

  void add(const Moments& other) {
    sum += other.sum;
    outer += other.outer;
    n += other.n;
  }

  RMatrix covariance() const {
    const RVector mean = sum / static_cast<double>(n);
    return (outer - static_cast<double>(n) * mean * mean.transpose()) / static_cast<double>(n - 1);
  }
};

struct RateEstimates {
  double sum, source1, source2;
};

RateEstimates rates_from_covariance(const RMatrix& cov, Eigen::Index n_out, Eigen::Index n_a,
                                    Eigen::Index n_b) {
  std::vector<Eigen::Index> g(static_cast<std::size_t>(n_out)), a(static_cast<std::size_t>(n_a)),
      b(static_cast<std::size_t>(n_b));
  std::iota(g.begin(), g.end(), 0);
  std::iota(a.begin(), a.end(), n_out);
  std::iota(b.begin(), b.end(), n_out + n_a);
  auto cat = [](std::vector<Eigen::Index> x, const std::vector<Eigen::Index>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  const double ld_g = log_det_block(cov, g);
  const double ld_a = log_det_block(cov, a);
  const double ld_b = log_det_block(cov, b);
  const double ld_ab = log_det_block(cov, cat(a, b));
  const double ld_ga = log_det_block(cov, cat(g, a));
  const double ld_gb = log_det_block(cov, cat(g, b));
  const double ld_gab = log_det_block(cov, cat(cat(g, a), b));
  return {0.5 * (ld_g + ld_ab - ld_gab), 0.5 * (ld_gb + ld_ab - ld_b - ld_gab),
          0.5 * (ld_ga + ld_ab - ld_a - ld_gab)};
}

McEstimate summarize(double pooled, const std::vector<double>& batch_values) {
  const double n = static_cast<double>(batch_values.size());
  const double mean = std::accumulate(batch_values.begin(), batch_values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : batch_values) ss += (v - mean) * (v - mean);
  return {pooled, std::sqrt(ss / (n - 1.0) / n)};
}

// ---------------------------------------------------------------------------
// Langevin trajectories

struct LangevinModel {
  Eigen::Matrix2cd step;        // exact propagator over dt
  Eigen::Matrix2d noise_factor; // real factor of the per-quadrature increment covariance
};

struct TrajectorySums {
  Complex a1_sum1{0.0, 0.0};  // run starting at (1, 0)
  Complex a1_sum2{0.0, 0.0};  // run starting at (0, 1)
  double re2_sum1 = 0.0, im2_sum1 = 0.0, re2_sum2 = 0.0, im2_sum2 = 0.0;
  std::int64_t n = 0;
};

}  // namespace

McMutualInfo mc_gaussian_mi(const LinearGaussianChannel& ch, const RMatrix& k_alpha,
                            const RMatrix& k_beta, std::int64_t n_samples, std::uint64_t seed,
                            int jobs) {
  ch.validate();
  if (n_samples < 10000) throw ValidationError("mc_gaussian_mi needs at least 10^4 samples");
  if (k_alpha.rows() != ch.a1.cols() || k_beta.rows() != ch.a2.cols()) {
    throw ValidationError("input covariance shape does not match the transfer matrices");
  }
  // Whitened inputs: alpha = Fa xi, so only informative directions are sampled.
  const RMatrix fa = psd_factor(k_alpha);
  const RMatrix fb = psd_factor(k_beta);
  const RMatrix ga = ch.a1 * fa;
  const RMatrix gb = ch.a2 * fb;
  const Eigen::LLT<RMatrix> noise_llt(ch.noise_cov);
  const RMatrix noise_factor = noise_llt.matrixL();
  const Eigen::Index n_out = ch.output_dim();
  const Eigen::Index n_a = fa.cols();
  const Eigen::Index n_b = fb.cols();
  const Eigen::Index dim = n_out + n_a + n_b;

  constexpr int kBatches = 50;
  const std::int64_t base = n_samples / kBatches;
  const std::int64_t extra = n_samples % kBatches;

  auto batch_moments = [&](int batch) {
    Philox4x32 rng(seed, static_cast<std::uint64_t>(batch));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::int64_t count = base + (batch < extra ? 1 : 0);
    Moments m(dim);
    RVector xa(n_a), xb(n_b), z(n_out), row(dim);
    for (std::int64_t s = 0; s < count; ++s) {
      for (Eigen::Index i = 0; i < n_a; ++i) xa(i) = normal(rng);
      for (Eigen::Index i = 0; i < n_b; ++i) xb(i) = normal(rng);
      for (Eigen::Index i = 0; i < n_out; ++i) z(i) = normal(rng);
      row.head(n_out) = ga * xa + gb * xb + noise_factor * z;
      row.segment(n_out, n_a) = xa;
      row.tail(n_b) = xb;
      m.sum += row;
      m.outer.selfadjointView<Eigen::Lower>().rankUpdate(row);
    }
    m.outer = m.outer.selfadjointView<Eigen::Lower>();
    m.n = count;
    return m;
  };

  const auto batches = parallel_indexed<std::optional<Moments>>(
      kBatches, jobs, [&](int b) { return std::optional<Moments>(batch_moments(b)); });

  Moments pooled(dim);
  std::vector<double> v_sum, v_s1, v_s2;
  for (const auto& m : batches) {
    pooled.add(*m);
    const RateEstimates r = rates_from_covariance(m->covariance(), n_out, n_a, n_b);
    v_sum.push_back(r.sum);
    v_s1.push_back(r.source1);
    v_s2.push_back(r.source2);
  }
  const RateEstimates all = rates_from_covariance(pooled.covariance(), n_out, n_a, n_b);

  McMutualInfo out;
  out.sum = summarize(all.sum, v_sum);
  out.source1 = summarize(all.source1, v_s1);
  out.source2 = summarize(all.source2, v_s2);
  out.n_samples = n_samples;
  out.seed = seed;
  out.batches = kBatches;
  return out;
}

LangevinEstimate simulate_langevin(const ChannelParams& p, double t, std::int64_t n_traj,
                                   std::uint64_t seed, int jobs) {
  p.validate();
  if (!(t >= 0.0)) throw ValidationError("time must be nonnegative");
  if (n_traj < 2) throw ValidationError("need at least two trajectories");

  // Normal modes from a numerical eigendecomposition of the mode Hamiltonian.
  Eigen::Matrix2d h;
  h << p.omega1, p.coupling, p.coupling, p.omega2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  const Eigen::Vector2d mu = es.eigenvalues();
  const Eigen::Matrix2d basis = es.eigenvectors();
  const double lambda_max = mu.cwiseAbs().maxCoeff();

  const double dt_max = 0.01 / std::max(lambda_max, p.gamma_damp);
  const std::int64_t steps = t > 0.0 ? static_cast<std::int64_t>(std::ceil(t / dt_max)) : 0;
  const double dt = steps > 0 ? t / static_cast<double>(steps) : 0.0;

  LangevinModel model;
  {
    Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
    Eigen::Vector2d var = Eigen::Vector2d::Zero();
    for (int j = 0; j < 2; ++j) {
      diag(j, j) = std::exp(Complex(-0.5 * p.gamma_damp * dt, -mu(j) * dt));
      const double occupancy = thermal_occupancy(mu(j), p.temperature);
      // Per-quadrature variance injected over one step.
      var(j) = 0.25 * (2.0 * occupancy + 1.0) * -std::expm1(-p.gamma_damp * dt);
    }
    model.step = basis.cast<Complex>() * diag * basis.transpose().cast<Complex>();
    model.noise_factor = basis * var.cwiseSqrt().asDiagonal();
  }
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> stability(model.step);
  const double radius = stability.eigenvalues().cwiseAbs().maxCoeff();
  if (!std::isfinite(radius) || radius > 1.0 + 1e-12) {
    throw NumericalError("Langevin propagator is unstable (spectral radius " +
                         std::to_string(radius) + ")");
  }

  constexpr int kChunks = 16;
  const std::int64_t base = n_traj / kChunks;
  const std::int64_t extra = n_traj % kChunks;
  auto run_chunk = [&](int chunk) {
    Philox4x32 rng(seed, static_cast<std::uint64_t>(chunk));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::int64_t count = base + (chunk < extra ? 1 : 0);
    TrajectorySums s;
    auto noise = [&] {
      const Eigen::Vector2d re = model.noise_factor * Eigen::Vector2d(normal(rng), normal(rng));
      const Eigen::Vector2d im = model.noise_factor * Eigen::Vector2d(normal(rng), normal(rng));
      return Eigen::Vector2cd(Complex(re(0), im(0)), Complex(re(1), im(1)));
    };
    for (std::int64_t k = 0; k < count; ++k) {
      Eigen::Vector2cd from1(1.0, 0.0);
      Eigen::Vector2cd from2(0.0, 1.0);
      for (std::int64_t n = 0; n < steps; ++n) {
        from1 = model.step * from1 + noise();
        from2 = model.step * from2 + noise();
      }
      s.a1_sum1 += from1(0);
      s.a1_sum2 += from2(0);
      s.re2_sum1 += from1(0).real() * from1(0).real();
      s.im2_sum1 += from1(0).imag() * from1(0).imag();
      s.re2_sum2 += from2(0).real() * from2(0).real();
      s.im2_sum2 += from2(0).imag() * from2(0).imag();
    }
    s.n = count;
    return s;
  };
  const auto chunks = parallel_indexed<TrajectorySums>(kChunks, jobs, run_chunk);

  TrajectorySums total;
  for (const auto& c : chunks) {
    total.a1_sum1 += c.a1_sum1;
    total.a1_sum2 += c.a1_sum2;
    total.re2_sum1 += c.re2_sum1;
    total.im2_sum1 += c.im2_sum1;
    total.re2_sum2 += c.re2_sum2;
    total.im2_sum2 += c.im2_sum2;
    total.n += c.n;
  }
  const double n = static_cast<double>(total.n);
  const Complex m1 = total.a1_sum1 / n;
  const Complex m2 = total.a1_sum2 / n;
  // Per-quadrature sample variances of a1(t), four per trajectory pair.
  const double var_pooled =
      ((total.re2_sum1 - n * m1.real() * m1.real()) + (total.im2_sum1 - n * m1.imag() * m1.imag()) +
       (total.re2_sum2 - n * m2.real() * m2.real()) + (total.im2_sum2 - n * m2.imag() * m2.imag())) /
      (4.0 * (n - 1.0));
  if (!std::isfinite(var_pooled) || !std::isfinite(std::abs(m1)) || !std::isfinite(std::abs(m2))) {
    throw NumericalError("Langevin integration produced non-finite values");
  }

  LangevinEstimate out;
  out.n_traj = total.n;
  out.steps = steps;
  out.dt = dt;
  out.c1_mean = m1;
  out.c2_mean = m2;
  // E|mean|^2 = |c|^2 + 2 var / n.
  const double bias = 2.0 * var_pooled / n;
  out.c1_abs2 = std::norm(m1) - bias;
  out.c2_abs2 = std::norm(m2) - bias;
  out.c1_abs2_sigma = std::sqrt(4.0 * std::norm(m1) * var_pooled / n + 2.0 * bias * bias);
  out.c2_abs2_sigma = std::sqrt(4.0 * std::norm(m2) * var_pooled / n + 2.0 * bias * bias);
  // Wigner noise variance per quadrature is psi / 4.
  out.psi = 4.0 * var_pooled;
  out.psi_sigma = 4.0 * var_pooled * std::sqrt(2.0 / (4.0 * n - 1.0));
  return out;
}

// ---------------------------------------------------------------------------
// POVM search

namespace {

enum class Target { kR1 = 0, kR2 = 1, kSum = 2 };

double evaluate(const RatePoint& r, Target target) {
  switch (target) {
    case Target::kR1: return r.r1_bound;
    case Target::kR2: return r.r2_bound;
    case Target::kSum: return r.sum_bound;
  }
  return 0.0;
}

struct SearchProblem {
  std::vector<std::vector<DensityMatrix>> outputs;
  std::vector<double> p_alpha;
  std::vector<double> p_beta;
  Eigen::Index dim = 0;
  int n_outcomes = 0;
};

struct Candidate {
  std::vector<CMatrix> factors;  // E_g = M_g^dagger M_g before normalization
};

struct Scored {
  Povm povm;
  JointChannelTable table;
  double value;
};

Scored score(const SearchProblem& prob, const Candidate& c, Target target) {
  std::vector<CMatrix> positive;
  positive.reserve(c.factors.size());
  for (const auto& m : c.factors) positive.emplace_back(m.adjoint() * m);
  Povm povm = normalize_to_povm(positive);
  JointChannelTable table = induce_channel(prob.outputs, prob.p_alpha, prob.p_beta, povm);
  const double value = evaluate(rate_region(table), target);
  return {std::move(povm), std::move(table), value};
}

Candidate from_povm(const Povm& povm) {
  Candidate c;
  for (const auto& e : povm.elements()) c.factors.push_back(psd_sqrt(e));
  return c;
}

Candidate perturbed(const Candidate& base, double sigma, Philox4x32& rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  Candidate c = base;
  for (auto& m : c.factors) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) += Complex(normal(rng), normal(rng));
    }
  }
  return c;
}

// Projectors onto the eigenbasis of the average output, shared round-robin
// among outcomes, with a small random admixture so every outcome is live.
Candidate eigenbasis_start(const SearchProblem& prob, Philox4x32& rng) {
  CMatrix avg = CMatrix::Zero(prob.dim, prob.dim);
  for (std::size_t a = 0; a < prob.p_alpha.size(); ++a) {
    for (std::size_t b = 0; b < prob.p_beta.size(); ++b) {
      avg += prob.p_alpha[a] * prob.p_beta[b] * prob.outputs[a][b].matrix();
    }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(avg);
  Candidate c;
  c.factors.assign(static_cast<std::size_t>(prob.n_outcomes), CMatrix::Zero(prob.dim, prob.dim));
  for (Eigen::Index j = 0; j < prob.dim; ++j) {
    auto& m = c.factors[static_cast<std::size_t>(j % prob.n_outcomes)];
    m += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
  }
  return perturbed(c, 1e-4, rng);
}

Candidate random_start(const SearchProblem& prob, Philox4x32& rng) {
  return from_povm(random_povm(prob.dim, prob.n_outcomes, rng));
}

struct RestartResult {
  std::optional<Scored> best;
  int evaluations = 0;
};

// (1+1) evolution strategy with the one-fifth success rule.
RestartResult local_search(const SearchProblem& prob, Target target, int restart, int iterations,
                           std::uint64_t seed) {
  Philox4x32 rng(seed, static_cast<std::uint64_t>(static_cast<int>(target) * 100003 + restart));
  Candidate current = restart == 0 ? eigenbasis_start(prob, rng) : random_start(prob, rng);
  RestartResult out;
  Scored best = score(prob, current, target);
  current = from_povm(best.povm);
  out.evaluations = 1;
  double sigma = 0.2;
  for (int it = 0; it < iterations; ++it) {
    const Candidate trial = perturbed(current, sigma, rng);
    Scored s = score(prob, trial, target);
    ++out.evaluations;
    if (s.value > best.value) {
      current = from_povm(s.povm);
      best = std::move(s);
      sigma *= 1.5;
    } else {
      sigma *= std::pow(1.5, -0.25);
    }
    sigma = std::clamp(sigma, 1e-7, 1.0);
  }
  out.best = std::move(best);
  return out;
}

}  // namespace

AccessibleInfoResult brute_force_accessible_info(const LabeledEnsemble& source1,
                                                 const LabeledEnsemble& source2,
                                                 const KrausChannel& channel,
                                                 const AccessibleInfoOptions& options) {
  if (channel.dim_out() > 4) throw ValidationError("POVM search supports output dimension <= 4");
  if (options.n_outcomes < 2 || options.n_outcomes > 6) {
    throw ValidationError("POVM search supports 2 to 6 outcomes");
  }
  if (options.n_restarts < 1 || options.iterations < 0) {
    throw ValidationError("POVM search needs at least one restart");
  }
  SearchProblem prob;
  prob.outputs = channel_outputs(source1, source2, channel);
  prob.p_alpha = source1.probs();
  prob.p_beta = source2.probs();
  prob.dim = channel.dim_out();
  prob.n_outcomes = options.n_outcomes;

  const int n_tasks = 3 * options.n_restarts;
  const auto runs = parallel_indexed<RestartResult>(n_tasks, options.jobs, [&](int task) {
    return local_search(prob, static_cast<Target>(task / options.n_restarts),
                        task % options.n_restarts, options.iterations, options.seed);
  });

  std::array<double, 3> best_value{};
  std::array<double, 3> dispersion{};
  std::array<int, 3> best_run{};
  int evaluations = 0;
  for (int target = 0; target < 3; ++target) {
    double mean = 0.0;
    best_value[target] = -1.0;
    for (int r = 0; r < options.n_restarts; ++r) {
      const auto& run = runs[static_cast<std::size_t>(target * options.n_restarts + r)];
      evaluations += run.evaluations;
      mean += run.best->value;
      if (run.best->value > best_value[target]) {
        best_value[target] = run.best->value;
        best_run[target] = target * options.n_restarts + r;
      }
    }
    mean /= options.n_restarts;
    double ss = 0.0;
    for (int r = 0; r < options.n_restarts; ++r) {
      const double v = runs[static_cast<std::size_t>(target * options.n_restarts + r)].best->value;
      ss += (v - mean) * (v - mean);
    }
    dispersion[target] = options.n_restarts > 1 ? std::sqrt(ss / (options.n_restarts - 1)) : 0.0;
  }

  AccessibleInfoResult result{
      RatePoint{best_value[0], best_value[1], best_value[2]},
      RatePoint{dispersion[0], dispersion[1], dispersion[2]},
      runs[static_cast<std::size_t>(best_run[2])].best->povm,
      {},
      evaluations};
  for (int target = 0; target < 3; ++target) {
    result.best_tables[static_cast<std::size_t>(target)] =
        runs[static_cast<std::size_t>(best_run[target])].best->table;
  }
  return result;
}

}  // namespace qmac
