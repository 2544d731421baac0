#include "qmac/access_bounds.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace qmac {

namespace {

void check_distribution(const std::vector<double>& p, const char* name, double tol) {
  if (p.empty()) throw ValidationError(std::string(name) + " is empty");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " has a negative or non-finite entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > tol) {
    throw ValidationError(std::string(name) + " sums to " + std::to_string(total));
  }
}

// Results in [-tol, 0) are rounding; anything more negative means the entropy
// code is broken.
double clamp_bound(double value, const char* what) {
  if (value < -kDefaultTol) {
    throw NumericalError(std::string(what) + " is negative: " + std::to_string(value));
  }
  return std::max(value, 0.0);
}

double weighted_log_ratio(double weight, double num, double den) {
  if (weight <= 0.0 || num <= 0.0) return 0.0;
  // den >= weight-carrying share of num whenever the table is consistent.
  assert(den > 0.0);
  return weight * std::log(num / den);
}

}  // namespace

JointChannelTable::JointChannelTable(std::vector<std::vector<std::vector<double>>> conditional,
                                     std::vector<double> p_alpha, std::vector<double> p_beta,
                                     double tol)
    : cond_(std::move(conditional)), p_alpha_(std::move(p_alpha)), p_beta_(std::move(p_beta)) {
  check_distribution(p_alpha_, "p_alpha", tol);
  check_distribution(p_beta_, "p_beta", tol);
  if (cond_.size() != p_alpha_.size()) {
    throw ValidationError("channel table first index does not match p_alpha");
  }
  for (std::size_t a = 0; a < cond_.size(); ++a) {
    if (cond_[a].size() != p_beta_.size()) {
      throw ValidationError("channel table second index does not match p_beta");
    }
    for (std::size_t b = 0; b < cond_[a].size(); ++b) {
      if (a == 0 && b == 0) n_outcomes_ = cond_[a][b].size();
      if (cond_[a][b].size() != n_outcomes_) {
        throw ValidationError("channel table rows have differing outcome counts");
      }
      check_distribution(cond_[a][b],
                         ("p(g|" + std::to_string(a) + "," + std::to_string(b) + ")").c_str(),
                         tol);
    }
  }
}

JointChannelTable JointChannelTable::merge_outcomes(std::size_t into, std::size_t from) const {
  if (into == from || into >= n_outcomes_ || from >= n_outcomes_) {
    throw ValidationError("merge_outcomes: invalid outcome indices");
  }
  auto merged = cond_;
  for (auto& row : merged) {
    for (auto& slice : row) {
      slice[into] += slice[from];
      slice.erase(slice.begin() + static_cast<std::ptrdiff_t>(from));
    }
  }
  return JointChannelTable(std::move(merged), p_alpha_, p_beta_);
}

std::vector<std::vector<DensityMatrix>> channel_outputs(const LabeledEnsemble& source1,
                                                        const LabeledEnsemble& source2,
                                                        const KrausChannel& channel) {
  if (channel.dim_in() != source1.dim() * source2.dim()) {
    throw ValidationError("channel input dimension " + std::to_string(channel.dim_in()) +
                          " does not match product dimension " +
                          std::to_string(source1.dim() * source2.dim()));
  }
  std::vector<std::vector<DensityMatrix>> out;
  out.reserve(source1.size());
  for (const auto& rho_a : source1.states()) {
    std::vector<DensityMatrix> row;
    row.reserve(source2.size());
    for (const auto& rho_b : source2.states()) {
      row.push_back(apply_channel(channel, tensor(rho_a, rho_b)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

JointChannelTable induce_channel(const std::vector<std::vector<DensityMatrix>>& outputs,
                                 const std::vector<double>& p_alpha,
                                 const std::vector<double>& p_beta, const Povm& povm) {
  std::vector<std::vector<std::vector<double>>> cond;
  cond.reserve(outputs.size());
  for (const auto& row : outputs) {
    std::vector<std::vector<double>> slices;
    slices.reserve(row.size());
    for (const auto& sigma : row) {
      if (sigma.dim() != povm.dim()) {
        throw ValidationError("POVM dimension " + std::to_string(povm.dim()) +
                              " does not match channel output dimension " +
                              std::to_string(sigma.dim()));
      }
      slices.push_back(measure(povm, sigma));
    }
    cond.push_back(std::move(slices));
  }
  return JointChannelTable(std::move(cond), p_alpha, p_beta, 1e-8);
}

JointChannelTable induce_channel(const LabeledEnsemble& source1, const LabeledEnsemble& source2,
                                 const KrausChannel& channel, const Povm& povm) {
  if (povm.dim() != channel.dim_out()) {
    throw ValidationError("POVM dimension " + std::to_string(povm.dim()) +
                          " does not match channel output dimension " +
                          std::to_string(channel.dim_out()));
  }
  return induce_channel(channel_outputs(source1, source2, channel), source1.probs(),
                        source2.probs(), povm);
}

double mutual_information(const JointChannelTable& t) {
  std::vector<double> p_out(t.n_outcomes(), 0.0);
  for (std::size_t a = 0; a < t.n_alpha(); ++a) {
    for (std::size_t b = 0; b < t.n_beta(); ++b) {
      const double w = t.p_alpha()[a] * t.p_beta()[b];
      for (std::size_t g = 0; g < t.n_outcomes(); ++g) p_out[g] += w * t.p(a, b, g);
    }
  }
  double info = 0.0;
  for (std::size_t a = 0; a < t.n_alpha(); ++a) {
    for (std::size_t b = 0; b < t.n_beta(); ++b) {
      const double w = t.p_alpha()[a] * t.p_beta()[b];
      for (std::size_t g = 0; g < t.n_outcomes(); ++g) {
        info += weighted_log_ratio(w * t.p(a, b, g), t.p(a, b, g), p_out[g]);
      }
    }
  }
  return std::max(info, 0.0);
}

double conditional_mutual_information(const JointChannelTable& t, Conditioning which) {
  const bool on_beta = which == Conditioning::kOnBeta;
  // Index of the revealed letter is `k`, the informative one is `i`.
  const std::size_t n_known = on_beta ? t.n_beta() : t.n_alpha();
  const std::size_t n_free = on_beta ? t.n_alpha() : t.n_beta();
  const auto& p_known = on_beta ? t.p_beta() : t.p_alpha();
  const auto& p_free = on_beta ? t.p_alpha() : t.p_beta();
  auto cell = [&](std::size_t i, std::size_t k, std::size_t g) {
    return on_beta ? t.p(i, k, g) : t.p(k, i, g);
  };

  double info = 0.0;
  std::vector<double> p_given_known(t.n_outcomes());
  for (std::size_t k = 0; k < n_known; ++k) {
    std::fill(p_given_known.begin(), p_given_known.end(), 0.0);
    for (std::size_t i = 0; i < n_free; ++i) {
      for (std::size_t g = 0; g < t.n_outcomes(); ++g) p_given_known[g] += p_free[i] * cell(i, k, g);
    }
    for (std::size_t i = 0; i < n_free; ++i) {
      const double w = p_free[i] * p_known[k];
      for (std::size_t g = 0; g < t.n_outcomes(); ++g) {
        info += weighted_log_ratio(w * cell(i, k, g), cell(i, k, g), p_given_known[g]);
      }
    }
  }
  return std::max(info, 0.0);
}

RatePoint rate_region(const JointChannelTable& t) {
  return RatePoint{conditional_mutual_information(t, Conditioning::kOnBeta),
                   conditional_mutual_information(t, Conditioning::kOnAlpha),
                   mutual_information(t)};
}

namespace {

// sum_ab p_a p_b S(sigma_ab)
double mean_output_entropy(const LabeledEnsemble& s1, const LabeledEnsemble& s2,
                           const std::vector<std::vector<DensityMatrix>>& outputs) {
  double acc = 0.0;
  for (std::size_t a = 0; a < s1.size(); ++a) {
    for (std::size_t b = 0; b < s2.size(); ++b) {
      acc += s1.prob(a) * s2.prob(b) * von_neumann_entropy(outputs[a][b]);
    }
  }
  return acc;
}

// sum_k p_k S(channel(rho_avg (x) rho_k)) with the averaged source on the left
// when `average_first`.
double partially_averaged_entropy(const LabeledEnsemble& averaged, const LabeledEnsemble& kept,
                                  const KrausChannel& channel, bool average_first) {
  double acc = 0.0;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const DensityMatrix joint = average_first ? tensor(averaged.average(), kept.state(k))
                                              : tensor(kept.state(k), averaged.average());
    acc += kept.prob(k) * von_neumann_entropy(apply_channel(channel, joint));
  }
  return acc;
}

}  // namespace

double holevo_conditional_bound(const LabeledEnsemble& source1, const LabeledEnsemble& source2,
                                const KrausChannel& channel) {
  const auto outputs = channel_outputs(source1, source2, channel);
  const double value = -mean_output_entropy(source1, source2, outputs) +
                       partially_averaged_entropy(source1, source2, channel, true);
  return clamp_bound(value, "conditional Holevo bound");
}

double holevo_sum_bound(const LabeledEnsemble& source1, const LabeledEnsemble& source2,
                        const KrausChannel& channel) {
  const auto outputs = channel_outputs(source1, source2, channel);
  const double value =
      -mean_output_entropy(source1, source2, outputs) +
      von_neumann_entropy(apply_channel(channel, tensor(source1.average(), source2.average())));
  return clamp_bound(value, "sum Holevo bound");
}

RatePoint holevo_rate_bounds(const LabeledEnsemble& source1, const LabeledEnsemble& source2,
                             const KrausChannel& channel) {
  const auto outputs = channel_outputs(source1, source2, channel);
  const double mean = mean_output_entropy(source1, source2, outputs);
  RatePoint bounds;
  bounds.r1_bound = clamp_bound(-mean + partially_averaged_entropy(source1, source2, channel, true),
                                "conditional Holevo bound");
  bounds.r2_bound = clamp_bound(-mean + partially_averaged_entropy(source2, source1, channel, false),
                                "conditional Holevo bound");
  bounds.sum_bound = clamp_bound(
      -mean + von_neumann_entropy(apply_channel(channel, tensor(source1.average(), source2.average()))),
      "sum Holevo bound");
  return bounds;
}

}  // namespace qmac
