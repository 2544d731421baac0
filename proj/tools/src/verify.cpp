#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

#include "qmac/access_bounds.hpp"
#include "qmac/gaussian_mac.hpp"
#include "qmac/mode_dynamics.hpp"
#include "qmac/oracles.hpp"
#include "qmac/quantum_core.hpp"
#include "qmac/random.hpp"
#include "support.hpp"

namespace qmac::cli {

using namespace detail;

json builtin_reference_values() {
  // 40-digit values from tests/oracles/frozen_values.py.
  const json params = {{"omega1", 1.0}, {"omega2", 1.2}, {"coupling", 0.2}, {"gamma", 0.5},
                       {"temperature", 0.3}};
  return {
      {"tolerance", 1e-10},
      {"entropy", {{{"diag", {0.5, 0.3, 0.2}}, {"value", 1.0296530140645735274}}}},
      {"relative_entropy",
       {{{"rho", {0.5, 0.3, 0.2}}, {"sigma", "maximally_mixed"}, {"value", 0.06895927460353616398}}}},
      {"normal_modes",
       {{{"params", params},
         {"lambda1", 1.3236067977499789696},
         {"lambda2", 0.87639320225002103036},
         {"nbar1", 0.012279576235701660906},
         {"nbar2", 0.056929436885296158245}}}},
      {"transfer",
       {{{"params", params},
         {"t", 1.7},
         {"c1_abs2", 0.38034025863036804474},
         {"c2_abs2", 0.047074673318358625175},
         {"psi", 0.62364650833188723727}}}},
      {"heterodyne",
       {{{"params", params},
         {"t", 1.7},
         {"nbar1", 2.0},
         {"nbar2", 1.0},
         {"r1_bound", 0.55488649514382452158},
         {"r2_bound", 0.04488038161368283296},
         {"sum_bound", 0.58089968201803263246}}}},
      {"homodyne",
       {{{"params", params},
         {"t", 1.7},
         {"nbar1", 2.0},
         {"nbar2", 1.0},
         {"r1", 0.3},
         {"r2", 0.2},
         {"r1_bound", 0.015828753845984837598},
         {"r2_bound", 0.057873154745209531242},
         {"sum_bound", 0.071996035473930196083}}}},
  };
}

namespace {

struct Check {
  std::string name;
  double error = 0.0;
  double limit = 0.0;
  std::string detail;
  bool passed() const { return error <= limit; }  // false for NaN
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-15);
}

CMatrix diag_matrix(const Node& n) {
  if (!n.value().is_array() || n.size() == 0) n.fail("expected a non-empty array of numbers");
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n.size()), static_cast<Eigen::Index>(n.size()));
  for (std::size_t i = 0; i < n.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = n.at(i).number();
  }
  return m;
}

DensityMatrix diag_state(const Node& n) {
  const CMatrix m = diag_matrix(n);
  return n.convert([&](const json&) { return validate_density(m); });
}

// Frozen values: each fixture entry becomes one check per quantity.
void reference_checks(const Node& root, std::vector<Check>& out) {
  root.expect_object({"tolerance", "entropy", "relative_entropy", "normal_modes", "transfer",
                      "heterodyne", "homodyne"});
  const double tol = root.number_or("tolerance", 1e-10);
  if (!(tol > 0.0)) root["tolerance"].fail("tolerance must be positive");

  const auto each = [&](const char* section, auto&& fn) {
    if (!root.has(section)) return;
    const Node list = root[section];
    if (!list.value().is_array()) list.fail("expected an array of entries");
    for (std::size_t i = 0; i < list.size(); ++i) {
      fn(list.at(i), std::string("reference.") + section + "[" + std::to_string(i) + "]");
    }
  };
  const auto compare = [&](const std::string& name, double got, const Node& want) {
    const double w = want.number();
    out.push_back({name, rel_err(got, w), tol, "got " + format_number(got) + ", want " + format_number(w)});
  };

  each("entropy", [&](const Node& e, const std::string& name) {
    e.expect_object({"diag", "value"});
    compare(name, von_neumann_entropy(diag_state(e["diag"])), e["value"]);
  });
  each("relative_entropy", [&](const Node& e, const std::string& name) {
    e.expect_object({"rho", "sigma", "value"});
    const DensityMatrix rho = diag_state(e["rho"]);
    const Node s = e["sigma"];
    const DensityMatrix sigma = s.value().is_string() && s.string() == "maximally_mixed"
                                    ? DensityMatrix::maximally_mixed(rho.dim())
                                    : diag_state(s);
    compare(name, e.convert([&](const json&) { return relative_entropy(rho, sigma); }), e["value"]);
  });
  each("normal_modes", [&](const Node& e, const std::string& name) {
    e.expect_object({"params", "lambda1", "lambda2", "nbar1", "nbar2"});
    const auto m = normal_modes(e["params"].convert(io::channel_params_from_json));
    compare(name + ".lambda1", m.lambda1, e["lambda1"]);
    compare(name + ".lambda2", m.lambda2, e["lambda2"]);
    compare(name + ".nbar1", m.nbar1, e["nbar1"]);
    compare(name + ".nbar2", m.nbar2, e["nbar2"]);
  });
  each("transfer", [&](const Node& e, const std::string& name) {
    e.expect_object({"params", "t", "c1_abs2", "c2_abs2", "psi"});
    const auto p = e["params"].convert(io::channel_params_from_json);
    const auto tc = e.convert([&](const json&) { return transfer_coefficients(p, e["t"].number()); });
    compare(name + ".c1_abs2", std::norm(tc.c1), e["c1_abs2"]);
    compare(name + ".c2_abs2", std::norm(tc.c2), e["c2_abs2"]);
    compare(name + ".psi", tc.psi, e["psi"]);
  });
  const auto rates = [&](const Node& e, const std::string& name, const RatePoint& r) {
    compare(name + ".r1_bound", r.r1_bound, e["r1_bound"]);
    compare(name + ".r2_bound", r.r2_bound, e["r2_bound"]);
    compare(name + ".sum_bound", r.sum_bound, e["sum_bound"]);
  };
  each("heterodyne", [&](const Node& e, const std::string& name) {
    e.expect_object({"params", "t", "nbar1", "nbar2", "r1_bound", "r2_bound", "sum_bound"});
    const auto p = e["params"].convert(io::channel_params_from_json);
    rates(e, name, e.convert([&](const json&) {
            return heterodyne_rates(p, e["t"].number(), e["nbar1"].number(), e["nbar2"].number());
          }));
  });
  each("homodyne", [&](const Node& e, const std::string& name) {
    e.expect_object({"params", "t", "nbar1", "nbar2", "r1", "r2", "r1_bound", "r2_bound", "sum_bound"});
    const auto p = e["params"].convert(io::channel_params_from_json);
    rates(e, name, e.convert([&](const json&) {
            return homodyne_two_user_rates(p, e["t"].number(),
                                           SourceSpec::homodyne(e["nbar1"].number(), e["r1"].number()),
                                           SourceSpec::homodyne(e["nbar2"].number(), e["r2"].number()));
          }));
  });
}

double uniform(Philox4x32& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

ChannelParams random_params(Philox4x32& rng) {
  return {uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 0.5),
          uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
}

JointChannelTable random_table(Philox4x32& rng) {
  const int na = 2 + static_cast<int>(rng() % 3), nb = 2 + static_cast<int>(rng() % 3);
  const int ng = 2 + static_cast<int>(rng() % 4);
  std::vector<std::vector<std::vector<double>>> cond(na, std::vector<std::vector<double>>(nb));
  for (auto& row : cond) {
    for (auto& cell : row) cell = random_probabilities(ng, rng);
  }
  return JointChannelTable(cond, random_probabilities(na, rng), random_probabilities(nb, rng));
}

void property_checks(std::uint64_t seed, bool full, int jobs, std::vector<Check>& out) {
  const int points = full ? 300 : 40;

  {
    Philox4x32 rng(seed, 1);
    double het = 0.0, sq = 0.0;
    for (double n : {0.5, 1.0, 10.0}) {
      const ChannelParams p = random_params(rng);
      het = std::max(het, std::abs(heterodyne_rates(p, 0.0, n, 1.0).r1_bound - std::log1p(n)));
      ChannelParams q = p;
      q.coupling = 0.0;
      sq = std::max(sq, std::abs(optimal_squeezing(q, 0.0, n).capacity - std::log1p(2.0 * n)));
    }
    out.push_back({"limit.heterodyne_t0", het, 1e-10, "max |I_1|2 - ln(1+n)| over n = 0.5, 1, 10"});
    out.push_back({"limit.squeezed_t0", sq, 1e-6, "max |C* - ln(1+2n)| over n = 0.5, 1, 10"});
  }

  {
    Philox4x32 rng(seed, 2);
    double het = 0.0, hom = 0.0, region = -INFINITY;
    for (int i = 0; i < points; ++i) {
      const ChannelParams p = random_params(rng);
      const double t = uniform(rng, 0.0, 5.0);
      const double n1 = uniform(rng, 0.1, 5.0), n2 = uniform(rng, 0.1, 5.0);
      const double r1 = uniform(rng, 0.0, 0.9) * max_squeezing(n1);
      const double r2 = uniform(rng, 0.0, 0.9) * max_squeezing(n2);

      const RatePoint hc = heterodyne_rates(p, t, n1, n2);
      const RatePoint hb = gaussian_rate_point(heterodyne_channel(p, t), SourceSpec::heterodyne(n1).input_cov,
                                               SourceSpec::heterodyne(n2).input_cov);
      const auto s1 = SourceSpec::homodyne(n1, r1), s2 = SourceSpec::homodyne(n2, r2);
      const RatePoint mc = homodyne_two_user_rates(p, t, s1, s2);
      const RatePoint mb = gaussian_rate_point(homodyne_channel(p, t, r1, r2), s1.input_cov, s2.input_cov);
      const auto track = [](double& worst, const RatePoint& a, const RatePoint& b) {
        worst = std::max({worst, rel_err(a.r1_bound, b.r1_bound), rel_err(a.r2_bound, b.r2_bound),
                          rel_err(a.sum_bound, b.sum_bound)});
      };
      track(het, hc, hb);
      track(hom, mc, mb);
      for (const RatePoint& r : {hc, mc}) region = std::max(region, r.sum_bound - r.r1_bound - r.r2_bound);
    }
    const std::string n = std::to_string(points) + " random points";
    out.push_back({"two_path.heterodyne", het, 1e-9, n + ", closed form vs assembled channel (rel)"});
    out.push_back({"two_path.homodyne", hom, 1e-9, n + ", closed form vs assembled channel (rel)"});
    out.push_back({"region_inequality.gaussian", std::max(region, 0.0), 1e-9,
                   n + ", max(I_sum - I_1|2 - I_2|1) = " + sci(region)});
  }

  {
    Philox4x32 rng(seed, 3);
    double worst = -INFINITY;
    for (int i = 0; i < points; ++i) {
      const RatePoint r = rate_region(random_table(rng));
      worst = std::max(worst, r.sum_bound - r.r1_bound - r.r2_bound);
    }
    out.push_back({"region_inequality.classical", std::max(worst, 0.0), 1e-9,
                   std::to_string(points) + " random tables, max(I_sum - I_1|2 - I_2|1) = " + sci(worst)});
  }

  {
    Philox4x32 rng(seed, 4);
    double worst = -INFINITY;
    for (int i = 0; i < points; ++i) {
      const Eigen::Index dim = 2 + i % 2;
      const auto a = random_density(dim, rng), b = random_density(dim, rng);
      const double before = relative_entropy(a, b);
      const auto ch = random_kraus_channel(dim, 2 + i % 2, 1 + i % 4, rng);
      worst = std::max(worst, relative_entropy(apply_channel(ch, a), apply_channel(ch, b)) - before);
      const auto povm = random_povm(dim, 2 + i % 3, rng);
      worst = std::max(worst, relative_entropy(measurement_as_channel(povm, a),
                                               measurement_as_channel(povm, b)) - before);
    }
    out.push_back({"lindblad_monotonicity", std::max(worst, 0.0), 1e-9,
                   std::to_string(2 * points) + " channel/measurement pairs, max increase " + sci(worst)});
  }

  {
    Philox4x32 rng(seed, 5);
    const int instances = full ? 10 : 2;
    double worst = -INFINITY;
    for (int i = 0; i < instances; ++i) {
      const auto e1 = random_ensemble(2, 2, rng), e2 = random_ensemble(2, 2, rng);
      const auto ch = random_kraus_channel(4, 4, 2, rng);
      AccessibleInfoOptions o;
      o.iterations = full ? 1500 : 300;
      o.seed = seed + 100 + static_cast<std::uint64_t>(i);
      o.jobs = jobs;
      const auto found = brute_force_accessible_info(e1, e2, ch, o).best;
      const auto bound = holevo_rate_bounds(e1, e2, ch);
      worst = std::max({worst, found.r1_bound - bound.r1_bound, found.r2_bound - bound.r2_bound,
                        found.sum_bound - bound.sum_bound});
    }
    out.push_back({"holevo_dominance", std::max(worst, 0.0), 1e-6,
                   std::to_string(instances) + " two-qubit instances, max(found - bound) = " + sci(worst)});
  }

  if (!full) return;

  {
    Philox4x32 rng(seed, 6);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const ChannelParams p = random_params(rng);
      const double t = uniform(rng, 0.0, 3.0);
      const auto ka = SourceSpec::heterodyne(uniform(rng, 0.5, 3.0)).input_cov;
      const auto kb = SourceSpec::heterodyne(uniform(rng, 0.5, 3.0)).input_cov;
      const auto ch = heterodyne_channel(p, t);
      const auto mc = mc_gaussian_mi(ch, ka, kb, 100000, seed + 200 + static_cast<std::uint64_t>(i), jobs);
      const auto exact = gaussian_rate_point(ch, ka, kb);
      for (auto [est, want] : {std::pair{mc.source1, exact.r1_bound}, std::pair{mc.source2, exact.r2_bound},
                               std::pair{mc.sum, exact.sum_bound}}) {
        worst = std::max(worst, std::abs(est.estimate - want) / est.stderr_);
      }
    }
    out.push_back({"monte_carlo", worst, 4.0, "3 points x 3 rates at 1e5 samples, max |z|"});
  }
  {
    Philox4x32 rng(seed, 7);
    const ChannelParams p = random_params(rng);
    const double t = uniform(rng, 0.5, 2.0);
    const auto est = simulate_langevin(p, t, 20000, seed + 300, jobs);
    const auto tc = transfer_coefficients(p, t);
    const double z = std::max({std::abs(est.c1_abs2 - std::norm(tc.c1)) / est.c1_abs2_sigma,
                               std::abs(est.c2_abs2 - std::norm(tc.c2)) / est.c2_abs2_sigma,
                               std::abs(est.psi - tc.psi) / est.psi_sigma});
    out.push_back({"langevin", z, 4.0, "|c1|^2, |c2|^2, psi from 20000 trajectories, max |z|"});
  }
}

}  // namespace

int verify(const GlobalOptions& opts, const std::string& level, std::ostream& out) {
  if (level != "quick" && level != "full") throw ValidationError("level must be quick or full");
  std::vector<Check> checks;

  const Node fixture = [&] {
    if (!opts.config.empty()) return Node::load(opts.config);
    auto doc = std::make_shared<io::LocatedDocument>();
    doc->value = builtin_reference_values();
    doc->source = "<builtin reference values>";
    const json* root = &doc->value;
    return Node(std::move(doc), root, "");
  }();
  reference_checks(fixture, checks);
  property_checks(opts.seed, level == "full", opts.jobs, checks);

  Table table;
  table.label_column = "check";
  table.columns = {{"passed"}, {"error"}, {"limit"}};
  json list = json::array();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    passed += c.passed();
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << ": " << sci(c.error) << " (limit "
        << sci(c.limit) << ") " << c.detail << "\n";
    table.labels.push_back(c.name);
    table.rows.push_back({c.passed() ? 1.0 : 0.0, c.error, c.limit});
    list.push_back({{"name", c.name}, {"passed", c.passed()}, {"error", round12(c.error)},
                    {"limit", c.limit}, {"detail", c.detail}});
  }
  out << "verify: " << passed << "/" << checks.size() << " checks passed (level " << level
      << ", seed " << opts.seed << ")\n";
  if (!opts.out.empty()) {
    const json doc = {{"command", "verify"}, {"level", level}, {"seed", opts.seed},
                      {"passed", passed}, {"total", checks.size()}, {"checks", list}};
    write_outputs(opts.out, table, doc, false);
  }
  return passed == checks.size() ? kExitOk : kExitNumerical;
}

}  // namespace qmac::cli
