#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "qmac/gaussian_mac.hpp"
#include "qmac/mode_dynamics.hpp"
#include "support.hpp"

namespace qmac::cli {

using namespace detail;

namespace {

// Loop order of the grid, outermost first. t is innermost so every curve
// over t occupies consecutive rows.
constexpr std::array<const char*, 7> kAxes = {"temperature", "coupling", "nbar1", "nbar2",
                                              "r1",          "r2",       "t"};
enum Axis { kT, kK, kN1, kN2, kR1, kR2, kTime };

struct SweepPlan {
  Detection detection = Detection::kHeterodyne;
  ChannelParams params;
  bool optimize = false;
  double lo_phase = 0.0;
  std::array<std::vector<double>, 7> axes;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
  }
  std::array<double, 7> point(std::size_t index) const {
    std::array<double, 7> out{};
    for (int a = 6; a >= 0; --a) {
      out[a] = axes[a][index % axes[a].size()];
      index /= axes[a].size();
    }
    return out;
  }
};

SweepPlan parse_sweep(const Node& root, Detection detection, bool optimize_flag) {
  SweepPlan plan;
  plan.detection = detection;
  const bool hom = detection == Detection::kHomodyne;
  root.expect_object({"params", "inputs", "grid"});

  const Node params = root["params"];
  plan.params = params.convert(io::channel_params_from_json);

  const Node inputs = root["inputs"];
  if (hom) {
    inputs.expect_object({"nbar1", "nbar2", "r1", "r2", "optimize", "lo_phase"});
  } else {
    inputs.expect_object({"nbar1", "nbar2"});
  }
  plan.optimize = hom && (optimize_flag || inputs.flag_or("optimize", false));
  plan.lo_phase = hom ? inputs.number_or("lo_phase", 0.0) : 0.0;
  if (plan.optimize && plan.lo_phase != 0.0) {
    inputs["lo_phase"].fail("the squeezing optimizer measures Re a1; lo_phase must be 0");
  }

  const Node grid = root["grid"];
  for (const char* r : {"r1", "r2"}) {
    if (plan.optimize && grid.has(r)) grid[r].fail("squeezing is optimized per point; drop this grid");
  }
  if (hom && !plan.optimize) {
    grid.expect_object({"t", "temperature", "coupling", "nbar1", "nbar2", "r1", "r2"});
  } else {
    grid.expect_object({"t", "temperature", "coupling", "nbar1", "nbar2"});
  }

  const std::array<double, 7> base = {plan.params.temperature, plan.params.coupling, 0.0, 0.0, 0.0,
                                      0.0, 0.0};
  for (int a = 0; a < 7; ++a) {
    const char* name = kAxes[a];
    if (grid.has(name)) {
      const Node g = grid[name];
      plan.axes[a] = g.convert([&](const json& j) { return axis_values(j, name); });
    } else if (a == kTime) {
      grid.fail("missing key 't'");
    } else if (a == kN1 || a == kN2) {
      plan.axes[a] = {inputs[name].number()};
    } else if (a == kR1 || a == kR2) {
      plan.axes[a] = {hom && !plan.optimize ? inputs.number_or(name, 0.0) : 0.0};
    } else {
      plan.axes[a] = {base[a]};
    }
  }
  const auto& ts = plan.axes[kTime];
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < 0.0) grid["t"].fail("times must be nonnegative");
    if (i > 0 && ts[i] < ts[i - 1]) grid["t"].fail("times must be nondecreasing");
  }
  // Validate every parameter combination up front, so a bad grid value is
  // reported against the config rather than from a worker thread.
  for (double temp : plan.axes[kT]) {
    for (double k : plan.axes[kK]) {
      ChannelParams p = plan.params;
      p.temperature = temp;
      p.coupling = k;
      params.convert([&](const json&) { p.validate(); return 0; });
    }
  }
  // Where a value came from: its grid axis if given, else the inputs entry.
  const auto origin = [&](int a) {
    if (grid.has(kAxes[a])) return grid[kAxes[a]];
    return inputs.has(kAxes[a]) ? inputs[kAxes[a]] : inputs;
  };
  for (int a : {kN1, kN2}) {
    for (double n : plan.axes[a]) {
      if (!(n >= 0.0)) origin(a).fail("mean photon number must be >= 0");
    }
  }
  if (hom && !plan.optimize) {
    for (int a : {kR1, kR2}) {
      const Node where = origin(a);
      for (double r : plan.axes[a]) {
        for (double n : plan.axes[a == kR1 ? kN1 : kN2]) {
          where.convert([&](const json&) { return SourceSpec::homodyne(n, r).nbar; });
        }
      }
    }
  }
  if (plan.size() == 0) root.fail("empty sweep");
  return plan;
}

struct Row {
  RatePoint rates;
  double psi = 0.0;
  double r1 = 0.0, r2 = 0.0;
  bool converged = true;
};

Row compute(const SweepPlan& plan, const std::array<double, 7>& x) {
  ChannelParams p = plan.params;
  p.temperature = x[kT];
  p.coupling = x[kK];
  const double t = x[kTime];
  Row row;
  row.psi = transfer_coefficients(p, t).psi;
  if (plan.detection == Detection::kHeterodyne) {
    row.rates = heterodyne_rates(p, t, x[kN1], x[kN2]);
  } else if (plan.optimize) {
    const auto o = optimize_two_user_squeezing(p, t, x[kN1], x[kN2]);
    row.rates = o.rates;
    row.r1 = o.r1_star;
    row.r2 = o.r2_star;
    row.converged = o.converged;
  } else {
    const auto s1 = SourceSpec::homodyne(x[kN1], x[kR1]);
    const auto s2 = SourceSpec::homodyne(x[kN2], x[kR2]);
    row.r1 = x[kR1];
    row.r2 = x[kR2];
    row.rates = plan.lo_phase == 0.0
                    ? homodyne_two_user_rates(p, t, s1, s2)
                    : gaussian_rate_point(homodyne_channel(p, t, x[kR1], x[kR2], plan.lo_phase),
                                          s1.input_cov, s2.input_cov);
  }
  require_finite(row.rates.r1_bound, "I_1|2");
  require_finite(row.rates.r2_bound, "I_2|1");
  require_finite(row.rates.sum_bound, "I_sum");
  require_finite(row.psi, "psi");
  return row;
}

// The two vertices of the dominant face; they coincide for a rectangle.
std::array<double, 4> dominant_face(const RatePoint& rates) {
  const auto region = capacity_region(rates);
  std::array<double, 2> a{0.0, 0.0}, b{0.0, 0.0};
  for (const auto& c : region.corners) {
    if (c[0] > a[0] || (c[0] == a[0] && c[1] > a[1])) a = c;
    if (c[1] > b[1] || (c[1] == b[1] && c[0] > b[0])) b = c;
  }
  return {a[0], a[1], b[0], b[1]};
}

int run_sweep(const GlobalOptions& opts, Detection detection, bool optimize_flag,
              std::ostream& out) {
  const bool hom = detection == Detection::kHomodyne;
  const SweepPlan plan = parse_sweep(Node::load(opts.config), detection, optimize_flag);
  const std::size_t n = plan.size();

  std::vector<Row> rows(n);
  parallel_for(n, opts.jobs, [&](std::size_t i) { rows[i] = compute(plan, plan.point(i)); });

  Table table;
  table.columns = {{"t"}, {"T"}, {"k"}, {"nbar1"}, {"nbar2"}};
  if (hom) table.columns.insert(table.columns.end(), {{"r1"}, {"r2"}});
  table.columns.insert(table.columns.end(), {{"I_sum", true},
                                             {"I_1|2", true},
                                             {"I_2|1", true},
                                             {"psi"},
                                             {"A_R1", true},
                                             {"A_R2", true},
                                             {"B_R1", true},
                                             {"B_R2", true}});
  if (hom) table.columns.push_back({"converged"});
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = plan.point(i);
    const Row& r = rows[i];
    std::vector<double> v = {x[kTime], x[kT], x[kK], x[kN1], x[kN2]};
    if (hom) v.insert(v.end(), {r.r1, r.r2});
    v.insert(v.end(), {r.rates.sum_bound, r.rates.r1_bound, r.rates.r2_bound, r.psi});
    const auto face = dominant_face(r.rates);
    v.insert(v.end(), face.begin(), face.end());
    if (hom) v.push_back(r.converged ? 1.0 : 0.0);
    table.rows.push_back(std::move(v));
  }

  // One curve per combination of the non-time axes.
  const std::size_t n_t = plan.axes[kTime].size();
  json curves = json::array();
  std::vector<bool> monotone;
  for (std::size_t first = 0; first < n; first += n_t) {
    bool mono = true;
    for (std::size_t i = first + 1; i < first + n_t; ++i) {
      const double prev = rows[i - 1].rates.sum_bound, cur = rows[i].rates.sum_bound;
      mono = mono && cur <= prev + 1e-12 * std::max(1.0, std::abs(prev));
    }
    monotone.push_back(mono);
    const auto x = plan.point(first);
    json c = {{"first_row", first},
              {"rows", n_t},
              {"T", x[kT]},
              {"k", x[kK]},
              {"nbar1", x[kN1]},
              {"nbar2", x[kN2]},
              {"monotone_decay", mono}};
    if (hom && !plan.optimize) c["r1"] = x[kR1], c["r2"] = x[kR2];
    curves.push_back(std::move(c));
  }

  const char* command = hom ? "homodyne-sweep" : "heterodyne-sweep";
  if (opts.out.empty()) {
    write_csv(out, table, opts.bits);
    return kExitOk;
  }
  json doc = table_to_json(table, opts.bits);
  doc["command"] = command;
  doc["units"] = units_name(opts.bits);
  doc["params"] = io::channel_params_to_json(plan.params);
  if (hom) doc["optimize"] = plan.optimize, doc["lo_phase"] = plan.lo_phase;
  doc["curves"] = curves;
  write_outputs(opts.out, table, doc, opts.bits);

  out << command << ": " << n << " rows -> " << with_extension(opts.out, ".csv").string() << ", "
      << with_extension(opts.out, ".json").string() << "\n";
  for (std::size_t c = 0; c < monotone.size(); ++c) {
    out << "curve " << c << ": sum rate " << (monotone[c] ? "decays monotonically" : "not monotone")
        << "\n";
  }
  if (plan.optimize) {
    const auto bad =
        std::count_if(rows.begin(), rows.end(), [](const Row& r) { return !r.converged; });
    if (bad > 0) out << "warning: squeezing optimizer did not converge at " << bad << " points\n";
  }
  return kExitOk;
}

}  // namespace

int heterodyne_sweep(const GlobalOptions& opts, std::ostream& out) {
  return run_sweep(opts, Detection::kHeterodyne, false, out);
}

int homodyne_sweep(const GlobalOptions& opts, bool optimize, std::ostream& out) {
  return run_sweep(opts, Detection::kHomodyne, optimize, out);
}

}  // namespace qmac::cli
