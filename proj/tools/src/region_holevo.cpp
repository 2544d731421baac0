#include <cmath>
#include <ostream>

#include "qmac/access_bounds.hpp"
#include "qmac/gaussian_mac.hpp"
#include "qmac/oracles.hpp"
#include "support.hpp"

namespace qmac::cli {

using namespace detail;

namespace {

RatePoint gaussian_point(const Node& g) {
  g.expect_object({"detection", "params", "t", "nbar1", "nbar2", "r1", "r2"});
  const std::string detection = g["detection"].string();
  const ChannelParams p = g["params"].convert(io::channel_params_from_json);
  const double t = g["t"].number();
  if (t < 0.0) g["t"].fail("time must be nonnegative");
  const double n1 = g["nbar1"].number(), n2 = g["nbar2"].number();
  if (detection == "heterodyne") {
    if (g.has("r1") || g.has("r2")) g.fail("heterodyne inputs are unsqueezed; drop r1/r2");
    return g.convert([&](const json&) { return heterodyne_rates(p, t, n1, n2); });
  }
  if (detection == "homodyne") {
    return g.convert([&](const json&) {
      return homodyne_two_user_rates(p, t, SourceSpec::homodyne(n1, g.number_or("r1", 0.0)),
                                     SourceSpec::homodyne(n2, g.number_or("r2", 0.0)));
    });
  }
  g["detection"].fail("detection must be \"heterodyne\" or \"homodyne\"");
}

RatePoint region_point(const Node& root) {
  root.expect_object({"point", "table", "instance", "gaussian"});
  int sources = 0;
  for (const char* key : {"point", "table", "instance", "gaussian"}) sources += root.has(key);
  if (sources != 1) root.fail("give exactly one of point, table, instance, gaussian");

  if (root.has("point")) {
    const Node pt = root["point"];
    pt.expect_object({"r1", "r2", "sum"});
    return {pt["r1"].number(), pt["r2"].number(), pt["sum"].number()};
  }
  if (root.has("table")) {
    const Node t = root["table"];
    return rate_region(t.convert(io::table_from_json));
  }
  if (root.has("instance")) {
    const Node in = root["instance"];
    const auto q = in.convert(io::quantum_instance_from_json);
    if (!q.povm) in.fail("region of a quantum instance needs a povm");
    return in.convert([&](const json&) {
      return rate_region(induce_channel(q.source1, q.source2, q.channel, *q.povm));
    });
  }
  return gaussian_point(root["gaussian"]);
}

bool dominated(const RatePoint& found, const RatePoint& bound) {
  const double tol = 1e-9;
  return found.r1_bound <= bound.r1_bound + tol && found.r2_bound <= bound.r2_bound + tol &&
         found.sum_bound <= bound.sum_bound + tol;
}

}  // namespace

int region(const GlobalOptions& opts, std::ostream& out) {
  const Node root = Node::load(opts.config);
  const RatePoint p = region_point(root);
  for (double x : {p.r1_bound, p.r2_bound, p.sum_bound}) require_finite(x, "rate bound");
  const RateRegion reg = root.convert([&](const json&) { return capacity_region(p); });

  Table table;
  table.columns = {{"vertex"}, {"R1", true}, {"R2", true}};
  json corners = json::array();
  for (std::size_t i = 0; i < reg.corners.size(); ++i) {
    const auto& c = reg.corners[i];
    table.rows.push_back({static_cast<double>(i), c[0], c[1]});
    corners.push_back({round12(to_units(c[0], opts.bits)), round12(to_units(c[1], opts.bits))});
  }
  if (opts.out.empty()) {
    write_csv(out, table, opts.bits);
    return kExitOk;
  }
  const json doc = {{"command", "region"},
                    {"units", units_name(opts.bits)},
                    {"point", rate_point_json(p, opts.bits)},
                    {"rectangle", reg.rectangle},
                    {"corners", corners}};
  write_outputs(opts.out, table, doc, opts.bits);
  out << "region: " << (reg.rectangle ? "rectangle" : "pentagon") << " with " << reg.corners.size()
      << " corners -> " << with_extension(opts.out, ".csv").string() << ", "
      << with_extension(opts.out, ".json").string() << "\n";
  return kExitOk;
}

int holevo(const GlobalOptions& opts, bool oracle_flag, std::ostream& out) {
  const Node root = Node::load(opts.config);
  root.expect_object({"instance", "oracle"});
  const Node in = root["instance"];
  const auto q = in.convert(io::quantum_instance_from_json);

  AccessibleInfoOptions oracle_opts;
  bool oracle = oracle_flag;
  if (root.has("oracle")) {
    const Node o = root["oracle"];
    o.expect_object({"enabled", "outcomes", "restarts", "iterations"});
    oracle = oracle || o.flag_or("enabled", false);
    const auto count = [&](const char* key, int fallback) {
      if (!o.has(key)) return fallback;
      const Node v = o[key];
      if (!v.value().is_number_integer() || v.value().get<long long>() < 1 ||
          v.value().get<long long>() > 1000000) {
        v.fail("expected a positive integer");
      }
      return static_cast<int>(v.value().get<long long>());
    };
    oracle_opts.n_outcomes = count("outcomes", oracle_opts.n_outcomes);
    oracle_opts.n_restarts = count("restarts", oracle_opts.n_restarts);
    oracle_opts.iterations = count("iterations", oracle_opts.iterations);
  }
  oracle_opts.seed = opts.seed;
  oracle_opts.jobs = opts.jobs;

  const RatePoint bound = in.convert([&](const json&) {
    return holevo_rate_bounds(q.source1, q.source2, q.channel);
  });

  Table table;
  table.label_column = "quantity";
  table.columns = {{"I_1|2", true}, {"I_2|1", true}, {"I_sum", true}};
  const auto add = [&](const char* label, const RatePoint& p) {
    for (double x : {p.r1_bound, p.r2_bound, p.sum_bound}) require_finite(x, label);
    table.labels.push_back(label);
    table.rows.push_back({p.r1_bound, p.r2_bound, p.sum_bound});
  };
  json doc = {{"command", "holevo"}, {"units", units_name(opts.bits)},
              {"holevo_bound", rate_point_json(bound, opts.bits)}};
  add("holevo_bound", bound);

  bool ok = true;
  if (q.povm) {
    const RatePoint m = in.convert([&](const json&) {
      return rate_region(induce_channel(q.source1, q.source2, q.channel, *q.povm));
    });
    add("povm", m);
    doc["povm"] = rate_point_json(m, opts.bits);
    doc["povm_within_bound"] = dominated(m, bound);
    ok = ok && dominated(m, bound);
  }
  if (oracle) {
    const auto res = in.convert([&](const json&) {
      return brute_force_accessible_info(q.source1, q.source2, q.channel, oracle_opts);
    });
    add("oracle_lower_bound", res.best);
    doc["oracle"] = {{"lower_bound", rate_point_json(res.best, opts.bits)},
                     {"dispersion", rate_point_json(res.dispersion, opts.bits)},
                     {"evaluations", res.evaluations},
                     {"seed", oracle_opts.seed},
                     {"outcomes", oracle_opts.n_outcomes},
                     {"restarts", oracle_opts.n_restarts},
                     {"iterations", oracle_opts.iterations},
                     {"within_bound", dominated(res.best, bound)}};
    ok = ok && dominated(res.best, bound);
  }

  if (opts.out.empty()) {
    write_csv(out, table, opts.bits);
  } else {
    write_outputs(opts.out, table, doc, opts.bits);
    out << "holevo: " << table.rows.size() << " rows -> " << with_extension(opts.out, ".csv").string()
        << ", " << with_extension(opts.out, ".json").string() << "\n";
  }
  if (!ok) {
    // A measured rate above its bound means a numerical fault somewhere.
    throw NumericalError("a measured rate exceeds its Holevo bound by more than 1e-9");
  }
  return kExitOk;
}

}  // namespace qmac::cli
