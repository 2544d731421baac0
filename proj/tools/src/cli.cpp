#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "qmac/cli.hpp"
#include "qmac/common.hpp"

namespace qmac::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rates and capacity regions of a two-user quantum multiple-access channel", "qmac"};
  app.require_subcommand(1);

  GlobalOptions opts;
  bool optimize = false, oracle = false;
  std::string level = "quick";

  const auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opts.config, "Config file, TOML (.toml) or JSON");
    if (config_required) c->required();
    sub->add_option("--out", opts.out, "Output stem: writes <stem>.csv and <stem>.json (default: CSV on stdout)");
    sub->add_option("--seed", opts.seed, "Seed for randomized checks and searches")->capture_default_str();
    sub->add_option("--jobs", opts.jobs, "Worker threads, 0 = all cores")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_flag("--bits", opts.bits, "Report rates in bits instead of nats");
  };

  auto* het = app.add_subcommand("heterodyne-sweep", "Heterodyne rates over a parameter grid");
  common(het, true);
  auto* hom = app.add_subcommand("homodyne-sweep", "Homodyne rates with squeezed inputs over a parameter grid");
  common(hom, true);
  hom->add_flag("--optimize", optimize, "Optimize both squeezing parameters at every point");
  auto* reg = app.add_subcommand("region", "Capacity region polygon");
  common(reg, true);
  auto* hol = app.add_subcommand("holevo", "Holevo-type bounds for a finite quantum instance");
  common(hol, true);
  hol->add_flag("--oracle", oracle, "Add a POVM-search lower bound");
  auto* ver = app.add_subcommand("verify", "Run the reference, invariant and oracle checks");
  common(ver, false);
  ver->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (het->parsed()) return heterodyne_sweep(opts, out);
    if (hom->parsed()) return homodyne_sweep(opts, optimize, out);
    if (reg->parsed()) return region(opts, out);
    if (hol->parsed()) return holevo(opts, oracle, out);
    return verify(opts, level, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace qmac::cli
