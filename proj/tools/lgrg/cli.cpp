#include "lgrg/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lgrg/commands.hpp"

namespace lgrg::cli {

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

// Flags that mirror config-file keys; values are applied after the file.
void add_config_flag(CLI::App* app, Overrides& overrides, const std::string& flag, const std::string& key,
                     const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
}

void add_run_flags(CLI::App* app, Overrides& o) {
  add_config_flag(app, o, "--beta", "beta", "Inverse temperature (default: critical)");
  add_config_flag(app, o, "-L,--L", "L", "Volume half-width in blocks");
  add_config_flag(app, o, "--C_B,--cb", "C_B", "Boundary-term size cutoff");
  add_config_flag(app, o, "--max-cardinality", "max_cardinality", "Cardinality cap on boundary terms");
  add_config_flag(app, o, "-C,--C", "C", "Class cutoff for free energies");
  add_config_flag(app, o, "--sweep", "sweep", "row_major or column_major");
}

std::filesystem::path output_or(const std::string& given, const RunConfig& cfg, const std::string& name) {
  return given.empty() ? cfg.output_dir / name : std::filesystem::path(given);
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Renormalized Hamiltonian of the 2D Ising model under 2x2 majority rule, in lattice-gas variables"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Expand all help");

  Overrides overrides;
  std::string config_path;
  bool verbose = false;
  app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_flag("-v,--verbose", verbose, "Per-entry debug logging");
  add_config_flag(&app, overrides, "-j,--jobs", "jobs", "Worker threads");
  add_config_flag(&app, overrides, "--output-dir", "output_dir", "Directory for default output files");
  add_config_flag(&app, overrides, "--seed", "seed", "Random seed");

  std::string output, input, method = "partial";
  std::vector<std::string> inputs;

  auto* fe = app.add_subcommand("free-energies", "Compute f(X) for every class with S(X) <= C");
  add_run_flags(fe, overrides);
  fe->add_option("-o,--output", output, "Output table (default <output-dir>/free_energies.csv)");

  auto* gc = app.add_subcommand("gas-coeffs", "Moebius-invert a free-energy table into gas coefficients");
  gc->add_option("-i,--input", input, "Free-energy table")->required()->check(CLI::ExistingFile);
  gc->add_option("-o,--output", output, "Output table (default <output-dir>/gas_coefficients.csv)");

  auto* sc = app.add_subcommand("spin-coeffs", "Spin coefficients by the partial or uniform method");
  sc->add_option("-i,--input", input, "Free-energy table")->required()->check(CLI::ExistingFile);
  sc->add_option("--method", method, "partial or uniform")->check(CLI::IsMember({"partial", "uniform"}));
  add_config_flag(sc, overrides, "--chbar,--C_Hbar", "C_Hbar", "Cutoff of the fitted collection");
  add_config_flag(sc, overrides, "--cf,--C_f", "C_f", "Cutoff of the target collection");
  bool sweep = false;
  std::vector<double> chbar_list{2.0, 6.0}, cf_list{6.0, 10.0};
  std::vector<std::string> methods{"partial", "uniform"};
  sc->add_flag("--sweep", sweep, "Tabulate d_nn, d_nnn, d_plaquette over cutoff lists");
  sc->add_option("--chbar-list", chbar_list, "C_Hbar values for --sweep")->delimiter(',');
  sc->add_option("--cf-list", cf_list, "C_f values for --sweep")->delimiter(',');
  sc->add_option("--methods", methods, "Methods for --sweep")->delimiter(',');
  sc->add_option("-o,--output", output, "Output (default <output-dir>/spin_coefficients.csv or spin_sweep.csv)");

  auto* dg = app.add_subcommand("diagnostics", "Decay, dihedral, finite-volume and convergence reports");
  dg->require_subcommand(1);
  auto* decay = dg->add_subcommand("decay", "Coefficients ordered by magnitude with tail sums");
  decay->add_option("-i,--input", input, "Gas-coefficient table")->required()->check(CLI::ExistingFile);
  bool dihedral_mode = false;
  std::vector<double> thresholds{1e-2, 1e-3, 1e-4};
  decay->add_flag("--dihedral", dihedral_mode, "One entry per dihedral class (orbit average)");
  decay->add_option("--thresholds", thresholds, "Magnitudes to count above")->delimiter(',');
  decay->add_option("-o,--output", output, "Output (default <output-dir>/decay.csv)");
  auto* dih = dg->add_subcommand("dihedral", "Dihedral error of free-energy tables, one row per C_B");
  dih->add_option("inputs", inputs, "Free-energy tables")->required()->check(CLI::ExistingFile);
  dih->add_option("-o,--output", output, "Output (default <output-dir>/dihedral_error.csv)");
  auto* fve = dg->add_subcommand("fve", "Mean change of f when L drops by one");
  fve->add_option("inputs", inputs, "Free-energy tables at different L")->required()->check(CLI::ExistingFile);
  fve->add_option("-o,--output", output, "Output (default <output-dir>/fve.csv)");
  auto* conv = dg->add_subcommand("convergence", "Four error series against the largest C_B");
  conv->add_option("inputs", inputs, "Free-energy tables at different C_B")->required()->check(CLI::ExistingFile);
  std::optional<double> reference;
  conv->add_option_function<double>("--reference", [&reference](const double& v) { reference = v; },
                                    "Reference C_B (default: largest)");
  conv->add_option("-o,--output", output, "Output (default <output-dir>/convergence.csv)");

  auto* orc = app.add_subcommand("oracle", "Brute-force references on tiny volumes");
  orc->require_subcommand(1);
  int nx = 2, ny = 2;
  auto* ex = orc->add_subcommand("exact", "Exhaustive enumeration over an nx x ny block rectangle");
  ex->add_option("--nx", nx, "Blocks along x")->check(CLI::PositiveNumber);
  ex->add_option("--ny", ny, "Blocks along y")->check(CLI::PositiveNumber);
  add_config_flag(ex, overrides, "--beta", "beta", "Inverse temperature (default: critical)");
  add_config_flag(ex, overrides, "-C,--C", "C", "Class cutoff");
  ex->add_option("-o,--output", output, "Output (default <output-dir>/oracle_exact.csv)");
  auto* mc = orc->add_subcommand("mc", "Metropolis estimate of f(Y) for Y inside a block window");
  McOptions mc_opts;
  std::string set_text = "{(0,0)}";
  mc->add_option("--nx", nx, "Blocks along x")->check(CLI::PositiveNumber);
  mc->add_option("--ny", ny, "Blocks along y")->check(CLI::PositiveNumber);
  mc->add_option("--set", set_text, "Window blocks, e.g. {(0,0),(1,0)}");
  mc->add_option("--samples", mc_opts.samples, "Total sweeps after burn-in");
  mc->add_option("--burn-in", mc_opts.burn_in, "Sweeps discarded per chain");
  mc->add_option("--chains", mc_opts.chains, "Independent chains")->check(CLI::PositiveNumber);
  add_config_flag(mc, overrides, "--beta", "beta", "Inverse temperature (default: critical)");
  mc->add_option("-o,--output", output, "Output (default <output-dir>/oracle_mc.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  // Unregistered so that repeated in-process runs (tests) do not collide.
  spdlog::set_default_logger(
      std::make_shared<spdlog::logger>("lgrg", std::make_shared<spdlog::sinks::stderr_color_sink_mt>()));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    RunConfig cfg;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    for (const auto& [k, v] : overrides) cfg.set(k, v);

    const std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    if (*fe) return cmd_free_energies(cfg, output_or(output, cfg, "free_energies.csv"));
    if (*gc) return cmd_gas_coeffs(input, output_or(output, cfg, "gas_coefficients.csv"));
    if (*sc) {
      if (sweep) return cmd_spin_sweep(cfg, input, methods, chbar_list, cf_list, output_or(output, cfg, "spin_sweep.csv"));
      return cmd_spin_coeffs(cfg, input, method, output_or(output, cfg, "spin_coefficients.csv"));
    }
    if (*decay) return cmd_decay(input, dihedral_mode, thresholds, output_or(output, cfg, "decay.csv"));
    if (*dih) return cmd_dihedral(paths, output_or(output, cfg, "dihedral_error.csv"));
    if (*fve) return cmd_fve(paths, output_or(output, cfg, "fve.csv"));
    if (*conv) return cmd_convergence(paths, reference, output_or(output, cfg, "convergence.csv"));
    if (*ex) return cmd_oracle_exact(cfg, nx, ny, output_or(output, cfg, "oracle_exact.csv"));
    if (*mc) {
      mc_opts.seed = cfg.seed;
      mc_opts.jobs = cfg.jobs;
      return cmd_oracle_mc(cfg, nx, ny, parse_site_set(set_text), mc_opts, output_or(output, cfg, "oracle_mc.csv"));
    }
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitComputation;
  }
  return kExitValidation;
}

}  // namespace lgrg::cli
