// homodyne: command-line front end.
//
//   homodyne <command> [flags]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "homodyne/config.hpp"
#include "homodyne/errors.hpp"
#include "homodyne/experiments.hpp"
#include "homodyne/sweep_table.hpp"

namespace {

using homodyne::ExperimentConfig;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::map<std::string, std::string> kv;
  std::string config_path;
};

void add_flag(CLI::App* app, Flags& flags, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>("--" + key, [&flags, key](const std::string& v) { flags.kv[key] = v; }, help);
}

void add_common(CLI::App* app, Flags& flags) {
  app->add_option("--config", flags.config_path, "flat key = value file; flags override it");
  add_flag(app, flags, "alpha0", "coherent amplitude");
  add_flag(app, flags, "n-bar", "mean total photon number (alpha0 derived)");
  add_flag(app, flags, "r", "squeeze magnitude");
  add_flag(app, flags, "e-minus-r", "squeezing given as e^-r");
  add_flag(app, flags, "sinh2r", "squeezed-vacuum photon number");
  add_flag(app, flags, "purity", "squeezed-vacuum purity in (0, 1]");
  add_flag(app, flags, "bin-a", "bin half-width a");
  add_flag(app, flags, "theta", "single phase");
  add_flag(app, flags, "theta-grid", "phase grid lo:hi:count");
  add_flag(app, flags, "a-grid", "bin half-width grid lo:hi:count");
  add_flag(app, flags, "e-minus-r-grid", "e^-r grid lo:hi:count");
  add_flag(app, flags, "n-bar-grid", "log-spaced photon-number grid lo:hi:count");
  add_flag(app, flags, "p-grid", "quadrature grid lo:hi:count");
  add_flag(app, flags, "counts", "observed counts n_minus,n_zero,n_plus");
  add_flag(app, flags, "calibration", "CSV table theta,P_minus,P_zero,P_plus for the likelihood");
  add_flag(app, flags, "shots", "shots per replica N");
  add_flag(app, flags, "replicas", "replicas M");
  add_flag(app, flags, "seed", "master seed");
  add_flag(app, flags, "out", "output path (stdout when omitted)");
  add_flag(app, flags, "format", "csv or json");
}

ExperimentConfig resolve(const Flags& flags) {
  ExperimentConfig base;
  if (!flags.config_path.empty()) base = homodyne::read_config_file(flags.config_path);
  return homodyne::merge(base, homodyne::from_kv(flags.kv));
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw homodyne::ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Squeezed-state interferometer with binned homodyne detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", homodyne::tool_version());

  Flags flags;
  std::string figure;
  std::string fit_input, fit_x = "n_bar", fit_y;

  auto* pdf = app.add_subcommand("pdf", "quadrature density P(p | theta)");
  auto* probs = app.add_subcommand("probs", "outcome probabilities and slopes");
  auto* cfi = app.add_subcommand("cfi", "Fisher information per theta");
  auto* crb = app.add_subcommand("crb", "optimal and per-theta sensitivity bounds");
  auto* fwhm = app.add_subcommand("fwhm", "fringe width of the scaled central-bin signal");
  auto* scan = app.add_subcommand("scan", "theta scan, or (a, e^-r) map with --a-grid");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo outcome counts");
  auto* estimate = app.add_subcommand("estimate", "phase estimation from counts or simulated replicas");
  auto* reproduce = app.add_subcommand("reproduce", "data behind fig1..fig4");
  auto* fit = app.add_subcommand("fit", "power-law fit of a CSV column against another");
  for (auto* sub : {pdf, probs, cfi, crb, fwhm, scan, simulate, estimate, reproduce, fit}) add_common(sub, flags);
  reproduce->add_option("figure", figure, "fig1, fig2, fig3 or fig4")->required();
  fit->add_option("--input", fit_input, "CSV file")->required();
  fit->add_option("--x", fit_x, "abscissa column")->capture_default_str();
  fit->add_option("--y", fit_y, "value column")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const ExperimentConfig cfg = resolve(flags);
    std::vector<homodyne::SweepTable> tables;
    if (pdf->parsed()) tables = {homodyne::pdf_table(cfg)};
    else if (probs->parsed()) tables = {homodyne::probs_table(cfg)};
    else if (cfi->parsed()) tables = {homodyne::cfi_table(cfg)};
    else if (crb->parsed()) tables = homodyne::crb_tables(cfg);
    else if (fwhm->parsed()) tables = {homodyne::fwhm_table(cfg)};
    else if (scan->parsed()) tables = {homodyne::scan(cfg)};
    else if (simulate->parsed()) tables = homodyne::simulate(cfg);
    else if (estimate->parsed()) tables = homodyne::estimate(cfg);
    else if (reproduce->parsed()) tables = homodyne::reproduce(figure, cfg);
    else if (fit->parsed()) {
      const auto cols = homodyne::read_csv_columns(read_text(fit_input));
      for (const auto& c : {fit_x, fit_y}) {
        if (!cols.count(c)) throw homodyne::ValidationError("column '" + c + "' not found in " + fit_input);
      }
      tables = {homodyne::fit_table(fit_y, cols.at(fit_x), cols.at(fit_y))};
    }
    homodyne::emit(tables, cfg, std::cout);
  } catch (const homodyne::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const homodyne::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
