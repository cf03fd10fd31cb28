#pragma once

// Table-producing drivers behind the CLI subcommands and the figure presets.
// Every table is stamped with the command and configuration that produced
// it; rows come out in grid order.

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "homodyne/config.hpp"
#include "homodyne/estimation.hpp"
#include "homodyne/power_law.hpp"
#include "homodyne/sweep_table.hpp"

namespace homodyne {

/// P(p | theta) on the p grid (default: mean +- 5 sd, 101 points per theta).
SweepTable pdf_table(const ExperimentConfig& cfg);
SweepTable probs_table(const ExperimentConfig& cfg);
/// Continuous, two-bin, three-outcome and per-outcome Fisher information.
SweepTable cfi_table(const ExperimentConfig& cfg);
/// Optimal sensitivities ("crb"), plus per-theta bounds when a phase is set
/// ("crb_theta").
std::vector<SweepTable> crb_tables(const ExperimentConfig& cfg);
/// FWHM of the scaled central-bin signal over the a grid or the single bin-a.
SweepTable fwhm_table(const ExperimentConfig& cfg);

/// Phase scan, or the (a, e^-r) map when a-grid is set. An unset
/// e-minus-r-grid keeps the configured squeeze.
SweepTable scan(const ExperimentConfig& cfg);

/// Per-replica counts ("counts") and replica statistics ("frequencies").
std::vector<SweepTable> simulate(const ExperimentConfig& cfg);
/// With `counts`: MLE and composite estimates of that record ("estimate").
/// Otherwise: simulated replicas summarized per phase ("estimators").
std::vector<SweepTable> estimate(const ExperimentConfig& cfg);

inline constexpr std::array<std::string_view, 4> kFigures{"fig1", "fig2", "fig3", "fig4"};

/// Caption parameters of a figure. Throws ValidationError for unknown ids.
ExperimentConfig preset(std::string_view figure);
/// Tables behind a figure, using preset(figure) merged with `overrides`.
std::vector<SweepTable> reproduce(std::string_view figure, const ExperimentConfig& overrides = {});

/// Reruns whatever command a table's metadata records.
std::vector<SweepTable> rerun(const Provenance& provenance);

/// Columns of a CSV document keyed by header name; '#' lines are skipped
/// and `inf` reads as +inf.
std::map<std::string, std::vector<double>> read_csv_columns(const std::string& csv);
CalibrationTable read_calibration(const std::string& path);

/// One fitted series as a single-row table.
SweepTable fit_table(const std::string& series, std::span<const double> x, std::span<const double> value);

}  // namespace homodyne
