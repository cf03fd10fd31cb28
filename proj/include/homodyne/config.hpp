#pragma once

// Experiment configuration shared by the CLI, config files and the metadata
// written into every output table. Serialized as flat `key = value` lines
// whose keys mirror the command-line flags.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "homodyne/gaussian_model.hpp"

namespace homodyne {

/// "lo:hi:count", linearly (or, for photon-number sweeps, log) spaced.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;

  static GridSpec parse(std::string_view text);
  std::string to_string() const;
  std::vector<double> linear() const;
  std::vector<double> logarithmic() const;
  bool operator==(const GridSpec&) const = default;
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(std::string_view text);
std::string_view to_string(OutputFormat f);

struct ExperimentConfig {
  // Input state. Exactly one squeeze parameter; alpha0 or n_bar, the other
  // one is derived.
  std::optional<double> alpha0;
  std::optional<double> n_bar;
  std::optional<double> r;
  std::optional<double> e_minus_r;
  std::optional<double> sinh2r;
  std::optional<double> purity;

  std::optional<double> bin_a;
  std::optional<double> theta;
  std::optional<GridSpec> theta_grid;

  // Two-parameter maps and photon-number sweeps.
  std::optional<GridSpec> a_grid;
  std::optional<GridSpec> e_minus_r_grid;
  std::optional<GridSpec> n_bar_grid;
  std::optional<GridSpec> p_grid;

  /// Observed outcome counts "-,0,+" and an optional calibration table
  /// (CSV with columns theta,P_minus,P_zero,P_plus) for `estimate`.
  std::optional<std::array<std::uint64_t, 3>> counts;
  std::optional<std::string> calibration;

  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> replicas;
  std::optional<std::uint64_t> seed;

  std::optional<std::string> out;
  std::optional<OutputFormat> format;

  bool operator==(const ExperimentConfig&) const = default;
};

inline constexpr double kDefaultPurity = 1.0;
inline constexpr double kDefaultBinA = 0.1;
inline constexpr std::uint64_t kDefaultShots = 1000;
inline constexpr std::uint64_t kDefaultReplicas = 100;
inline constexpr std::uint64_t kDefaultSeed = 7;

bool has_squeeze(const ExperimentConfig& cfg);
bool has_amplitude(const ExperimentConfig& cfg);

/// Throws ValidationError with a message naming the offending keys.
void validate(const ExperimentConfig& cfg);

Squeeze squeeze_of(const ExperimentConfig& cfg);
InputState input_state(const ExperimentConfig& cfg);
/// The configured state with its squeeze replaced (map sweeps).
InputState input_state(const ExperimentConfig& cfg, Squeeze squeeze);
ModelParams model_params(const ExperimentConfig& cfg);

double bin_a(const ExperimentConfig& cfg);
std::uint64_t shots(const ExperimentConfig& cfg);
std::uint64_t replicas(const ExperimentConfig& cfg);
std::uint64_t seed(const ExperimentConfig& cfg);

/// The single theta or the theta grid; a validation error if neither is set
/// or the grid is empty.
std::vector<double> theta_points(const ExperimentConfig& cfg);

/// Fields of `over` replace those of `base`. Squeeze parameters and the
/// alpha0 / n_bar pair are replaced as groups.
ExperimentConfig merge(const ExperimentConfig& base, const ExperimentConfig& over);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Set fields only, in a fixed key order. `out` and `format` are omitted:
/// they select where results go, not what they are.
KeyValues to_kv(const ExperimentConfig& cfg);
ExperimentConfig from_kv(const std::map<std::string, std::string>& kv);

/// Parses `key = value` lines; '#' starts a comment. Unknown keys are
/// validation errors.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig read_config_file(const std::string& path);
std::string to_config_text(const ExperimentConfig& cfg);

/// FNV-1a 64 over to_config_text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);
double parse_number(std::string_view text, std::string_view key);
std::array<std::uint64_t, 3> parse_counts(std::string_view text);

}  // namespace homodyne
