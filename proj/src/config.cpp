#include "homodyne/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "homodyne/errors.hpp"
#include "homodyne/numerics.hpp"

namespace homodyne {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_count(std::string_view text, std::string_view key) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError(fmt::format("{}: expected a non-negative integer, got '{}'", key, text));
  }
  return v;
}

std::string normalize_key(std::string_view key) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void check_grid(const GridSpec& g, std::string_view key) {
  require(std::isfinite(g.lo) && std::isfinite(g.hi), fmt::format("{}: bounds must be finite", key));
  require(g.count >= 1, fmt::format("{}: grid is empty (count = 0)", key));
  require(g.lo <= g.hi, fmt::format("{}: lo must not exceed hi", key));
  require(g.count == 1 || g.lo < g.hi, fmt::format("{}: a grid with several points needs lo < hi", key));
}

}  // namespace

std::array<std::uint64_t, 3> parse_counts(std::string_view text) {
  std::array<std::uint64_t, 3> c{};
  std::size_t start = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto comma = text.find(',', start);
    if ((i < 2) == (comma == std::string_view::npos)) {
      throw ValidationError(fmt::format("counts '{}' must have the form n_minus,n_zero,n_plus", text));
    }
    c[i] = parse_count(text.substr(start, i < 2 ? comma - start : std::string_view::npos), "counts");
    start = comma + 1;
  }
  return c;
}

GridSpec GridSpec::parse(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw ValidationError(fmt::format("grid '{}' must have the form lo:hi:count", text));
  }
  GridSpec g;
  g.lo = parse_number(text.substr(0, c1), "grid lo");
  g.hi = parse_number(text.substr(c1 + 1, c2 - c1 - 1), "grid hi");
  g.count = static_cast<std::size_t>(parse_count(text.substr(c2 + 1), "grid count"));
  check_grid(g, "grid");
  return g;
}

std::string GridSpec::to_string() const {
  return fmt::format("{}:{}:{}", format_number(lo), format_number(hi), count);
}

std::vector<double> GridSpec::linear() const {
  check_grid(*this, "grid");
  return num::linspace(lo, hi, count);
}

std::vector<double> GridSpec::logarithmic() const {
  check_grid(*this, "grid");
  return num::logspace(lo, hi, count);
}

OutputFormat parse_format(std::string_view text) {
  text = trim(text);
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ValidationError(fmt::format("format must be csv or json, got '{}'", text));
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::string format_number(double v) { return fmt::format("{}", v); }

double parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError(fmt::format("{}: expected a number, got '{}'", key, text));
  }
  if (!std::isfinite(v)) throw ValidationError(fmt::format("{}: value must be finite", key));
  return v;
}

bool has_squeeze(const ExperimentConfig& cfg) {
  return cfg.r.has_value() || cfg.e_minus_r.has_value() || cfg.sinh2r.has_value();
}

bool has_amplitude(const ExperimentConfig& cfg) { return cfg.alpha0.has_value() || cfg.n_bar.has_value(); }

void validate(const ExperimentConfig& cfg) {
  const int squeezes = int(cfg.r.has_value()) + int(cfg.e_minus_r.has_value()) + int(cfg.sinh2r.has_value());
  require(squeezes <= 1, "give exactly one of r, e-minus-r, sinh2r");
  require(!(cfg.alpha0 && cfg.n_bar), "give alpha0 or n-bar, not both");
  if (cfg.alpha0) require(*cfg.alpha0 >= 0.0 && std::isfinite(*cfg.alpha0), "alpha0 must be finite and >= 0");
  if (cfg.n_bar) require(*cfg.n_bar >= 0.0 && std::isfinite(*cfg.n_bar), "n-bar must be finite and >= 0");
  if (cfg.r) require(*cfg.r >= 0.0 && std::isfinite(*cfg.r), "r must be finite and >= 0");
  if (cfg.e_minus_r) require(*cfg.e_minus_r > 0.0 && *cfg.e_minus_r <= 1.0, "e-minus-r must lie in (0, 1]");
  if (cfg.sinh2r) require(*cfg.sinh2r >= 0.0 && std::isfinite(*cfg.sinh2r), "sinh2r must be finite and >= 0");
  if (cfg.purity) require(*cfg.purity > 0.0 && *cfg.purity <= 1.0, "purity must lie in (0, 1]");
  if (cfg.bin_a) require(*cfg.bin_a > 0.0 && std::isfinite(*cfg.bin_a), "bin-a must be finite and > 0");
  if (cfg.theta) require(std::isfinite(*cfg.theta), "theta must be finite");
  require(!(cfg.theta && cfg.theta_grid), "give theta or theta-grid, not both");
  if (cfg.theta_grid) check_grid(*cfg.theta_grid, "theta-grid");
  if (cfg.a_grid) {
    check_grid(*cfg.a_grid, "a-grid");
    require(cfg.a_grid->lo > 0.0, "a-grid: bin half-widths must be > 0");
  }
  if (cfg.e_minus_r_grid) {
    check_grid(*cfg.e_minus_r_grid, "e-minus-r-grid");
    require(cfg.e_minus_r_grid->lo > 0.0 && cfg.e_minus_r_grid->hi <= 1.0, "e-minus-r-grid: values must lie in (0, 1]");
  }
  if (cfg.n_bar_grid) {
    check_grid(*cfg.n_bar_grid, "n-bar-grid");
    require(cfg.n_bar_grid->lo > 0.0, "n-bar-grid: photon numbers must be > 0");
  }
  if (cfg.p_grid) check_grid(*cfg.p_grid, "p-grid");
  if (cfg.counts) require((*cfg.counts)[0] + (*cfg.counts)[1] + (*cfg.counts)[2] > 0, "counts: at least one shot needed");
  if (cfg.shots) require(*cfg.shots >= 1, "shots must be >= 1");
  if (cfg.replicas) require(*cfg.replicas >= 1, "replicas must be >= 1");
  if (cfg.n_bar && squeezes == 1) {
    const double s2 = squeeze_of(cfg).sinh2r();
    require(*cfg.n_bar - s2 >= -1e-12 * std::max(1.0, *cfg.n_bar),
            fmt::format("n-bar = {} is below the squeezed-vacuum photon number sinh^2 r = {}", *cfg.n_bar, s2));
  }
}

Squeeze squeeze_of(const ExperimentConfig& cfg) {
  if (cfg.r) return Squeeze::from_r(*cfg.r);
  if (cfg.e_minus_r) return Squeeze::from_e_minus_r(*cfg.e_minus_r);
  if (cfg.sinh2r) return Squeeze::from_sinh2r(*cfg.sinh2r);
  throw ValidationError("no squeeze parameter given: set one of r, e-minus-r, sinh2r");
}

InputState input_state(const ExperimentConfig& cfg) { return input_state(cfg, squeeze_of(cfg)); }

InputState input_state(const ExperimentConfig& cfg, Squeeze squeeze) {
  validate(cfg);
  const double purity = cfg.purity.value_or(kDefaultPurity);
  if (cfg.alpha0) return make_state(*cfg.alpha0, squeeze, purity);
  if (cfg.n_bar) return make_state_with_n_bar(*cfg.n_bar, squeeze, purity);
  throw ValidationError("no amplitude given: set alpha0 or n-bar");
}

ModelParams model_params(const ExperimentConfig& cfg) { return derive_params(input_state(cfg)); }

double bin_a(const ExperimentConfig& cfg) { return cfg.bin_a.value_or(kDefaultBinA); }
std::uint64_t shots(const ExperimentConfig& cfg) { return cfg.shots.value_or(kDefaultShots); }
std::uint64_t replicas(const ExperimentConfig& cfg) { return cfg.replicas.value_or(kDefaultReplicas); }
std::uint64_t seed(const ExperimentConfig& cfg) { return cfg.seed.value_or(kDefaultSeed); }

std::vector<double> theta_points(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.theta) return {*cfg.theta};
  if (cfg.theta_grid) return cfg.theta_grid->linear();
  throw ValidationError("no phase given: set theta or theta-grid");
}

ExperimentConfig merge(const ExperimentConfig& base, const ExperimentConfig& over) {
  ExperimentConfig m = base;
  if (has_squeeze(over)) {
    m.r = over.r;
    m.e_minus_r = over.e_minus_r;
    m.sinh2r = over.sinh2r;
  }
  if (has_amplitude(over)) {
    m.alpha0 = over.alpha0;
    m.n_bar = over.n_bar;
  }
  if (over.theta || over.theta_grid) {
    m.theta = over.theta;
    m.theta_grid = over.theta_grid;
  }
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(m.purity, over.purity);
  take(m.bin_a, over.bin_a);
  take(m.a_grid, over.a_grid);
  take(m.e_minus_r_grid, over.e_minus_r_grid);
  take(m.n_bar_grid, over.n_bar_grid);
  take(m.p_grid, over.p_grid);
  take(m.counts, over.counts);
  take(m.calibration, over.calibration);
  take(m.shots, over.shots);
  take(m.replicas, over.replicas);
  take(m.seed, over.seed);
  take(m.out, over.out);
  take(m.format, over.format);
  return m;
}

KeyValues to_kv(const ExperimentConfig& cfg) {
  KeyValues kv;
  auto num = [&](const char* key, const std::optional<double>& v) {
    if (v) kv.emplace_back(key, format_number(*v));
  };
  auto grid = [&](const char* key, const std::optional<GridSpec>& g) {
    if (g) kv.emplace_back(key, g->to_string());
  };
  auto count = [&](const char* key, const std::optional<std::uint64_t>& v) {
    if (v) kv.emplace_back(key, std::to_string(*v));
  };
  num("alpha0", cfg.alpha0);
  num("n-bar", cfg.n_bar);
  num("r", cfg.r);
  num("e-minus-r", cfg.e_minus_r);
  num("sinh2r", cfg.sinh2r);
  num("purity", cfg.purity);
  num("bin-a", cfg.bin_a);
  num("theta", cfg.theta);
  grid("theta-grid", cfg.theta_grid);
  grid("a-grid", cfg.a_grid);
  grid("e-minus-r-grid", cfg.e_minus_r_grid);
  grid("n-bar-grid", cfg.n_bar_grid);
  grid("p-grid", cfg.p_grid);
  if (cfg.counts) {
    const auto& c = *cfg.counts;
    kv.emplace_back("counts", fmt::format("{},{},{}", c[0], c[1], c[2]));
  }
  if (cfg.calibration) kv.emplace_back("calibration", *cfg.calibration);
  count("shots", cfg.shots);
  count("replicas", cfg.replicas);
  count("seed", cfg.seed);
  return kv;
}

ExperimentConfig from_kv(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  for (const auto& [raw_key, value] : kv) {
    const std::string key = normalize_key(raw_key);
    if (key == "alpha0") cfg.alpha0 = parse_number(value, key);
    else if (key == "n-bar") cfg.n_bar = parse_number(value, key);
    else if (key == "r") cfg.r = parse_number(value, key);
    else if (key == "e-minus-r") cfg.e_minus_r = parse_number(value, key);
    else if (key == "sinh2r") cfg.sinh2r = parse_number(value, key);
    else if (key == "purity") cfg.purity = parse_number(value, key);
    else if (key == "bin-a") cfg.bin_a = parse_number(value, key);
    else if (key == "theta") cfg.theta = parse_number(value, key);
    else if (key == "theta-grid") cfg.theta_grid = GridSpec::parse(value);
    else if (key == "a-grid") cfg.a_grid = GridSpec::parse(value);
    else if (key == "e-minus-r-grid") cfg.e_minus_r_grid = GridSpec::parse(value);
    else if (key == "n-bar-grid") cfg.n_bar_grid = GridSpec::parse(value);
    else if (key == "p-grid") cfg.p_grid = GridSpec::parse(value);
    else if (key == "counts") cfg.counts = parse_counts(value);
    else if (key == "calibration") cfg.calibration = std::string(trim(value));
    else if (key == "shots") cfg.shots = parse_count(value, key);
    else if (key == "replicas") cfg.replicas = parse_count(value, key);
    else if (key == "seed") cfg.seed = parse_count(value, key);
    else if (key == "out") cfg.out = std::string(trim(value));
    else if (key == "format") cfg.format = parse_format(value);
    else throw ValidationError(fmt::format("unknown configuration key '{}'", raw_key));
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config_text(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    const std::string key = normalize_key(line.substr(0, eq));
    if (kv.count(key)) throw ValidationError(fmt::format("config line {}: duplicate key '{}'", line_no, key));
    kv[key] = std::string(trim(line.substr(eq + 1)));
  }
  return from_kv(kv);
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open config file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string text;
  for (const auto& [k, v] : to_kv(cfg)) text += fmt::format("{} = {}\n", k, v);
  return text;
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_config_text(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace homodyne
