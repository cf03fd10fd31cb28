#include "homodyne/experiments.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "homodyne/binning.hpp"
#include "homodyne/errors.hpp"
#include "homodyne/numerics.hpp"
#include "homodyne/parallel.hpp"
#include "homodyne/rng.hpp"
#include "homodyne/sampler.hpp"

namespace homodyne {

namespace {

constexpr double kRayleigh = 2.0 * num::kPi / 3.0;

Cell cell(const Sensitivity& s) {
  if (s.divergent()) return Divergent{std::string(to_string(s.reason))};
  return s.value;
}

Cell inverse_sqrt(double fisher) {
  if (!(fisher > 0.0)) return Divergent{std::string(to_string(Divergence::zero_information))};
  return 1.0 / std::sqrt(fisher);
}

Cell db_cell(const Sensitivity& s, double n_bar) {
  if (s.divergent()) return Divergent{std::string(to_string(s.reason))};
  return improvement_db(s.value, n_bar);
}

Cell scaling_cell(const Sensitivity& s, double n_bar) {
  if (s.divergent()) return Divergent{std::string(to_string(s.reason))};
  if (!(n_bar > 1.0)) return Divergent{"undefined_below_one_photon"};
  return scaling_exponent(s.value, n_bar);
}

Cell fwhm_cell(const ModelParams& params, double a) {
  try {
    return fwhm_scaled_p0(params, BinningScheme::scaled_binary(a, params));
  } catch (const NumericalError&) {
    return Divergent{"no_half_maximum"};
  }
}

Cell gain_cell(const Cell& fwhm) {
  if (const auto* w = std::get_if<double>(&fwhm)) return kRayleigh / *w;
  return fwhm;
}

SweepTable finish(SweepTable t, const std::string& command, const ExperimentConfig& cfg) {
  stamp(t, command, cfg);
  return t;
}

// ---- per-command builders ------------------------------------------------

SweepTable build_pdf(const ExperimentConfig& cfg, const std::string& name) {
  const ModelParams params = model_params(cfg);
  SweepTable t(name, {"theta", "p", "pdf"});
  for (double theta : theta_points(cfg)) {
    std::vector<double> ps;
    if (cfg.p_grid) {
      ps = cfg.p_grid->linear();
    } else {
      const double m = mean_signal(params, theta);
      const double sd = std::sqrt(quadrature_variance(params, theta));
      ps = num::linspace(m - 5.0 * sd, m + 5.0 * sd, 101);
    }
    for (double p : ps) t.add_row({theta, p, quadrature_pdf(params, theta, p)});
  }
  return t;
}

SweepTable build_probs(const ExperimentConfig& cfg, const std::string& name) {
  const ModelParams params = model_params(cfg);
  const BinningScheme scheme = BinningScheme::scaled_binary(bin_a(cfg), params);
  SweepTable t(name, {"theta", "P_minus", "P_zero", "P_plus", "dP_minus", "dP_zero", "dP_plus", "scaled_signal"});
  for (double theta : theta_points(cfg)) {
    const OutcomeProbs p = outcome_probs(params, scheme, theta);
    const OutcomeDerivs d = outcome_derivs(params, scheme, theta);
    t.add_row({theta, p.p_minus, p.p_zero, p.p_plus, d.dp_minus, d.dp_zero, d.dp_plus,
               scaled_signal(params, scheme, theta)});
  }
  return t;
}

SweepTable build_cfi(const ExperimentConfig& cfg, const std::string& name) {
  const ModelParams params = model_params(cfg);
  const BinningScheme scheme = BinningScheme::scaled_binary(bin_a(cfg), params);
  SweepTable t(name, {"theta", "F_continuous", "F_bin", "F_mul", "f_minus", "f_zero", "f_plus"});
  for (double theta : theta_points(cfg)) {
    const auto f = per_outcome_cfis(params, scheme, theta);
    t.add_row({theta, continuous_cfi(params, theta), binary_cfi(params, scheme, theta), f[0] + f[1] + f[2], f[0], f[1],
               f[2]});
  }
  return t;
}

SweepTable build_theta_scan(const ExperimentConfig& cfg, const std::string& name) {
  const ModelParams params = model_params(cfg);
  const BinningScheme scheme = BinningScheme::scaled_binary(bin_a(cfg), params);
  SweepTable t(name, {"theta", "P_minus", "P_zero", "P_plus", "scaled_signal", "F_continuous", "F_bin", "F_mul",
                      "delta_continuous", "delta_bin", "delta_mul", "snl"});
  const auto thetas = theta_points(cfg);
  std::vector<std::vector<Cell>> rows(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t i) {
    const double theta = thetas[i];
    const OutcomeProbs p = outcome_probs(params, scheme, theta);
    const double fc = continuous_cfi(params, theta);
    const double fm = multi_cfi(params, scheme, theta);
    rows[i] = {theta,
               p.p_minus,
               p.p_zero,
               p.p_plus,
               scaled_signal(params, scheme, theta),
               fc,
               binary_cfi(params, scheme, theta),
               fm,
               inverse_sqrt(fc),
               cell(binary_sensitivity(params, scheme, theta)),
               inverse_sqrt(fm),
               shot_noise_limit(params.n_bar)};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

const std::vector<std::string> kMapColumns{"a",           "e_minus_r",     "n_bar",       "alpha0_sq",    "fwhm",
                                           "resolution_gain", "theta_bin_opt", "delta_bin_min", "db_bin",  "theta_mul_opt",
                                           "delta_mul_min", "db_mul",        "scaling_mul"};

std::vector<Cell> map_cell(const ExperimentConfig& cfg, double a, Squeeze squeeze) {
  ModelParams params;
  try {
    params = derive_params(input_state(cfg, squeeze));
  } catch (const ValidationError&) {
    std::vector<Cell> row(kMapColumns.size(), Divergent{"infeasible_state"});
    row[0] = a;
    row[1] = squeeze.e_minus_r();
    return row;
  }
  const BinningScheme scheme = BinningScheme::scaled_binary(a, params);
  const Cell fwhm = fwhm_cell(params, a);
  const BestSensitivity bin = best_binary_sensitivity(params, scheme);
  const BestSensitivity mul = best_multi_sensitivity(params, scheme);
  return {a,
          squeeze.e_minus_r(),
          params.n_bar,
          params.alpha0 * params.alpha0,
          fwhm,
          gain_cell(fwhm),
          bin.theta,
          cell(bin.value),
          db_cell(bin.value, params.n_bar),
          mul.theta,
          cell(mul.value),
          db_cell(mul.value, params.n_bar),
          scaling_cell(mul.value, params.n_bar)};
}

SweepTable build_map(const ExperimentConfig& cfg, const std::string& name) {
  validate(cfg);
  const auto as = cfg.a_grid->linear();
  std::vector<Squeeze> squeezes;
  if (cfg.e_minus_r_grid) {
    for (double e : cfg.e_minus_r_grid->linear()) squeezes.push_back(Squeeze::from_e_minus_r(e));
  } else {
    squeezes.push_back(squeeze_of(cfg));
  }
  SweepTable t(name, kMapColumns);
  std::vector<std::vector<Cell>> rows(as.size() * squeezes.size());
  parallel_for(rows.size(), [&](std::size_t i) { rows[i] = map_cell(cfg, as[i / squeezes.size()], squeezes[i % squeezes.size()]); });
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

SweepTable build_fwhm(const ExperimentConfig& cfg, const std::string& name) {
  const ModelParams params = model_params(cfg);
  const std::vector<double> as = cfg.a_grid ? cfg.a_grid->linear() : std::vector<double>{bin_a(cfg)};
  SweepTable t(name, {"a", "mu_zero", "fwhm", "resolution_gain"});
  for (double a : as) {
    const Cell w = fwhm_cell(params, a);
    t.add_row({a, BinningScheme::scaled_binary(a, params).eigenvalue(Outcome::zero), w, gain_cell(w)});
  }
  return t;
}

std::vector<SweepTable> build_crb(const ExperimentConfig& cfg, const std::string& prefix) {
  const ModelParams params = model_params(cfg);
  const BinningScheme scheme = BinningScheme::scaled_binary(bin_a(cfg), params);
  const std::uint64_t n_shots = shots(cfg);
  const CrbMin cm = crb_min(params);
  const BestSensitivity bin = best_binary_sensitivity(params, scheme);
  const BestSensitivity mul = best_multi_sensitivity(params, scheme);
  SweepTable opt(prefix, {"n_bar", "alpha0_sq", "e_minus_r", "purity", "a", "snl", "crb_min_exact", "crb_min_approx",
                          "theta_bin_opt", "delta_bin_min", "db_bin", "theta_mul_opt", "delta_mul_min", "db_mul",
                          "scaling_mul", "delta_mul_min_shots"});
  const Cell mul_shots = mul.value.divergent() ? cell(mul.value) : Cell(mul.value.value / std::sqrt(double(n_shots)));
  opt.add_row({params.n_bar, params.alpha0 * params.alpha0, std::exp(-params.r), params.purity, scheme.a,
               shot_noise_limit(params.n_bar),
               cm.exact > 0.0 && std::isfinite(cm.exact) ? Cell(cm.exact) : Cell(Divergent{"zero_information"}),
               cm.approx, bin.theta, cell(bin.value), db_cell(bin.value, params.n_bar), mul.theta, cell(mul.value),
               db_cell(mul.value, params.n_bar), scaling_cell(mul.value, params.n_bar), mul_shots});
  std::vector<SweepTable> out{std::move(opt)};
  if (cfg.theta || cfg.theta_grid) {
    SweepTable t(prefix + "_theta", {"theta", "delta_continuous", "delta_bin", "delta_mul", "delta_mul_shots"});
    for (double theta : theta_points(cfg)) {
      const double fm = multi_cfi(params, scheme, theta);
      t.add_row({theta, inverse_sqrt(continuous_cfi(params, theta)), cell(binary_sensitivity(params, scheme, theta)),
                 inverse_sqrt(fm), cell(crb_multi(fm, n_shots))});
    }
    out.push_back(std::move(t));
  }
  return out;
}

// ---- Monte Carlo ---------------------------------------------------------

struct PhaseRun {
  double theta0;
  ReplicaSet replicas;
};

std::vector<PhaseRun> run_phases(const ExperimentConfig& cfg, const ModelParams& params, const BinningScheme& scheme) {
  const auto thetas = theta_points(cfg);
  std::vector<PhaseRun> runs(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    // Each phase gets its own substream family, so adding phases to the
    // grid does not perturb the others.
    runs[j] = {thetas[j],
               run_replicas(params, scheme, thetas[j], shots(cfg), replicas(cfg), substream_key(seed(cfg), j))};
  }
  return runs;
}

SweepTable build_frequencies(const std::vector<PhaseRun>& runs, const ModelParams& params, const BinningScheme& scheme,
                             const std::string& name) {
  SweepTable t(name, {"theta0", "P_minus", "P_zero", "P_plus", "freq_minus_mean", "freq_zero_mean", "freq_plus_mean",
                      "freq_minus_sd", "freq_zero_sd", "freq_plus_sd", "replicas", "shots"});
  for (const PhaseRun& run : runs) {
    const OutcomeProbs p = outcome_probs(params, scheme, run.theta0);
    const OutcomeStats st = empirical_stats(run.replicas);
    std::vector<Cell> row{run.theta0, p.p_minus, p.p_zero, p.p_plus};
    for (std::size_t k = 0; k < 3; ++k) row.push_back(st.mean_frequency[k]);
    for (std::size_t k = 0; k < 3; ++k) {
      row.push_back(st.std_dev ? Cell((*st.std_dev)[k]) : Cell(Divergent{"single_replica"}));
    }
    row.push_back(static_cast<double>(st.replicas));
    row.push_back(static_cast<double>(run.replicas.n_shots));
    t.add_row(std::move(row));
  }
  return t;
}

SweepTable build_counts(const std::vector<PhaseRun>& runs, const std::string& name) {
  SweepTable t(name, {"theta0", "replica", "n_minus", "n_zero", "n_plus"});
  for (const PhaseRun& run : runs) {
    for (std::size_t i = 0; i < run.replicas.records.size(); ++i) {
      const CountRecord& r = run.replicas.records[i];
      t.add_row({run.theta0, static_cast<double>(i), static_cast<double>(r.n_minus), static_cast<double>(r.n_zero),
                 static_cast<double>(r.n_plus)});
    }
  }
  return t;
}

std::vector<Cell> summary_cells(const std::vector<double>& estimates, double theta0, std::uint64_t n_shots) {
  if (estimates.size() < 2) return std::vector<Cell>(4, Divergent{"too_few_estimates"});
  const EvaluationSummary s = evaluate(estimates, theta0, n_shots);
  return {s.mean_estimate, s.bias, s.std_dev, s.per_measurement};
}

SweepTable build_estimators(const std::vector<PhaseRun>& runs, const ModelParams& params, const BinningScheme& scheme,
                            const std::string& name) {
  SweepTable t(name, {"theta0", "delta_mul", "mle_mean", "mle_bias", "mle_std", "mle_sqrtN_rmse", "mle_sqrtN_sigma",
                      "mle_failures", "composite_mean", "composite_bias", "composite_std", "composite_sqrtN_rmse",
                      "composite_failures", "replicas"});
  std::vector<std::vector<Cell>> rows(runs.size());
  parallel_for(runs.size(), [&](std::size_t j) {
    const PhaseRun& run = runs[j];
    const double n = static_cast<double>(run.replicas.n_shots);
    std::vector<double> mle_est, comp_est;
    double sigma_sum = 0.0;
    std::size_t sigma_count = 0;
    for (const CountRecord& rec : run.replicas.records) {
      const EstimateResult m = mle(rec, params, scheme);
      if (m.ok) {
        mle_est.push_back(m.estimate);
        if (m.sigma) {
          sigma_sum += *m.sigma;
          ++sigma_count;
        }
      }
      const EstimateResult c = composite_estimate(rec, params, scheme);
      if (c.ok) comp_est.push_back(c.estimate);
    }
    const std::size_t m_reps = run.replicas.records.size();
    std::vector<Cell> row{run.theta0, inverse_sqrt(multi_cfi(params, scheme, run.theta0))};
    for (Cell& c : summary_cells(mle_est, run.theta0, run.replicas.n_shots)) row.push_back(std::move(c));
    row.push_back(sigma_count ? Cell(std::sqrt(n) * sigma_sum / double(sigma_count)) : Cell(Divergent{"no_curvature"}));
    row.push_back(static_cast<double>(m_reps - mle_est.size()));
    for (Cell& c : summary_cells(comp_est, run.theta0, run.replicas.n_shots)) row.push_back(std::move(c));
    row.push_back(static_cast<double>(m_reps - comp_est.size()));
    row.push_back(static_cast<double>(m_reps));
    rows[j] = std::move(row);
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

SweepTable build_single_estimate(const ExperimentConfig& cfg, const std::string& name) {
  const ModelParams params = model_params(cfg);
  const BinningScheme scheme = BinningScheme::scaled_binary(bin_a(cfg), params);
  const auto& c = *cfg.counts;
  const CountRecord rec = make_counts(c[0], c[1], c[2]);
  SweepTable t(name, {"method", "ok", "estimate", "sigma", "boundary_hit", "clamped", "w_minus", "w_zero", "w_plus"});
  auto add = [&](const EstimateResult& r) {
    Cell est = r.ok ? Cell(r.estimate) : Cell(Divergent{"estimation_failed"});
    Cell sigma = r.sigma ? Cell(*r.sigma) : Cell(Divergent{r.method == Method::mle ? "flat_likelihood" : "not_defined"});
    const auto& w = r.diagnostics.weights;
    t.add_row({std::string(to_string(r.method)), r.ok ? 1.0 : 0.0, est, sigma, r.diagnostics.boundary_hit ? 1.0 : 0.0,
               r.diagnostics.clamped ? 1.0 : 0.0, w[0], w[1], w[2]});
  };
  if (cfg.calibration) {
    const CalibrationTable table = read_calibration(*cfg.calibration);
    add(mle(rec, ProbabilityModel(table)));
  } else {
    add(mle(rec, params, scheme));
  }
  add(composite_estimate(rec, params, scheme));
  return t;
}

// ---- figures -------------------------------------------------------------

std::vector<SweepTable> figure1(const ExperimentConfig& cfg) {
  return {build_probs(cfg, "fig1_probs"), build_theta_scan(cfg, "fig1_sensitivity")};
}

std::vector<SweepTable> figure2(const ExperimentConfig& cfg) {
  if (!cfg.a_grid) throw ValidationError("fig2 needs a-grid");
  return {build_map(cfg, "fig2_map")};
}

struct Fig3Series {
  const char* name;
  const char* column;
  double reference_prefactor;
  double reference_exponent;
};

std::vector<SweepTable> figure3(const ExperimentConfig& cfg) {
  if (!cfg.n_bar_grid) throw ValidationError("fig3 needs n-bar-grid");
  const Squeeze sq = squeeze_of(cfg);
  const double purity = cfg.purity.value_or(kDefaultPurity);
  // Bin widths as in the figure: three-outcome sensitivity at a = 0.1, two-bin
  // sensitivity at a = 0.5, resolution at both.
  constexpr double kNarrow = 0.1;
  constexpr double kWide = 0.5;
  const auto n_bars = cfg.n_bar_grid->logarithmic();
  SweepTable series("fig3_series", {"n_bar", "alpha0_sq", "e_minus_r", "snl", "crb_min_exact", "crb_min_approx",
                                    "delta_mul_min_a0.1", "delta_bin_min_a0.5", "fwhm_a0.5", "fwhm_a0.1"});
  std::vector<std::vector<Cell>> rows(n_bars.size());
  parallel_for(n_bars.size(), [&](std::size_t i) {
    const ModelParams params = derive_params(make_state_with_n_bar(n_bars[i], sq, purity));
    const CrbMin cm = crb_min(params);
    rows[i] = {params.n_bar,
               params.alpha0 * params.alpha0,
               sq.e_minus_r(),
               shot_noise_limit(params.n_bar),
               cm.exact,
               cm.approx,
               cell(best_multi_sensitivity(params, BinningScheme::scaled_binary(kNarrow, params)).value),
               cell(best_binary_sensitivity(params, BinningScheme::scaled_binary(kWide, params)).value),
               fwhm_cell(params, kWide),
               fwhm_cell(params, kNarrow)};
  });
  for (auto& r : rows) series.add_row(std::move(r));

  const Fig3Series fits[] = {
      {"delta_mul_min_a0.1", "delta_mul_min_a0.1", 1.1 * sq.e_minus_r(), 0.5},
      {"delta_bin_min_a0.5", "delta_bin_min_a0.5", 0.75, 0.54},
      {"fwhm_a0.5", "fwhm_a0.5", kRayleigh, 0.5},
      {"fwhm_a0.1", "fwhm_a0.1", 1.21, 0.51},
  };
  SweepTable fit("fig3_fits", {"series", "prefactor", "exponent", "residual", "reference_prefactor", "reference_exponent"});
  const auto x = series.numbers("n_bar");
  for (const Fig3Series& f : fits) {
    const auto y = series.numbers(f.column);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (std::isfinite(y[i])) {
        xs.push_back(x[i]);
        ys.push_back(y[i]);
      }
    }
    const PowerLawFit pl = fit_power_law(xs, ys);
    fit.add_row({std::string(f.name), pl.prefactor, pl.exponent, pl.residual, f.reference_prefactor, f.reference_exponent});
  }
  return {std::move(series), std::move(fit)};
}

std::vector<SweepTable> figure4(const ExperimentConfig& cfg) {
  const ModelParams params = model_params(cfg);
  const BinningScheme scheme = BinningScheme::scaled_binary(bin_a(cfg), params);
  const auto runs = run_phases(cfg, params, scheme);
  return {build_frequencies(runs, params, scheme, "fig4_frequencies"),
          build_estimators(runs, params, scheme, "fig4_estimators")};
}

std::vector<SweepTable> stamp_all(std::vector<SweepTable> tables, const std::string& command,
                                  const ExperimentConfig& cfg) {
  for (auto& t : tables) stamp(t, command, cfg);
  return tables;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

SweepTable pdf_table(const ExperimentConfig& cfg) { return finish(build_pdf(cfg, "pdf"), "pdf", cfg); }
SweepTable probs_table(const ExperimentConfig& cfg) { return finish(build_probs(cfg, "probs"), "probs", cfg); }
SweepTable cfi_table(const ExperimentConfig& cfg) { return finish(build_cfi(cfg, "cfi"), "cfi", cfg); }
std::vector<SweepTable> crb_tables(const ExperimentConfig& cfg) { return stamp_all(build_crb(cfg, "crb"), "crb", cfg); }
SweepTable fwhm_table(const ExperimentConfig& cfg) { return finish(build_fwhm(cfg, "fwhm"), "fwhm", cfg); }

SweepTable scan(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.a_grid) return finish(build_map(cfg, "scan_map"), "scan", cfg);
  if (cfg.e_minus_r_grid) throw ValidationError("e-minus-r-grid needs a-grid");
  return finish(build_theta_scan(cfg, "scan"), "scan", cfg);
}

std::vector<SweepTable> simulate(const ExperimentConfig& cfg) {
  const ModelParams params = model_params(cfg);
  const BinningScheme scheme = BinningScheme::scaled_binary(bin_a(cfg), params);
  const auto runs = run_phases(cfg, params, scheme);
  return stamp_all({build_counts(runs, "counts"), build_frequencies(runs, params, scheme, "frequencies")}, "simulate",
                   cfg);
}

std::vector<SweepTable> estimate(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.counts) return stamp_all({build_single_estimate(cfg, "estimate")}, "estimate", cfg);
  if (replicas(cfg) < 2) throw ValidationError("estimator evaluation needs replicas >= 2");
  const ModelParams params = model_params(cfg);
  const BinningScheme scheme = BinningScheme::scaled_binary(bin_a(cfg), params);
  const auto runs = run_phases(cfg, params, scheme);
  return stamp_all({build_estimators(runs, params, scheme, "estimators")}, "estimate", cfg);
}

ExperimentConfig preset(std::string_view figure) {
  ExperimentConfig c;
  if (figure == "fig1") {
    c.alpha0 = std::sqrt(199.3);
    c.sinh2r = 0.7;
    c.purity = 1.0;
    c.bin_a = 0.1;
    c.theta_grid = GridSpec{-num::kPi, num::kPi, 721};
  } else if (figure == "fig2") {
    c.n_bar = 100.0;
    c.purity = 0.5;
    c.a_grid = GridSpec{0.05, 1.0, 61};
    c.e_minus_r_grid = GridSpec{0.05, 1.0, 61};
  } else if (figure == "fig3") {
    c.sinh2r = 0.687;
    c.purity = 0.58;
    c.n_bar_grid = GridSpec{50.0, 1000.0, 12};
  } else if (figure == "fig4") {
    c.alpha0 = std::sqrt(42.0);
    c.sinh2r = 0.687;
    c.purity = 0.58;
    c.bin_a = 0.1;
    c.theta_grid = GridSpec{-0.3, 0.3, 13};
    c.shots = 1000;
    c.replicas = 100;
    c.seed = kDefaultSeed;
  } else {
    throw ValidationError(fmt::format("unknown figure '{}': expected fig1, fig2, fig3 or fig4", figure));
  }
  return c;
}

std::vector<SweepTable> reproduce(std::string_view figure, const ExperimentConfig& overrides) {
  ExperimentConfig cfg = merge(preset(figure), overrides);
  cfg.out.reset();
  cfg.format.reset();
  validate(cfg);
  std::vector<SweepTable> tables;
  if (figure == "fig1") tables = figure1(cfg);
  else if (figure == "fig2") tables = figure2(cfg);
  else if (figure == "fig3") tables = figure3(cfg);
  else tables = figure4(cfg);
  return stamp_all(std::move(tables), fmt::format("reproduce {}", figure), cfg);
}

std::vector<SweepTable> rerun(const Provenance& p) {
  const std::string& c = p.command;
  if (c == "pdf") return {pdf_table(p.config)};
  if (c == "probs") return {probs_table(p.config)};
  if (c == "cfi") return {cfi_table(p.config)};
  if (c == "crb") return crb_tables(p.config);
  if (c == "fwhm") return {fwhm_table(p.config)};
  if (c == "scan") return {scan(p.config)};
  if (c == "simulate") return simulate(p.config);
  if (c == "estimate") return estimate(p.config);
  if (c.rfind("reproduce ", 0) == 0) return reproduce(c.substr(10), p.config);
  throw ValidationError(fmt::format("cannot rerun unknown command '{}'", c));
}

std::map<std::string, std::vector<double>> read_csv_columns(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (header.empty()) {
      header = cells;
      for (const auto& h : header) cols[h];
      continue;
    }
    if (cells.size() != header.size()) throw ValidationError("CSV row width does not match its header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = std::numeric_limits<double>::quiet_NaN();
      if (cells[i] == "inf") {
        v = std::numeric_limits<double>::infinity();
      } else {
        try {
          v = parse_number(cells[i], header[i]);
        } catch (const ValidationError&) {
        }
      }
      cols[header[i]].push_back(v);
    }
  }
  if (header.empty()) throw ValidationError("CSV has no header line");
  return cols;
}

CalibrationTable read_calibration(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError(fmt::format("cannot open calibration table '{}'", path));
  std::ostringstream ss;
  ss << f.rdbuf();
  const auto cols = read_csv_columns(ss.str());
  for (const char* need : {"theta", "P_minus", "P_zero", "P_plus"}) {
    if (!cols.count(need)) throw ValidationError(fmt::format("calibration table lacks column '{}'", need));
  }
  const auto& th = cols.at("theta");
  std::vector<OutcomeProbs> probs(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) {
    probs[i] = {cols.at("P_minus")[i], cols.at("P_zero")[i], cols.at("P_plus")[i]};
  }
  return CalibrationTable(th, probs);
}

SweepTable fit_table(const std::string& series, std::span<const double> x, std::span<const double> value) {
  const PowerLawFit f = fit_power_law(x, value);
  SweepTable t("fit", {"series", "prefactor", "exponent", "residual", "points"});
  t.add_row({series, f.prefactor, f.exponent, f.residual, static_cast<double>(f.points)});
  t.set_metadata("table", "fit");
  t.set_metadata("command", "fit");
  t.set_metadata("tool-version", tool_version());
  return t;
}

}  // namespace homodyne
