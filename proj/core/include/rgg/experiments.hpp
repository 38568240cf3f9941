#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rgg/config.hpp"
#include "rgg/continuum.hpp"
#include "rgg/eigensolver.hpp"
#include "rgg/operators.hpp"
#include "rgg/sampling.hpp"

namespace rgg {

struct ExperimentConfig {
  std::string mode = "converge";  // converge | sweep-r | detect | bias | theory
  int n = 5000;
  int d = 1;
  std::vector<double> sigma_sq = {1.0};
  std::vector<double> r_list = {0.05};  // scalar or sweep list
  double p = 2.0;
  bool p_inf = false;
  std::string kernel = "const";  // "const" | "exp:<c>"
  int M = 6;
  std::optional<double> delta;  // default 0.5 min sigma^-2 when unset
  int repetitions = 100;
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool svg = true;

  int theory_count = 20;
  std::vector<double> detect_sigmas = {0.0, 1.0, 3.0};
  std::vector<std::string> detect_models = {"identity", "sine"};
  int ref_grid_m = 2000;
  std::vector<double> bias_radii = {0.2, 0.1, 0.05, 0.025};

  SigmaDiag sigma_diag() const { return SigmaDiag(sigma_sq); }
  MetricOrder metric() const {
    return p_inf ? MetricOrder::linf() : MetricOrder::lp(p);
  }
  KernelSpec kernel_spec() const;
  DeltaPolicy delta_policy() const;

  void validate() const;

  static ExperimentConfig from_config(const Config& c);
  Config to_config() const;
  // named presets: "fig1" (paper defaults, 100 reps desk scale), "fig1-sweep",
  // "detect"
  static ExperimentConfig preset(const std::string& name);
};

struct RepetitionOutcome {
  bool failed = false;
  std::string error;
  int K0 = 0;
  std::vector<double> edge;
  std::string solver;
  double residual_max = 0.0;
  double wall_time_s = 0.0;
};

struct ConvergenceTable {
  std::vector<RepetitionOutcome> reps;  // indexed by repetition
  std::vector<double> theory;           // mu_{k+1}, k = 1..M
  int M = 0;
  int failed = 0;

  std::vector<std::vector<double>> columns() const;  // per-k successful values
  std::vector<double> column_means() const;
  // 5-number summary per k: min, q1, median, q3, max
  std::vector<std::array<double, 5>> quantiles() const;
};

ConvergenceTable run_convergence(const ExperimentConfig& cfg);
std::string edge_eigs_csv(const ConvergenceTable& t);

struct SweepRow {
  double r = 0.0;
  double mean_rel_error = 0.0;
  int failed = 0;
};
std::vector<SweepRow> run_radius_sweep(const ExperimentConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Figure-error formula: sum_k |lambda_k - mu_k| / (M mu_k).
double fig_relative_error(std::span<const double> edge, std::span<const double> mu);
// Detection statistic: sum_k |lambda_{K0+k} - nu_{k+1}| / M.
double detection_T(std::span<const double> edge, std::span<const double> nu_tail);

struct DetectionCell {
  std::string model;
  double sigma = 0.0;
  double T_mean = 0.0;
  int failed = 0;
  std::vector<double> rep_T;                   // per successful repetition
  std::vector<std::vector<double>> rep_edges;  // per repetition edge eigenvalues
};

struct DetectionReport {
  int M = 0;
  std::vector<double> nu;  // reference spectrum per model, flattened below
  std::vector<std::string> models;
  std::vector<std::vector<double>> model_nu;  // nu list per model
  std::vector<DetectionCell> cells;
};

DetectionReport run_detection(const ExperimentConfig& cfg);
std::string detect_csv(const DetectionReport& r);

ContinuumSpectrum run_theory(const ExperimentConfig& cfg);

BiasSlopeResult run_bias(const ExperimentConfig& cfg);
std::string bias_csv(const BiasSlopeResult& r);

// config echo + environment + wall times
std::string run_json(const ExperimentConfig& cfg,
                     const std::vector<std::pair<std::string, double>>& wall_times,
                     const std::string& extra_json = "{}");

}  // namespace rgg
