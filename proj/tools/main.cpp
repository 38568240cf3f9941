// rgg: sparse random geometric graph spectra — experiment driver.
//
// Subcommands build Gaussian (or signal-plus-noise) geometric graphs, solve
// for the edge eigenvalues of the scaled random-walk Laplacian, and compare
// against the closed-form continuum spectrum:
//   theory    closed-form eigenvalue multiset of the limit operator
//   converge  edge eigenvalues across repetitions vs their limits
//   sweep-r   mean relative error across a radius sweep
//   detect    detection statistic T for signal-plus-noise clouds
//   bias      ||(T_n - Delta_rho) psi_2|| across radii with slope fit

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rgg/experiments.hpp"
#include "rgg/sturm.hpp"
#include "rgg/svg.hpp"

using namespace rgg;
namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::int64_t seed = -1;
  int reps = -1;
  int threads = -1;
  bool check = false;
  bool no_svg = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config,
                  "config file path or preset name (fig1, fig1-sweep, detect, "
                  "bias, theory)");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--seed", flags.seed, "override the base seed");
  cmd->add_option("--reps", flags.reps, "override the repetition count");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
  cmd->add_flag("--check", flags.check,
                "run the acceptance checks for this mode; nonzero exit on failure");
  cmd->add_flag("--no-svg", flags.no_svg, "skip SVG siblings");
}

ExperimentConfig load_config(const CommonFlags& flags, const std::string& mode) {
  ExperimentConfig cfg;
  if (flags.config.empty()) {
    cfg = ExperimentConfig::preset(mode == "converge"     ? "fig1"
                                   : mode == "sweep-r"    ? "fig1-sweep"
                                                          : mode);
  } else if (fs::exists(flags.config)) {
    cfg = ExperimentConfig::from_config(Config::from_file(flags.config));
  } else {
    cfg = ExperimentConfig::preset(flags.config);
  }
  cfg.mode = mode;
  if (flags.seed >= 0) cfg.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.reps >= 1) cfg.repetitions = flags.reps;
  if (flags.threads >= 0) cfg.threads = static_cast<unsigned>(flags.threads);
  if (flags.no_svg) cfg.svg = false;
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

int check_result(bool ok, const std::string& what) {
  std::printf("check: %s — %s\n", ok ? "PASS" : "FAIL", what.c_str());
  return ok ? 0 : 1;
}

int cmd_theory(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config(flags, "theory");
  const auto t0 = std::chrono::steady_clock::now();
  const ContinuumSpectrum spec = run_theory(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / "spectrum.csv", spectrum_csv(spec));
  write_file(fs::path(flags.out) / "run.json",
             run_json(cfg, {{"theory", secs}},
                      std::string("{\"exact\":") + (spec.exact ? "true" : "false") +
                          "}"));
  std::printf("theory: %zu eigenvalues, %zu groups -> %s/spectrum.csv\n",
              spec.values.size(), spec.groups.size(), flags.out.c_str());
  if (!flags.check) return 0;
  bool ok = spec.values[0] == 0.0 && spec.groups[0].multiplicity == 1;
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    ok &= spec.values[i] >= spec.values[i - 1];
  return check_result(ok, "spectrum sorted with a simple zero eigenvalue");
}

int cmd_converge(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config(flags, "converge");
  const auto t0 = std::chrono::steady_clock::now();
  const ConvergenceTable table = run_convergence(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / "edge_eigs.csv", edge_eigs_csv(table));
  if (cfg.svg)
    write_file(fs::path(flags.out) / "edge_eigs.svg",
               emit_svg_violin(table.columns(), table.theory, "k",
                               "edge eigenvalue"));
  char extra[160];
  std::snprintf(extra, sizeof extra, "{\"failed\":%d}", table.failed);
  write_file(fs::path(flags.out) / "run.json",
             run_json(cfg, {{"converge", secs}}, extra));
  const auto means = table.column_means();
  std::printf("converge: %d reps (%d failed), means:", cfg.repetitions,
              table.failed);
  for (double m : means) std::printf(" %.3f", m);
  std::printf(" -> %s/edge_eigs.csv (%.0f s)\n", flags.out.c_str(), secs);
  if (!flags.check) return 0;
  bool ok = table.failed == 0;
  for (int k = 0; k < cfg.M; ++k)
    ok &= std::abs(means[k] - table.theory[k]) <= 0.10 * table.theory[k];
  int max_k0 = 0;
  for (const auto& r : table.reps) max_k0 = std::max(max_k0, r.K0);
  ok &= max_k0 <= std::pow(static_cast<double>(cfg.n), 0.78);
  return check_result(ok, "means within 10% of the limits, K0 <= n^0.78");
}

int cmd_sweep(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config(flags, "sweep-r");
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_radius_sweep(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / "sweep.csv", sweep_csv(rows));
  if (cfg.svg) {
    SvgSeries series{"mean relative error", {}, {}};
    for (const auto& row : rows) {
      series.x.push_back(row.r);
      series.y.push_back(row.mean_rel_error);
    }
    write_file(fs::path(flags.out) / "sweep.svg",
               emit_svg_line({series}, "r_n", "relative error", true, true));
  }
  write_file(fs::path(flags.out) / "run.json", run_json(cfg, {{"sweep", secs}}));
  std::printf("sweep-r: %zu radii -> %s/sweep.csv (%.0f s)\n", rows.size(),
              flags.out.c_str(), secs);
  if (!flags.check) return 0;
  // U-shape: some interior radius beats both endpoints
  double best = 1e300;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i)
    best = std::min(best, rows[i].mean_rel_error);
  const bool ok = rows.size() >= 3 && best < rows.front().mean_rel_error &&
                  best < rows.back().mean_rel_error;
  return check_result(ok, "interior radius beats both sweep endpoints");
}

int cmd_detect(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config(flags, "detect");
  const auto t0 = std::chrono::steady_clock::now();
  const DetectionReport rep = run_detection(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / "detect.csv", detect_csv(rep));
  for (std::size_t m = 0; m < rep.models.size(); ++m)
    write_file(fs::path(flags.out) / ("reference_" + rep.models[m] + ".csv"),
               reference_spectrum_csv(rep.model_nu[m]));
  {
    std::ostringstream os;
    os << "model,sigma,rep,k,lambda\n";
    char buf[64];
    for (const auto& cell : rep.cells)
      for (std::size_t r = 0; r < cell.rep_edges.size(); ++r)
        for (std::size_t k = 0; k < cell.rep_edges[r].size(); ++k) {
          std::snprintf(buf, sizeof buf, "%.17g", cell.rep_edges[r][k]);
          os << cell.model << ',' << cell.sigma << ',' << r << ',' << (k + 1)
             << ',' << buf << '\n';
        }
    write_file(fs::path(flags.out) / "detect_eigs.csv", os.str());
  }
  if (cfg.svg) {
    std::vector<SvgSeries> series;
    for (const std::string& model : {std::string("identity"), std::string("sine")}) {
      SvgSeries s{model, {}, {}};
      for (const auto& cell : rep.cells)
        if (cell.model == model) {
          s.x.push_back(cell.sigma);
          s.y.push_back(cell.T_mean);
        }
      if (!s.x.empty()) series.push_back(std::move(s));
    }
    if (!series.empty())
      write_file(fs::path(flags.out) / "detect.svg",
                 emit_svg_line(series, "noise sigma", "T"));
  }
  write_file(fs::path(flags.out) / "run.json", run_json(cfg, {{"detect", secs}}));
  std::printf("detect: %zu cells -> %s/detect.csv (%.0f s)\n", rep.cells.size(),
              flags.out.c_str(), secs);
  if (!flags.check) return 0;

  double t_0 = -1, t_1 = -1, t_3 = -1;
  int identity_idx = -1;
  for (std::size_t m = 0; m < rep.models.size(); ++m)
    if (rep.models[m] == "identity") identity_idx = static_cast<int>(m);
  for (const auto& cell : rep.cells) {
    if (cell.model != "identity") continue;
    if (cell.sigma == 0.0) t_0 = cell.T_mean;
    if (cell.sigma == 1.0) t_1 = cell.T_mean;
    if (cell.sigma == 3.0) t_3 = cell.T_mean;
  }
  if (identity_idx < 0 || t_0 < 0 || t_1 < 0 || t_3 < 0)
    return check_result(false,
                        "check needs the identity model with sigmas 0, 1 and 3");
  bool ok = t_0 < 0.5 * t_1;
  const auto& nu = rep.model_nu[identity_idx];
  double pred = 0.0;
  for (int k = 1; k <= cfg.M; ++k) pred += std::abs(2.0 * k / 9.0 - nu[k]) / cfg.M;
  ok &= std::abs(t_3 - pred) <= 0.15 * pred;
  char what[160];
  std::snprintf(what, sizeof what,
                "T(0)=%.2f < 0.5*T(1)=%.2f and T(3)=%.2f within 15%% of %.2f",
                t_0, 0.5 * t_1, t_3, pred);
  return check_result(ok, what);
}

int cmd_bias(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config(flags, "bias");
  const auto t0 = std::chrono::steady_clock::now();
  const BiasSlopeResult res = run_bias(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / "bias.csv", bias_csv(res));
  if (cfg.svg) {
    SvgSeries s{"e(r)", res.radii, res.errors};
    write_file(fs::path(flags.out) / "bias.svg",
               emit_svg_line({s}, "r", "bias norm", true, true));
  }
  char extra[96];
  std::snprintf(extra, sizeof extra, "{\"slope\":%.17g}", res.slope);
  write_file(fs::path(flags.out) / "run.json",
             run_json(cfg, {{"bias", secs}}, extra));
  std::printf("bias: slope %.3f -> %s/bias.csv (%.0f s)\n", res.slope,
              flags.out.c_str(), secs);
  if (!flags.check) return 0;
  const bool ok = !res.exact_zero && res.slope >= 1.7 && res.slope <= 2.3;
  return check_result(ok, "log-log slope in [1.7, 2.3]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse random geometric graph spectra"};
  app.require_subcommand(1);

  CommonFlags flags[5];
  CLI::App* theory = app.add_subcommand("theory", "closed-form continuum spectrum");
  CLI::App* converge =
      app.add_subcommand("converge", "edge eigenvalues across repetitions");
  CLI::App* sweep = app.add_subcommand("sweep-r", "error across a radius sweep");
  CLI::App* detect = app.add_subcommand("detect", "detection statistic per cell");
  CLI::App* bias = app.add_subcommand("bias", "operator bias slope fit");
  add_common(theory, flags[0]);
  add_common(converge, flags[1]);
  add_common(sweep, flags[2]);
  add_common(detect, flags[3]);
  add_common(bias, flags[4]);

  CLI11_PARSE(app, argc, argv);
  try {
    if (theory->parsed()) return cmd_theory(flags[0]);
    if (converge->parsed()) return cmd_converge(flags[1]);
    if (sweep->parsed()) return cmd_sweep(flags[2]);
    if (detect->parsed()) return cmd_detect(flags[3]);
    if (bias->parsed()) return cmd_bias(flags[4]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rgg: %s\n", e.what());
    return 2;
  }
  return 0;
}
