#include "rgg/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rgg/parallel.hpp"
#include "rgg/sturm.hpp"

namespace rgg {

KernelSpec ExperimentConfig::kernel_spec() const {
  if (kernel == "const") return KernelSpec::constant_one();
  if (kernel.rfind("exp:", 0) == 0)
    return KernelSpec::exponential(std::stod(kernel.substr(4)));
  throw InvalidArgument("ExperimentConfig: unknown kernel '" + kernel + "'");
}

DeltaPolicy ExperimentConfig::delta_policy() const {
  if (delta) return DeltaPolicy::user(*delta);
  return DeltaPolicy::from_sigma(sigma_diag());
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw InvalidArgument("config: repetitions >= 1");
  if (M < 1) throw InvalidArgument("config: M >= 1");
  if (static_cast<int>(sigma_sq.size()) != d)
    throw InvalidArgument("config: sigma length must equal d");
  for (std::size_t i = 1; i < r_list.size(); ++i)
    if (!(r_list[i] > r_list[i - 1]) && !(r_list[i] < r_list[i - 1]))
      throw InvalidArgument("config: r sweep list must be strictly monotone");
  for (std::size_t i = 2; i < r_list.size(); ++i)
    if ((r_list[1] > r_list[0]) != (r_list[i] > r_list[i - 1]))
      throw InvalidArgument("config: r sweep list must be strictly monotone");
  for (double r : r_list)
    if (!(r > 0.0)) throw InvalidArgument("config: radii must be positive");
  (void)kernel_spec();
}

ExperimentConfig ExperimentConfig::from_config(const Config& c) {
  ExperimentConfig e;
  e.mode = c.get("mode", e.mode);
  e.n = c.get_int("n", e.n);
  e.d = c.get_int("d", e.d);
  if (c.has("sigma_sq")) {
    e.sigma_sq = c.get_list("sigma_sq", e.sigma_sq);
  } else if (c.has("sigma")) {
    e.sigma_sq.clear();
    for (double s : c.get_list("sigma", {1.0})) e.sigma_sq.push_back(s * s);
  } else {
    e.sigma_sq.assign(e.d, 1.0);
  }
  if (static_cast<int>(e.sigma_sq.size()) == 1 && e.d > 1)
    e.sigma_sq.assign(e.d, e.sigma_sq[0]);
  if (c.has("r_list"))
    e.r_list = c.get_list("r_list", e.r_list);
  else if (c.has("r"))
    e.r_list = {c.get_double("r", 0.05)};
  const std::string p = c.get("p", "2");
  if (p == "inf" || p == "infinity") {
    e.p_inf = true;
  } else {
    e.p = std::stod(p);
    e.p_inf = false;
  }
  e.kernel = c.get("kernel", e.kernel);
  e.M = c.get_int("M", e.M);
  if (c.has("delta")) e.delta = c.get_double("delta", 0.0);
  e.repetitions = c.get_int("reps", e.repetitions);
  e.seed = c.get_u64("seed", e.seed);
  e.threads = static_cast<unsigned>(c.get_int("threads", 0));
  e.svg = c.get_int("svg", 1) != 0;
  e.theory_count = c.get_int("count", e.theory_count);
  e.detect_sigmas = c.get_list("detect_sigmas", e.detect_sigmas);
  e.detect_models = c.get_names("detect_models", e.detect_models);
  e.ref_grid_m = c.get_int("ref_grid_m", e.ref_grid_m);
  e.bias_radii = c.get_list("bias_radii", e.bias_radii);
  e.validate();
  return e;
}

Config ExperimentConfig::to_config() const {
  Config c;
  c.set("mode", mode);
  c.set("n", std::to_string(n));
  c.set("d", std::to_string(d));
  c.set_list("sigma_sq", sigma_sq);
  if (r_list.size() == 1)
    c.set_double("r", r_list[0]);
  else
    c.set_list("r_list", r_list);
  c.set("p", p_inf ? "inf" : [this] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return std::string(buf);
  }());
  c.set("kernel", kernel);
  c.set("M", std::to_string(M));
  if (delta) c.set_double("delta", *delta);
  c.set("reps", std::to_string(repetitions));
  c.set("seed", std::to_string(seed));
  c.set("threads", std::to_string(threads));
  c.set("svg", svg ? "1" : "0");
  c.set("count", std::to_string(theory_count));
  c.set_list("detect_sigmas", detect_sigmas);
  std::string models;
  for (std::size_t i = 0; i < detect_models.size(); ++i) {
    if (i) models += ",";
    models += detect_models[i];
  }
  c.set("detect_models", models);
  c.set("ref_grid_m", std::to_string(ref_grid_m));
  c.set_list("bias_radii", bias_radii);
  return c;
}

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  ExperimentConfig e;  // defaults mirror Figure 1a
  if (name == "fig1") {
    e.mode = "converge";
    return e;
  }
  if (name == "fig1-sweep") {
    e.mode = "sweep-r";
    e.r_list = {0.005, 0.02, 0.05, 0.1, 0.3, 0.5};
    e.repetitions = 20;
    return e;
  }
  if (name == "detect") {
    e.mode = "detect";
    e.delta = 0.05;  // must satisfy delta < 1/(sigma_max^2 + 1/12)
    e.repetitions = 10;
    return e;
  }
  if (name == "bias") {
    e.mode = "bias";
    return e;
  }
  if (name == "theory") {
    e.mode = "theory";
    return e;
  }
  throw InvalidArgument("unknown preset '" + name + "'");
}

namespace {

RepetitionOutcome run_one_repetition(const PointCloud& cloud, const GraphSpec& spec,
                                     const MomentPair& moments,
                                     const DeltaPolicy& policy, int M) {
  RepetitionOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    SparseAffinity aff = build_hard_affinity(cloud, spec);
    LaplacianOperator op(std::move(aff), scale_factor(moments, spec.r_n));
    SpectrumResult res = adaptive_spectrum(op, policy, M);
    out.K0 = res.K0;
    out.edge = res.edge;
    out.solver = res.solver;
    out.residual_max = res.residual_max;
  } catch (const Error& err) {
    out.failed = true;
    out.error = err.what();
  }
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

std::vector<std::vector<double>> ConvergenceTable::columns() const {
  std::vector<std::vector<double>> cols(M);
  for (const auto& r : reps) {
    if (r.failed) continue;
    for (int k = 0; k < M; ++k) cols[k].push_back(r.edge[k]);
  }
  return cols;
}

std::vector<double> ConvergenceTable::column_means() const {
  std::vector<double> means(M, 0.0);
  const auto cols = columns();
  for (int k = 0; k < M; ++k) {
    double s = 0.0;
    for (double v : cols[k]) s += v;
    means[k] = cols[k].empty() ? 0.0 : s / cols[k].size();
  }
  return means;
}

std::vector<std::array<double, 5>> ConvergenceTable::quantiles() const {
  std::vector<std::array<double, 5>> out(M);
  auto cols = columns();
  for (int k = 0; k < M; ++k) {
    auto& v = cols[k];
    if (v.empty()) {
      out[k] = {0, 0, 0, 0, 0};
      continue;
    }
    std::sort(v.begin(), v.end());
    auto q = [&](double t) {
      const double pos = t * (v.size() - 1);
      const std::size_t i = static_cast<std::size_t>(pos);
      const double frac = pos - i;
      return i + 1 < v.size() ? v[i] * (1 - frac) + v[i + 1] * frac : v[i];
    };
    out[k] = {v.front(), q(0.25), q(0.5), q(0.75), v.back()};
  }
  return out;
}

ConvergenceTable run_convergence(const ExperimentConfig& cfg) {
  if (cfg.mode != "converge")
    throw InvalidArgument("run_convergence: mode must be 'converge'");
  cfg.validate();
  const SigmaDiag sigma = cfg.sigma_diag();
  GraphSpec spec;
  spec.r_n = cfg.r_list.front();
  spec.p = cfg.metric();
  spec.g = cfg.kernel_spec();
  const MomentPair moments = compute_moments(cfg.d, spec.p, spec.g);
  const DeltaPolicy policy = cfg.delta_policy();

  ConvergenceTable table;
  table.M = cfg.M;
  table.reps.resize(cfg.repetitions);
  const unsigned threads = cfg.threads ? cfg.threads : default_threads();
  parallel_for(cfg.repetitions, threads, [&](std::size_t rep) {
    const PointCloud cloud = sample_gaussian(cfg.n, sigma, cfg.seed, rep);
    table.reps[rep] = run_one_repetition(cloud, spec, moments, policy, cfg.M);
  });
  for (const auto& r : table.reps) table.failed += r.failed ? 1 : 0;

  const ContinuumSpectrum cont = enumerate_spectrum(sigma, cfg.M + 1);
  table.theory.assign(cont.values.begin() + 1, cont.values.end());
  return table;
}

std::string edge_eigs_csv(const ConvergenceTable& t) {
  std::ostringstream os;
  os << "rep,k,lambda,mu,K0,failed\n";
  char buf[64];
  for (std::size_t rep = 0; rep < t.reps.size(); ++rep) {
    const auto& r = t.reps[rep];
    for (int k = 0; k < t.M; ++k) {
      if (r.failed) {
        os << rep << ',' << (k + 1) << ",nan,";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", r.edge[k]);
        os << rep << ',' << (k + 1) << ',' << buf << ',';
      }
      std::snprintf(buf, sizeof buf, "%.17g", t.theory[k]);
      os << buf << ',' << r.K0 << ',' << (r.failed ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

double fig_relative_error(std::span<const double> edge, std::span<const double> mu) {
  if (edge.size() != mu.size() || edge.empty())
    throw InvalidArgument("fig_relative_error: length mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < edge.size(); ++k)
    acc += std::abs(edge[k] - mu[k]) / (edge.size() * mu[k]);
  return acc;
}

double detection_T(std::span<const double> edge, std::span<const double> nu_tail) {
  if (edge.size() != nu_tail.size() || edge.empty())
    throw InvalidArgument("detection_T: length mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < edge.size(); ++k)
    acc += std::abs(edge[k] - nu_tail[k]) / static_cast<double>(edge.size());
  return acc;
}

std::vector<SweepRow> run_radius_sweep(const ExperimentConfig& cfg) {
  if (cfg.mode != "sweep-r")
    throw InvalidArgument("run_radius_sweep: mode must be 'sweep-r'");
  cfg.validate();
  const SigmaDiag sigma = cfg.sigma_diag();
  const KernelSpec kernel = cfg.kernel_spec();
  const MomentPair moments = compute_moments(cfg.d, cfg.metric(), kernel);
  const DeltaPolicy policy = cfg.delta_policy();
  const ContinuumSpectrum cont = enumerate_spectrum(sigma, cfg.M + 1);
  const std::vector<double> mu(cont.values.begin() + 1, cont.values.end());
  const unsigned threads = cfg.threads ? cfg.threads : default_threads();

  std::vector<SweepRow> rows;
  for (double r : cfg.r_list) {
    GraphSpec spec;
    spec.r_n = r;
    spec.p = cfg.metric();
    spec.g = kernel;
    std::vector<RepetitionOutcome> reps(cfg.repetitions);
    parallel_for(cfg.repetitions, threads, [&](std::size_t rep) {
      const PointCloud cloud = sample_gaussian(cfg.n, sigma, cfg.seed, rep);
      reps[rep] = run_one_repetition(cloud, spec, moments, policy, cfg.M);
    });
    SweepRow row;
    row.r = r;
    double acc = 0.0;
    int ok = 0;
    for (const auto& rr : reps) {
      if (rr.failed) {
        ++row.failed;
        continue;
      }
      acc += fig_relative_error(rr.edge, mu);
      ++ok;
    }
    row.mean_rel_error = ok > 0 ? acc / ok : std::nan("");
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "r,mean_rel_error,failed\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.r);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.mean_rel_error);
    os << buf << ',' << row.failed << '\n';
  }
  return os.str();
}

DetectionReport run_detection(const ExperimentConfig& cfg) {
  if (cfg.mode != "detect")
    throw InvalidArgument("run_detection: mode must be 'detect'");
  cfg.validate();
  if (!cfg.delta)
    throw InvalidArgument("run_detection: delta is a required input (sigma unknown)");
  const DeltaPolicy policy = DeltaPolicy::user(*cfg.delta);
  const KernelSpec kernel = cfg.kernel_spec();
  const MetricOrder p = cfg.metric();
  const MomentPair moments = compute_moments(1, p, kernel);
  const double r = cfg.r_list.front();
  const unsigned threads = cfg.threads ? cfg.threads : default_threads();

  DetectionReport report;
  report.M = cfg.M;
  for (const std::string& name : cfg.detect_models) {
    SignalModel model;
    if (name == "identity")
      model.kind = SignalModel::Kind::Identity;
    else if (name == "sine")
      model.kind = SignalModel::Kind::Sine;
    else
      throw InvalidArgument("run_detection: unknown model '" + name + "'");
    report.models.push_back(name);
    // reference spectrum nu_1..nu_{M+1} from the weighted Neumann solver
    const WeightedInterval w = signal_density(model, cfg.ref_grid_m);
    report.model_nu.push_back(solve_weighted_neumann(w, cfg.M + 1));
  }

  std::uint64_t cell_stream = 0;
  for (std::size_t mi = 0; mi < report.models.size(); ++mi) {
    const std::vector<double> nu_tail(report.model_nu[mi].begin() + 1,
                                      report.model_nu[mi].end());
    for (double noise : cfg.detect_sigmas) {
      SignalModel model;
      model.kind = report.models[mi] == "identity" ? SignalModel::Kind::Identity
                                                   : SignalModel::Kind::Sine;
      model.noise_sigma = noise;
      GraphSpec spec;
      spec.r_n = r;
      spec.p = p;
      spec.g = kernel;

      DetectionCell cell;
      cell.model = report.models[mi];
      cell.sigma = noise;
      std::vector<RepetitionOutcome> reps(cfg.repetitions);
      const std::uint64_t base_stream = cell_stream * cfg.repetitions;
      parallel_for(cfg.repetitions, threads, [&](std::size_t rep) {
        const PointCloud cloud =
            sample_signal_plus_noise(cfg.n, model, cfg.seed, base_stream + rep);
        reps[rep] = run_one_repetition(cloud, spec, moments, policy, cfg.M);
      });
      ++cell_stream;
      double acc = 0.0;
      int ok = 0;
      for (const auto& rr : reps) {
        cell.rep_edges.push_back(rr.failed ? std::vector<double>{} : rr.edge);
        if (rr.failed) {
          ++cell.failed;
          continue;
        }
        const double t = detection_T(rr.edge, nu_tail);
        cell.rep_T.push_back(t);
        acc += t;
        ++ok;
      }
      cell.T_mean = ok > 0 ? acc / ok : std::nan("");
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

std::string detect_csv(const DetectionReport& r) {
  std::ostringstream os;
  os << "model,sigma,T,failed,reps_ok\n";
  char buf[64];
  for (const auto& cell : r.cells) {
    os << cell.model << ',';
    std::snprintf(buf, sizeof buf, "%.17g", cell.sigma);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", cell.T_mean);
    os << buf << ',' << cell.failed << ',' << cell.rep_T.size() << '\n';
  }
  return os.str();
}

ContinuumSpectrum run_theory(const ExperimentConfig& cfg) {
  if (cfg.mode != "theory")
    throw InvalidArgument("run_theory: mode must be 'theory'");
  return enumerate_spectrum(cfg.sigma_diag(), cfg.theory_count);
}

BiasSlopeResult run_bias(const ExperimentConfig& cfg) {
  if (cfg.mode != "bias") throw InvalidArgument("run_bias: mode must be 'bias'");
  if (cfg.d != 1)
    throw InvalidArgument("run_bias: the bias experiment is 1-D");
  const SigmaDiag sigma = cfg.sigma_diag();
  GraphSpec tmpl;
  tmpl.p = cfg.metric();
  tmpl.g = cfg.kernel_spec();
  tmpl.r_n = cfg.bias_radii.front();
  const EigenFunction psi2(HermiteIndex({2}), sigma);
  return bias_slope_check(sigma, tmpl, psi2, cfg.bias_radii);
}

std::string bias_csv(const BiasSlopeResult& r) {
  std::ostringstream os;
  os << "r,e\n";
  char buf[64];
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", r.radii[i]);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.errors[i]);
    os << buf << '\n';
  }
  return os.str();
}

std::string run_json(const ExperimentConfig& cfg,
                     const std::vector<std::pair<std::string, double>>& wall_times,
                     const std::string& extra_json) {
  nlohmann::json j;
  const Config echo = cfg.to_config();
  for (const auto& [k, v] : echo.items()) j["config"][k] = v;
  j["environment"]["hardware_threads"] = default_threads();
  j["environment"]["threads_used"] = cfg.threads ? cfg.threads : default_threads();
#if defined(__VERSION__)
  j["environment"]["compiler"] = __VERSION__;
#endif
  for (const auto& [name, secs] : wall_times) j["wall_times_s"][name] = secs;
  j["extra"] = nlohmann::json::parse(extra_json);
  return j.dump(2);
}

}  // namespace rgg
