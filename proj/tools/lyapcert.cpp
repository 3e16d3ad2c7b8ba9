// lyapcert: spectral Lyapunov certificates for two-step methods.
//
//   lyapcert generate --dim 100 --mu 1 --L 1000 --seed 3 --out prob/
//   lyapcert analyze  --method hb --optimal --dim 50 --mu 1 --L 100
//   lyapcert run      --method nag --dim 100 --iters 2000 --out run/
//   lyapcert scenario fig1 --out results/
//   lyapcert check    --csv run/nag_trace.csv
//
// Exit status: 0 success, 1 verdict failure, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lyap/lyap.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerdictFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Flags {
  std::optional<int> dim;
  std::optional<double> mu;
  std::optional<double> L;
  std::vector<std::string> methods;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  bool optimal = false;
  std::optional<int> iters;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config;
  std::vector<int> dims;
  std::string problem = "quadratic";
  std::string matrix;
  std::string csv;
  double tol = lyap::kMonotoneTol;
  std::string scenario;
};

// Options that may also come from a `key = value` config file; the command
// line wins when both set a key.
struct ConfigBinding {
  CLI::Option* option;
  std::function<void(const std::string&)> assign;
};
using Bindings = std::map<std::string, ConfigBinding>;

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': not a number: " + v);
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': not an integer: " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("config key '" + key + "': not a boolean: " + v);
}

void add_problem_flags(CLI::App* app, Flags& f, Bindings& b) {
  b["dim"] = {app->add_option("--dim", f.dim, "problem dimension"),
              [&f](const std::string& v) { f.dim = static_cast<int>(to_integer("dim", v)); }};
  b["mu"] = {app->add_option("--mu", f.mu, "smallest eigenvalue of W"),
             [&f](const std::string& v) { f.mu = to_double("mu", v); }};
  b["L"] = {app->add_option("--L", f.L, "largest eigenvalue of W"),
            [&f](const std::string& v) { f.L = to_double("L", v); }};
  b["seed"] = {app->add_option("--seed", f.seed, "random seed"),
               [&f](const std::string& v) {
                 f.seed = static_cast<std::uint64_t>(to_integer("seed", v));
               }};
}

void add_method_flags(CLI::App* app, Flags& f, Bindings& b) {
  b["method"] = {app->add_option("--method", f.methods,
                                 "hb, nag, tmm, naggs (comma separated or repeated)")
                     ->delimiter(','),
                 [&f](const std::string& v) { f.methods = lyap::split_list(v); }};
  b["alpha"] = {app->add_option("--alpha", f.alpha, "step size"),
                [&f](const std::string& v) { f.alpha = to_double("alpha", v); }};
  b["beta"] = {app->add_option("--beta", f.beta, "momentum"),
               [&f](const std::string& v) { f.beta = to_double("beta", v); }};
  b["gamma"] = {app->add_option("--gamma", f.gamma, "TMM extrapolation"),
                [&f](const std::string& v) { f.gamma = to_double("gamma", v); }};
  b["optimal"] = {app->add_flag("--optimal", f.optimal, "use the optimal hyperparameters"),
                  [&f](const std::string& v) { f.optimal = to_bool("optimal", v); }};
}

void add_run_flags(CLI::App* app, Flags& f, Bindings& b) {
  b["iters"] = {app->add_option("--iters", f.iters, "recorded iterates (>= 3)"),
                [&f](const std::string& v) { f.iters = static_cast<int>(to_integer("iters", v)); }};
}

void add_out_flag(CLI::App* app, Flags& f, Bindings& b, const char* help) {
  b["out"] = {app->add_option("--out", f.out, help),
              [&f](const std::string& v) { f.out = v; }};
}

void apply_config(const Flags& f, Bindings& bindings) {
  if (f.config.empty()) return;
  std::ifstream in(f.config);
  if (!in) throw UsageError("cannot read config file " + f.config);
  for (const auto& [key, value] : lyap::parse_config(in)) {
    auto it = bindings.find(key);
    if (it == bindings.end()) throw UsageError("unknown config key: " + key);
    if (it->second.option->count() == 0) it->second.assign(value);
  }
}

std::vector<lyap::MethodKind> method_kinds(const Flags& f, bool default_all) {
  std::vector<lyap::MethodKind> kinds;
  for (const auto& m : f.methods) kinds.push_back(lyap::parse_method_kind(m));
  if (kinds.empty()) {
    if (!default_all) throw UsageError("--method is required");
    kinds = {lyap::MethodKind::HB, lyap::MethodKind::NAG, lyap::MethodKind::TMM,
             lyap::MethodKind::NAGGS};
  }
  return kinds;
}

bool explicit_hyperparams(const Flags& f) {
  const bool any = f.alpha || f.beta || f.gamma;
  if (any && f.optimal) throw UsageError("--optimal conflicts with --alpha/--beta/--gamma");
  if (any && !(f.alpha && f.beta)) throw UsageError("explicit mode needs --alpha and --beta");
  return any;
}

std::vector<lyap::MethodSpec> resolve_specs(const Flags& f,
                                            const std::vector<lyap::MethodKind>& kinds,
                                            double mu, double L) {
  std::vector<lyap::MethodSpec> specs;
  const bool manual = explicit_hyperparams(f);
  for (auto k : kinds) {
    specs.push_back(manual ? lyap::MethodSpec(k, *f.alpha, *f.beta, f.gamma.value_or(0.0))
                           : lyap::optimal_hyperparams(k, mu, L));
  }
  return specs;
}

std::filesystem::path ensure_dir(const std::string& out) {
  std::filesystem::path dir = out.empty() ? std::filesystem::path(".") : std::filesystem::path(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir)) {
    throw UsageError("cannot create output directory " + dir.string());
  }
  return dir;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (lyap::trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& cell : lyap::split_list(line)) row.push_back(to_double(path, cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw UsageError(path + ": ragged matrix");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UsageError(path + ": empty matrix");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

lyap::QuadraticProblem make_quadratic(const Flags& f, double default_L) {
  return lyap::generate_quadratic(f.dim.value_or(100), f.mu.value_or(1.0),
                                  f.L.value_or(default_L), f.seed.value_or(0));
}

// ---------------------------------------------------------------------------

int cmd_generate(const Flags& f) {
  const auto p = make_quadratic(f, 1000.0);
  const auto dir = ensure_dir(f.out);
  write_matrix_csv(dir / "W.csv", p.W);
  write_matrix_csv(dir / "linear.csv", p.linear);
  write_matrix_csv(dir / "minimizer.csv", p.minimizer);
  write_matrix_csv(dir / "spectrum.csv", p.eigvals);
  const double resid = (p.W * p.minimizer - p.linear).norm() /
                       std::max(p.linear.norm(), std::numeric_limits<double>::min());
  std::cout << "dim " << p.dim << ", mu " << p.mu << ", L " << p.lipschitz
            << ", residual " << resid << "\nwrote W.csv, linear.csv, minimizer.csv, "
            << "spectrum.csv to " << dir.string() << '\n';
  return kOk;
}

int cmd_analyze(const Flags& f) {
  Eigen::VectorXd eigvals;
  if (!f.matrix.empty()) {
    const Eigen::MatrixXd w = read_matrix_csv(f.matrix);
    try {
      eigvals = lyap::symmetric_eigendecomposition(w).eigvals;
    } catch (const std::invalid_argument& e) {
      throw UsageError(f.matrix + ": " + e.what());
    }
  } else {
    eigvals = make_quadratic(f, 1000.0).eigvals;
  }
  const double mu = eigvals(0);
  const double L = eigvals(eigvals.size() - 1);
  std::optional<std::filesystem::path> dir;
  if (!f.out.empty()) dir = ensure_dir(f.out);

  for (const auto& spec : resolve_specs(f, method_kinds(f, true), mu, L)) {
    const auto cert = lyap::analyze(spec, eigvals);
    lyap::write_certificate_report(std::cout, spec, cert);
    std::cout << '\n';
    if (dir) {
      const std::string stem = lyap::detail::file_tag(spec) + "_certificate";
      std::ofstream csv(*dir / (stem + ".csv"));
      lyap::write_certificate_csv(csv, cert);
      std::ofstream txt(*dir / (stem + ".txt"));
      lyap::write_certificate_report(txt, spec, cert);
      if (!csv || !txt) throw std::runtime_error("cannot write to " + dir->string());
    }
  }
  return kOk;
}

int cmd_run(const Flags& f) {
  const auto kinds = method_kinds(f, false);
  if (kinds.size() != 1) throw UsageError("run takes exactly one --method");
  const int iters = f.iters.value_or(2000);
  const std::uint64_t seed = f.seed.value_or(0);
  lyap::TraceOptions opt;
  opt.iters = iters;
  opt.tolerance = f.tol;

  std::optional<lyap::Trace> trace;
  std::optional<lyap::SpectralCertificate> cert;
  if (f.problem == "quadratic") {
    const auto p = make_quadratic(f, 1000.0);
    const auto spec = resolve_specs(f, kinds, p.mu, p.lipschitz).front();
    cert = lyap::analyze(spec, p.eigvals);
    const auto x0 = lyap::sample_start(p.minimizer, 10.0, lyap::detail::derive_seed(seed, 1));
    trace = lyap::run_trace(p, spec, x0, opt, seed);
  } else {
    lyap::Objective obj;
    Eigen::VectorXd x0;
    double mu = 0.0, L = 0.0;
    if (f.problem == "cosine") {
      obj = lyap::cosine_counterexample();
      x0 = lyap::detail::uniform_start(seed, 1, -2.0, 2.0);
      mu = *obj.mu;
      L = *obj.lipschitz;
    } else if (f.problem == "exp-norm") {
      obj = lyap::exp_norm_objective(f.dim.value_or(10));
      x0 = lyap::sample_start(Eigen::VectorXd::Zero(obj.dim), 0.5,
                              lyap::detail::derive_seed(seed, 1));
      mu = 2.0;
      L = std::exp(0.25) * 3.0;
    } else if (f.problem == "rosenbrock") {
      obj = lyap::rosenbrock_objective();
      x0 = Eigen::Vector2d(-1.2, 1.0);
      Eigen::Matrix2d hess;
      hess << 802.0, -400.0, -400.0, 200.0;  // Hessian at (1, 1)
      const auto eig = lyap::symmetric_eigendecomposition(hess);
      mu = eig.eigvals(0);
      L = eig.eigvals(1);
    } else {
      throw UsageError("unknown --problem " + f.problem);
    }
    if (f.mu) mu = *f.mu;
    if (f.L) L = *f.L;
    const auto spec = resolve_specs(f, kinds, mu, L).front();
    trace = lyap::run_trace(obj, spec, x0, opt, seed);
  }

  const auto report = lyap::check_monotone(trace->lyapunov);
  const auto dir = ensure_dir(f.out);
  const std::string stem = lyap::detail::file_tag(trace->method);
  lyap::export_csv(*trace, dir / (stem + "_trace.csv"), &report);
  lyap::render_svg({lyap::LinePanel{"V", {{std::string(trace->method.name()),
                                          trace->lyapunov.values}}}},
                   dir / (stem + "_lyapunov.svg"));

  std::cout << trace->method.name() << " on " << trace->problem << ": " << trace->size()
            << " iterates, final distance " << trace->distance.back()
            << (trace->diverged ? " (diverged)" : "") << '\n'
            << "V " << (report.monotone ? "monotone" : "NOT monotone") << ", "
            << report.violations.size() << " violations, max ratio " << report.max_ratio
            << '\n';
  if (cert) {
    lyap::write_certificate_report(std::cout, trace->method, *cert);
    std::ofstream csv(dir / (stem + "_certificate.csv"));
    lyap::write_certificate_csv(csv, *cert);
    if (cert->eligible && !report.monotone) {
      std::cerr << "error: eligible certificate but V increased\n";
      return kVerdictFailure;
    }
  }
  return kOk;
}

int cmd_scenario(const Flags& f) {
  if (f.scenario == "list") {
    for (const auto& e : lyap::scenario_catalog()) {
      std::cout << e.name << "\t" << e.summary << '\n';
    }
    return kOk;
  }
  std::vector<std::string> names;
  if (f.scenario == "all") {
    for (const auto& e : lyap::scenario_catalog()) names.emplace_back(e.name);
  } else {
    names.push_back(f.scenario);
  }
  bool all_passed = true;
  for (const auto& name : names) {
    lyap::ScenarioConfig cfg;
    try {
      cfg = lyap::scenario_defaults(name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (f.dim) cfg.dim = *f.dim;
    if (f.mu) cfg.mu = *f.mu;
    if (f.L) cfg.L = *f.L;
    if (f.iters) cfg.iters = *f.iters;
    if (f.seed) cfg.seed = *f.seed;
    if (!f.dims.empty()) cfg.dims = f.dims;
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.methods.empty()) cfg.methods = method_kinds(f, false);
    if (explicit_hyperparams(f)) {
      cfg.mode = lyap::HyperMode::Explicit;
      cfg.explicit_specs.clear();
      for (auto k : cfg.methods) {
        cfg.explicit_specs.emplace_back(k, *f.alpha, *f.beta, f.gamma.value_or(0.0));
      }
    } else if (f.optimal) {
      cfg.mode = lyap::HyperMode::Optimal;
      cfg.explicit_specs.clear();
    } else if (!f.methods.empty() && cfg.mode == lyap::HyperMode::Explicit) {
      std::vector<lyap::MethodSpec> kept;
      for (const auto& s : cfg.explicit_specs) {
        for (auto k : cfg.methods)
          if (s.kind() == k) kept.push_back(s);
      }
      cfg.explicit_specs = kept;
    }
    const auto result = lyap::run_scenario(cfg);
    lyap::write_scenario_summary(std::cout, result);
    all_passed = all_passed && result.passed();
  }
  return all_passed ? kOk : kVerdictFailure;
}

int cmd_check(const Flags& f) {
  if (f.csv.empty()) throw UsageError("check needs a trace CSV");
  const auto table = lyap::read_trace_csv(std::filesystem::path(f.csv), f.tol);
  if (table.lyapunov.values.empty()) throw UsageError(f.csv + ": no Lyapunov values");
  const auto report = lyap::check_monotone(table.lyapunov);
  std::cout << f.csv << ": " << table.lyapunov.values.size() << " V values, "
            << (report.monotone ? "monotone" : "NOT monotone") << '\n';
  for (std::size_t i = 0; i < report.violations.size() && i < 10; ++i) {
    const auto& v = report.violations[i];
    std::cout << "  k=" << v.index << "  V " << v.v_prev << " -> " << v.v_next
              << "  excess " << v.excess << '\n';
  }
  if (report.violations.size() > 10) {
    std::cout << "  ... " << report.violations.size() - 10 << " more\n";
  }
  return report.monotone ? kOk : kVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Lyapunov certificates for two-step momentum methods"};
  app.require_subcommand(1);
  Flags f;

  Bindings gen_b, ana_b, run_b, scn_b, chk_b;

  auto* gen = app.add_subcommand("generate", "random quadratic with an equally spaced spectrum");
  add_problem_flags(gen, f, gen_b);
  add_out_flag(gen, f, gen_b, "output directory");
  gen->add_option("--config", f.config, "key = value config file");

  auto* ana = app.add_subcommand("analyze", "spectral certificate for each method");
  add_problem_flags(ana, f, ana_b);
  add_method_flags(ana, f, ana_b);
  add_out_flag(ana, f, ana_b, "directory for certificate CSV/text");
  ana->add_option("--matrix", f.matrix, "CSV file holding a symmetric W");
  ana->add_option("--config", f.config, "key = value config file");

  auto* run = app.add_subcommand("run", "run one method and record a trace");
  add_problem_flags(run, f, run_b);
  add_method_flags(run, f, run_b);
  add_run_flags(run, f, run_b);
  add_out_flag(run, f, run_b, "output directory");
  run_b["problem"] = {run->add_option("--problem", f.problem,
                                      "quadratic | cosine | exp-norm | rosenbrock"),
                      [&f](const std::string& v) { f.problem = v; }};
  run->add_option("--tol", f.tol, "monotonicity tolerance");
  run->add_option("--config", f.config, "key = value config file");

  auto* scn = app.add_subcommand("scenario", "run a named scenario (list, all, fig1, ...)");
  scn->add_option("name", f.scenario, "scenario name")->required();
  add_problem_flags(scn, f, scn_b);
  add_method_flags(scn, f, scn_b);
  add_run_flags(scn, f, scn_b);
  add_out_flag(scn, f, scn_b, "output directory");
  scn_b["dims"] = {scn->add_option("--dims", f.dims, "sweep dimensions")->delimiter(','),
                   [&f](const std::string& v) {
                     f.dims.clear();
                     for (const auto& s : lyap::split_list(v))
                       f.dims.push_back(static_cast<int>(to_integer("dims", s)));
                   }};
  scn->add_option("--config", f.config, "key = value config file");

  auto* chk = app.add_subcommand("check", "verify V monotonicity in a trace CSV");
  chk->add_option("csv,--csv", f.csv, "trace CSV")->required();
  chk->add_option("--tol", f.tol, "monotonicity tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      apply_config(f, gen_b);
      return cmd_generate(f);
    }
    if (ana->parsed()) {
      apply_config(f, ana_b);
      return cmd_analyze(f);
    }
    if (run->parsed()) {
      apply_config(f, run_b);
      return cmd_run(f);
    }
    if (scn->parsed()) {
      apply_config(f, scn_b);
      return cmd_scenario(f);
    }
    if (chk->parsed()) return cmd_check(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
