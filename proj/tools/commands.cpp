#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "relmech/derive_metric.hpp"
#include "relmech/duality.hpp"
#include "relmech/expression.hpp"
#include "relmech/lienard.hpp"
#include "relmech/lorentz.hpp"
#include "relmech/trajectory.hpp"
#include "relmech/version.hpp"

namespace relmech::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level_from_env() {
  const char* raw = std::getenv("RELMECH_LOG");
  if (!raw) return LogLevel::Warn;
  const std::string v(raw);
  if (v == "error" || v == "quiet") return LogLevel::Error;
  if (v == "info") return LogLevel::Info;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

class Logger {
 public:
  explicit Logger(std::ostream& sink) : sink_(sink), level_(log_level_from_env()) {}

  void log(LogLevel level, const std::string& message) {
    if (level > level_) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::lock_guard lock(mutex_);
    sink_ << "relmech [" << names[static_cast<int>(level)] << "] " << message << '\n';
  }

 private:
  std::ostream& sink_;
  LogLevel level_;
  std::mutex mutex_;
};

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "relmech_out";
  bool gnuplot = false;
  int jobs = 1;
};

struct Context {
  RunConfig cfg;
  fs::path out_dir;
  bool gnuplot = false;
  int jobs = 1;
  Logger* logger = nullptr;
  std::ostream* out = nullptr;
  json manifest = json::object();

  void artifact(const fs::path& path) { manifest["artifacts"].push_back(path.filename().string()); }
  void warn(const std::string& message) {
    manifest["warnings"].push_back(message);
    logger->log(LogLevel::Warn, message);
  }
};

// exit 2 for bad input, 1 for numerical failure
bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Stiffness:
    case ErrorKind::IntegratingFactor:
      return false;
    default:
      return true;
  }
}

std::ofstream open_output(Context& ctx, const std::string& name) {
  const fs::path path = ctx.out_dir / name;
  std::ofstream file(path);
  if (!file) fail(ErrorKind::Config, "cannot write '" + path.string() + "'");
  ctx.artifact(path);
  return file;
}

void write_json(Context& ctx, const std::string& name, const json& body) {
  auto file = open_output(ctx, name);
  file << body.dump(2) << '\n';
}

Vectord to_vector(const std::vector<double>& v) {
  Vectord out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

json drift_json(const IntegrationReport& report, int dim) {
  json drift = json::object();
  const auto& names = monitored_quantities();
  for (Eigen::Index i = 0; i < report.max_drift.size(); ++i) {
    if (names[i] == "angular_momentum" && dim < 2) continue;
    drift[names[i]] = report.max_drift[i];
  }
  return drift;
}

json report_json(const IntegrationReport& report) {
  json out{{"termination", std::string(to_string(report.termination))},
           {"steps", report.steps},
           {"rejected", report.rejected}};
  if (!report.message.empty()) out["message"] = report.message;
  if (report.offending) {
    out["offending_parameter"] = report.offending->t;
    std::vector<double> y(report.offending->y.data(), report.offending->y.data() + report.offending->y.size());
    out["offending_state"] = y;
  }
  return out;
}

int exit_for(const IntegrationReport& report) {
  switch (report.termination) {
    case Termination::Completed: return kExitOk;
    case Termination::GuardTripped: return kExitGuardTripped;
    case Termination::MaxSteps: return kExitFailure;
  }
  return kExitFailure;
}

// ---- shared config sections ------------------------------------------------

const std::set<std::string> kConstantsKeys{"c", "m", "G"};
const std::set<std::string> kIntegratorKeys{"method", "step", "rtol", "atol", "max_steps"};
const std::set<std::string> kOutputKeys{"span", "samples"};
const std::set<std::string> kSweepKeys{"parameter", "values"};

Constants<double> read_constants(const RunConfig& cfg) {
  const double c = cfg.number("constants", "c", 1.0);
  const double m = cfg.number("constants", "m", 1.0);
  const double G = cfg.number("constants", "G", 1.0);
  if (!(c > 0)) fail(ErrorKind::Config, cfg.where("constants", "c") + ": c must be > 0");
  if (!(m > 0)) fail(ErrorKind::Config, cfg.where("constants", "m") + ": m must be > 0");
  return {c, m, G};
}

IntegratorSpec read_integrator(const RunConfig& cfg) {
  IntegratorSpec spec;
  spec.method = parse_method(cfg.text("integrator", "method", "rkf45"));
  spec.step = cfg.number("integrator", "step", spec.step);
  spec.rtol = cfg.number("integrator", "rtol", spec.rtol);
  spec.atol = cfg.number("integrator", "atol", spec.atol);
  const long max_steps = cfg.integer("integrator", "max_steps", static_cast<long>(spec.max_steps));
  if (max_steps <= 0) fail(ErrorKind::Config, cfg.where("integrator", "max_steps") + ": must be > 0");
  spec.max_steps = static_cast<std::size_t>(max_steps);
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Config, std::string("[integrator] ") + e.what());
  }
  return spec;
}

struct SampleGrid {
  double span;
  std::size_t samples;
};

SampleGrid read_grid(const RunConfig& cfg, double default_span, double default_spacing = 0) {
  const double span = cfg.number("output", "span", default_span);
  const long fallback = default_spacing > 0 ? std::lround(std::ceil(span / default_spacing)) : 1000;
  const long samples = cfg.integer("output", "samples", fallback);
  if (!(span > 0) || !std::isfinite(span)) fail(ErrorKind::Config, cfg.where("output", "span") + ": must be > 0");
  if (samples <= 0) fail(ErrorKind::Config, cfg.where("output", "samples") + ": must be > 0");
  return {span, static_cast<std::size_t>(samples)};
}

std::vector<std::string> coordinate_names(int dim) {
  static const char* axes[] = {"x", "y", "z"};
  std::vector<std::string> names(axes, axes + dim);
  names.push_back("r");
  return names;
}

ScalarPotential<double> read_potential(Context& ctx, const Constants<double>& k, int dim) {
  const RunConfig& cfg = ctx.cfg;
  const std::string name = cfg.text("potential", "name", "free");
  if (name == "free") return free_potential<double>();
  if (name == "hooke") {
    const double kk = cfg.number("potential", "k", 1.0);
    if (!(kk > 0)) fail(ErrorKind::Config, cfg.where("potential", "k") + ": Hooke constant must be > 0");
    return hooke_potential(kk);
  }
  if (name == "kepler") {
    const double M = cfg.number("potential", "M", 1.0);
    if (!(k.G * M > 0)) fail(ErrorKind::Config, cfg.where("potential", "M") + ": G*M must be > 0");
    return kepler_potential(k.G, M, k.m);
  }
  if (name == "expression") {
    auto expr = std::make_shared<Expression>(cfg.text("potential", "expression"), coordinate_names(dim));
    ctx.warn("potential '" + expr->source() + "' uses a finite-difference gradient");
    return ScalarPotential<double>("expression: " + expr->source(), [expr](const Vectord& x) {
      double vars[4] = {0, 0, 0, 0};
      for (Eigen::Index i = 0; i < x.size(); ++i) vars[i] = x[i];
      vars[x.size()] = x.norm();
      return (*expr)(std::span<const double>(vars, static_cast<std::size_t>(x.size()) + 1));
    });
  }
  fail(ErrorKind::Config, cfg.where("potential", "name") + ": unknown potential '" + name +
                              "' (expected free, hooke, kepler or expression)");
}

EomForm default_form(LagrangianRegime regime) {
  switch (regime) {
    case LagrangianRegime::Relativistic: return EomForm::RelativisticCoordTime;
    case LagrangianRegime::Effective: return EomForm::Classical;
    case LagrangianRegime::SemiRelativistic: return EomForm::SemiRelativisticLowV;
    case LagrangianRegime::SemiRelativisticFull: return EomForm::SemiRelativistic;
    case LagrangianRegime::Classical: return EomForm::Classical;
  }
  return EomForm::RelativisticCoordTime;
}

void write_gnuplot(Context& ctx, const std::string& name, const std::string& body) {
  if (!ctx.gnuplot) return;
  auto file = open_output(ctx, name);
  file << "set datafile separator ','\nset key autotitle columnhead\n" << body;
}

// ---- sweeps ------------------------------------------------------------------

/// Runs `single` once per [sweep] value in its own subdirectory, up to
/// ctx.jobs at a time, and summarizes the runs in the parent manifest.
int run_sweep(Context& ctx, const std::function<int(Context&)>& single) {
  const std::string parameter = ctx.cfg.text("sweep", "parameter");
  const auto values = ctx.cfg.numbers("sweep", "values");
  if (parameter.find('.') == std::string::npos)
    fail(ErrorKind::Config, ctx.cfg.where("sweep", "parameter") + ": expected section.key");

  std::vector<json> results(values.size());
  std::vector<int> codes(values.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      Context sub;
      sub.cfg = ctx.cfg;
      std::ostringstream value;
      value << std::setprecision(17) << values[i];
      sub.cfg.set(parameter + "=" + value.str());
      std::ostringstream dir;
      dir << "run_" << std::setw(3) << std::setfill('0') << i;
      sub.out_dir = ctx.out_dir / dir.str();
      sub.gnuplot = ctx.gnuplot;
      sub.logger = ctx.logger;
      std::ostringstream discard;
      sub.out = &discard;
      int code = kExitFailure;
      try {
        fs::create_directories(sub.out_dir);
        code = single(sub);
      } catch (const Error& e) {
        code = is_validation_error(e.kind()) ? kExitValidation : kExitFailure;
        sub.manifest["message"] = e.what();
      } catch (const std::exception& e) {
        sub.manifest["message"] = e.what();
      }
      sub.manifest["exit_code"] = code;
      sub.manifest["config"] = sub.cfg.echo();
      sub.manifest["version"] = kVersion;
      std::ofstream(sub.out_dir / "manifest.json") << sub.manifest.dump(2) << '\n';
      codes[i] = code;
      results[i] = {{"value", values[i]}, {"directory", dir.str()}, {"exit_code", code}};
      if (sub.manifest.contains("drift")) results[i]["drift"] = sub.manifest["drift"];
      ctx.logger->log(LogLevel::Info, "sweep " + parameter + " = " + value.str() + " exit " + std::to_string(code));
    }
  };
  const int jobs = std::max(1, std::min<int>(ctx.jobs, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ctx.manifest["sweep"] = {{"parameter", parameter}, {"jobs", jobs}, {"runs", results}};
  int worst = kExitOk;
  for (int code : codes) worst = std::max(worst, code);
  return worst;
}

// ---- subcommands -------------------------------------------------------------

const Schema kSimulateSchema{
    {"constants", kConstantsKeys},
    {"potential", {"name", "k", "M", "expression"}},
    {"system", {"dim", "form", "regime"}},
    {"initial", {"x", "v"}},
    {"integrator", kIntegratorKeys},
    {"output", kOutputKeys},
    {"sweep", kSweepKeys},
};

int simulate_once(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Constants<double> k = read_constants(cfg);
  const Vectord x0 = to_vector(cfg.numbers("initial", "x"));
  const Vectord v0 = to_vector(cfg.numbers("initial", "v"));
  const int dim = static_cast<int>(cfg.integer("system", "dim", static_cast<long>(x0.size())));
  if (dim < 1 || dim > 3) fail(ErrorKind::Config, cfg.where("system", "dim") + ": must be 1, 2 or 3");
  if (x0.size() != dim || v0.size() != dim)
    fail(ErrorKind::Config, "[initial] x and v must both have " + std::to_string(dim) + " components");

  const LagrangianRegime regime = parse_regime(cfg.text("system", "regime", "relativistic"));
  const EomForm form = cfg.has("system", "form") ? parse_form(cfg.text("system", "form")) : default_form(regime);
  const StaticMetric<double> metric(read_potential(ctx, k, dim), k, dim);
  const IntegratorSpec spec = read_integrator(cfg);
  const SampleGrid grid = read_grid(cfg, 10.0);

  // the initial state must sit strictly inside the form's speed bound
  const ParticleStated initial{0, x0, v0};
  const double g00 = metric_g00(metric, x0);
  if (form == EomForm::SemiRelativistic || form == EomForm::SemiRelativisticLowV || form == EomForm::HamiltonianWeak) {
    if (!(v0.norm() < k.c))
      fail(ErrorKind::SpeedLimitExceeded, "[initial] v: |v0| = " + std::to_string(v0.norm()) +
                                              " violates the speed limit |v| < c = " + std::to_string(k.c));
  } else if (!is_admissible(initial, metric)) {
    const double limit = g00 > 0 ? k.c * std::sqrt(g00) : 0.0;
    fail(ErrorKind::SpeedLimitExceeded, "[initial] v: |v0| = " + std::to_string(v0.norm()) +
                                            " violates the speed limit |v| < c*sqrt(g00(x0)) = " +
                                            std::to_string(limit));
  }

  ctx.manifest["system"] = {{"form", std::string(to_string(form))},
                            {"regime", std::string(to_string(regime))},
                            {"potential", metric.potential().label()},
                            {"analytic_gradient", metric.potential().analytic_gradient()},
                            {"dim", dim}};
  ctx.logger->log(LogLevel::Info, "simulate " + std::string(to_string(form)) + " over " + std::to_string(grid.span));
  const auto sim = simulate(form, metric, initial, grid.span, spec, grid.samples);

  {
    auto csv = open_output(ctx, "trajectory.csv");
    write_csv(csv, sim.trajectory);
  }
  write_gnuplot(ctx, "plot.gp",
                dim >= 2 ? "set size ratio -1\nplot 'trajectory.csv' using 3:4 with lines\n"
                         : "plot 'trajectory.csv' using 1:3 with lines\n");
  ctx.manifest["integration"] = report_json(sim.report);
  ctx.manifest["drift"] = drift_json(sim.report, dim);
  if (!sim.report.completed()) ctx.warn("integration stopped: " + std::string(to_string(sim.report.termination)) +
                                        (sim.report.message.empty() ? "" : ": " + sim.report.message));
  return exit_for(sim.report);
}

int cmd_simulate(Context& ctx) {
  ctx.cfg.check(kSimulateSchema);
  if (ctx.cfg.has("sweep", "parameter")) return run_sweep(ctx, simulate_once);
  return simulate_once(ctx);
}

const Schema kBoostSchema{{"boost", {"g00", "beta", "dim"}}};

int cmd_boost(Context& ctx) {
  ctx.cfg.check(kBoostSchema);
  const RunConfig& cfg = ctx.cfg;
  const double g00 = cfg.number("boost", "g00", 1.0);
  const double beta = cfg.number("boost", "beta", 0.0);
  const long dim = cfg.integer("boost", "dim", 2);
  if (dim != 2 && dim != 4) fail(ErrorKind::Config, cfg.where("boost", "dim") + ": must be 2 or 4");
  const auto boost = build_boost(g00, beta, static_cast<int>(dim));
  json matrix = json::array();
  for (Eigen::Index i = 0; i < boost.size(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < boost.size(); ++j) row.push_back(boost.entries(i, j));
    matrix.push_back(row);
  }
  const json body{{"g00", g00},
                  {"beta", beta},
                  {"gamma", boost.gamma},
                  {"matrix", matrix},
                  {"determinant", boost.entries.determinant()},
                  {"invariance_residual", verify_invariance(boost)}};
  *ctx.out << body.dump(2) << '\n';
  write_json(ctx, "boost.json", body);
  ctx.manifest["result"] = body;
  return kExitOk;
}

const Schema kRedshiftSchema{{"redshift", {"r", "r0", "nu_inf", "r2"}}};

int cmd_redshift(Context& ctx) {
  ctx.cfg.check(kRedshiftSchema);
  const RunConfig& cfg = ctx.cfg;
  const double r = cfg.number("redshift", "r");
  const double r0 = cfg.number("redshift", "r0", 1.0);
  const double nu_inf = cfg.number("redshift", "nu_inf", 1.0);
  const auto exact = redshift(r, r0, nu_inf);
  json body{{"r", r},
            {"r0", r0},
            {"nu_inf", nu_inf},
            {"nu", exact.nu},
            {"delta_nu", exact.delta_nu},
            {"weak_field_delta_nu", weak_field_redshift(r, r0, nu_inf)}};
  if (cfg.has("redshift", "r2")) {
    const double r2 = cfg.number("redshift", "r2");
    body["r2"] = r2;
    body["ratio"] = redshift_ratio(r, r2, r0);
  }
  *ctx.out << body.dump(2) << '\n';
  write_json(ctx, "redshift.json", body);
  ctx.manifest["result"] = body;
  return kExitOk;
}

const Schema kDualitySchema{
    {"constants", kConstantsKeys},
    {"potential", {"k"}},
    {"initial", {"x", "v"}},
    {"duality", {"form", "tau_step", "h_drift_tolerance"}},
    {"integrator", kIntegratorKeys},
    {"output", kOutputKeys},
};

int cmd_duality(Context& ctx) {
  ctx.cfg.check(kDualitySchema);
  const RunConfig& cfg = ctx.cfg;
  const Constants<double> k = read_constants(cfg);
  const double spring = cfg.number("potential", "k", 1.0);
  if (!(spring > 0)) fail(ErrorKind::Config, cfg.where("potential", "k") + ": must be > 0");
  const auto x0 = cfg.numbers("initial", "x");
  const auto v0 = cfg.numbers("initial", "v");
  if (x0.size() != 2 || v0.size() != 2) fail(ErrorKind::Config, "[initial] x and v must be planar (2 components)");
  const EomForm form = parse_form(cfg.text("duality", "form", "semi_relativistic_low_v"));
  if (!is_proper_time_form(form))
    fail(ErrorKind::Config, cfg.where("duality", "form") + ": must be a proper-time form");
  DualityOptions options;
  options.tau_step = cfg.number("duality", "tau_step", options.tau_step);
  options.h_drift_tolerance = cfg.number("duality", "h_drift_tolerance", options.h_drift_tolerance);
  IntegratorSpec spec = read_integrator(cfg);
  if (!cfg.has("integrator", "rtol")) spec.rtol = 1e-12;
  if (!cfg.has("integrator", "atol")) spec.atol = 1e-14;
  const SampleGrid grid = read_grid(cfg, 4 * std::numbers::pi, 1e-3);

  const CentralParams params{spring, 1.0, k.m, k.c};
  const auto oscillator =
      oscillator_trajectory(form, params, {x0[0], x0[1]}, {v0[0], v0[1]}, grid.span, grid.samples, spec);
  const auto report = verify_duality(oscillator, k.m, spring, options);

  {
    auto csv = open_output(ctx, "oscillator.csv");
    csv << "proper_time[time],x[length],y[length],vx[length/time],vy[length/time]\n" << std::setprecision(17);
    for (const auto& s : report.oscillator)
      csv << s.time << ',' << s.z.real() << ',' << s.z.imag() << ',' << s.w.real() << ',' << s.w.imag() << '\n';
  }
  {
    auto csv = open_output(ctx, "kepler.csv");
    csv << "tau[time],xi_re[length^2],xi_im[length^2],xi_prime_re[length^2/time],xi_prime_im[length^2/time],"
           "xi_second_re[length^2/time^2],xi_second_im[length^2/time^2],residual[length^2/time^2]\n"
        << std::setprecision(17);
    for (const auto& s : report.kepler)
      csv << s.tau << ',' << s.xi.real() << ',' << s.xi.imag() << ',' << s.xi_prime.real() << ','
          << s.xi_prime.imag() << ',' << s.xi_second.real() << ',' << s.xi_second.imag() << ',' << s.residual
          << '\n';
  }
  write_gnuplot(ctx, "plot.gp",
                "set size ratio -1\nplot 'oscillator.csv' using 2:3 with lines, 'kepler.csv' using 2:3 with lines\n");
  const json body{{"form", std::string(to_string(form))},
                  {"kappa", report.kappa},
                  {"h_initial", report.h_initial},
                  {"h_drift", report.h_drift},
                  {"max_residual", report.max_residual},
                  {"oscillator_samples", report.oscillator.size()},
                  {"kepler_samples", report.kepler.size()}};
  *ctx.out << body.dump(2) << '\n';
  write_json(ctx, "duality.json", body);
  ctx.manifest["result"] = body;
  ctx.manifest["drift"] = {{"semi_hamiltonian", report.h_drift}};
  return kExitOk;
}

const Schema kLienardSchema{
    {"constants", kConstantsKeys},
    {"lienard", {"f", "g", "alpha", "probe_lo", "probe_hi"}},
    {"initial", {"x", "v"}},
    {"integrator", kIntegratorKeys},
    {"output", kOutputKeys},
    {"sweep", kSweepKeys},
};

int lienard_once(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Constants<double> k = read_constants(cfg);
  auto f = std::make_shared<Expression>(cfg.text("lienard", "f", "2"), std::vector<std::string>{"x"});
  auto g = std::make_shared<Expression>(cfg.text("lienard", "g", "x"), std::vector<std::string>{"x"});
  LienardSystem system{[f](double x) { return (*f)(x); },
                       [g](double x) { return (*g)(x); },
                       cfg.number("lienard", "alpha", -0.5),
                       k.c,
                       k.m,
                       f->source(),
                       g->source()};
  const double x0 = cfg.number("initial", "x", 1.0);
  const double v0 = cfg.number("initial", "v", 0.0);
  if (!(std::abs(v0) < k.c))
    fail(ErrorKind::SpeedLimitExceeded, "[initial] v: |v0| = " + std::to_string(std::abs(v0)) +
                                            " violates the speed limit |v| < c = " + std::to_string(k.c));
  IntegratorSpec spec = read_integrator(cfg);
  if (!cfg.has("integrator", "rtol")) spec.rtol = 1e-12;
  if (!cfg.has("integrator", "atol")) spec.atol = 1e-30;
  const SampleGrid grid = read_grid(cfg, 50.0);

  const double lo = cfg.number("lienard", "probe_lo", std::min(-std::abs(x0), -1.0));
  const double hi = cfg.number("lienard", "probe_hi", std::max(std::abs(x0), 1.0));
  const double mismatch = chiellini_mismatch(system, lo, hi);
  if (mismatch > 1e-9) ctx.warn("classical Chiellini condition fails on the probe interval: " + std::to_string(mismatch));

  const auto run = integrate_lienard(system, x0, v0, grid.span, grid.samples, spec);
  const auto metric = damped_metric(system);
  const auto einstein = einstein_consistency(metric, run.samples);
  {
    auto csv = open_output(ctx, "trajectory.csv");
    write_csv(csv, run.samples);
  }
  write_gnuplot(ctx, "plot.gp", "plot 'trajectory.csv' using 1:3 with lines\n");

  json metric_samples = json::array();
  for (int i = 0; i <= 20; ++i) {
    const double x = lo + (hi - lo) * i / 20.0;
    metric_samples.push_back({{"x", x}, {"U", metric.potential(x)}, {"g00", metric.g00(x)}});
  }
  const json body{{"f", f->source()},
                  {"g", g->source()},
                  {"alpha", system.alpha},
                  {"chiellini_factor", system.chiellini_factor()},
                  {"chiellini_mismatch", mismatch},
                  {"first_integral_initial", run.samples.front().first_integral},
                  {"first_integral_drift", run.max_drift},
                  {"einstein_mismatch", einstein.max_mismatch},
                  {"einstein_consistent", einstein.consistent},
                  {"metric_samples", metric_samples}};
  write_json(ctx, "metric.json", body);
  ctx.manifest["integration"] = report_json(run.report);
  ctx.manifest["drift"] = {{"first_integral", run.max_drift}};
  return exit_for(run.report);
}

int cmd_lienard(Context& ctx) {
  ctx.cfg.check(kLienardSchema);
  if (ctx.cfg.has("sweep", "parameter")) return run_sweep(ctx, lienard_once);
  return lienard_once(ctx);
}

const Schema kDeriveSchema{
    {"constants", kConstantsKeys},
    {"derive", {"acceleration", "reference", "lower", "upper", "samples", "seed"}},
};

int cmd_derive_metric(Context& ctx) {
  ctx.cfg.check(kDeriveSchema);
  const RunConfig& cfg = ctx.cfg;
  const Constants<double> k = read_constants(cfg);
  const Vectord lower = to_vector(cfg.numbers("derive", "lower"));
  const Vectord upper = to_vector(cfg.numbers("derive", "upper"));
  const int dim = static_cast<int>(lower.size());
  if (dim < 1 || dim > 3 || upper.size() != dim)
    fail(ErrorKind::Config, cfg.where("derive", "upper") + ": bounds must have matching dimension 1 to 3");

  // one expression per component, separated by ';'
  std::vector<std::shared_ptr<Expression>> components;
  std::istringstream parts(cfg.text("derive", "acceleration"));
  std::string part;
  while (std::getline(parts, part, ';'))
    components.push_back(std::make_shared<Expression>(part, coordinate_names(dim)));
  if (static_cast<int>(components.size()) != dim)
    fail(ErrorKind::Config, cfg.where("derive", "acceleration") + ": expected " + std::to_string(dim) +
                                " components separated by ';'");
  const AccelerationField field = [components](const Vectord& x) -> Vectord {
    double vars[4] = {0, 0, 0, 0};
    for (Eigen::Index i = 0; i < x.size(); ++i) vars[i] = x[i];
    vars[x.size()] = x.norm();
    const std::span<const double> view(vars, static_cast<std::size_t>(x.size()) + 1);
    Vectord a(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) a[i] = (*components[static_cast<std::size_t>(i)])(view);
    return a;
  };

  const std::string ref = cfg.text("derive", "reference", "origin");
  MetricReference reference;
  if (ref == "infinity") reference = MetricReference::infinity();
  else if (ref != "origin") fail(ErrorKind::Config, cfg.where("derive", "reference") + ": expected origin or infinity");
  const long samples = cfg.integer("derive", "samples", 100);
  if (samples <= 0) fail(ErrorKind::Config, cfg.where("derive", "samples") + ": must be > 0");
  const ProbeDomain domain{lower, upper, static_cast<std::size_t>(samples),
                           static_cast<unsigned>(cfg.integer("derive", "seed", 1))};

  const auto derived = derive_metric_from_eom(field, k, domain, reference);
  {
    auto csv = open_output(ctx, "metric.csv");
    static const char* axes[] = {"x", "y", "z"};
    for (int i = 0; i < dim; ++i) csv << axes[i] << "[length],";
    csv << "U[mass*length^2/time^2],g00[1]\n" << std::setprecision(17);
    for (const auto& s : derived.samples) {
      for (int i = 0; i < dim; ++i) csv << s.x[i] << ',';
      csv << s.potential << ',' << s.g00 << '\n';
    }
  }
  const json body{{"reference", ref},
                  {"samples", derived.samples.size()},
                  {"max_path_mismatch", derived.max_path_mismatch},
                  {"quadrature_rtol", kDeriveQuadratureRtol}};
  *ctx.out << body.dump(2) << '\n';
  ctx.manifest["result"] = body;
  return kExitOk;
}

// ---- dispatch ------------------------------------------------------------------

int execute(const std::string& name, const Options& opts, const std::vector<std::string>& extra_overrides,
            std::ostream& out, std::ostream& err) {
  Logger logger(err);
  Context ctx;
  ctx.logger = &logger;
  ctx.out = &out;
  ctx.out_dir = opts.out_dir;
  ctx.gnuplot = opts.gnuplot;
  ctx.jobs = opts.jobs;
  ctx.manifest["tool"] = "relmech";
  ctx.manifest["version"] = kVersion;
  ctx.manifest["subcommand"] = name;
  ctx.manifest["artifacts"] = json::array();
  ctx.manifest["warnings"] = json::array();

  static const std::map<std::string, std::function<int(Context&)>> commands{
      {"simulate", cmd_simulate}, {"boost", cmd_boost},     {"redshift", cmd_redshift},
      {"duality", cmd_duality},   {"lienard", cmd_lienard}, {"derive-metric", cmd_derive_metric},
  };

  const auto start = std::chrono::steady_clock::now();
  int code = kExitFailure;
  try {
    fs::create_directories(ctx.out_dir);
    if (!opts.config_path.empty()) ctx.cfg = RunConfig::load(opts.config_path);
    for (const auto& o : opts.overrides) ctx.cfg.set(o);
    for (const auto& o : extra_overrides) ctx.cfg.set(o);
    code = commands.at(name)(ctx);
  } catch (const Error& e) {
    code = is_validation_error(e.kind()) ? kExitValidation : kExitFailure;
    ctx.manifest["message"] = e.what();
    ctx.manifest["error_kind"] = std::string(to_string(e.kind()));
    logger.log(LogLevel::Error, e.what());
  } catch (const std::exception& e) {
    code = kExitFailure;
    ctx.manifest["message"] = e.what();
    logger.log(LogLevel::Error, e.what());
  }
  ctx.manifest["exit_code"] = code;
  ctx.manifest["config"] = ctx.cfg.echo();
  ctx.manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  std::ofstream manifest(ctx.out_dir / "manifest.json");
  if (manifest) manifest << ctx.manifest.dump(2) << '\n';
  else logger.log(LogLevel::Error, "cannot write manifest to " + ctx.out_dir.string());
  return code;
}

std::string number_text(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"relmech: metric-derived relativistic mechanics", "relmech"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options opts;
  auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("-c,--config", opts.config_path, "INI run configuration")->check(CLI::ExistingFile);
    sub->add_option("--set", opts.overrides, "override a config key, section.key=value");
    sub->add_option("-o,--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_flag("--gnuplot", opts.gnuplot, "also write a gnuplot script");
    sub->add_option("-j,--jobs", opts.jobs, "parallel runs for a [sweep]")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "integrate one particle trajectory");
  add_common(simulate);

  std::optional<double> g00, beta, r, r0, nu_inf, r2;
  std::optional<int> boost_dim;
  auto* boost = app.add_subcommand("boost", "modified local Lorentz boost at a given g00");
  add_common(boost);
  boost->add_option("--g00", g00, "metric coefficient at the anchor");
  boost->add_option("--beta", beta, "frame speed ratio");
  boost->add_option("--dim", boost_dim, "matrix size, 2 or 4");

  auto* shift = app.add_subcommand("redshift", "gravitational redshift outside a mass");
  add_common(shift);
  shift->add_option("--r", r, "emitter radius");
  shift->add_option("--r0", r0, "GM/c^2");
  shift->add_option("--nu-inf", nu_inf, "frequency at infinity");
  shift->add_option("--r2", r2, "second radius for the frequency ratio");

  auto* duality = app.add_subcommand("duality", "Bohlin map of an oscillator orbit onto a Kepler orbit");
  add_common(duality);
  auto* lienard = app.add_subcommand("lienard", "relativistic Lienard oscillator and its first integral");
  add_common(lienard);
  auto* derive = app.add_subcommand("derive-metric", "reconstruct g00 from an acceleration field");
  add_common(derive);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "relmech: " << e.what() << '\n';
    return kExitValidation;
  }

  std::vector<std::string> flags;
  auto flag = [&flags](const char* key, const auto& value) {
    if (value) flags.push_back(std::string(key) + "=" + number_text(static_cast<double>(*value)));
  };
  flag("boost.g00", g00);
  flag("boost.beta", beta);
  if (boost_dim) flags.push_back("boost.dim=" + std::to_string(*boost_dim));
  flag("redshift.r", r);
  flag("redshift.r0", r0);
  flag("redshift.nu_inf", nu_inf);
  flag("redshift.r2", r2);

  for (auto* sub : app.get_subcommands()) return execute(sub->get_name(), opts, flags, out, err);
  return kExitValidation;
}

}  // namespace relmech::cli
