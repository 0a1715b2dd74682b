#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "latwave/config.hpp"
#include "latwave/dispersion.hpp"
#include "latwave/error.hpp"
#include "latwave/experiments.hpp"
#include "latwave/leapfrog.hpp"

using namespace latwave;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfigError = 2;

struct Common {
  std::string config;
  std::string out;
  int levels = 0;
  int n = 0;
};

ExperimentConfig resolve(const std::string& id, const Common& o) {
  ExperimentConfig c = o.config.empty() ? default_config(id, o.n ? o.n : 1) : load_config(o.config);
  if (!o.config.empty() && o.n && o.n != c.n) {
    // --n re-derives the defaults in the new dimension, then reapplies the file
    std::ifstream in(o.config);
    std::ostringstream text;
    text << in.rdbuf();
    c = parse_config(text.str(), default_config(c.id, o.n));
    c.n = o.n;
  }
  if (o.levels > 0) c.levels = o.levels;
  if (!o.out.empty()) c.output_dir = o.out;
  return c;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_experiment(const std::string& id, const Common& o) {
  const auto config = resolve(id, o);
  if (config.id != id) throw Error(ErrorKind::Config, "config is for " + config.id + ", not " + id);
  const auto result = run_experiment(config);
  write_artifacts(result, config, config.output_dir);
  std::cout << result.report() << "artifacts in " << config.output_dir << "\n";
  return result.passed() ? kPass : kFail;
}

int cmd_solve(const Common& o) {
  const auto c = resolve("solve", o);
  const auto problem = DiscreteProblem::make(c.domain, c.base, c.f, c.g, c.h, c.w);
  const int N = c.base.time_steps();
  const auto field = LeapfrogSolver(problem).solve(Record::Window);
  std::filesystem::create_directories(c.output_dir);
  const auto dir = std::filesystem::path(c.output_dir);
  {
    std::ofstream dump(dir / "level_T.bin", std::ios::binary);
    write_level_dump(dump, field, N);
  }
  std::ofstream csv(dir / "solution.csv");
  if (!csv) throw Error(ErrorKind::Io, "cannot write " + (dir / "solution.csv").string());
  const auto& cls = field.classification();
  const auto points = cls.free_space ? cls.window_indices() : cls.support();
  for (int k = 0; k < c.n; ++k) csv << "x" << k << ",";
  csv << "v_minus_T,v_0,v_T\n";
  for (std::size_t i : points) {
    const Vec x = cls.position(i);
    for (int k = 0; k < c.n; ++k) csv << num(x[k]) << ",";
    csv << num(field.value(-N, i)) << "," << num(field.value(0, i)) << "," << num(field.value(N, i)) << "\n";
  }
  std::cout << "solved n=" << c.n << " dx=" << c.base.dx << " dt=" << c.base.dt << " T=" << c.base.T << " steps=" << N
            << "\nmax|v(T)| = " << field.max_abs(N) << "\nenergy(T - dt, T) = " << discrete_energy(field, N - 1)
            << "\noutput in " << c.output_dir << "\n";
  return kPass;
}

int cmd_dispersion(int n, double dx, double dt, int samples, const std::string& out) {
  const LatticeSpec spec{n, dx, dt, dt};
  if (!spec.satisfies_cfl()) throw Error(ErrorKind::Config, "dt/dx exceeds 1/sqrt(n)");
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw Error(ErrorKind::Io, "cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  for (int k = 0; k < n; ++k) os << "alpha" << k << ",";
  os << "beta,beta0,abs_alpha,phase_error\n";
  // along the lattice diagonal up to the zone corner
  for (int s = 0; s <= samples; ++s) {
    Vec alpha{};
    for (int k = 0; k < n; ++k) alpha[k] = std::numbers::pi / dx * s / samples;
    const double b = beta(alpha, spec), b0 = beta_semidiscrete(alpha, dx, n), a = norm(alpha, n);
    for (int k = 0; k < n; ++k) os << num(alpha[k]) << ",";
    os << num(b) << "," << num(b0) << "," << num(a) << "," << (a > 0 ? num(b / a - 1.0) : "0") << "\n";
  }
  return kPass;
}

int cmd_audit(std::size_t samples, std::size_t chain_samples, unsigned seed) {
  const auto bound = audit_propagator_bound(samples, seed);
  const auto chain = propagator_chain(chain_samples, seed + 2);
  const bool ok = bound.violations == 0 && chain.min_order_dt >= 1.9 && chain.min_order_dx >= 1.9;
  std::cout << "bound: " << bound.violations << " violations in " << bound.samples
            << " samples, max (value - T)/T = " << bound.worst << "\n"
            << "chain: min order dt " << chain.min_order_dt << ", dx " << chain.min_order_dx << " over "
            << chain.samples << " samples (" << chain.skipped << " skipped)\n"
            << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit lattice wave solver and convergence experiments"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--levels", common.levels, "refinement levels")->check(CLI::PositiveNumber);
    sub->add_option("--n", common.n, "space dimension")->check(CLI::Range(1, 3));
  };

  auto* solve = app.add_subcommand("solve", "run the leapfrog scheme for one configuration");
  add_common(solve);

  auto* experiment = app.add_subcommand("experiment", "run one of the experiments E1..E8");
  std::string id;
  experiment->add_option("id", id, "experiment id")->required()->check(
      CLI::IsMember({"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8"}));
  add_common(experiment);

  auto* dispersion = app.add_subcommand("dispersion", "tabulate the dispersion branch as CSV");
  int disp_n = 1, disp_samples = 64;
  double disp_dx = 0.1, disp_dt = 0.05;
  std::string disp_out;
  dispersion->add_option("--n", disp_n, "space dimension")->check(CLI::Range(1, 3));
  dispersion->add_option("--dx", disp_dx)->check(CLI::PositiveNumber);
  dispersion->add_option("--dt", disp_dt)->check(CLI::PositiveNumber);
  dispersion->add_option("--samples", disp_samples)->check(CLI::PositiveNumber);
  dispersion->add_option("--out", disp_out, "CSV path (stdout if omitted)");

  auto* audit = app.add_subcommand("audit-bounds", "propagator bound sweep and degeneration chain");
  std::size_t audit_samples = 10000, chain_samples = 100;
  unsigned seed = 20240601;
  audit->add_option("--samples", audit_samples);
  audit->add_option("--chain-samples", chain_samples);
  audit->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(common);
    if (*experiment) return cmd_experiment(id, common);
    if (*dispersion) return cmd_dispersion(disp_n, disp_dx, disp_dt, disp_samples, disp_out);
    if (*audit) return cmd_audit(audit_samples, chain_samples, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Config ? kConfigError : kFail;
  }
  return kConfigError;
}
