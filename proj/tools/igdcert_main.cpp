// Command-line front end: certify single specs, sweep parameter grids,
// simulate adversarial runs, and cross-verify certificates end to end.
//
// Exit codes: 0 success, 1 usage error, 2 not certifiable, 3 verification
// failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "igdcert/certify.hpp"
#include "igdcert/io.hpp"
#include "igdcert/rates.hpp"
#include "igdcert/sim.hpp"

namespace {

using namespace igdcert;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotCertifiable = 2;
constexpr int kExitVerifyFailure = 3;

struct SpecFlags {
  double m = 1.0;
  double L = 10.0;
  double alpha = 0.0;
  double alpha_frac = 0.0;
  double delta = 0.0;
  std::string cls = "sector";
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f, bool with_class) {
  cmd->add_option("--m", f.m, "lower sector/convexity modulus (> 0)")->required();
  cmd->add_option("--L", f.L, "upper modulus / Lipschitz constant (> m)")->required();
  auto* a = cmd->add_option("--alpha", f.alpha, "step size (> 0)");
  auto* af = cmd->add_option("--alpha-frac", f.alpha_frac,
                             "step size as a multiple of 2/(L+m)");
  a->excludes(af);
  cmd->add_option("--delta", f.delta, "relative noise level in [0,1)");
  if (with_class)
    cmd->add_option("--class", f.cls, "function class: sector | strongly-convex")
        ->check(CLI::IsMember({"sector", "strongly-convex"}));
}

ProblemSpec make_spec(const SpecFlags& f) {
  double alpha = f.alpha;
  if (f.alpha_frac > 0.0) alpha = f.alpha_frac * 2.0 / (f.L + f.m);
  return {f.m, f.L, alpha, f.delta};
}

FunctionClass parse_class(const std::string& s) {
  return s == "strongly-convex" ? FunctionClass::StronglyConvex : FunctionClass::Sector;
}

int cmd_certify(const SpecFlags& flags, std::optional<double> rho_query, bool outside_window) {
  const ProblemSpec spec = make_spec(flags);
  const FunctionClass cls = parse_class(flags.cls);

  if (rho_query) {
    // decision mode: is the given rate certifiable?
    std::optional<Certificate> cert;
    if (cls == FunctionClass::StronglyConvex) {
      cert = certify_strongly_convex(spec, outside_window);
      if (cert && cert->rho > *rho_query + 1e-12) cert.reset();
      if (!cert) cert = certify_sector_noisy(spec, *rho_query);
    } else {
      cert = certify_sector_noisy(spec, *rho_query);
    }
    std::ostringstream os;
    os << "{\"certified\":" << (cert ? "true" : "false");
    if (cert) os << ",\"certificate\":" << certificate_to_json(*cert);
    os << "}";
    std::cout << os.str() << "\n";
    return cert ? kExitOk : kExitNotCertifiable;
  }

  const RateRegime regime = classify_regime(spec, cls);
  std::optional<Certificate> cert;
  if (cls == FunctionClass::StronglyConvex)
    cert = certify_strongly_convex(spec, outside_window);
  else
    cert = rho_star_sector(spec);
  if (!cert) {
    std::cout << "{\"certified\":false,\"regime\":\"" << regime_name(regime.kind) << "\"}\n";
    return kExitNotCertifiable;
  }
  std::ostringstream os;
  os << "{\"certified\":true,\"regime\":\"" << regime_name(regime.kind)
     << "\",\"divergent\":" << (cert->rho >= 1.0 ? "true" : "false")
     << ",\"rho_star\":" << format_g17(cert->rho)
     << ",\"certificate\":" << certificate_to_json(*cert) << "}";
  std::cout << os.str() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "sweep: cannot open config file " << config_path << "\n";
    return kExitUsage;
  }
  const SweepConfig cfg = parse_sweep_config(in);
  if (out_path.empty() || out_path == "-") {
    run_sweep(cfg, std::cout);
    return kExitOk;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "sweep: cannot open output file " << out_path << "\n";
    return kExitUsage;
  }
  run_sweep(cfg, out);
  return kExitOk;
}

struct SimulateFlags {
  std::string function = "quadratic-gain";
  double gain = 0.0;
  std::string spectrum;
  std::string breakpoints;
  double omega = 50.0;
  std::string policy = "zero";
  int steps = 500;
  std::uint64_t seed = 0;
  std::string x0 = "1";
  std::string out_csv;
};

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

TestFunction make_function(const SimulateFlags& f, const ProblemSpec& spec) {
  if (f.function == "quadratic-gain" || f.function == "quadratic") {
    const double k = f.gain > 0.0 ? f.gain : spec.L;
    return TestFunction::quadratic_gain(k, spec.m, spec.L, 1);
  }
  if (f.function == "diagonal-quadratic" || f.function == "diag") {
    std::vector<double> sp =
        f.spectrum.empty() ? std::vector<double>{spec.m, 0.5 * (spec.m + spec.L), spec.L}
                           : parse_csv_doubles(f.spectrum);
    return TestFunction::diagonal_quadratic(std::move(sp), spec.m, spec.L);
  }
  if (f.function == "slope-zigzag" || f.function == "zigzag") {
    std::vector<double> bp = f.breakpoints.empty() ? std::vector<double>{0.5, 1.5, 3.0}
                                                   : parse_csv_doubles(f.breakpoints);
    return TestFunction::slope_zigzag(std::move(bp), spec.m, spec.L);
  }
  if (f.function == "gain-oscillator" || f.function == "oscillator")
    return TestFunction::gain_oscillator(f.omega, spec.m, spec.L);
  throw CLI::ValidationError("--function", "unknown function kind " + f.function);
}

int cmd_simulate(const SpecFlags& flags, const SimulateFlags& sim) {
  const ProblemSpec spec = make_spec(flags);
  const FunctionClass cls = parse_class(flags.cls);
  const TestFunction fn = make_function(sim, spec);
  const auto policy = NoisePolicy::parse(sim.policy, spec.delta, sim.seed);
  if (!policy) {
    std::cerr << "simulate: unknown policy " << sim.policy << "\n";
    return kExitUsage;
  }
  std::vector<double> x0 = parse_csv_doubles(sim.x0);
  if (x0.size() == 1 && fn.dim > 1) x0.assign(fn.dim, x0[0]);
  const Trajectory traj = run_inexact_gd(fn, x0, spec.alpha, *policy, sim.steps);

  std::optional<Certificate> cert;
  if (cls == FunctionClass::StronglyConvex)
    cert = certify_strongly_convex(spec);
  else
    cert = rho_star_sector(spec);
  const double certified = cert ? cert->rho : std::numeric_limits<double>::infinity();

  double emp;
  bool sound;
  if (traj.diverged) {
    emp = std::numeric_limits<double>::infinity();
    sound = certified >= 1.0;
  } else {
    emp = empirical_rate(traj, 20).rate;
    sound = emp <= certified + 1e-3;
  }

  if (!sim.out_csv.empty()) {
    std::ofstream out(sim.out_csv);
    if (!out) {
      std::cerr << "simulate: cannot open output file " << sim.out_csv << "\n";
      return kExitUsage;
    }
    write_trajectory_csv(out, traj);
  } else {
    write_trajectory_csv(std::cout, traj);
  }

  std::ostringstream os;
  os << "{\"function\":\"" << fn.kind_name() << "\",\"policy\":\"" << policy->kind_name()
     << "\",\"seed\":" << sim.seed << ",\"steps\":" << sim.steps
     << ",\"diverged\":" << (traj.diverged ? "true" : "false") << ",\"empirical_rate\":"
     << (std::isfinite(emp) ? format_g17(emp) : "null")
     << ",\"certified_rate\":" << (cert ? format_g17(certified) : "null")
     << ",\"envelope_constant\":"
     << (cert && !traj.diverged ? format_g17(empirical_envelope_constant(traj, certified))
                                : "null")
     << ",\"sound\":" << (sound ? "true" : "false") << "}";
  std::cout << os.str() << "\n";
  return kExitOk;
}

int cmd_verify(const SpecFlags& flags, const std::string& inject_fault) {
  const ProblemSpec spec = make_spec(flags);
  const FunctionClass cls = parse_class(flags.cls);
  auto fail = [](const std::string& stage) {
    std::cerr << "verify: stage '" << stage << "' failed\n";
    std::cout << "{\"ok\":false,\"stage\":\"" << stage << "\"}\n";
    return kExitVerifyFailure;
  };

  // 1. closed form vs bisection agreement
  const RateRegime regime = classify_regime(spec, cls);
  std::optional<Certificate> cert;
  if (cls == FunctionClass::StronglyConvex)
    cert = certify_strongly_convex(spec);
  else
    cert = rho_star_sector(spec);
  if (!cert) return fail("certificate");
  if (regime.certifiable() && std::abs(cert->rho - regime.certified_rho) > 1e-8)
    return fail("closed-form-agreement");
  if (cls == FunctionClass::Sector) {
    const auto bisect = rho_star_sector(spec);
    if (!bisect || std::abs(bisect->rho - regime.certified_rho) > 1e-8)
      return fail("closed-form-agreement");
  }

  // 2. endpoint identities (perfect squares of the specialized polynomials)
  if (spec.delta > 0.0) {
    for (double lambda : {0.3, 1.7, 9.0}) {
      const double a = spec.alpha, d = spec.delta, m = spec.m, L = spec.L;
      const double t1 = 1.0 - a * m * (1.0 - d);
      const double sq1 = L + m * (d * d * lambda - d * lambda - 1.0);
      if (std::abs(f_sector(t1, lambda, spec) + a * a * sq1 * sq1) >
          1e-10 * fdi_scale(spec, lambda))
        return fail("endpoint-identities");
      const double t2 = 1.0 - a * L * (1.0 + d);
      const double sq2 = m + L * (d * d * lambda + d * lambda - 1.0);
      if (std::abs(f_sector(t2, lambda, spec) + a * a * sq2 * sq2) >
          1e-10 * fdi_scale(spec, lambda))
        return fail("endpoint-identities");
    }
  }

  // 3. minimal-stability witness accompanies the certificate
  if (!cert->witness) return fail("minimal-stability");
  const auto witness_check = minimal_stability_witness(
      spec, cert->kind, cert->rho, cert->gamma.value_or(0.0));
  if (!witness_check) return fail("minimal-stability");

  // 4. scalar dissipation search slightly above the certified rate
  const double rho_chk = cert->rho + 1e-3;
  const auto p = dissipation_search_scalar(spec, rho_chk, cert->kind);
  if (!p) return fail("dissipation");

  // 5. Lyapunov decay over zoo functions x policies
  Mat p_used = *p;
  if (inject_fault == "lyapunov") p_used = -1.0 * p_used;  // test hook
  const auto mult = certificate_multipliers(spec, rho_chk, cert->kind);
  if (!mult) return fail("dissipation");
  const Mat c1 = Mat::identity(1);
  BlockIqc m_aug = [&]() {
    if (cert->kind == CertificateKind::OffByOneNoisy)
      return noise_augment(off_by_one_matrix(c1, spec.m, spec.L, mult->gamma), spec.delta,
                           mult->lambda)
          .M;
    if (cert->kind == CertificateKind::SectorNoisy)
      return noise_augment(sector_matrix(c1, spec.m, spec.L), spec.delta, mult->lambda).M;
    return sector_matrix(c1, spec.m, spec.L);
  }();
  std::vector<TestFunction> zoo;
  zoo.push_back(TestFunction::quadratic_gain(0.5 * (spec.m + spec.L), spec.m, spec.L));
  zoo.push_back(TestFunction::slope_zigzag({0.5, 1.5, 3.0}, spec.m, spec.L));
  if (cls == FunctionClass::Sector)
    zoo.push_back(TestFunction::gain_oscillator(50.0, spec.m, spec.L));
  else
    zoo.push_back(TestFunction::quadratic_gain(spec.L, spec.m, spec.L));
  const NoisePolicy::Kind policy_kinds[] = {NoisePolicy::Kind::ScaledMinus,
                                            NoisePolicy::Kind::RandomSphere,
                                            NoisePolicy::Kind::GreedyAdversary};
  for (const auto& fn : zoo) {
    for (auto pk : policy_kinds) {
      NoisePolicy pol;
      pol.kind = pk;
      pol.delta = spec.delta;
      pol.seed = 7;
      const Trajectory traj = run_inexact_gd(fn, {3.0}, spec.alpha, pol, 300);
      const auto rep = lyapunov_decay_check(traj, m_aug, rho_chk, p_used);
      if (!rep.ok) return fail("lyapunov");
    }
  }

  // 6. lower-bound witness gap
  const WitnessResult wit = lower_bound_witness(spec);
  if (wit.rate > cert->rho + 1e-9) return fail("witness-gap");
  const bool tight_regime = regime.kind == RegimeKind::NoiselessSector ||
                            regime.kind == RegimeKind::Prop1SmallStep ||
                            regime.kind == RegimeKind::Prop1LargeStep ||
                            regime.kind == RegimeKind::Prop3StronglyConvex;
  if (tight_regime && cert->rho - wit.rate > 1e-9) return fail("witness-gap");

  std::cout << "{\"ok\":true,\"rho\":" << format_g17(cert->rho) << ",\"kind\":\""
            << certificate_kind_name(cert->kind) << "\"}\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-domain certificates for inexact gradient descent"};
  app.require_subcommand(1);

  SpecFlags certify_flags;
  double rho_query = 0.0;
  bool outside_window = false;
  auto* certify = app.add_subcommand("certify", "certify a rate for one spec");
  add_spec_flags(certify, certify_flags, true);
  auto* rho_opt = certify->add_option("--rho", rho_query, "decision mode: check this rate");
  certify->add_flag("--outside-window", outside_window,
                    "attempt the off-by-one multipliers outside the proven step-size window "
                    "(reports endpoint values; no supporting theorem)");

  std::string sweep_config, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "grid sweep to CSV");
  sweep->add_option("--config", sweep_config, "key=value config file")->required();
  sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");

  SpecFlags sim_spec_flags;
  SimulateFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "run inexact gradient descent");
  add_spec_flags(simulate, sim_spec_flags, true);
  simulate->add_option("--function", sim_flags.function,
                       "quadratic-gain | diagonal-quadratic | slope-zigzag | gain-oscillator");
  simulate->add_option("--gain", sim_flags.gain, "gain for quadratic-gain");
  simulate->add_option("--spectrum", sim_flags.spectrum, "comma list for diagonal-quadratic");
  simulate->add_option("--breakpoints", sim_flags.breakpoints, "comma list for slope-zigzag");
  simulate->add_option("--omega", sim_flags.omega, "frequency for gain-oscillator");
  simulate->add_option("--policy", sim_flags.policy,
                       "zero | scaled-plus | scaled-minus | random-sphere | greedy-adversary");
  simulate->add_option("--steps", sim_flags.steps, "number of iterations");
  simulate->add_option("--seed", sim_flags.seed, "RNG seed (recorded in the summary)");
  simulate->add_option("--x0", sim_flags.x0, "start point (comma list or scalar)");
  simulate->add_option("--out", sim_flags.out_csv, "trajectory CSV path (default stdout)");

  SpecFlags verify_flags;
  std::string inject_fault;
  auto* verify = app.add_subcommand("verify", "end-to-end certificate verification");
  add_spec_flags(verify, verify_flags, true);
  verify->add_option("--inject-fault", inject_fault, "test hook: corrupt a named stage")
      ->check(CLI::IsMember({"lyapunov"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (certify->parsed()) {
      std::optional<double> rho;
      if (rho_opt->count() > 0) rho = rho_query;
      return cmd_certify(certify_flags, rho, outside_window);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out);
    if (simulate->parsed()) return cmd_simulate(sim_spec_flags, sim_flags);
    if (verify->parsed()) return cmd_verify(verify_flags, inject_fault);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
