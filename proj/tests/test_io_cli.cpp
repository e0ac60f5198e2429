#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "igdcert/certify.hpp"
#include "igdcert/io.hpp"
#include "igdcert/sim.hpp"

using namespace igdcert;

namespace {

struct CliResult {
  int exit_code;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(IGDCERT_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("certificate JSON round-trips through the v1 schema") {
  const auto cert = certify_strongly_convex({1, 10, 0.15, 0.1});
  REQUIRE(cert.has_value());
  const std::string text = certificate_to_json(*cert);
  const Certificate back = certificate_from_json(text);
  CHECK(back.rho == cert->rho);
  CHECK(back.lambda == cert->lambda);
  REQUIRE(back.gamma.has_value());
  CHECK(*back.gamma == *cert->gamma);
  CHECK(back.kind == cert->kind);
  CHECK(back.endpoint_values[0] == cert->endpoint_values[0]);
  CHECK(back.endpoint_values[1] == cert->endpoint_values[1]);
  REQUIRE(back.witness.has_value());
  CHECK(back.witness->epsilon == cert->witness->epsilon);

  // schema shape
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("version") == "v1");
  for (const char* key : {"rho", "lambda", "gamma", "kind", "endpoints", "witness"})
    CHECK(j.contains(key));
  CHECK(j.at("endpoints").size() == 2);
  CHECK(j.at("witness").contains("N_scalar"));
  CHECK(j.at("witness").contains("epsilon"));

  // a sector certificate serializes gamma as null
  const auto sec = rho_star_sector({1, 10, 0.15, 0.1});
  REQUIRE(sec.has_value());
  const auto js = nlohmann::json::parse(certificate_to_json(*sec));
  CHECK(js.at("gamma").is_null());
}

TEST_CASE("format_g17 round-trips doubles exactly") {
  for (double v : {0.1, 2.0 / 11, 0.8726731584954596, 1e-300, -3.5e17}) {
    CHECK(std::stod(format_g17(v)) == v);
  }
}

TEST_CASE("trajectory CSV has the mandated header and unshifted states") {
  const auto f = TestFunction::quadratic_gain(5.0, 1.0, 10.0, 1, {2.0});
  NoisePolicy pol;
  pol.kind = NoisePolicy::Kind::ScaledMinus;
  pol.delta = 0.1;
  const auto traj = run_inexact_gd(f, {3.0}, 0.1, pol, 5);
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "k,x_0,dist,grad_norm,noise_norm,v_0");
  std::string row0;
  std::getline(is, row0);
  // first state column is the raw (unshifted) start point
  CHECK(row0.substr(0, 4) == "0,3,");
  int rows = 1;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == static_cast<int>(traj.length()));
}

TEST_CASE("sweep config parsing and validation") {
  std::istringstream good(
      "# comment\n"
      "m = 1\n"
      "L = 10\n"
      "alpha = 0.05, 0.15\n"
      "delta = 0, 0.1\n"
      "class = strongly-convex\n"
      "seed = 7\n");
  const SweepConfig cfg = parse_sweep_config(good);
  CHECK(cfg.m_values.size() == 1);
  CHECK(cfg.alpha_values.size() == 2);
  CHECK(cfg.delta_values.size() == 2);
  CHECK(cfg.cls == FunctionClass::StronglyConvex);
  CHECK(cfg.seed == 7);

  std::istringstream bad_key("m = 1\nL = 10\nalpha = 0.1\ndelta = 0\nclass = sector\nnope = 3\n");
  CHECK_THROWS_AS(parse_sweep_config(bad_key), std::invalid_argument);

  std::istringstream both_alpha(
      "m = 1\nL = 10\nalpha = 0.1\nalpha_frac = 0.5\ndelta = 0\nclass = sector\n");
  CHECK_THROWS_AS(parse_sweep_config(both_alpha), std::invalid_argument);

  std::istringstream no_class("m = 1\nL = 10\nalpha = 0.1\ndelta = 0\n");
  CHECK_THROWS_AS(parse_sweep_config(no_class), std::invalid_argument);
}

TEST_CASE("run_sweep emits deterministic rows with the documented columns") {
  std::istringstream cfg_text(
      "m = 1\nL = 10\nalpha = 0.12, 0.15\ndelta = 0, 0.1\nclass = strongly-convex\n");
  const SweepConfig cfg = parse_sweep_config(cfg_text);
  std::ostringstream o1, o2;
  run_sweep(cfg, o1);
  run_sweep(cfg, o2);
  CHECK(o1.str() == o2.str());

  std::istringstream rows(o1.str());
  std::string header;
  std::getline(rows, header);
  CHECK(header == "m,L,alpha,delta,class,regime,rho_certified,lambda,gamma,rho_witnessed,gap");
  int n = 0;
  std::string line;
  double prev_alpha = -1.0;
  while (std::getline(rows, line)) {
    if (line.empty()) continue;
    ++n;
    // delta = 0 rows reproduce the noiseless rate in rho_certified
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 11);
    const double alpha = std::stod(fields[2]);
    const double delta = std::stod(fields[3]);
    CHECK(alpha >= prev_alpha - 1e-15);  // lexicographic grid order
    prev_alpha = alpha;
    if (delta == 0.0) {
      const double rho_cert = std::stod(fields[6]);
      CHECK(rho_cert == doctest::Approx(rho_gd(1, 10, alpha)).epsilon(1e-9));
    }
    // strongly convex rows inside the window have gap <= 1e-9
    if (fields[5] == "prop3-strongly-convex") {
      CHECK(std::stod(fields[10]) <= 1e-9);
    }
  }
  CHECK(n == 4);

  // sector sweep: interior-regime rows show the Prop. 2 conservatism gap
  std::istringstream sec_cfg("m = 1\nL = 10\nalpha = 0.15\ndelta = 0.1\nclass = sector\n");
  std::ostringstream sec_out;
  run_sweep(parse_sweep_config(sec_cfg), sec_out);
  std::istringstream sec_rows(sec_out.str());
  std::getline(sec_rows, header);
  std::getline(sec_rows, line);
  std::stringstream ss(line);
  std::vector<std::string> fields;
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 11);
  CHECK(fields[5] == "prop2-interior");
  CHECK(std::stod(fields[10]) > 0.0);  // gap = prop2_rate - rho_gd_noisy
}

TEST_CASE("cli: certify matches the documented examples and exit codes") {
  const auto sc = run_cli("certify --m 1 --L 10 --alpha 0.15 --delta 0.1 --class strongly-convex");
  CHECK(sc.exit_code == 0);
  const auto j = nlohmann::json::parse(sc.stdout_text);
  CHECK(j.at("certified") == true);
  CHECK(j.at("certificate").at("rho").get<double>() == doctest::Approx(0.865).epsilon(1e-12));
  CHECK(j.at("certificate").at("lambda").get<double>() == doctest::Approx(35.0).epsilon(1e-9));
  CHECK(j.at("certificate").at("gamma").get<double>() ==
        doctest::Approx(0.556071).epsilon(1e-5));

  const auto sec = run_cli("certify --m 1 --L 10 --alpha 0.15 --delta 0.1 --class sector");
  CHECK(sec.exit_code == 0);
  const auto js = nlohmann::json::parse(sec.stdout_text);
  CHECK(js.at("rho_star").get<double>() == doctest::Approx(0.872673).epsilon(1e-5));

  // divergent large-step spec still certifies (with the flag), exit 0
  const auto div = run_cli("certify --m 1 --L 10 --alpha 0.3 --delta 0.5 --class sector");
  CHECK(div.exit_code == 0);
  const auto jd = nlohmann::json::parse(div.stdout_text);
  CHECK(jd.at("divergent") == true);
  CHECK(jd.at("rho_star").get<double>() == doctest::Approx(3.5).epsilon(1e-12));

  // decision mode: a rate below rho_star is refused with exit 2
  const auto no = run_cli("certify --m 1 --L 10 --alpha 0.15 --delta 0.1 --class sector --rho 0.865");
  CHECK(no.exit_code == 2);
  const auto jn = nlohmann::json::parse(no.stdout_text);
  CHECK(jn.at("certified") == false);

  const auto yes = run_cli("certify --m 1 --L 10 --alpha 0.15 --delta 0.1 --class sector --rho 0.88");
  CHECK(yes.exit_code == 0);

  // usage errors exit 1
  CHECK(run_cli("certify --m 1 --L 10").exit_code == 1);
  CHECK(run_cli("certify --m -1 --L 10 --alpha 0.1").exit_code == 1);
  CHECK(run_cli("bogus-subcommand").exit_code == 1);
}

TEST_CASE("cli: outputs are byte-stable across runs") {
  const std::string args =
      "simulate --m 1 --L 10 --alpha 0.15 --delta 0.1 --class strongly-convex "
      "--function slope-zigzag --policy random-sphere --steps 120 --seed 42";
  const auto r1 = run_cli(args);
  const auto r2 = run_cli(args);
  CHECK(r1.exit_code == 0);
  CHECK(r1.stdout_text == r2.stdout_text);

  const auto c1 = run_cli("certify --m 1 --L 10 --alpha 0.17 --delta 0.2 --class sector");
  const auto c2 = run_cli("certify --m 1 --L 10 --alpha 0.17 --delta 0.2 --class sector");
  CHECK(c1.stdout_text == c2.stdout_text);
}

TEST_CASE("cli: simulate summary reports soundness and the seed") {
  const auto r = run_cli(
      "simulate --m 1 --L 10 --alpha 0.15 --delta 0.1 --class strongly-convex "
      "--function quadratic-gain --gain 1 --policy scaled-minus --steps 200 --seed 3 "
      "--out /tmp/igdcert_traj_test.csv");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  CHECK(j.at("sound") == true);
  CHECK(j.at("seed") == 3);
  CHECK(j.at("empirical_rate").get<double>() == doctest::Approx(0.865).epsilon(1e-9));
  CHECK(j.at("certified_rate").get<double>() == doctest::Approx(0.865).epsilon(1e-9));
  std::ifstream csv("/tmp/igdcert_traj_test.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header.substr(0, 2) == "k,");
  std::remove("/tmp/igdcert_traj_test.csv");
}

TEST_CASE("cli: alpha-frac expresses the step as a multiple of 2/(L+m)") {
  const auto r = run_cli("certify --m 1 --L 10 --alpha-frac 1.0 --class sector");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  CHECK(j.at("rho_star").get<double>() == doctest::Approx(9.0 / 11).epsilon(1e-9));
}

TEST_CASE("cli: outside-window flag reports off-by-one endpoint diagnostics") {
  const auto r = run_cli(
      "certify --m 1 --L 10 --alpha 0.17 --delta 0.1 --class strongly-convex "
      "--outside-window");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  CHECK(j.at("certificate").at("kind") == "off-by-one-noisy");
  CHECK(j.at("certificate").at("endpoints").size() == 2);
}

TEST_CASE("cli: sweep runs from a config file") {
  const std::string cfg_path = "/tmp/igdcert_sweep_test.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "m = 1\nL = 10\nalpha_frac = 0.5, 1.0\ndelta = 0, 0.1\nclass = sector\n";
  }
  const auto r = run_cli("sweep --config " + cfg_path);
  CHECK(r.exit_code == 0);
  std::istringstream rows(r.stdout_text);
  std::string header;
  std::getline(rows, header);
  CHECK(header == "m,L,alpha,delta,class,regime,rho_certified,lambda,gamma,rho_witnessed,gap");
  int n = 0;
  std::string line;
  while (std::getline(rows, line))
    if (!line.empty()) ++n;
  CHECK(n == 4);
  CHECK(run_cli("sweep --config /nonexistent/path.cfg").exit_code == 1);
  std::remove(cfg_path.c_str());
}

TEST_CASE("cli: verify chain passes for healthy specs and fails on injected faults") {
  const auto ok1 = run_cli("verify --m 1 --L 10 --alpha 0.15 --delta 0.1 --class strongly-convex");
  CHECK(ok1.exit_code == 0);
  CHECK(nlohmann::json::parse(ok1.stdout_text).at("ok") == true);

  const auto ok2 = run_cli("verify --m 1 --L 10 --alpha 0.05 --delta 0.1 --class sector");
  CHECK(ok2.exit_code == 0);

  const auto bad = run_cli(
      "verify --m 1 --L 10 --alpha 0.15 --delta 0.1 --class strongly-convex "
      "--inject-fault lyapunov");
  CHECK(bad.exit_code == 3);
  const auto jb = nlohmann::json::parse(bad.stdout_text);
  CHECK(jb.at("ok") == false);
  CHECK(jb.at("stage") == "lyapunov");
}
