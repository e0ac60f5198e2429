#include "igdcert/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace igdcert {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string certificate_to_json(const Certificate& cert) {
  std::ostringstream os;
  os << "{\"version\":\"v1\"";
  os << ",\"rho\":" << format_g17(cert.rho);
  os << ",\"lambda\":" << format_g17(cert.lambda);
  os << ",\"gamma\":" << (cert.gamma ? format_g17(*cert.gamma) : "null");
  os << ",\"kind\":\"" << certificate_kind_name(cert.kind) << "\"";
  os << ",\"endpoints\":[" << format_g17(cert.endpoint_values[0]) << ","
     << format_g17(cert.endpoint_values[1]) << "]";
  if (cert.witness) {
    os << ",\"witness\":{\"N_scalar\":" << format_g17(cert.witness->n_scalar)
       << ",\"epsilon\":" << format_g17(cert.witness->epsilon) << "}";
  } else {
    os << ",\"witness\":null";
  }
  os << "}";
  return os.str();
}

Certificate certificate_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("version").get<std::string>() != "v1")
    throw std::invalid_argument("certificate_from_json: unsupported schema version");
  Certificate cert{};
  cert.rho = j.at("rho").get<double>();
  cert.lambda = j.at("lambda").get<double>();
  if (!j.at("gamma").is_null()) cert.gamma = j.at("gamma").get<double>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sector-noiseless") cert.kind = CertificateKind::SectorNoiseless;
  else if (kind == "sector-noisy") cert.kind = CertificateKind::SectorNoisy;
  else if (kind == "off-by-one-noisy") cert.kind = CertificateKind::OffByOneNoisy;
  else throw std::invalid_argument("certificate_from_json: unknown kind");
  cert.endpoint_values = {j.at("endpoints").at(0).get<double>(),
                          j.at("endpoints").at(1).get<double>()};
  if (!j.at("witness").is_null()) {
    cert.witness = StabilityWitness{j.at("witness").at("N_scalar").get<double>(),
                                    j.at("witness").at("epsilon").get<double>()};
  }
  return cert;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t d = traj.dim();
  os << "k";
  for (std::size_t i = 0; i < d; ++i) os << ",x_" << i;
  os << ",dist,grad_norm,noise_norm";
  for (std::size_t i = 0; i < d; ++i) os << ",v_" << i;
  os << "\n";
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  for (std::size_t k = 0; k < traj.length(); ++k) {
    os << k;
    for (std::size_t i = 0; i < d; ++i) os << "," << format_g17(traj.x[k][i] + traj.x_star[i]);
    os << "," << format_g17(norm(traj.x[k]));
    os << "," << format_g17(norm(traj.u[k]));
    os << "," << format_g17(traj.e.empty() ? 0.0 : norm(traj.e[k]));
    for (std::size_t i = 0; i < d; ++i)
      os << "," << format_g17(traj.v.empty() ? 0.0 : traj.v[k][i]);
    os << "\n";
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (...) {
      throw std::invalid_argument("sweep config: bad number '" + item + "' for key " + key);
    }
  }
  if (out.empty()) throw std::invalid_argument("sweep config: empty list for key " + key);
  return out;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& is) {
  SweepConfig cfg;
  bool have_class = false;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("sweep config: expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "m") cfg.m_values = parse_list(val, key);
    else if (key == "L") cfg.L_values = parse_list(val, key);
    else if (key == "alpha") cfg.alpha_values = parse_list(val, key);
    else if (key == "alpha_frac") cfg.alpha_frac_values = parse_list(val, key);
    else if (key == "delta") cfg.delta_values = parse_list(val, key);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
    else if (key == "class") {
      if (val == "sector") cfg.cls = FunctionClass::Sector;
      else if (val == "strongly-convex") cfg.cls = FunctionClass::StronglyConvex;
      else throw std::invalid_argument("sweep config: class must be sector or strongly-convex");
      have_class = true;
    } else {
      throw std::invalid_argument("sweep config: unknown key '" + key + "'");
    }
  }
  if (cfg.m_values.empty() || cfg.L_values.empty() || cfg.delta_values.empty())
    throw std::invalid_argument("sweep config: m, L and delta grids are required");
  if (cfg.alpha_values.empty() == cfg.alpha_frac_values.empty())
    throw std::invalid_argument("sweep config: exactly one of alpha / alpha_frac is required");
  if (!have_class) throw std::invalid_argument("sweep config: class is required");
  return cfg;
}

namespace {

std::string sweep_row(double m, double L, double alpha, double delta, FunctionClass cls) {
  const ProblemSpec spec(m, L, alpha, delta);
  const RateRegime regime = classify_regime(spec, cls);
  std::optional<Certificate> cert;
  if (cls == FunctionClass::StronglyConvex)
    cert = certify_strongly_convex(spec);
  else
    cert = rho_star_sector(spec);
  const WitnessResult witness = lower_bound_witness(spec);
  std::ostringstream os;
  os << format_g17(m) << "," << format_g17(L) << "," << format_g17(alpha) << ","
     << format_g17(delta) << ","
     << (cls == FunctionClass::Sector ? "sector" : "strongly-convex") << ","
     << regime_name(regime.kind) << ",";
  if (cert) {
    os << format_g17(cert->rho) << "," << format_g17(cert->lambda) << ","
       << (cert->gamma ? format_g17(*cert->gamma) : "") << "," << format_g17(witness.rate) << ","
       << format_g17(cert->rho - witness.rate);
  } else {
    os << ",,," << format_g17(witness.rate) << ",";
  }
  return os.str();
}

}  // namespace

void run_sweep(const SweepConfig& cfg, std::ostream& os) {
  struct Cell {
    double m, L, alpha, delta;
  };
  std::vector<Cell> cells;
  for (double m : cfg.m_values)
    for (double L : cfg.L_values) {
      std::vector<double> alphas = cfg.alpha_values;
      if (alphas.empty())
        for (double f : cfg.alpha_frac_values) alphas.push_back(f * 2.0 / (L + m));
      for (double a : alphas)
        for (double d : cfg.delta_values) cells.push_back({m, L, a, d});
    }

  std::vector<std::string> rows(cells.size());
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
  std::vector<std::future<void>> futs;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&]() {
      for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
        const Cell& c = cells[i];
        rows[i] = sweep_row(c.m, c.L, c.alpha, c.delta, cfg.cls);
      }
    }));
  }
  for (auto& f : futs) f.get();

  os << "m,L,alpha,delta,class,regime,rho_certified,lambda,gamma,rho_witnessed,gap\n";
  for (const auto& r : rows) os << r << "\n";
}

}  // namespace igdcert
