#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "igdcert/certify.hpp"
#include "igdcert/rates.hpp"
#include "igdcert/sim.hpp"

namespace igdcert {

/// Shortest fixed-width float formatting used in every output: %.17g
/// round-trips doubles exactly.
std::string format_g17(double v);

/// Stable v1 JSON schema:
/// {"version":"v1","rho":..,"lambda":..,"gamma":..|null,"kind":"..",
///  "endpoints":[f_plus,f_minus],"witness":{"N_scalar":..,"epsilon":..}|null}
std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

/// Trajectory CSV: header k, x_0.., |x-x*|, |grad|, |e|, v_0.. with raw
/// (unshifted) state columns and 17-significant-digit floats.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Grid sweep over specs. Parsed from a key=value file with comma-separated
/// lists: m, L, alpha (or alpha_frac, multiples of 2/(L+m)), delta, class,
/// seed.
struct SweepConfig {
  std::vector<double> m_values;
  std::vector<double> L_values;
  std::vector<double> alpha_values;       // absolute; empty if alpha_frac used
  std::vector<double> alpha_frac_values;  // fractions of 2/(L+m)
  std::vector<double> delta_values;
  FunctionClass cls = FunctionClass::Sector;
  std::uint64_t seed = 0;
};

SweepConfig parse_sweep_config(std::istream& is);

/// One CSV row per grid point, lexicographic in (m, L, alpha, delta) grid
/// indices regardless of worker completion order.
void run_sweep(const SweepConfig& config, std::ostream& os);

}  // namespace igdcert
