#include "igdcert/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace igdcert {

ProblemSpec::ProblemSpec(double m_, double L_, double alpha_, double delta_)
    : m(m_), L(L_), alpha(alpha_), delta(delta_) {
  if (!(m > 0.0) || !(L > m)) throw std::invalid_argument("ProblemSpec: need 0 < m < L");
  if (!(alpha > 0.0)) throw std::invalid_argument("ProblemSpec: need alpha > 0");
  if (!(delta >= 0.0) || !(delta < 1.0)) throw std::invalid_argument("ProblemSpec: need delta in [0,1)");
}

const char* regime_name(RegimeKind k) {
  switch (k) {
    case RegimeKind::NoiselessSector: return "noiseless-sector";
    case RegimeKind::Prop1SmallStep: return "prop1-small-step";
    case RegimeKind::Prop1LargeStep: return "prop1-large-step";
    case RegimeKind::Prop2Interior: return "prop2-interior";
    case RegimeKind::Prop3StronglyConvex: return "prop3-strongly-convex";
    case RegimeKind::Uncertifiable: return "uncertifiable";
  }
  return "unknown";
}

double rho_gd(double m, double L, double alpha) {
  if (!(m > 0.0) || !(L > m)) throw std::domain_error("rho_gd: need 0 < m < L");
  if (!(alpha >= 0.0)) throw std::domain_error("rho_gd: need alpha >= 0");
  return std::max(1.0 - alpha * m, alpha * L - 1.0);
}

double rho_gd_noisy(const ProblemSpec& s) {
  return std::max(1.0 - (1.0 - s.delta) * s.alpha * s.m, (1.0 + s.delta) * s.alpha * s.L - 1.0);
}

double alpha_minus(double m, double L, double delta) {
  if (!(m > 0.0) || !(L > m)) throw std::domain_error("alpha_minus: need 0 < m < L");
  return (2.0 / (L + m) - delta / m) / (1.0 - delta);
}

double alpha_plus(double m, double L, double delta) {
  if (!(m > 0.0) || !(L > m)) throw std::domain_error("alpha_plus: need 0 < m < L");
  return (2.0 / (L + m) + delta / L) / (1.0 + delta);
}

double prop2_rate(const ProblemSpec& s) {
  if (!(s.alpha < 2.0 / (s.L + s.m)))
    throw std::domain_error("prop2_rate: requires alpha < 2/(L+m)");
  const double arg = 1.0 - 2.0 * s.alpha * s.L * s.m / (s.L + s.m) +
                     s.alpha * s.delta * s.delta * (s.L + s.m - 2.0 * s.alpha * s.L * s.m) /
                         (2.0 - s.alpha * (s.L + s.m));
  return std::sqrt(arg);
}

double prop3_sharp_rate(double m, double L, double delta) {
  if (!(m > 0.0) || !(L > m)) throw std::domain_error("prop3_sharp_rate: need 0 < m < L");
  const double k = L / m;
  return ((1.0 + delta) * k - (1.0 - delta)) / ((1.0 + delta) * k + (1.0 - delta));
}

RateRegime classify_regime(const ProblemSpec& s, FunctionClass cls) {
  if (s.delta == 0.0) return {RegimeKind::NoiselessSector, rho_gd(s.m, s.L, s.alpha)};

  if (cls == FunctionClass::StronglyConvex) {
    const double top = 2.0 / ((1.0 + s.delta) * s.L + (1.0 - s.delta) * s.m);
    if (s.alpha >= 1.0 / s.L - kBranchTol && s.alpha <= top + kBranchTol)
      return {RegimeKind::Prop3StronglyConvex, rho_gd_noisy(s)};
    // outside the proven window: the sector analysis still applies
  }

  const double am = alpha_minus(s.m, s.L, s.delta);
  const double ap = alpha_plus(s.m, s.L, s.delta);
  if (s.delta < 2.0 / (s.kappa() + 1.0) && s.alpha <= am + kBranchTol)
    return {RegimeKind::Prop1SmallStep, rho_gd_noisy(s)};
  if (s.alpha >= ap - kBranchTol) return {RegimeKind::Prop1LargeStep, rho_gd_noisy(s)};
  if (s.alpha < 2.0 / (s.L + s.m)) return {RegimeKind::Prop2Interior, prop2_rate(s)};
  // Unreachable for delta > 0 (alpha_plus < 2/(L+m)); kept as a guard.
  return {RegimeKind::Uncertifiable, std::numeric_limits<double>::infinity()};
}

}  // namespace igdcert
