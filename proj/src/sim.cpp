#include "igdcert/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace igdcert {

namespace {

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::vector<double> default_xstar(std::size_t dim) { return std::vector<double>(dim, 0.0); }

}  // namespace

TestFunction TestFunction::quadratic_gain(double k, double m, double L, std::size_t dim,
                                          std::vector<double> x_star) {
  if (!(m > 0.0) || !(L > m)) throw std::invalid_argument("TestFunction: need 0 < m < L");
  if (!(k >= m && k <= L)) throw std::invalid_argument("quadratic_gain: k must lie in [m, L]");
  if (x_star.empty()) x_star = default_xstar(dim);
  if (x_star.size() != dim) throw std::invalid_argument("quadratic_gain: x_star dim mismatch");
  TestFunction f{Kind::QuadraticGain, m, L, dim, std::move(x_star), {}, {}, {}, {}};
  f.gain = k;
  return f;
}

TestFunction TestFunction::diagonal_quadratic(std::vector<double> spectrum, double m, double L,
                                              std::vector<double> x_star) {
  if (!(m > 0.0) || !(L > m)) throw std::invalid_argument("TestFunction: need 0 < m < L");
  if (spectrum.empty()) throw std::invalid_argument("diagonal_quadratic: empty spectrum");
  for (double k : spectrum)
    if (!(k >= m && k <= L))
      throw std::invalid_argument("diagonal_quadratic: spectrum must lie in [m, L]");
  const std::size_t dim = spectrum.size();
  if (x_star.empty()) x_star = default_xstar(dim);
  if (x_star.size() != dim) throw std::invalid_argument("diagonal_quadratic: x_star dim mismatch");
  TestFunction f{Kind::DiagonalQuadratic, m, L, dim, std::move(x_star), {}, {}, {}, {}};
  f.spectrum = std::move(spectrum);
  return f;
}

TestFunction TestFunction::slope_zigzag(std::vector<double> breakpoints, double m, double L,
                                        double x_star) {
  if (!(m > 0.0) || !(L > m)) throw std::invalid_argument("TestFunction: need 0 < m < L");
  double prev = 0.0;
  for (double b : breakpoints) {
    if (!(b > prev)) throw std::invalid_argument("slope_zigzag: breakpoints must be positive ascending");
    prev = b;
  }
  TestFunction f{Kind::SlopeZigzag, m, L, 1, {x_star}, {}, {}, {}, {}};
  f.breakpoints = std::move(breakpoints);
  return f;
}

TestFunction TestFunction::gain_oscillator(double frequency, double m, double L, double x_star) {
  if (!(m > 0.0) || !(L > m)) throw std::invalid_argument("TestFunction: need 0 < m < L");
  if (!(frequency > 0.0)) throw std::invalid_argument("gain_oscillator: frequency > 0 required");
  TestFunction f{Kind::GainOscillator, m, L, 1, {x_star}, {}, {}, {}, {}};
  f.frequency = frequency;
  return f;
}

const char* TestFunction::kind_name() const {
  switch (kind) {
    case Kind::QuadraticGain: return "quadratic-gain";
    case Kind::DiagonalQuadratic: return "diagonal-quadratic";
    case Kind::SlopeZigzag: return "slope-zigzag";
    case Kind::GainOscillator: return "gain-oscillator";
  }
  return "unknown";
}

std::vector<double> TestFunction::gradient_at_offset(const std::vector<double>& y) const {
  if (y.size() != dim) throw std::invalid_argument("TestFunction: dimension mismatch");
  switch (kind) {
    case Kind::QuadraticGain: {
      std::vector<double> g(y);
      for (double& v : g) v *= gain;
      return g;
    }
    case Kind::DiagonalQuadratic: {
      std::vector<double> g(y);
      for (std::size_t i = 0; i < dim; ++i) g[i] *= spectrum[i];
      return g;
    }
    case Kind::SlopeZigzag: {
      // continuous, odd, slopes alternating m, L, m, ... between breakpoints
      const double ax = std::abs(y[0]);
      double val = 0.0, lo = 0.0;
      std::size_t seg = 0;
      for (; seg < breakpoints.size() && breakpoints[seg] < ax; ++seg) {
        val += (seg % 2 == 0 ? m : L) * (breakpoints[seg] - lo);
        lo = breakpoints[seg];
      }
      val += (seg % 2 == 0 ? m : L) * (ax - lo);
      return {y[0] >= 0.0 ? val : -val};
    }
    case Kind::GainOscillator: {
      const double x = y[0];
      const double ratio =
          0.5 * (L + m) + 0.5 * (L - m) * std::sin(frequency * std::log1p(x * x));
      return {x * ratio};
    }
  }
  throw std::logic_error("TestFunction: unknown kind");
}

std::vector<double> TestFunction::gradient(const std::vector<double>& x) const {
  std::vector<double> y(x);
  for (std::size_t i = 0; i < dim; ++i) y[i] -= x_star[i];
  return gradient_at_offset(y);
}

const char* NoisePolicy::kind_name() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::ScaledPlus: return "scaled-plus";
    case Kind::ScaledMinus: return "scaled-minus";
    case Kind::RandomSphere: return "random-sphere";
    case Kind::GreedyAdversary: return "greedy-adversary";
  }
  return "unknown";
}

std::optional<NoisePolicy> NoisePolicy::parse(const std::string& name, double delta,
                                              std::uint64_t seed) {
  NoisePolicy p;
  p.delta = delta;
  p.seed = seed;
  if (name == "zero") p.kind = Kind::Zero;
  else if (name == "scaled-plus" || name == "plus") p.kind = Kind::ScaledPlus;
  else if (name == "scaled-minus" || name == "minus") p.kind = Kind::ScaledMinus;
  else if (name == "random-sphere" || name == "random") p.kind = Kind::RandomSphere;
  else if (name == "greedy-adversary" || name == "greedy") p.kind = Kind::GreedyAdversary;
  else return std::nullopt;
  return p;
}

std::vector<double> greedy_noise(const std::vector<double>& y, const std::vector<double>& grad,
                                 double alpha, double delta) {
  const std::size_t n = y.size();
  std::vector<double> e(n, 0.0);
  const double gn = norm2(grad);
  if (delta == 0.0 || gn == 0.0) return e;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = y[i] - alpha * grad[i];
  const double wn = norm2(w);
  if (wn == 0.0) {
    e[0] = delta * gn;  // any direction is optimal; pick the first coordinate
    return e;
  }
  for (std::size_t i = 0; i < n; ++i) e[i] = -delta * gn * w[i] / wn;
  return e;
}

namespace {

struct NoiseGenerator {
  const NoisePolicy& policy;
  double alpha;
  std::mt19937_64 rng;

  explicit NoiseGenerator(const NoisePolicy& p, double a) : policy(p), alpha(a), rng(p.seed) {}

  std::vector<double> operator()(const std::vector<double>& y, const std::vector<double>& g) {
    const std::size_t n = y.size();
    std::vector<double> e(n, 0.0);
    switch (policy.kind) {
      case NoisePolicy::Kind::Zero:
        return e;
      case NoisePolicy::Kind::ScaledPlus:
        for (std::size_t i = 0; i < n; ++i) e[i] = policy.delta * g[i];
        return e;
      case NoisePolicy::Kind::ScaledMinus:
        for (std::size_t i = 0; i < n; ++i) e[i] = -policy.delta * g[i];
        return e;
      case NoisePolicy::Kind::RandomSphere: {
        const double gn = norm2(g);
        if (gn == 0.0 || policy.delta == 0.0) return e;
        std::normal_distribution<double> nd(0.0, 1.0);
        double vn = 0.0;
        while (vn == 0.0) {
          for (std::size_t i = 0; i < n; ++i) e[i] = nd(rng);
          vn = norm2(e);
        }
        for (std::size_t i = 0; i < n; ++i) e[i] *= policy.delta * gn / vn;
        return e;
      }
      case NoisePolicy::Kind::GreedyAdversary:
        return greedy_noise(y, g, alpha, policy.delta);
    }
    return e;
  }
};

}  // namespace

Trajectory run_inexact_gd(const TestFunction& f, const std::vector<double>& x0, double alpha,
                          const NoisePolicy& policy, int steps) {
  if (steps < 1) throw std::invalid_argument("run_inexact_gd: steps >= 1 required");
  if (x0.size() != f.dim) throw std::invalid_argument("run_inexact_gd: x0 dimension mismatch");
  Trajectory t;
  t.x_star = f.x_star;
  t.seed = policy.seed;
  NoiseGenerator gen(policy, alpha);

  std::vector<double> y(f.dim);
  for (std::size_t i = 0; i < f.dim; ++i) y[i] = x0[i] - f.x_star[i];
  t.v.push_back(std::vector<double>(f.dim, 0.0));
  for (int k = 0; k < steps; ++k) {
    const auto g = f.gradient_at_offset(y);
    const auto e = gen(y, g);
    t.x.push_back(y);
    t.u.push_back(g);
    t.e.push_back(e);
    std::vector<double> v(f.dim);
    for (std::size_t i = 0; i < f.dim; ++i) v[i] = f.L * y[i] - g[i];
    t.v.push_back(std::move(v));
    for (std::size_t i = 0; i < f.dim; ++i) y[i] -= alpha * (g[i] + e[i]);
    if (norm2(y) > kDivergenceGuard) {
      t.diverged = true;
      break;
    }
  }
  // final state, with gradient and (unapplied) noise so all sequences share
  // one length
  const auto g = f.gradient_at_offset(y);
  const auto e = gen(y, g);
  t.x.push_back(y);
  t.u.push_back(g);
  t.e.push_back(e);
  return t;
}

RateEstimate empirical_rate(const Trajectory& traj, int burn_in) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(traj.length()) - 1;
  if (burn_in < 0 || n <= burn_in + 10)
    throw std::invalid_argument("empirical_rate: need steps > burn_in + 10");
  const double nb = norm2(traj.x[burn_in]);
  if (nb == 0.0) return {0.0, true};
  RateEstimate est{0.0, false};
  for (std::ptrdiff_t k = burn_in + 1; k <= n; ++k) {
    const double nk = norm2(traj.x[k]);
    if (nk == 0.0 || nk < 1e-250) {
      est.reached_fixed_point = true;
      continue;
    }
    est.rate = std::max(est.rate, std::pow(nk / nb, 1.0 / static_cast<double>(k - burn_in)));
  }
  return est;
}

double empirical_envelope_constant(const Trajectory& traj, double rho) {
  const double n0 = norm2(traj.x[0]);
  if (n0 == 0.0) return 0.0;
  double c = 0.0;
  double denom = n0;
  for (std::size_t k = 0; k < traj.length(); ++k) {
    c = std::max(c, norm2(traj.x[k]) / denom);
    denom *= rho;
    if (denom < 1e-280) break;
  }
  return c;
}

WitnessResult lower_bound_witness(const ProblemSpec& s) {
  const double rate_l = std::abs(1.0 - (1.0 + s.delta) * s.alpha * s.L);
  const double rate_m = std::abs(1.0 - (1.0 - s.delta) * s.alpha * s.m);
  const bool l_wins = rate_l >= rate_m;
  const int steps = 120;
  NoisePolicy pol;
  pol.delta = s.delta;
  pol.kind = l_wins ? NoisePolicy::Kind::ScaledPlus : NoisePolicy::Kind::ScaledMinus;
  const TestFunction f = l_wins ? TestFunction::quadratic_gain(s.L, s.m, s.L)
                               : TestFunction::quadratic_gain(s.m, s.m, s.L);
  Trajectory t = run_inexact_gd(f, {1.0}, s.alpha, pol, steps);
  return {std::move(t), std::max(rate_l, rate_m), l_wins};
}

namespace {

// <P z, z> with P acting per coordinate: scalar p on x, or 2x2 on (x_i, v_i).
double p_form(const Mat& p, const std::vector<double>& x, const std::vector<double>& v) {
  if (p.rows() == 1) {
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    return p(0, 0) * s;
  }
  if (p.rows() == 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += p(0, 0) * x[i] * x[i] + 2.0 * p(0, 1) * x[i] * v[i] + p(1, 1) * v[i] * v[i];
    return s;
  }
  throw std::invalid_argument("lyapunov_decay_check: P must be 1x1 or 2x2");
}

}  // namespace

LyapunovReport lyapunov_decay_check(const Trajectory& traj, const BlockIqc& m_aug, double rho,
                                    const Mat& p) {
  if (p.rows() == 2 && traj.v.size() != traj.x.size())
    throw std::invalid_argument("lyapunov_decay_check: trajectory lacks off-by-one states");
  const std::size_t d = traj.dim();
  const bool augmented = m_aug.state_dim() == 2 * d;
  const bool with_noise = m_aug.input_dim() == 2 * d;
  LyapunovReport rep{true, -1, 0.0};
  std::vector<double> zs, ws;
  for (std::size_t k = 0; k + 1 < traj.length(); ++k) {
    zs = traj.x[k];
    if (augmented) zs.insert(zs.end(), traj.v[k].begin(), traj.v[k].end());
    ws = traj.u[k];
    if (with_noise) ws.insert(ws.end(), traj.e[k].begin(), traj.e[k].end());
    const double sigma = m_aug.form(zs, ws);
    const double vk = p_form(p, traj.x[k], augmented ? traj.v[k] : traj.x[k]);
    const double vk1 = p_form(p, traj.x[k + 1], augmented ? traj.v[k + 1] : traj.x[k + 1]);
    const double lhs = vk1;
    const double rhs = rho * rho * vk - sigma;
    const double scale = 1.0 + std::abs(lhs) + std::abs(rho * rho * vk) + std::abs(sigma);
    const double residual = (lhs - rhs) / scale;
    rep.worst_residual = std::max(rep.worst_residual, residual);
    if (residual > 1e-9 && rep.ok) {
      rep.ok = false;
      rep.first_violation = static_cast<std::ptrdiff_t>(k);
    }
  }
  return rep;
}

std::optional<SeparationWitness> find_offbyone_violation(const TestFunction& f, double rho,
                                                         double gamma) {
  if (f.dim != 1) throw std::invalid_argument("find_offbyone_violation: 1-D functions only");
  // scan the gain ratio g(y)/y for points closest to the sector edges
  const int n_scan = 20001;
  std::vector<std::pair<double, double>> low, high;  // (ratio, y)
  for (int i = 0; i < n_scan; ++i) {
    const double y = 1e-3 * std::pow(10.0, 6.0 * i / (n_scan - 1));
    const double ratio = f.gradient_at_offset({y})[0] / y;
    low.emplace_back(ratio, y);
    high.emplace_back(-ratio, y);
  }
  std::partial_sort(low.begin(), low.begin() + 8, low.end());
  std::partial_sort(high.begin(), high.begin() + 8, high.end());

  const Mat c1 = Mat::identity(1);
  const BlockIqc m_ob1 = off_by_one_matrix(c1, f.m, f.L, gamma);
  std::optional<SeparationWitness> best;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double y0 = low[i].second;   // gain near m: large v(1) = (L - m) y0
      const double y1 = high[j].second;  // gain near L: u - m y strictly positive
      Trajectory t;
      t.x_star = {f.x_star[0]};
      t.x = {{y0}, {y1}};
      t.u = {f.gradient_at_offset({y0}), f.gradient_at_offset({y1})};
      t.v = {{0.0}, {f.L * y0 - t.u[0][0]}};
      const auto sums = iqc_partial_sums(t, m_ob1, rho);
      const double worst = *std::min_element(sums.begin(), sums.end());
      if (worst < 0.0 && (!best || worst < best->min_scaled_sum)) {
        best = SeparationWitness{std::move(t), worst, y0, y1};
      }
    }
  }
  if (best) {
    const double scale = f.L * f.L * std::max(best->x_low_gain * best->x_low_gain, 1.0);
    if (best->min_scaled_sum >= -kMembershipTol * scale) return std::nullopt;
  }
  return best;
}

}  // namespace igdcert
