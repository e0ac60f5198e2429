#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "igdcert/rates.hpp"

using namespace igdcert;

TEST_CASE("rho_gd known values") {
  CHECK(rho_gd(1, 10, 2.0 / 11) == doctest::Approx(9.0 / 11).epsilon(1e-15));
  CHECK(rho_gd(1, 10, 0.1) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(rho_gd(1, 10, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rho_gd(0.0, 10, 0.1), std::domain_error);
  CHECK_THROWS_AS(rho_gd(2.0, 1.0, 0.1), std::domain_error);
}

TEST_CASE("rho_gd_noisy reduces to rho_gd at delta = 0 and picks up +delta at the corners") {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> um(0.1, 3.0), ua(0.01, 0.5);
  for (int i = 0; i < 100; ++i) {
    const double m = um(rng), L = m * (1.5 + um(rng)), a = ua(rng);
    CHECK(rho_gd_noisy({m, L, a, 0.0}) == doctest::Approx(rho_gd(m, L, a)).epsilon(1e-15));
  }
  const ProblemSpec at_plus{1, 10, alpha_plus(1, 10, 0.1), 0.1};
  CHECK(rho_gd_noisy(at_plus) == doctest::Approx(9.0 / 11 + 0.1).epsilon(1e-14));
  CHECK(rho_gd_noisy({1, 10, 0.15, 0.1}) == doctest::Approx(0.865).epsilon(1e-15));

  // noise never shrinks the worst-case rate
  std::uniform_real_distribution<double> ud(0.0, 0.95);
  for (int i = 0; i < 200; ++i) {
    const double m = um(rng), L = m * (1.5 + um(rng)), a = ua(rng), d = ud(rng);
    CHECK(rho_gd_noisy({m, L, a, d}) >= rho_gd(m, L, a) - 1e-15);
  }
}

TEST_CASE("alpha_minus / alpha_plus formula values") {
  CHECK(alpha_minus(1, 10, 0.1) == doctest::Approx(0.09090909090909091).epsilon(1e-14));
  CHECK(alpha_minus(1, 10, 2.0 / 11) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(alpha_minus(1, 10, 0.0) == doctest::Approx(2.0 / 11).epsilon(1e-15));
  CHECK(alpha_plus(1, 10, 0.1) == doctest::Approx(0.1743801652892562).epsilon(1e-14));
  CHECK(alpha_plus(1, 10, 0.0) == doctest::Approx(2.0 / 11).epsilon(1e-15));
  CHECK(alpha_plus(1, 10, 0.5) == doctest::Approx((2.0 / 11 + 0.05) / 1.5).epsilon(1e-14));
}

TEST_CASE("step-size thresholds: alpha_- <= alpha_+ <= 2/(L+m), equal iff delta = 0") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> um(0.05, 2.0), ud(0.0, 0.95);
  for (int i = 0; i < 300; ++i) {
    const double m = um(rng), L = m * (1.1 + 5.0 * um(rng));
    const double d = (i % 7 == 0) ? 0.0 : ud(rng);
    const double am = alpha_minus(m, L, d), ap = alpha_plus(m, L, d);
    const double mid = 2.0 / (L + m);
    CHECK(am <= ap + 1e-15);
    CHECK(ap <= mid + 1e-15);
    if (d == 0.0) {
      CHECK(am == doctest::Approx(mid).epsilon(1e-14));
      CHECK(ap == doctest::Approx(mid).epsilon(1e-14));
    } else {
      CHECK(ap < mid);
    }
  }
}

TEST_CASE("rho_gd_noisy at alpha_- and alpha_+ equals (kappa-1)/(kappa+1) + delta") {
  for (double kappa : {2.0, 5.0, 10.0, 40.0}) {
    for (double d : {0.05, 0.1, 1.0 / (kappa + 1)}) {
      const double m = 1.0, L = kappa;
      const double target = (kappa - 1.0) / (kappa + 1.0) + d;
      const double am = alpha_minus(m, L, d);
      if (am > 0.0)
        CHECK(rho_gd_noisy({m, L, am, d}) == doctest::Approx(target).epsilon(1e-13));
      CHECK(rho_gd_noisy({m, L, alpha_plus(m, L, d), d}) ==
            doctest::Approx(target).epsilon(1e-13));
    }
  }
}

TEST_CASE("prop2_rate examples and domain error") {
  CHECK(prop2_rate({1, 10, 0.1, 0.1}) == doctest::Approx(0.9100449539345945).epsilon(1e-12));
  CHECK(prop2_rate({1, 10, 0.15, 0.1}) == doctest::Approx(0.8726731584954596).epsilon(1e-12));
  CHECK(prop2_rate({1, 10, 0.1, 0.0}) == doctest::Approx(0.9045340337332909).epsilon(1e-12));
  CHECK(prop2_rate({1, 10, 0.1, 0.0}) > rho_gd(1, 10, 0.1));
  CHECK_THROWS_AS(prop2_rate({1, 10, 2.0 / 11, 0.1}), std::domain_error);
}

TEST_CASE("prop2_rate strictly exceeds rho_gd_noisy inside the interior window") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ud(0.02, 0.45), ut(0.05, 0.95);
  for (int i = 0; i < 200; ++i) {
    const double m = 1.0, L = 10.0;
    const double d = ud(rng);
    const double am = std::max(0.0, alpha_minus(m, L, d));
    const double ap = std::min(alpha_plus(m, L, d), 2.0 / (L + m));
    if (ap <= am) continue;
    const double a = am + ut(rng) * (ap - am);
    if (a <= am || a >= ap) continue;
    const ProblemSpec s{m, L, a, d};
    CHECK(prop2_rate(s) > rho_gd_noisy(s));
  }
}

TEST_CASE("prop3_sharp_rate values") {
  CHECK(prop3_sharp_rate(1, 10, 0.1) == doctest::Approx(10.1 / 11.9).epsilon(1e-14));
  CHECK(prop3_sharp_rate(1, 10, 0.0) == doctest::Approx(9.0 / 11).epsilon(1e-14));
  CHECK(prop3_sharp_rate(1, 2, 0.5) == doctest::Approx(2.5 / 3.5).epsilon(1e-14));
  // equals rho_gd_noisy at the optimal step size
  const double a_opt = 2.0 / (1.1 * 10 + 0.9 * 1);
  CHECK(prop3_sharp_rate(1, 10, 0.1) ==
        doctest::Approx(rho_gd_noisy({1, 10, a_opt, 0.1})).epsilon(1e-14));
}

TEST_CASE("classify_regime dispatch") {
  const RateRegime r1 = classify_regime({1, 10, 0.05, 0.1}, FunctionClass::Sector);
  CHECK(r1.kind == RegimeKind::Prop1SmallStep);
  CHECK(r1.certified_rho == doctest::Approx(0.955).epsilon(1e-14));

  const RateRegime r2 = classify_regime({1, 10, 0.15, 0.1}, FunctionClass::StronglyConvex);
  CHECK(r2.kind == RegimeKind::Prop3StronglyConvex);
  CHECK(r2.certified_rho == doctest::Approx(0.865).epsilon(1e-14));

  const RateRegime r3 = classify_regime({1, 10, 0.15, 0.1}, FunctionClass::Sector);
  CHECK(r3.kind == RegimeKind::Prop2Interior);
  CHECK(r3.certified_rho == doctest::Approx(0.8726731584954596).epsilon(1e-12));

  const RateRegime r4 = classify_regime({1, 10, 0.3, 0.5}, FunctionClass::Sector);
  CHECK(r4.kind == RegimeKind::Prop1LargeStep);
  CHECK(r4.certified_rho == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(r4.divergent());

  // strongly convex outside the window falls back to the sector branch
  const RateRegime r5 = classify_regime({1, 10, 0.05, 0.1}, FunctionClass::StronglyConvex);
  CHECK(r5.kind == RegimeKind::Prop1SmallStep);
  CHECK(r5.certified_rho == doctest::Approx(0.955).epsilon(1e-14));

  const RateRegime r6 = classify_regime({1, 10, 0.1, 0.0}, FunctionClass::Sector);
  CHECK(r6.kind == RegimeKind::NoiselessSector);
  CHECK(r6.certified_rho == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("classify_regime ties at the branch boundaries resolve toward Prop 1") {
  const double am = alpha_minus(1, 10, 0.1);
  CHECK(classify_regime({1, 10, am, 0.1}, FunctionClass::Sector).kind ==
        RegimeKind::Prop1SmallStep);
  const double ap = alpha_plus(1, 10, 0.1);
  CHECK(classify_regime({1, 10, ap, 0.1}, FunctionClass::Sector).kind ==
        RegimeKind::Prop1LargeStep);
}

TEST_CASE("classify_regime certified rate never drops below rho_gd_noisy") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(0.0, 0.8), ua(0.005, 0.35);
  for (int i = 0; i < 400; ++i) {
    const ProblemSpec s{1.0, 10.0, ua(rng), ud(rng)};
    for (auto cls : {FunctionClass::Sector, FunctionClass::StronglyConvex}) {
      const RateRegime r = classify_regime(s, cls);
      if (r.certifiable()) CHECK(r.certified_rho >= rho_gd_noisy(s) - 1e-12);
    }
  }
}

TEST_CASE("certified rate is nondecreasing in delta") {
  for (double alpha : {0.02, 0.08, 0.13, 0.17, 0.25}) {
    for (auto cls : {FunctionClass::Sector, FunctionClass::StronglyConvex}) {
      double prev = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double d = 0.6 * i / 40.0;
        const RateRegime r = classify_regime({1, 10, alpha, d}, cls);
        CHECK(r.certified_rho >= prev - 1e-10);
        prev = r.certified_rho;
      }
    }
  }
}

TEST_CASE("ProblemSpec validation") {
  CHECK_THROWS_AS(ProblemSpec(0, 1, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemSpec(2, 1, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemSpec(1, 2, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemSpec(1, 2, 0.1, 1.0), std::invalid_argument);
  CHECK(ProblemSpec(1, 2, 0.1, 0.0).kappa() == doctest::Approx(2.0));
}
