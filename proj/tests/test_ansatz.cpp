#include <doctest.h>

#include <cmath>
#include <random>

#include "ckem/ansatz.hpp"
#include "ckem/errors.hpp"

using namespace ckem;

namespace {

double rel(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("B = 0 profile on [1, 2] with m = 2") {
  const AnsatzProfile p = solve_boundary_value(2, 1.0, 2.0, 0.0);
  CHECK(std::abs(p.coef_A) <= 1e-12);
  CHECK(p.base_scalar == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(p.lin_d == doctest::Approx(-36.0).epsilon(1e-12));
  CHECK(p.const_e == doctest::Approx(48.0).epsilon(1e-12));
  const Polynomial psi = p.psi();
  const Polynomial want = guillemin_profile(1.0, 2.0);
  for (double t : {1.0, 1.2, 1.5, 1.7, 2.0}) CHECK(psi(t) == doctest::Approx(want(t)));
  for (double t : {1.1, 1.5, 1.9}) {
    CHECK(scalar_curvature_profile(p.curve(), t) == doctest::Approx(-36 * t + 48).epsilon(1e-12));
  }
}

TEST_CASE("boundary conditions hold for random data") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ua(0.1, 5.0), uw(0.2, 4.0), uB(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const int m = 2 + i % 5;
    const double a = ua(rng), b = a + uw(rng), B = uB(rng);
    const AnsatzProfile p = solve_boundary_value(m, a, b, B);
    const Polynomial psi = p.psi();
    const Polynomial dpsi = psi.derivative();
    double scale = 0.0;
    for (std::size_t k = 0; k < psi.coeffs().size(); ++k) {
      scale += std::abs(psi.coeffs()[k]) * std::pow(b, double(k));
    }
    CHECK(std::abs(psi(a)) <= 1e-9 * scale);
    CHECK(std::abs(psi(b)) <= 1e-9 * scale);
    CHECK(std::abs(dpsi(a) - 2.0) <= 1e-9 * scale);
    CHECK(std::abs(dpsi(b) + 2.0) <= 1e-9 * scale);
    CHECK(p.coef_B == B);
  }
}

TEST_CASE("closed forms match the linear solve") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ua(0.1, 10.0), uB(-10.0, 10.0);
  for (int i = 0; i < 300; ++i) {
    const int m = 2 + i % 5;
    double a = ua(rng), b = ua(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) continue;
    const double B = uB(rng);
    const AnsatzProfile p = solve_boundary_value(m, a, b, B);
    const Coefficients c = closed_form_coefficients(m, a, b, B);
    CHECK(rel(c.A, p.coef_A) <= 1e-8);
    CHECK(rel(c.c, p.base_scalar) <= 1e-8);
    CHECK(rel(c.d, p.lin_d) <= 1e-8);
    CHECK(rel(c.e, p.const_e) <= 1e-8);
    const auto [d0, d1] = linear_coefficient_map(m, a, b);
    CHECK(rel(d0 + d1 * B, p.lin_d) <= 1e-8);
  }
}

TEST_CASE("closed forms reject degenerate input") {
  CHECK_THROWS_AS(closed_form_coefficients(2, 1.0, 1.0, 0.0), ParameterDomainError);
  CHECK_THROWS_AS(solve_boundary_value(1, 1.0, 2.0, 0.0), ParameterDomainError);
  CHECK_THROWS_AS(solve_boundary_value(2, 0.0, 2.0, 0.0), ParameterDomainError);
  CHECK_THROWS_AS(solve_boundary_value(2, 2.0, 1.0, 0.0), ParameterDomainError);
}

TEST_CASE("flat base solutions") {
  const AnsatzProfile p2 = zero_base_scalar_profile(2);
  CHECK(p2.coef_A == doctest::Approx(2.0 / 13.0).epsilon(1e-13));
  CHECK(p2.coef_B == doctest::Approx(-12.0 / 13.0).epsilon(1e-13));
  CHECK(p2.lin_d == doctest::Approx(-324.0 / 13.0).epsilon(1e-13));
  CHECK(p2.const_e == doctest::Approx(528.0 / 13.0).epsilon(1e-13));
  CHECK(p2.base_scalar == 0.0);

  const AnsatzProfile p3 = zero_base_scalar_profile(3);
  CHECK(p3.coef_A == doctest::Approx(0.081996434937611408).epsilon(1e-12));
  CHECK(p3.coef_B == doctest::Approx(-0.25668449197860963).epsilon(1e-12));
  CHECK(p3.lin_d == doctest::Approx(-55.828877005347594).epsilon(1e-12));
  CHECK(p3.const_e == doctest::Approx(78.502673796791444).epsilon(1e-12));

  for (int m = 2; m <= 6; ++m) {
    const AnsatzProfile z = zero_base_scalar_profile(m);
    const AnsatzProfile s = solve_boundary_value(m, 1.0, 2.0, z.coef_B);
    CHECK(std::abs(s.base_scalar) <= 1e-9 * std::abs(s.lin_d));
    CHECK(rel(s.coef_A, z.coef_A) <= 1e-9);
    CHECK(rel(s.lin_d, z.lin_d) <= 1e-9);
    CHECK(rel(s.const_e, z.const_e) <= 1e-9);
    CHECK(positivity_certificate(z.quintic(), 1.0, 2.0).verdict == Positivity::PositiveByLemma);
  }
}

TEST_CASE("reduced ODE residual") {
  const AnsatzProfile p = solve_boundary_value(2, 1.0, 2.0, 0.0);
  for (double t : {0.5, 1.0, 1.5, 3.0}) CHECK(std::abs(ode_residual(p, t)) <= 1e-10);
  // Both sides equal -3 at t = 3/2; raising e by one leaves a residual of one.
  CHECK(ode_residual(p.psi(), 2, p.base_scalar, p.lin_d, p.const_e + 1.0, 1.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ode_residual(p.psi(), 2, 0.0, 0.0, 0.0, 1.5) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("every profile solves the ODE with the stated right-hand side") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(0.2, 3.0), uw(0.3, 3.0), uB(-3.0, 3.0);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const int m = 2 + i % 4;
    const double a = ua(rng), b = a + uw(rng);
    const AnsatzProfile p = solve_boundary_value(m, a, b, uB(rng));
    CHECK(p.psi().degree() == std::size_t(2 * m));
    const double t = a + (b - a) * ut(rng);
    const double size = std::abs(p.base_scalar * t * t) + std::abs(p.lin_d * t) +
                        std::abs(p.const_e) + 1.0;
    CHECK(std::abs(ode_residual(p, t)) <= 1e-9 * size);
    CHECK(extremality_defect(p) <= 1e-8 * size);
  }
}

TEST_CASE("homothety of the interval") {
  const int m = 3;
  const double a = 0.7, b = 1.9, B = 0.4;
  const AnsatzProfile p = solve_boundary_value(m, a, b, B);
  for (double lambda : {2.0, 1.0 / 3.0}) {
    const AnsatzProfile q =
        solve_boundary_value(m, lambda * a, lambda * b, B * std::pow(lambda, 2.0 - 2 * m));
    CHECK(rel(q.coef_A, p.coef_A * std::pow(lambda, 1.0 - 2 * m)) <= 1e-9);
    CHECK(rel(q.base_scalar, p.base_scalar / lambda) <= 1e-9);
    CHECK(rel(q.lin_d, p.lin_d) <= 1e-9);
    CHECK(rel(q.const_e, p.const_e * lambda) <= 1e-9);
  }
}

TEST_CASE("positivity verdicts") {
  const AnsatzProfile zero = solve_boundary_value(2, 1.0, 2.0, 0.0);
  const PositivityResult r = positivity_certificate(zero.quintic(), 1.0, 2.0);
  CHECK(r.verdict == Positivity::PositiveBySampling);
  CHECK(r.deflated_min == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.peak == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.peak_at == doctest::Approx(1.5).epsilon(1e-3));

  LemmaQuintic flipped;
  flipped.m = 2;
  flipped.gamma = 2.0;
  flipped.delta = -6.0;
  flipped.eps = 4.0;
  CHECK(positivity_certificate(flipped, 1.0, 2.0).verdict == Positivity::NotPositive);
  CHECK(sampled_positivity(Polynomial({-1.0}), 0.0, 1.0).verdict == Positivity::NotPositive);

  CHECK(to_string(Positivity::PositiveByLemma) == "positive_by_lemma");
  CHECK(to_string(Positivity::PositiveBySampling) == "positive_by_sampling");
  CHECK(to_string(Positivity::NotPositive) == "not_positive");
}

TEST_CASE("lemma verdict implies positive samples") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ua(0.2, 3.0), uw(0.3, 3.0), uB(-20.0, 20.0);
  int lemma = 0;
  for (int i = 0; i < 400; ++i) {
    const int m = 2 + i % 4;
    const double a = ua(rng), b = a + uw(rng);
    const AnsatzProfile p = solve_boundary_value(m, a, b, uB(rng));
    const PositivityResult r = positivity_certificate(p.quintic(), a, b, 2000);
    if (r.verdict != Positivity::PositiveByLemma) continue;
    ++lemma;
    CHECK(r.sampled_min > 0.0);
    CHECK(r.deflated_min > 0.0);
  }
  CHECK(lemma > 0);
}

TEST_CASE("scalar curvature is only defined inside the interval") {
  const ProfileCurve c = solve_boundary_value(2, 1.0, 2.0, 0.0).curve();
  CHECK_THROWS_AS(scalar_curvature_profile(c, 1.0), DomainError);
  CHECK_THROWS_AS(scalar_curvature_profile(c, 2.5), DomainError);
}

TEST_CASE("cKEM choice of B") {
  const CkemResult r = find_ckem(2, 1.0, 2.0);
  CHECK(r.coef_B == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(r.profile.coef_A == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.profile.base_scalar == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(std::abs(r.profile.lin_d) <= 1e-10);
  CHECK(r.certificate.verdict == Positivity::PositiveBySampling);
  CHECK(r.feasible());
  for (double t : {1.1, 1.5, 1.9}) {
    CHECK(scalar_curvature_profile(r.profile.curve(), t) ==
          doctest::Approx(r.profile.const_e).epsilon(1e-10));
  }

  const CkemResult wide = find_ckem(2, 1.0, 100.0);
  CHECK(std::abs(wide.profile.lin_d) <= 1e-10 * std::abs(wide.profile.const_e));
}

TEST_CASE("weighted integrals and Calabi energy") {
  const ProfileCurve c = solve_boundary_value(2, 1.0, 2.0, 0.0).curve();
  CHECK(weighted_integral(c, [](double) { return 1.0; }) ==
        doctest::Approx(15.0 / 64.0).epsilon(1e-13));
  const auto s = [&](double t) { return scalar_curvature_profile(c, t); };
  CHECK(weighted_integral(c, s) == doctest::Approx(0.75).epsilon(1e-11));
  CHECK(weighted_integral(c, [&](double t) { return t * s(t); }) ==
        doctest::Approx(0.5).epsilon(1e-11));
  CHECK(calabi_energy(c) == doctest::Approx(18.0).epsilon(1e-11));

  // Cauchy-Schwarz: Phi >= I0^2 / vol, with equality for constant S~.
  const double vol = 15.0 / 64.0;
  CHECK(calabi_energy(c) >= 0.75 * 0.75 / vol);
  const ProfileCurve k = find_ckem(2, 1.0, 2.0).profile.curve();
  const double i0 = weighted_integral(k, [&](double t) { return scalar_curvature_profile(k, t); });
  CHECK(calabi_energy(k) == doctest::Approx(i0 * i0 / vol).epsilon(1e-10));
}

TEST_CASE("bumps vanish to second order at the ends") {
  for (int k = 0; k <= 4; ++k) {
    const Polynomial p = chebyshev_bump(1.0, 3.0, k);
    const Polynomial dp = p.derivative();
    for (double t : {1.0, 3.0}) {
      CHECK(std::abs(p(t)) <= 1e-12);
      CHECK(std::abs(dp(t)) <= 1e-12);
    }
  }
}

TEST_CASE("random perturbations keep the boundary data and positivity") {
  const ProfileCurve base{3, 0.5, 2.5, 1.0, guillemin_profile(0.5, 2.5)};
  const auto perts = random_perturbations(base, 10, 77);
  REQUIRE(perts.size() == 10);
  for (const auto& pert : perts) {
    const ProfileCurve c = pert.curve();
    const Polynomial d = c.psi.derivative();
    CHECK(std::abs(c.psi(0.5)) <= 1e-10);
    CHECK(std::abs(c.psi(2.5)) <= 1e-10);
    CHECK(d(0.5) == doctest::Approx(2.0));
    CHECK(d(2.5) == doctest::Approx(-2.0));
    CHECK(sampled_positivity(c.psi, 0.5, 2.5, 2000).verdict != Positivity::NotPositive);
  }
  const auto again = random_perturbations(base, 10, 77);
  CHECK(again[3].amplitude == perts[3].amplitude);
}

TEST_CASE("Calabi energy is critical at solutions") {
  const AnsatzProfile p = solve_boundary_value(2, 1.0, 2.0, 0.5);
  CHECK(calabi_derivative(p.curve(), Polynomial({0.0}), 1e-3) == 0.0);
  std::vector<Polynomial> bumps;
  for (int k = 0; k <= 2; ++k) bumps.push_back(chebyshev_bump(1.0, 2.0, k));
  const VerificationReport r = criticality_test(p, bumps);
  CHECK(r.pass);
  CHECK(r.get("max_abs_derivative") <= 1e-5 * r.get("calabi_energy"));
}

TEST_CASE("weighted integrals are invariant along admissible perturbations") {
  const VerificationReport none = invariance_test(2, 1.0, 2.0, -4.0, 0, 1);
  CHECK(none.pass);
  CHECK(none.get("spread.I0") == 0.0);
  const VerificationReport r = invariance_test(2, 1.0, 2.0, -4.0, 4, 11);
  CHECK(r.pass);
  CHECK(r.get("I0") == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(r.get("spread.I2_control") > 1e-3);
}

TEST_CASE("profile JSON round trip") {
  const AnsatzProfile p = solve_boundary_value(4, 0.3, 1.7, -0.25);
  nlohmann::json j = p;
  const auto q = j.get<AnsatzProfile>();
  CHECK(q.m == p.m);
  CHECK(q.t_min == p.t_min);
  CHECK(q.t_max == p.t_max);
  CHECK(q.coef_A == p.coef_A);
  CHECK(q.coef_B == p.coef_B);
  CHECK(q.base_scalar == p.base_scalar);
  CHECK(q.lin_d == p.lin_d);
  CHECK(q.const_e == p.const_e);
}
