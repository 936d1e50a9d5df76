#pragma once

// Calabi-type construction of f-extremal metrics on CP^1 x M.
//
// On the CP^1 factor the metric is dt^2/Psi + Psi dtheta^2 over the moment
// interval [t_min, t_max], f = t, and M carries a metric of constant scalar
// curvature c. The conformal scalar curvature of g/t^2 is
//
//   S~(t) = 2(2m-1) t^{m+1} (Psi/t^m)' + (c - Psi'') t^2,
//
// and f-extremality is S~ = d t + e, equivalently the Euler-type ODE
//
//   t^2 Psi'' - 2(2m-1) t Psi' + 2m(2m-1) Psi = c t^2 - d t - e,
//
// whose general solution is A t^{2m} + B t^{2m-1} + gamma t^2 + delta t + eps
// with gamma = c/(2(m-1)(2m-3)), delta = -d/(2(m-1)(2m-1)),
// eps = -e/(2m(2m-1)). Closing the metric requires Psi(t_min) = Psi(t_max) = 0,
// Psi'(t_min) = 2, Psi'(t_max) = -2 and Psi > 0 inside.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ckem/invariants.hpp"
#include "ckem/polynomial.hpp"
#include "ckem/report.hpp"

namespace ckem {

/// Anything with a profile Psi on [t_min, t_max] and a base scalar curvature.
struct ProfileCurve {
  int m = 2;
  double t_min = 1.0;
  double t_max = 2.0;
  double base_scalar = 0.0;
  Polynomial psi;

  IntervalSetup setup() const { return {t_min, t_max, m}; }
};

/// Coefficients (alpha, beta, gamma, delta, eps) of
/// alpha t^{2m} + beta t^{2m-1} + gamma t^2 + delta t + eps.
struct LemmaQuintic {
  int m = 2;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double eps = 0.0;

  Polynomial polynomial() const;
};

struct AnsatzProfile {
  int m = 2;
  double t_min = 1.0;
  double t_max = 2.0;
  double coef_A = 0.0;
  double coef_B = 0.0;
  double base_scalar = 0.0;  // c
  double lin_d = 0.0;
  double const_e = 0.0;

  LemmaQuintic quintic() const;
  Polynomial psi() const { return quintic().polynomial(); }
  ProfileCurve curve() const { return {m, t_min, t_max, base_scalar, psi()}; }
};

void to_json(nlohmann::json& j, const AnsatzProfile& profile);
void from_json(const nlohmann::json& j, AnsatzProfile& profile);

/// Base curve plus amplitude * bump, with the bump vanishing to second order
/// at both ends so the boundary conditions are preserved.
struct PerturbedProfile {
  ProfileCurve base;
  Polynomial bump;
  double amplitude = 0.0;

  ProfileCurve curve() const;
};

/// (t - a)^2 (t - b)^2 T_k(s) with s = (2t - a - b)/(b - a).
Polynomial chebyshev_bump(double a, double b, int degree);

/// (t - a)^2 (t - b)^2 sum_k weights[k] T_k(s).
Polynomial chebyshev_bump(double a, double b, const std::vector<double>& weights);

/// -2 (t - a)(t - b)/(b - a): the B = 0 profile, which is also the Guillemin
/// profile of the interval.
Polynomial guillemin_profile(double a, double b);

// ---- boundary-value problem ---------------------------------------------

/// Solves the four boundary conditions for (A, c, d, e) with B given.
AnsatzProfile solve_boundary_value(int m, double a, double b, double coef_B);

struct Coefficients {
  double A = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
};

/// Rational closed forms of (A, c, d, e) as functions of (m, a, b, B).
Coefficients closed_form_coefficients(int m, double a, double b, double coef_B);

/// The affine dependence d(B) = d0 + d1 B of the linear coefficient.
std::pair<double, double> linear_coefficient_map(int m, double a, double b);

/// The c = 0 solution on [1, 2] built from its explicit expressions in m.
AnsatzProfile zero_base_scalar_profile(int m);

/// LHS - RHS of the reduced ODE at t.
double ode_residual(const AnsatzProfile& profile, double t);

/// Same, for an arbitrary profile and right-hand side c t^2 - d t - e.
double ode_residual(const Polynomial& psi, int m, double c, double d, double e, double t);

// ---- positivity ----------------------------------------------------------

enum class Positivity { PositiveByLemma, PositiveBySampling, NotPositive };
std::string to_string(Positivity p);

struct PositivityResult {
  Positivity verdict = Positivity::NotPositive;
  /// Smallest sampled value of Psi / ((t - a)(b - t)), the profile with its
  /// boundary zeros divided out.
  double deflated_min = 0.0;
  double deflated_argmin = 0.0;
  /// Smallest sampled value of Psi itself (negative only when not positive).
  double sampled_min = 0.0;
  double sampled_argmin = 0.0;
  /// Largest sampled value of Psi.
  double peak = 0.0;
  double peak_at = 0.0;
  std::string reason;
};

/// Positive by the lemma when alpha*delta > 0, f(a) = f(b) = 0 (to `tol`
/// relative to the coefficient scale), f'(a) > 0 and f'(b) < 0. Otherwise
/// decided by `samples` interior samples, refined around the worst one.
PositivityResult positivity_certificate(const LemmaQuintic& quintic, double a, double b,
                                        int samples = 10000, double tol = 1e-9);

/// Sampling-only certificate for an arbitrary profile polynomial.
PositivityResult sampled_positivity(const Polynomial& psi, double a, double b,
                                    int samples = 10000);

// ---- scalar curvature and functionals -----------------------------------

/// S~(t) for t strictly inside the interval; DomainError otherwise.
double scalar_curvature_profile(const ProfileCurve& curve, double t);

/// Sup deviation of S~ from its least-squares affine fit on `samples` nodes.
double affine_fit_residual(const ProfileCurve& curve, int samples = 401);

/// Sup over `samples` interior nodes of |S~(t) - (d t + e)|.
double extremality_defect(const AnsatzProfile& profile, int samples = 401);

/// integral h(t) t^{-(2m+1)} dt over the curve's interval.
double weighted_integral(const ProfileCurve& curve, const Field1& h);

/// Weighted Calabi energy: integral S~^2 t^{-(2m+1)} dt.
double calabi_energy(const ProfileCurve& curve);

/// Richardson-extrapolated central difference of the Calabi energy along
/// curve + eps * bump at eps = 0.
double calabi_derivative(const ProfileCurve& curve, const Polynomial& bump, double step);

// ---- cKEM ----------------------------------------------------------------

struct CkemResult {
  AnsatzProfile profile;
  PositivityResult certificate;
  double coef_B = 0.0;
  bool feasible() const { return certificate.verdict != Positivity::NotPositive; }
};

/// Chooses B so that d = 0 (constant conformal scalar curvature).
CkemResult find_ckem(int m, double a, double b);

// ---- verification checks -------------------------------------------------

/// Criticality of the weighted Calabi energy at `profile` along each bump,
/// with a displaced non-solution base as a negative control.
VerificationReport criticality_test(const AnsatzProfile& profile,
                                    const std::vector<Polynomial>& bumps,
                                    double relative_tol = 1e-5);

/// Invariance of integral S~ h t^{-(2m+1)} for h in {1, t} across random
/// admissible perturbations of the B = 0 profile.
VerificationReport invariance_test(int m, double a, double b, double base_scalar,
                                   int n_perturbations, std::uint64_t seed,
                                   double relative_tol = 1e-6);

/// Random admissible perturbations used by invariance_test (deterministic in
/// seed): each keeps the boundary data and stays positive.
std::vector<PerturbedProfile> random_perturbations(const ProfileCurve& base, int count,
                                                   std::uint64_t seed);

}  // namespace ckem
