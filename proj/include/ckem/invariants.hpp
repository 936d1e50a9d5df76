#pragma once

// Weighted (conformal) scalar curvature S(J,f) of f^{-2} g_J, its
// f^{-(2m+1)}-weighted average, and the Futaki-type character
//
//   Fut(u) = integral (S(J,f) - c_bar) u f^{-(2m+1)} dmu.
//
// Two domains are supported: a Delzant polygon with an affine Killing
// potential, and a moment interval (t_min, t_max) with f = t, the
// one-dimensional reduction used by the Calabi-type ansatz. Integrals are
// against Lebesgue measure on the moment domain; constant volume factors are
// dropped since every use is a ratio, a vanishing test or a comparison.

#include <functional>

#include "ckem/polytope.hpp"
#include "ckem/toric_metric.hpp"

namespace ckem {

class KillingSetup {
 public:
  /// Throws SetupError unless m >= 2 and f > 0 on the polytope.
  KillingSetup(MomentPolytope polytope, AffineHamiltonian f, int m);

  const MomentPolytope& polytope() const { return polytope_; }
  const AffineHamiltonian& potential() const { return f_; }
  int m() const { return m_; }
  int weight_minus() const { return 2 * m_ - 1; }
  int weight_plus() const { return 2 * m_ + 1; }

 private:
  MomentPolytope polytope_;
  AffineHamiltonian f_;
  int m_;
};

class WeightedScalarField {
 public:
  explicit WeightedScalarField(Field eval) : eval_(std::move(eval)) {}
  double operator()(Point x) const { return eval_(x); }
  const Field& field() const { return eval_; }

 private:
  Field eval_;
};

/// S(J,f) = 2 (2m-1)/(m-1) f^{m+1} Delta_J(f^{1-m}) + S_J f^2.
WeightedScalarField conformal_scalar_curvature(const KillingSetup& setup,
                                               const ToricMetricModel& metric);

double weighted_average(const KillingSetup& setup, const Field& scalar,
                        const QuadratureRule& rule = {});

double futaki_character(const KillingSetup& setup, const Field& scalar, const Field& u,
                        const QuadratureRule& rule = {});

/// Futaki character on the blow-up polygon for the Guillemin metric, with u
/// an affine Hamiltonian (a torus direction).
double futaki_toric(double p, const AffineHamiltonian& f, const AffineHamiltonian& u,
                    int m = 2, const QuadratureRule& rule = {});

struct FutakiPair {
  double mu1 = 0.0;  // Fut(mu_1)
  double mu2 = 0.0;  // Fut(mu_2)
  double norm() const;
};

/// (Fut(mu_1), Fut(mu_2)) sharing one scalar-curvature field.
FutakiPair futaki_toric_basis(double p, const AffineHamiltonian& f, int m = 2,
                              const QuadratureRule& rule = {});

// ---- one-dimensional reduction ------------------------------------------

using Field1 = std::function<double(double)>;

struct IntervalSetup {
  double t_min = 1.0;
  double t_max = 2.0;
  int m = 2;
  void validate() const;
};

/// Adaptive Gauss-Kronrod integral of h(t) t^{-(2m+1)} over the interval.
double weighted_integral(const IntervalSetup& setup, const Field1& h);

/// S(J,f) for f = t on the product of the interval metric with a base of
/// constant scalar curvature base_scalar.
Field1 conformal_scalar_curvature(const IntervalSetup& setup, const IntervalMetric& metric,
                                  double base_scalar);

double weighted_average(const IntervalSetup& setup, const Field1& scalar);

double futaki_character(const IntervalSetup& setup, const Field1& scalar, const Field1& u);

}  // namespace ckem
