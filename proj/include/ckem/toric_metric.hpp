#pragma once

// Torus-invariant Kähler metrics in symplectic (moment) coordinates.
//
// A metric is described by its symplectic potential G; the Riemannian metric
// on the moment directions is Hess(G) and on the angle directions its
// inverse. Scalar curvature and the Laplacian only need (Hess G)^{-1} and its
// first two derivatives, which are computed exactly with Jet arithmetic.

#include <array>
#include <functional>

#include "ckem/errors.hpp"
#include "ckem/jet.hpp"
#include "ckem/polytope.hpp"

namespace ckem {

struct SymMat2 {
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;
  double det() const { return h11 * h22 - h12 * h12; }
};

/// Scalar field of the moment variables, evaluated on second-order jets.
using JetField2 = std::function<Jet2(const Jet2&, const Jet2&)>;
using JetField1 = std::function<Jet1(const Jet1&)>;

enum class PotentialKind { Guillemin };

class ToricMetricModel {
 public:
  explicit ToricMetricModel(MomentPolytope polytope,
                            PotentialKind kind = PotentialKind::Guillemin)
      : polytope_(std::move(polytope)), kind_(kind) {}

  const MomentPolytope& polytope() const { return polytope_; }
  PotentialKind kind() const { return kind_; }

  /// 1/2 sum_k l_k log l_k.
  double guillemin_potential(Point x) const;

  /// Hess G = 1/2 sum_k n_k n_k^T / l_k.
  SymMat2 metric_hessian(Point x) const;

  /// Entries (u11, u12, u22) of (Hess G)^{-1} as jets in (x1, x2).
  std::array<Jet2, 3> inverse_hessian(const Jet2& x1, const Jet2& x2) const;

  /// Abreu's formula S = -sum_ij d^2 u^{ij} / dx_i dx_j.
  double scalar_curvature(Point x) const;

  /// Nonnegative Laplacian  -sum_ij d_i (u^{ij} d_j phi).
  double laplacian(const JetField2& phi, Point x) const;

 private:
  void require_interior(Point x) const;

  MomentPolytope polytope_;
  PotentialKind kind_;
};

/// Circle-invariant metric dt^2/Psi + Psi dtheta^2 on the moment interval
/// (t_min, t_max): the one-dimensional reduction of ToricMetricModel, where
/// (Hess G)^{-1} is the profile Psi itself.
class IntervalMetric {
 public:
  /// Psi = 1 / G'' for G = 1/2 (l_1 log l_1 + l_2 log l_2).
  static IntervalMetric guillemin(double t_min, double t_max);
  static IntervalMetric from_profile(double t_min, double t_max, JetField1 psi);

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

  /// Defined only for the Guillemin kind.
  double guillemin_potential(double t) const;
  Jet1 profile(const Jet1& t) const;
  double profile(double t) const { return profile(Jet1::variable(t, 0)).v; }
  /// -Psi''.
  double scalar_curvature(double t) const;
  /// -(Psi phi')'.
  double laplacian(const JetField1& phi, double t) const;

 private:
  IntervalMetric(double t_min, double t_max, JetField1 psi, bool guillemin);
  void require_interior(double t) const;

  double t_min_;
  double t_max_;
  JetField1 psi_;
  bool guillemin_;
};

}  // namespace ckem
