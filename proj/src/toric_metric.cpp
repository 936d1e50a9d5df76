#include "ckem/toric_metric.hpp"

#include <cmath>
#include <sstream>

namespace ckem {

void ToricMetricModel::require_interior(Point x) const {
  if (!polytope_.is_interior(x)) {
    std::ostringstream msg;
    msg << "point (" << x.x1 << ", " << x.x2 << ") is not interior to the polytope";
    throw DomainError(msg.str());
  }
}

double ToricMetricModel::guillemin_potential(Point x) const {
  require_interior(x);
  double g = 0.0;
  for (const auto& f : polytope_.facets()) {
    const double l = f(x);
    g += l * std::log(l);
  }
  return 0.5 * g;
}

SymMat2 ToricMetricModel::metric_hessian(Point x) const {
  require_interior(x);
  SymMat2 h;
  for (const auto& f : polytope_.facets()) {
    const double w = 0.5 / f(x);
    h.h11 += w * f.normal[0] * f.normal[0];
    h.h12 += w * f.normal[0] * f.normal[1];
    h.h22 += w * f.normal[1] * f.normal[1];
  }
  return h;
}

std::array<Jet2, 3> ToricMetricModel::inverse_hessian(const Jet2& x1,
                                                      const Jet2& x2) const {
  Jet2 h11, h12, h22;
  for (const auto& f : polytope_.facets()) {
    const Jet2 w = 0.5 * reciprocal(f(x1, x2));
    h11 += w * double(f.normal[0] * f.normal[0]);
    h12 += w * double(f.normal[0] * f.normal[1]);
    h22 += w * double(f.normal[1] * f.normal[1]);
  }
  const Jet2 det = h11 * h22 - h12 * h12;
  if (!(det.v > 0.0)) {
    throw DegeneracyError("metric Hessian lost positive definiteness");
  }
  const Jet2 inv = reciprocal(det);
  return {h22 * inv, -h12 * inv, h11 * inv};
}

double ToricMetricModel::scalar_curvature(Point x) const {
  require_interior(x);
  const auto u = inverse_hessian(Jet2::variable(x.x1, 0), Jet2::variable(x.x2, 1));
  return -(u[0].d2(0, 0) + 2.0 * u[1].d2(0, 1) + u[2].d2(1, 1));
}

double ToricMetricModel::laplacian(const JetField2& phi, Point x) const {
  require_interior(x);
  const Jet2 x1 = Jet2::variable(x.x1, 0);
  const Jet2 x2 = Jet2::variable(x.x2, 1);
  const auto u = inverse_hessian(x1, x2);
  const Jet2 f = phi(x1, x2);
  // sum_ij d_i(u^{ij}) d_j phi + u^{ij} d_i d_j phi
  const double div_u1 = u[0].d(0) + u[1].d(1);
  const double div_u2 = u[1].d(0) + u[2].d(1);
  const double first = div_u1 * f.d(0) + div_u2 * f.d(1);
  const double second =
      u[0].v * f.d2(0, 0) + 2.0 * u[1].v * f.d2(0, 1) + u[2].v * f.d2(1, 1);
  return -(first + second);
}

IntervalMetric::IntervalMetric(double t_min, double t_max, JetField1 psi, bool guillemin)
    : t_min_(t_min), t_max_(t_max), psi_(std::move(psi)), guillemin_(guillemin) {
  if (!(t_min < t_max)) throw ParameterDomainError("interval must satisfy t_min < t_max");
}

IntervalMetric IntervalMetric::guillemin(double t_min, double t_max) {
  auto psi = [t_min, t_max](const Jet1& t) {
    return 2.0 * reciprocal(reciprocal(t - t_min) + reciprocal(t_max - t));
  };
  return IntervalMetric(t_min, t_max, psi, true);
}

IntervalMetric IntervalMetric::from_profile(double t_min, double t_max, JetField1 psi) {
  return IntervalMetric(t_min, t_max, std::move(psi), false);
}

void IntervalMetric::require_interior(double t) const {
  if (!(t > t_min_ && t < t_max_)) {
    std::ostringstream msg;
    msg << "t = " << t << " is not inside (" << t_min_ << ", " << t_max_ << ")";
    throw DomainError(msg.str());
  }
}

double IntervalMetric::guillemin_potential(double t) const {
  if (!guillemin_) throw PreconditionError("metric was not built from a Guillemin potential");
  require_interior(t);
  const double l1 = t - t_min_;
  const double l2 = t_max_ - t;
  return 0.5 * (l1 * std::log(l1) + l2 * std::log(l2));
}

Jet1 IntervalMetric::profile(const Jet1& t) const { return psi_(t); }

double IntervalMetric::scalar_curvature(double t) const {
  require_interior(t);
  return -psi_(Jet1::variable(t, 0)).d2(0, 0);
}

double IntervalMetric::laplacian(const JetField1& phi, double t) const {
  require_interior(t);
  const Jet1 x = Jet1::variable(t, 0);
  const Jet1 psi = psi_(x);
  const Jet1 f = phi(x);
  return -(psi.d(0) * f.d(0) + psi.v * f.d2(0, 0));
}

}  // namespace ckem
