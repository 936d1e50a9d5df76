#include "ckem/invariants.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ckem/errors.hpp"

namespace ckem {
namespace {

bool same_polygon(const MomentPolytope& a, const MomentPolytope& b) {
  if (a.vertices().size() != b.vertices().size()) return false;
  for (std::size_t k = 0; k < a.vertices().size(); ++k) {
    if (std::hypot(a.vertices()[k].x1 - b.vertices()[k].x1,
                   a.vertices()[k].x2 - b.vertices()[k].x2) > 1e-12) {
      return false;
    }
  }
  return true;
}

}  // namespace

KillingSetup::KillingSetup(MomentPolytope polytope, AffineHamiltonian f, int m)
    : polytope_(std::move(polytope)), f_(f), m_(m) {
  if (m < 2) {
    throw SetupError("complex dimension m must be at least 2");
  }
  const double lo = affine_min(f_, polytope_);
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "Killing potential is not positive on the polytope (min " << lo << ")";
    throw SetupError(msg.str());
  }
}

WeightedScalarField conformal_scalar_curvature(const KillingSetup& setup,
                                               const ToricMetricModel& metric) {
  if (!same_polygon(setup.polytope(), metric.polytope())) {
    throw SetupError("metric and Killing setup live on different polytopes");
  }
  const AffineHamiltonian f = setup.potential();
  const int m = setup.m();
  const double lead = 2.0 * (2.0 * m - 1.0) / (m - 1.0);
  JetField2 power = [f, m](const Jet2& x1, const Jet2& x2) {
    return pow(f(x1, x2), 1.0 - m);
  };
  return WeightedScalarField([metric, f, m, lead, power](Point x) {
    const double fx = f(x);
    return lead * std::pow(fx, m + 1) * metric.laplacian(power, x) +
           metric.scalar_curvature(x) * fx * fx;
  });
}

double weighted_average(const KillingSetup& setup, const Field& scalar,
                        const QuadratureRule& rule) {
  const AffineHamiltonian f = setup.potential();
  const double w = setup.weight_plus();
  const double num = integrate(
      setup.polytope(), [&](Point x) { return scalar(x) * std::pow(f(x), -w); }, rule);
  const double den =
      integrate(setup.polytope(), [&](Point x) { return std::pow(f(x), -w); }, rule);
  return num / den;
}

double futaki_character(const KillingSetup& setup, const Field& scalar, const Field& u,
                        const QuadratureRule& rule) {
  const double mean = weighted_average(setup, scalar, rule);
  const AffineHamiltonian f = setup.potential();
  const double w = setup.weight_plus();
  return integrate(
      setup.polytope(),
      [&](Point x) { return (scalar(x) - mean) * u(x) * std::pow(f(x), -w); }, rule);
}

double FutakiPair::norm() const { return std::hypot(mu1, mu2); }

double futaki_toric(double p, const AffineHamiltonian& f, const AffineHamiltonian& u,
                    int m, const QuadratureRule& rule) {
  KillingSetup setup(make_blowup_polytope(p), f, m);
  const ToricMetricModel metric(setup.polytope());
  const auto scalar = conformal_scalar_curvature(setup, metric);
  return futaki_character(setup, scalar.field(), [u](Point x) { return u(x); }, rule);
}

FutakiPair futaki_toric_basis(double p, const AffineHamiltonian& f, int m,
                              const QuadratureRule& rule) {
  KillingSetup setup(make_blowup_polytope(p), f, m);
  const ToricMetricModel metric(setup.polytope());
  const auto scalar = conformal_scalar_curvature(setup, metric);
  const double w = setup.weight_plus();

  // One pass over the nodes; the six weighted moments share S and f^{-w}.
  const auto nodes = quadrature_nodes(setup.polytope(), rule);
  std::array<std::vector<double>, 6> terms;
  for (auto& t : terms) t.resize(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Point x = nodes[k].x;
    const double weight = nodes[k].weight * std::pow(f(x), -w);
    const double s = scalar(x);
    if (!std::isfinite(s)) {
      throw EvaluationError("weighted scalar curvature is not finite", x.x1, x.x2);
    }
    terms[0][k] = s * weight;
    terms[1][k] = weight;
    terms[2][k] = s * x.x1 * weight;
    terms[3][k] = x.x1 * weight;
    terms[4][k] = s * x.x2 * weight;
    terms[5][k] = x.x2 * weight;
  }
  std::array<double, 6> mom;
  for (std::size_t i = 0; i < 6; ++i) mom[i] = pairwise_sum(terms[i].data(), nodes.size());
  const double mean = mom[0] / mom[1];
  return {mom[2] - mean * mom[3], mom[4] - mean * mom[5]};
}

void IntervalSetup::validate() const {
  if (m < 2) throw SetupError("complex dimension m must be at least 2");
  if (!(t_min > 0.0 && t_min < t_max)) {
    throw SetupError("moment interval must satisfy 0 < t_min < t_max");
  }
}

double weighted_integral(const IntervalSetup& setup, const Field1& h) {
  setup.validate();
  const int w = 2 * setup.m + 1;
  auto integrand = [&](double t) { return h(t) * std::pow(t, -w); };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, setup.t_min, setup.t_max, 12, 1e-12, &error);
  return value;
}

Field1 conformal_scalar_curvature(const IntervalSetup& setup, const IntervalMetric& metric,
                                  double base_scalar) {
  setup.validate();
  const int m = setup.m;
  const double lead = 2.0 * (2.0 * m - 1.0) / (m - 1.0);
  return [metric, m, lead, base_scalar](double t) {
    const JetField1 power = [m](const Jet1& s) { return pow(s, 1.0 - m); };
    const double total_scalar = base_scalar + metric.scalar_curvature(t);
    return lead * std::pow(t, m + 1) * metric.laplacian(power, t) + total_scalar * t * t;
  };
}

double weighted_average(const IntervalSetup& setup, const Field1& scalar) {
  return weighted_integral(setup, scalar) /
         weighted_integral(setup, [](double) { return 1.0; });
}

double futaki_character(const IntervalSetup& setup, const Field1& scalar, const Field1& u) {
  const double mean = weighted_average(setup, scalar);
  return weighted_integral(setup, [&](double t) { return (scalar(t) - mean) * u(t); });
}

}  // namespace ckem
