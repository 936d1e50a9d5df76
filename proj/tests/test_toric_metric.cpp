#include <doctest.h>

#include <cmath>
#include <random>

#include "ckem/errors.hpp"
#include "ckem/toric_metric.hpp"

using namespace ckem;

namespace {

Point random_interior(const MomentPolytope& P, std::mt19937_64& rng, double margin) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const Point x{u(rng), u(rng)};
    if (P.min_facet_value(x) > margin) return x;
  }
}

// Entry (i, j) of the inverse Hessian at x, from the plain double Hessian.
double inverse_entry(const ToricMetricModel& M, Point x, int i, int j) {
  const SymMat2 H = M.metric_hessian(x);
  const double det = H.det();
  if (i == 0 && j == 0) return H.h22 / det;
  if (i == 1 && j == 1) return H.h11 / det;
  return -H.h12 / det;
}

// Richardson-extrapolated central second difference of g along directions
// e_i, e_j.
template <class G>
double second_difference(const G& g, Point x, int i, int j, double h) {
  auto shifted = [&](double si, double sj) {
    Point y = x;
    (i == 0 ? y.x1 : y.x2) += si;
    (j == 0 ? y.x1 : y.x2) += sj;
    return g(y);
  };
  auto d2 = [&](double s) {
    if (i == j) return (shifted(s, 0) - 2 * g(x) + shifted(-s, 0)) / (s * s);
    return (shifted(s, s) - shifted(s, -s) - shifted(-s, s) + shifted(-s, -s)) / (4 * s * s);
  };
  return (4.0 * d2(h / 2) - d2(h)) / 3.0;
}

}  // namespace

TEST_CASE("Guillemin potential values") {
  const auto I = IntervalMetric::guillemin(0.0, 1.0);
  CHECK(I.guillemin_potential(0.5) == doctest::Approx(-std::log(2.0) / 2).epsilon(1e-15));

  const ToricMetricModel M(make_blowup_polytope(0.5));
  const Point c = M.polytope().centroid();
  double direct = 0.0;
  for (const auto& f : M.polytope().facets()) direct += 0.5 * f(c) * std::log(f(c));
  CHECK(M.guillemin_potential(c) == doctest::Approx(direct).epsilon(1e-15));
  CHECK_THROWS_AS(M.guillemin_potential({0.0, 0.3}), DomainError);
  CHECK_THROWS_AS(M.guillemin_potential({0.7, 0.1}), DomainError);
}

TEST_CASE("metric Hessian at (1/4, 1/4) on the p = 1/2 polygon") {
  const ToricMetricModel M(make_blowup_polytope(0.5));
  const SymMat2 H = M.metric_hessian({0.25, 0.25});
  CHECK(H.h11 == doctest::Approx(5.0));
  CHECK(H.h12 == doctest::Approx(1.0));
  CHECK(H.h22 == doctest::Approx(3.0));
  CHECK_THROWS_AS(M.metric_hessian({0.5, 0.2}), DomainError);
}

TEST_CASE("metric Hessian is positive definite at random interior points") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pd(0.01, 0.99);
  for (int k = 0; k < 20; ++k) {
    const ToricMetricModel M(make_blowup_polytope(pd(rng)));
    for (int i = 0; i < 500; ++i) {
      const SymMat2 H = M.metric_hessian(random_interior(M.polytope(), rng, 0.0));
      CHECK(H.h11 > 0.0);
      CHECK(H.det() > 0.0);
    }
  }
}

TEST_CASE("scalar curvature of the simplex is 12") {
  const ToricMetricModel M(make_standard_simplex());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Point x = random_interior(M.polytope(), rng, 0.01);
    CHECK(std::abs(M.scalar_curvature(x) - 12.0) <= 1e-8);
  }
}

TEST_CASE("total scalar curvature is twice the lattice perimeter") {
  for (double p : {0.2, 0.5, 0.8, 0.95}) {
    const ToricMetricModel M(make_blowup_polytope(p));
    const double total =
        integrate(M.polytope(), [&](Point x) { return M.scalar_curvature(x); }, {3, 10});
    CHECK(std::abs(total - 2 * (2 + p)) <= 1e-6 * 2 * (2 + p));
  }
}

TEST_CASE("total scalar curvature converges at least quadratically in the subdivision") {
  const double p = 0.5;
  const ToricMetricModel M(make_blowup_polytope(p));
  std::vector<double> err;
  for (int depth = 0; depth <= 3; ++depth) {
    const double total =
        integrate(M.polytope(), [&](Point x) { return M.scalar_curvature(x); }, {depth, 3});
    err.push_back(std::abs(total - 2 * (2 + p)));
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    CHECK(std::log2(err[k] / err[k + 1]) >= 2.0);
  }
}

TEST_CASE("Abreu formula agrees with a finite-difference oracle") {
  std::mt19937_64 rng(9);
  for (double p : {0.3, 0.75}) {
    const ToricMetricModel M(make_blowup_polytope(p));
    for (int i = 0; i < 25; ++i) {
      const Point x = random_interior(M.polytope(), rng, 0.05);
      double oracle = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          oracle -= second_difference(
              [&](Point y) { return inverse_entry(M, y, a, b); }, x, a, b, 2e-3);
        }
      }
      const double s = M.scalar_curvature(x);
      CHECK(std::abs(s - oracle) <= 1e-7 * std::max(1.0, std::abs(s)));
    }
  }
}

TEST_CASE("Laplacian of constants vanishes") {
  const ToricMetricModel M(make_blowup_polytope(0.5));
  const JetField2 one = [](const Jet2&, const Jet2&) { return Jet2(3.0); };
  CHECK(M.laplacian(one, {0.2, 0.3}) == 0.0);
}

TEST_CASE("Laplacian of mu_1 against a finite-difference oracle") {
  const ToricMetricModel M(make_blowup_polytope(0.5));
  const Point c = M.polytope().centroid();
  const JetField2 mu1 = [](const Jet2& x1, const Jet2&) { return x1; };
  // Delta mu_1 = -sum_i d_i u^{i1}; five-point central differences.
  auto d1 = [&](int i) {
    const double h = 1e-3;
    auto at = [&](double s) {
      Point y = c;
      (i == 0 ? y.x1 : y.x2) += s;
      return inverse_entry(M, y, i, 0);
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  };
  const double oracle = -(d1(0) + d1(1));
  CHECK(std::abs(M.laplacian(mu1, c) - oracle) <= 1e-6);
  CHECK_THROWS_AS(M.laplacian(mu1, {-0.1, 0.5}), DomainError);
}

TEST_CASE("Green identity for fields vanishing on the boundary") {
  const ToricMetricModel M(make_blowup_polytope(0.6));
  const auto& F = M.polytope().facets();
  auto product = [&](const auto& x1, const auto& x2) {
    auto acc = F[0](x1, x2);
    for (std::size_t k = 1; k < F.size(); ++k) acc = acc * F[k](x1, x2);
    return acc;
  };
  const JetField2 phi = [&](const Jet2& x1, const Jet2& x2) {
    const Jet2 b = product(x1, x2);
    return b * b * (x1 + 0.3 * x2 + 0.2);
  };
  const JetField2 psi = [&](const Jet2& x1, const Jet2& x2) {
    const Jet2 b = product(x1, x2);
    return b * b * (1.0 - x2);
  };
  const QuadratureRule rule{3, 12};
  const double lhs = integrate(
      M.polytope(),
      [&](Point x) {
        return M.laplacian(phi, x) * psi(Jet2(x.x1), Jet2(x.x2)).v;
      },
      rule);
  const double rhs = integrate(
      M.polytope(),
      [&](Point x) {
        const Jet2 x1 = Jet2::variable(x.x1, 0);
        const Jet2 x2 = Jet2::variable(x.x2, 1);
        const auto u = M.inverse_hessian(x1, x2);
        const Jet2 a = phi(x1, x2);
        const Jet2 b = psi(x1, x2);
        const double u11 = u[0].v, u12 = u[1].v, u22 = u[2].v;
        return (u11 * a.d(0) + u12 * a.d(1)) * b.d(0) + (u12 * a.d(0) + u22 * a.d(1)) * b.d(1);
      },
      rule);
  CHECK(rhs != 0.0);
  CHECK(std::abs(lhs - rhs) <= 1e-5 * std::abs(rhs));
}

TEST_CASE("interval reduction") {
  const auto I = IntervalMetric::from_profile(
      1.0, 2.0, [](const Jet1& t) { return -2.0 * (t - 1.0) * (t - 2.0); });
  CHECK(I.scalar_curvature(1.3) == doctest::Approx(4.0));
  CHECK(I.profile(1.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(I.scalar_curvature(2.0), DomainError);
  CHECK_THROWS_AS(I.guillemin_potential(1.5), PreconditionError);

  // The Guillemin profile of an interval coincides with the quadratic one.
  const auto G = IntervalMetric::guillemin(1.0, 2.0);
  for (double t : {1.1, 1.5, 1.9}) CHECK(G.profile(t) == doctest::Approx(I.profile(t)));
}

TEST_CASE("interval Laplacian of t^(1-m)") {
  const auto psi = [](const Jet1& t) { return -2.0 * (t - 1.0) * (t - 2.0); };
  const auto I = IntervalMetric::from_profile(1.0, 2.0, psi);
  for (int m : {2, 3, 4}) {
    const JetField1 phi = [m](const Jet1& t) { return pow(t, 1.0 - m); };
    for (double t : {1.2, 1.5, 1.8}) {
      // (m-1) (Psi / t^m)'.
      const Jet1 x = Jet1::variable(t, 0);
      const Jet1 q = psi(x) / pow(x, double(m));
      CHECK(I.laplacian(phi, t) == doctest::Approx((m - 1) * q.d(0)).epsilon(1e-12));
    }
  }
}
