#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ckem/errors.hpp"
#include "ckem/polytope.hpp"

using namespace ckem;

namespace {

double shoelace(const MomentPolytope& P) {
  const auto& v = P.vertices();
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& a = v[k];
    const auto& b = v[(k + 1) % v.size()];
    s += a.x1 * b.x2 - b.x1 * a.x2;
  }
  return 0.5 * s;
}

Point random_interior(const MomentPolytope& P, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const Point x{u(rng), u(rng)};
    if (P.is_interior(x)) return x;
  }
}

}  // namespace

TEST_CASE("blow-up polygon at p = 1/2") {
  const auto P = make_blowup_polytope(0.5);
  REQUIRE(P.vertices().size() == 4);
  const Point want[] = {{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 1}};
  for (int k = 0; k < 4; ++k) {
    CHECK(P.vertices()[k].x1 == doctest::Approx(want[k].x1));
    CHECK(P.vertices()[k].x2 == doctest::Approx(want[k].x2));
  }
  CHECK(P.area() == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
  CHECK(P.facets().size() == 4);
}

TEST_CASE("blow-up parameter outside (0, 1) is rejected") {
  CHECK_THROWS_AS(make_blowup_polytope(0.0), ParameterDomainError);
  CHECK_THROWS_AS(make_blowup_polytope(1.0), ParameterDomainError);
  CHECK_THROWS_AS(make_blowup_polytope(-0.2), ParameterDomainError);
  CHECK_THROWS_AS(make_blowup_polytope(std::nan("")), ParameterDomainError);
}

TEST_CASE("area is p(2 - p)/2") {
  for (double p : {0.1, 0.33, 0.5, 0.9, 0.999}) {
    CHECK(make_blowup_polytope(p).area() == doctest::Approx(p * (2 - p) / 2).epsilon(1e-14));
  }
}

TEST_CASE("affine minimum over the polygon") {
  const auto P = make_blowup_polytope(0.5);
  CHECK(affine_min({0, 0, 1}, P) == 1.0);
  CHECK(affine_min({1, 0, 0}, P) == 0.0);
  CHECK(affine_min({-0.17157, 0, 0.1}, P) == doctest::Approx(0.014215).epsilon(1e-9));
  // Vertex values c, pa + c, pa + (1-p)b + c, b + c.
  const double a = 0.3, b = -0.7, c = 0.9, p = 0.5;
  CHECK(affine_min({a, b, c}, P) ==
        doctest::Approx(std::min({c, p * a + c, p * a + (1 - p) * b + c, b + c})));
}

TEST_CASE("affine positivity at vertices implies positivity inside") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  const auto P = make_blowup_polytope(0.7);
  int checked = 0;
  while (checked < 20) {
    const AffineHamiltonian f{coef(rng), coef(rng), coef(rng)};
    if (affine_min(f, P) <= 0.0) continue;
    ++checked;
    for (int i = 0; i < 500; ++i) CHECK(f(random_interior(P, rng)) > 0.0);
  }
}

TEST_CASE("integrals of simple fields") {
  const auto P = make_blowup_polytope(0.5);
  CHECK(integrate(P, [](Point) { return 1.0; }) == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
  CHECK(integrate(P, [](Point x) { return x.x1; }) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(integrate(P, [](Point) { return 0.0; }) == 0.0);
}

TEST_CASE("integrate(1) equals the shoelace area for every rule") {
  for (double p : {0.2, 0.5, 0.95}) {
    const auto P = make_blowup_polytope(p);
    const double area = shoelace(P);
    for (int depth = 0; depth <= 3; ++depth) {
      for (int order = 1; order <= 10; ++order) {
        const double got = integrate(P, [](Point) { return 1.0; }, {depth, order});
        CHECK(std::abs(got - area) <= 1e-12 * area);
      }
    }
  }
}

TEST_CASE("polynomial exactness of the collapsed Gauss rule") {
  // x1^2 x2 over the unit simplex: 2! 1! / 5! = 1/60.
  const auto S = make_standard_simplex();
  const double got =
      integrate(S, [](Point x) { return x.x1 * x.x1 * x.x2; }, {0, 3});
  CHECK(got == doctest::Approx(1.0 / 60.0).epsilon(1e-14));
}

TEST_CASE("integration is linear and additive over a vertical split") {
  const double p = 0.8, q = 0.35;
  const auto P = make_blowup_polytope(p);
  const auto left = make_blowup_polytope(q);
  const auto right = MomentPolytope::from_facets(
      {{{1, 0}, -q}, {{0, 1}, 0.0}, {{-1, 0}, p}, {{-1, -1}, 1.0}});
  const Field g = [](Point x) { return std::exp(x.x1) * std::cos(2 * x.x2) + x.x1 * x.x2; };
  const Field h = [](Point x) { return 1.0 / (1.0 + x.x1 + x.x2); };
  const QuadratureRule rule{2, 10};
  CHECK(integrate(P, g, rule) ==
        doctest::Approx(integrate(left, g, rule) + integrate(right, g, rule)).epsilon(1e-12));
  const double combo = integrate(P, [&](Point x) { return 2.0 * g(x) - 3.0 * h(x); }, rule);
  CHECK(combo ==
        doctest::Approx(2.0 * integrate(P, g, rule) - 3.0 * integrate(P, h, rule)).epsilon(1e-13));
}

TEST_CASE("non-finite integrand reports the node") {
  const auto P = make_blowup_polytope(0.5);
  try {
    integrate(P, [](Point x) { return x.x1 > 0.25 ? std::nan("") : 1.0; });
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.x1() > 0.25);
    CHECK(P.is_interior({e.x1(), e.x2()}));
  }
}

TEST_CASE("quadrature nodes are strictly interior") {
  const auto P = make_blowup_polytope(0.95);
  for (const auto& n : quadrature_nodes(P, {3, 12})) {
    CHECK(P.is_interior(n.x));
    CHECK(n.weight > 0.0);
  }
}

TEST_CASE("lattice perimeter") {
  CHECK(lattice_perimeter(make_blowup_polytope(0.5)) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(lattice_perimeter(make_standard_simplex()) == doctest::Approx(3.0).epsilon(1e-15));
  for (double p : {0.1, 0.6, 0.97}) {
    const auto P = make_blowup_polytope(p);
    CHECK(lattice_perimeter(P) == doctest::Approx(2.0 + p).epsilon(1e-14));
    CHECK(integrate_boundary(P, [](Point) { return 1.0; }) ==
          doctest::Approx(2.0 + p).epsilon(1e-14));
  }
}

TEST_CASE("boundary integral of an affine function") {
  // On the simplex each edge has lattice length 1; x1 averages 1/2, 1/2, 0.
  const auto S = make_standard_simplex();
  CHECK(integrate_boundary(S, [](Point x) { return x.x1; }) == doctest::Approx(1.0));
}

TEST_CASE("Delzant determinant at every vertex for random p") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pd(0.001, 0.999);
  for (int i = 0; i < 100; ++i) {
    const auto P = make_blowup_polytope(pd(rng));
    const std::size_t n = P.vertices().size();
    for (std::size_t k = 0; k < n; ++k) {
      // Vertex k joins edges k-1 and k.
      const auto& a = P.facets()[P.edge_facet((k + n - 1) % n)].normal;
      const auto& b = P.facets()[P.edge_facet(k)].normal;
      CHECK(std::abs(a[0] * b[1] - a[1] * b[0]) == 1);
    }
  }
}

TEST_CASE("non-Delzant and degenerate facet sets are rejected") {
  // Vertex (0, 1/2) has normals (-1,-2), (1,0) with determinant 2.
  CHECK_THROWS_AS(
      MomentPolytope::from_facets({{{1, 0}, 0.0}, {{0, 1}, 0.0}, {{-1, -2}, 1.0}}),
      ParameterDomainError);
  // Unbounded.
  CHECK_THROWS_AS(MomentPolytope::from_facets({{{1, 0}, 0.0}, {{0, 1}, 0.0}}),
                  ParameterDomainError);
  // Non-primitive normal.
  CHECK_THROWS_AS(
      MomentPolytope::from_facets({{{2, 0}, 0.0}, {{0, 1}, 0.0}, {{-1, -1}, 1.0}}),
      ParameterDomainError);
  // Empty interior.
  CHECK_THROWS_AS(
      MomentPolytope::from_facets({{{1, 0}, 0.0}, {{0, 1}, 0.0}, {{-1, -1}, -1.0}}),
      ParameterDomainError);
}

TEST_CASE("JSON round trip") {
  const auto P = make_blowup_polytope(0.3);
  nlohmann::json j = P;
  CHECK(j.at("facets").size() == 4);
  CHECK(j.at("facets")[0].contains("n"));
  CHECK(j.at("facets")[0].contains("lambda"));
  CHECK(j.at("vertices").size() == 4);
  const auto Q = j.get<MomentPolytope>();
  REQUIRE(Q.vertices().size() == P.vertices().size());
  for (std::size_t k = 0; k < P.vertices().size(); ++k) {
    CHECK(Q.vertices()[k].x1 == P.vertices()[k].x1);
    CHECK(Q.vertices()[k].x2 == P.vertices()[k].x2);
  }
  j["vertices"][2] = {0.9, 0.9};
  CHECK_THROWS(j.get<MomentPolytope>());
}

TEST_CASE("pairwise summation is accurate for many small terms") {
  std::vector<double> v(1 << 20, 0.1);
  CHECK(pairwise_sum(v.data(), v.size()) == doctest::Approx(0.1 * (1 << 20)).epsilon(1e-14));
  CHECK(pairwise_sum(v.data(), 0) == 0.0);
}
