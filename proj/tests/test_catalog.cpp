#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "ckem/catalog.hpp"
#include "ckem/errors.hpp"

using namespace ckem;

TEST_CASE("alpha is the smallest positive root of the quartic") {
  const double alpha = alpha_root();
  CHECK(alpha_quartic(0.38) > 0.0);
  CHECK(alpha_quartic(0.39) < 0.0);
  CHECK(std::abs(alpha - 0.386) <= 5e-4);
  CHECK(std::abs(alpha_quartic(alpha)) <= 1e-10);
  for (double p = 1e-3; p < alpha - 1e-3; p += 1e-3) CHECK(alpha_quartic(p) > 0.0);
}

TEST_CASE("case 1 at p = 1/2") {
  const auto entries = catalog_entries(0.5);
  REQUIRE(entries.size() == 7);
  CHECK(entries[0].case_id == 1);
  CHECK(entries[0].valid);
  CHECK(entries[0].slope_a == doctest::Approx(-0.171573).epsilon(1e-5));
  CHECK(entries[0].slope_b == 0.0);
  for (int k = 1; k < 7; ++k) {
    CHECK_FALSE(entries[k].valid);
    CHECK(std::isnan(entries[k].slope_a));
    CHECK_FALSE(entries[k].reason.empty());
  }
  CHECK(entries[5].reason.find("not supplied") != std::string::npos);
}

TEST_CASE("cases 4 and 5 below alpha") {
  const double p = 0.2;
  const auto entries = catalog_entries(p);
  REQUIRE(entries[3].valid);
  REQUIRE(entries[4].valid);
  CHECK(entries[3].slope_b == doctest::Approx(-entries[4].slope_b).epsilon(1e-14));
  const double sum = 2.0 * (p * p - 4 * p + 2) / (2 * p * p * p - 4 * p * p + 12 * p - 8);
  CHECK(entries[3].slope_a + entries[4].slope_a == doctest::Approx(sum).epsilon(1e-12));
  CHECK_FALSE(catalog_entries(0.5)[3].valid);
}

TEST_CASE("Vieta relations for cases 2 and 3") {
  for (int i = 0; i < 50; ++i) {
    const double p = 8.0 / 9.0 + (1.0 - 8.0 / 9.0) * (i + 0.5) / 50.0;
    const auto entries = catalog_entries(p);
    REQUIRE(entries[1].valid);
    REQUIRE(entries[2].valid);
    const double a2 = entries[1].slope_a, a3 = entries[2].slope_a;
    CHECK(std::abs(a2 + a3 + 1.0 / (2 * p)) <= 1e-12);
    CHECK(std::abs(a2 * a3 - (1 - p) / (2 * p * p * p)) <= 1e-12);
    for (double a : {a2, a3}) {
      const double lhs = (4 * p * p * a + p) * (4 * p * p * a + p);
      CHECK(std::abs(lhs - (9 * p * p - 8 * p)) <= 1e-12);
    }
  }
}

TEST_CASE("valid entries have finite slopes and reasons for invalid ones") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> up(1e-3, 1.0 - 1e-3), ub(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = up(rng);
    const double fb = ub(rng);
    for (const auto& e : catalog_entries(p, fb)) {
      if (e.valid) {
        CHECK(std::isfinite(e.slope_a));
        CHECK(std::isfinite(e.slope_b));
      } else {
        CHECK(std::isnan(e.slope_a));
        CHECK_FALSE(e.reason.empty());
      }
      if (e.case_id >= 6) {
        CHECK(e.valid == (family_discriminant(p, fb) >= 0.0 && 6 * p * p - 4 * p != 0.0));
        if (e.valid) CHECK(e.slope_b == fb);
      }
    }
  }
}

TEST_CASE("catalog parameter domain") {
  CHECK_THROWS_AS(catalog_entries(0.0), ParameterDomainError);
  CHECK_THROWS_AS(catalog_entries(1.0), ParameterDomainError);
  CHECK_THROWS_AS(verify_vanishing(catalog_entries(0.5)[1]), PreconditionError);
}

TEST_CASE("minimal offset makes f positive on the polygon") {
  const double p = 0.6;
  for (auto [a, b] : {std::pair{-1.0, 0.5}, std::pair{0.3, -0.7}, std::pair{2.0, 1.0}}) {
    const double c = minimal_offset(p, a, b);
    CHECK(affine_min({a, b, c}, make_blowup_polytope(p)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(affine_min({a, b, c + 0.1}, make_blowup_polytope(p)) > 0.0);
  }
}

TEST_CASE("reflection symmetry when b = 0") {
  for (double p : {0.3, 0.7}) {
    const FutakiPair f = futaki_toric_basis(p, {-0.4, 0.0, 1.0}, 2, {2, 10});
    CHECK(f.mu2 == doctest::Approx(-0.5 * f.mu1).epsilon(1e-9));
  }
}

TEST_CASE("Futaki character vanishes along case 1 at p = 1/2") {
  const VerificationReport r = verify_vanishing(catalog_entries(0.5)[0]);
  CHECK(r.check_id == "blowup.vanishing.case1");
  CHECK(r.pass);
  CHECK(r.residual <= 1e-5);
  CHECK(r.get("quadrature_drift") <= 1e-4);
  CHECK(r.get("c_star") > r.get("c_min"));
  CHECK(r.provenance == "blowup-critical-points");
}

TEST_CASE("empty offset interval is reported as infeasible") {
  VanishingConfig config;
  config.offset_span = 0.0;
  const VerificationReport r = verify_vanishing_slopes(0.5, -0.2, 0.0, 2, config);
  CHECK_FALSE(r.pass);
  CHECK(std::isinf(r.residual));
  CHECK(std::isnan(r.get("c_star")));
}

TEST_CASE("multistart search converges to genuine roots") {
  SearchConfig config;
  config.grid = 3;
  const SearchResult result = critical_search(0.95, config);
  CHECK_FALSE(result.starts.empty());
  for (const auto& s : result.starts) CHECK(minimal_offset(0.95, s.start_a, s.start_b) < 0.9);
  for (const auto& root : result.roots) {
    CHECK(root.residual <= config.tolerance);
    CHECK(minimal_offset(0.95, root.a, root.b) < 1.0);
    const FutakiPair f = futaki_toric_basis(0.95, {root.a, root.b, 1.0}, 2, config.rule);
    CHECK(f.norm() <= 10 * config.tolerance);
  }
  for (std::size_t i = 1; i < result.roots.size(); ++i) {
    CHECK(std::hypot(result.roots[i].a - result.roots[i - 1].a,
                     result.roots[i].b - result.roots[i - 1].b) > config.dedupe);
  }
}
