#pragma once

// Critical Killing potentials on the one-point blow-up of CP^2.
//
// The moment polygon is the blow-up polytope for p in (0,1) and a Killing
// potential is f = a mu_1 + b mu_2 + c. Seven families of critical slopes
// (a, b) are known in closed form; cases 6 and 7 are one-parameter families
// in b. This module evaluates them, certifies the vanishing of the Futaki
// character along them, and rediscovers critical slopes numerically.

#include <optional>
#include <string>
#include <vector>

#include "ckem/invariants.hpp"
#include "ckem/polytope.hpp"
#include "ckem/report.hpp"

namespace ckem {

/// p^4 - 4p^3 + 16p^2 - 16p + 4.
double alpha_quartic(double p);

/// Smallest positive root of alpha_quartic, bracketed and refined to 1e-12.
double alpha_root();

struct CatalogEntry {
  int case_id = 0;
  double p = 0.0;
  std::optional<double> family_parameter;
  double slope_a = 0.0;
  double slope_b = 0.0;
  bool valid = false;
  std::string reason;
};

/// All seven cases at p; entries outside their domains come back with
/// valid = false and the failing condition in `reason`. Cases 6 and 7 need
/// family_b. Requires 0 < p < 1 (ParameterDomainError otherwise).
std::vector<CatalogEntry> catalog_entries(double p, std::optional<double> family_b = {});

/// -9b^2p^3 + (21b^2+1)p^2 + (1-16b^2)p + 4b^2 - 1, the radicand of cases 6, 7.
double family_discriminant(double p, double b);

/// Smallest offset c making f = a mu_1 + b mu_2 + c positive on the polygon.
double minimal_offset(double p, double a, double b);

struct VanishingConfig {
  QuadratureRule rule{2, 12};
  double tolerance = 1e-4;
  /// Offsets are searched in (c_min, c_min + offset_span).
  double offset_span = 10.0;
  int grid_points = 48;
};

/// Searches the admissible offset c minimising the gauge-normalised residual
/// r(c) = |(Fut(mu_1), Fut(mu_2))| evaluated at f/c, and passes when
/// r(c*) <= tolerance * scale, scale being the same norm for the constant
/// potential f = 1. Throws PreconditionError for invalid entries.
VerificationReport verify_vanishing(const CatalogEntry& entry, int m = 2,
                                    const VanishingConfig& config = {});

/// Same search for raw slopes (used for off-catalog controls).
VerificationReport verify_vanishing_slopes(double p, double a, double b, int m = 2,
                                           const VanishingConfig& config = {});

struct SearchConfig {
  QuadratureRule rule{1, 10};
  int grid = 5;              // starts per axis
  int max_iterations = 40;
  double tolerance = 1e-8;   // on |(Fut(mu_1), Fut(mu_2))|
  double dedupe = 1e-6;
  int m = 2;
};

struct StartOutcome {
  double start_a = 0.0;
  double start_b = 0.0;
  bool converged = false;
  double final_a = 0.0;
  double final_b = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct CriticalRoot {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
  /// Catalog cases whose slope direction lies on the same ray through 0.
  std::vector<int> ray_compatible_cases;
};

struct SearchResult {
  std::vector<CriticalRoot> roots;
  std::vector<StartOutcome> starts;
};

/// Damped Newton from a grid of starts in the positivity region with the
/// offset gauge c = 1; returns the distinct converged roots.
SearchResult critical_search(double p, const SearchConfig& config = {},
                             std::optional<double> family_b = {});

}  // namespace ckem
