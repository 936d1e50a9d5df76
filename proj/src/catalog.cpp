#include "ckem/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "ckem/errors.hpp"

namespace ckem {
namespace {

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

CatalogEntry make_entry(int id, double p, std::optional<double> family) {
  CatalogEntry e;
  e.case_id = id;
  e.p = p;
  e.family_parameter = family;
  e.slope_a = std::numeric_limits<double>::quiet_NaN();
  e.slope_b = std::numeric_limits<double>::quiet_NaN();
  return e;
}

// Gauge-normalised Futaki pair of a mu_1 + b mu_2 + c, i.e. the pair of f/c.
FutakiPair normalised_pair(double p, double a, double b, double c, int m,
                           const QuadratureRule& rule) {
  return futaki_toric_basis(p, {a / c, b / c, 1.0}, m, rule);
}

}  // namespace

double alpha_quartic(double p) {
  return (((p - 4.0) * p + 16.0) * p - 16.0) * p + 4.0;
}

double alpha_root() {
  // Scan for the first sign change from 0, then bisect.
  double lo = 0.0;
  double hi = 0.0;
  const double step = 1e-3;
  for (int i = 1; i <= 10000; ++i) {
    hi = i * step;
    if (std::signbit(alpha_quartic(hi)) != std::signbit(alpha_quartic(lo))) break;
    lo = hi;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::signbit(alpha_quartic(mid)) == std::signbit(alpha_quartic(lo))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double family_discriminant(double p, double b) {
  const double b2 = b * b;
  return -9.0 * b2 * p * p * p + (21.0 * b2 + 1.0) * p * p + (1.0 - 16.0 * b2) * p +
         4.0 * b2 - 1.0;
}

std::vector<CatalogEntry> catalog_entries(double p, std::optional<double> family_b) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "p = " << p << " outside (0, 1)";
    throw ParameterDomainError(msg.str());
  }
  std::vector<CatalogEntry> out;

  {
    auto e = make_entry(1, p, {});
    e.slope_a = (p + 2.0 * std::sqrt(1.0 - p) - 2.0) / (2.0 * p * p);
    e.slope_b = 0.0;
    e.valid = true;
    e.reason = "0 < p < 1";
    out.push_back(e);
  }

  const double disc23 = 9.0 * p * p - 8.0 * p;
  const bool in23 = p > 8.0 / 9.0;
  for (int id : {2, 3}) {
    auto e = make_entry(id, p, {});
    if (in23) {
      const double root = std::sqrt(disc23);
      e.slope_a = id == 2 ? -(root + p) / (4.0 * p * p) : (root - p) / (4.0 * p * p);
      e.slope_b = 0.0;
      e.valid = true;
      e.reason = "8/9 < p < 1";
    } else {
      std::ostringstream why;
      why << "requires 8/9 < p < 1 (9p^2 - 8p = " << disc23 << ")";
      e.reason = why.str();
    }
    out.push_back(e);
  }

  const double alpha = alpha_root();
  for (int id : {4, 5}) {
    auto e = make_entry(id, p, {});
    if (p < alpha) {
      const double root = std::sqrt(alpha_quartic(p));
      const double den_a = 2.0 * p * p * p - 4.0 * p * p + 12.0 * p - 8.0;
      const double den_b = p * p * p - 2.0 * p * p + 6.0 * p - 4.0;
      if (id == 4) {
        e.slope_a = -(root - p * p + 4.0 * p - 2.0) / den_a;
        e.slope_b = -root / den_b;
      } else {
        e.slope_a = (root + p * p - 4.0 * p + 2.0) / den_a;
        e.slope_b = root / den_b;
      }
      e.valid = true;
      e.reason = "0 < p < alpha";
    } else {
      std::ostringstream why;
      why << "requires 0 < p < alpha = " << alpha;
      e.reason = why.str();
    }
    out.push_back(e);
  }

  for (int id : {6, 7}) {
    auto e = make_entry(id, p, family_b);
    if (!family_b) {
      e.reason = "family parameter b not supplied";
      out.push_back(e);
      continue;
    }
    const double b = *family_b;
    const double disc = family_discriminant(p, b);
    const double den = 6.0 * p * p - 4.0 * p;
    if (disc < 0.0) {
      std::ostringstream why;
      why << "discriminant " << disc << " < 0";
      e.reason = why.str();
    } else if (den == 0.0) {
      e.reason = "denominator 6p^2 - 4p vanishes";
    } else {
      const double root = std::sqrt(disc);
      e.slope_a = id == 6 ? (2.0 * root + 3.0 * b * p * p + (1.0 - 2.0 * b) * p) / den
                          : -(2.0 * root - 3.0 * b * p * p + (2.0 * b - 1.0) * p) / den;
      e.slope_b = b;
      e.valid = true;
      e.reason = "discriminant >= 0";
    }
    out.push_back(e);
  }
  return out;
}

double minimal_offset(double p, double a, double b) {
  // f at the vertices is c, pa + c, pa + (1-p)b + c, b + c.
  return -std::min({0.0, p * a, p * a + (1.0 - p) * b, b});
}

VerificationReport verify_vanishing_slopes(double p, double a, double b, int m,
                                           const VanishingConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.check_id = "blowup.vanishing";
  report.provenance = std::string(anchor::kCriticalPoints);
  report.inputs["p"] = p;
  report.inputs["a"] = a;
  report.inputs["b"] = b;
  report.inputs["m"] = m;
  report.inputs["tolerance"] = config.tolerance;
  report.inputs["subdivision_depth"] = config.rule.subdivision_depth;
  report.inputs["gauss_order"] = config.rule.gauss_order;
  report.inputs["offset_span"] = config.offset_span;
  report.notes.push_back("test directions restricted to torus Hamiltonians mu_1, mu_2");
  report.notes.push_back(
      "residual evaluated on f/c (Fut scales by c^(1-2m) along the ray of f)");

  const double c_min = minimal_offset(p, a, b);
  const double c_max = c_min + config.offset_span;
  report.set("c_min", c_min);
  report.set("c_max", c_max);
  if (!(c_max > c_min) || !(config.offset_span > 0.0)) {
    report.notes.push_back("infeasible: empty admissible offset interval");
    report.set("c_star", std::numeric_limits<double>::quiet_NaN());
    report.finalize(std::numeric_limits<double>::infinity(), config.tolerance);
    report.pass = false;
    report.runtime_ms = elapsed_ms(start);
    return report;
  }

  const FutakiPair reference = futaki_toric_basis(p, {0.0, 0.0, 1.0}, m, config.rule);
  const double scale = reference.norm();
  report.set("scale", scale);

  auto residual = [&](double c) {
    return normalised_pair(p, a, b, c, m, config.rule).norm();
  };

  // Geometric grid in (c - c_min) resolves the steep region near c_min.
  const double span = config.offset_span;
  const double first = 1e-4 * span;
  const int n = std::max(config.grid_points, 4);
  std::vector<double> cs(n);
  std::vector<double> rs(n);
  for (int i = 0; i < n; ++i) {
    cs[i] = c_min + first * std::pow(span / first, double(i) / (n - 1));
    rs[i] = residual(cs[i]);
  }
  const auto best = std::min_element(rs.begin(), rs.end()) - rs.begin();
  double lo = best > 0 ? cs[best - 1] : c_min + 0.5 * first;
  double hi = best + 1 < n ? cs[best + 1] : c_max;

  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = residual(x1);
  double f2 = residual(x2);
  for (int it = 0; it < 90 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = residual(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = residual(x2);
    }
  }
  double c_star = f1 < f2 ? x1 : x2;
  double r_star = std::min(f1, f2);
  if (rs[best] < r_star) {
    c_star = cs[best];
    r_star = rs[best];
  }

  const FutakiPair at_star = normalised_pair(p, a, b, c_star, m, config.rule);
  QuadratureRule finer = config.rule;
  finer.subdivision_depth += 1;
  const FutakiPair refined = normalised_pair(p, a, b, c_star, m, finer);
  const FutakiPair far = normalised_pair(p, a, b, c_max, m, config.rule);

  report.set("c_star", c_star);
  report.set("fut_mu1", at_star.mu1);
  report.set("fut_mu2", at_star.mu2);
  report.set("residual_raw", r_star);
  report.set("quadrature_drift",
             std::hypot(refined.mu1 - at_star.mu1, refined.mu2 - at_star.mu2) / scale);
  report.set("fut_ratio_mu2_mu1_at_c_max", far.mu2 / far.mu1);
  if (b == 0.0) {
    report.notes.push_back(
        "b = 0: the reflection mu_2 -> 1 - mu_1 - mu_2 preserves the polygon and f, so "
        "Fut(mu_2) = -Fut(mu_1)/2 and the offset search solves one equation");
  }
  report.finalize(r_star / scale, config.tolerance);
  if (!report.pass) {
    const double drift = report.get("quadrature_drift");
    report.notes.push_back(drift > config.tolerance
                               ? "localisation: quadrature not converged at c*"
                               : "localisation: quadrature converged; residual reflects the "
                                 "slopes, not the offset normalisation");
  }
  report.runtime_ms = elapsed_ms(start);
  return report;
}

VerificationReport verify_vanishing(const CatalogEntry& entry, int m,
                                    const VanishingConfig& config) {
  if (!entry.valid) {
    throw PreconditionError("catalog case " + std::to_string(entry.case_id) +
                            " is not valid at this p: " + entry.reason);
  }
  auto report = verify_vanishing_slopes(entry.p, entry.slope_a, entry.slope_b, m, config);
  report.check_id = "blowup.vanishing.case" + std::to_string(entry.case_id);
  report.inputs["case_id"] = entry.case_id;
  if (entry.family_parameter) report.inputs["family_b"] = *entry.family_parameter;
  return report;
}

SearchResult critical_search(double p, const SearchConfig& config,
                             std::optional<double> family_b) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterDomainError("p outside (0, 1)");
  auto fut = [&](double a, double b) {
    return futaki_toric_basis(p, {a, b, 1.0}, config.m, config.rule);
  };
  auto admissible = [&](double a, double b) { return minimal_offset(p, a, b) < 1.0; };

  // Starts on a grid inside the positivity region (c = 1).
  std::vector<std::pair<double, double>> starts;
  const double a_lo = -0.95 / p;
  const double a_hi = 2.0;
  const double b_lo = -0.95;
  const double b_hi = 2.0;
  for (int i = 0; i < config.grid; ++i) {
    for (int j = 0; j < config.grid; ++j) {
      const double a = a_lo + (a_hi - a_lo) * (i + 0.5) / config.grid;
      const double b = b_lo + (b_hi - b_lo) * (j + 0.5) / config.grid;
      if (minimal_offset(p, a, b) < 0.9) starts.emplace_back(a, b);
    }
  }

  auto newton = [&](double a, double b) {
    StartOutcome out;
    out.start_a = a;
    out.start_b = b;
    FutakiPair f = fut(a, b);
    for (int it = 0; it < config.max_iterations; ++it) {
      out.iterations = it;
      if (f.norm() <= config.tolerance) {
        out.converged = true;
        break;
      }
      const double h = 1e-6;
      const FutakiPair fa_p = fut(a + h, b), fa_m = fut(a - h, b);
      const FutakiPair fb_p = fut(a, b + h), fb_m = fut(a, b - h);
      const double j11 = (fa_p.mu1 - fa_m.mu1) / (2 * h);
      const double j21 = (fa_p.mu2 - fa_m.mu2) / (2 * h);
      const double j12 = (fb_p.mu1 - fb_m.mu1) / (2 * h);
      const double j22 = (fb_p.mu2 - fb_m.mu2) / (2 * h);
      const double det = j11 * j22 - j12 * j21;
      if (det == 0.0 || !std::isfinite(det)) break;
      const double da = -(j22 * f.mu1 - j12 * f.mu2) / det;
      const double db = -(-j21 * f.mu1 + j11 * f.mu2) / det;
      double lambda = 1.0;
      bool moved = false;
      for (int k = 0; k < 30; ++k, lambda *= 0.5) {
        const double na = a + lambda * da;
        const double nb = b + lambda * db;
        if (!admissible(na, nb)) continue;
        const FutakiPair nf = fut(na, nb);
        if (nf.norm() < f.norm()) {
          a = na, b = nb, f = nf;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    out.final_a = a;
    out.final_b = b;
    out.residual = f.norm();
    out.converged = out.converged || out.residual <= config.tolerance;
    return out;
  };

  std::vector<std::future<StartOutcome>> jobs;
  for (auto [a, b] : starts) {
    jobs.push_back(std::async(std::launch::async, newton, a, b));
  }
  SearchResult result;
  for (auto& j : jobs) result.starts.push_back(j.get());

  const auto entries = catalog_entries(p, family_b);
  for (const auto& s : result.starts) {
    if (!s.converged) continue;
    const bool duplicate = std::any_of(result.roots.begin(), result.roots.end(), [&](auto& r) {
      return std::hypot(r.a - s.final_a, r.b - s.final_b) <= config.dedupe;
    });
    if (duplicate) continue;
    CriticalRoot root{s.final_a, s.final_b, s.residual, {}};
    for (const auto& e : entries) {
      if (!e.valid) continue;
      const double cross = root.a * e.slope_b - root.b * e.slope_a;
      const double dot = root.a * e.slope_a + root.b * e.slope_b;
      const double norms = std::hypot(root.a, root.b) * std::hypot(e.slope_a, e.slope_b);
      if (dot > 0.0 && std::abs(cross) <= 1e-6 * norms) {
        root.ray_compatible_cases.push_back(e.case_id);
      }
    }
    result.roots.push_back(root);
  }
  std::sort(result.roots.begin(), result.roots.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return result;
}

}  // namespace ckem
