#include "ckem/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include "ckem/errors.hpp"

namespace ckem {
namespace {

constexpr double kVertexTol = 1e-11;

double cross(Point a, Point b) { return a.x1 * b.x2 - a.x2 * b.x1; }

struct Triangle {
  Point a, b, c;
};

void subdivide(const Triangle& t, int depth, std::vector<Triangle>& out) {
  if (depth == 0) {
    out.push_back(t);
    return;
  }
  const Point ab{0.5 * (t.a.x1 + t.b.x1), 0.5 * (t.a.x2 + t.b.x2)};
  const Point bc{0.5 * (t.b.x1 + t.c.x1), 0.5 * (t.b.x2 + t.c.x2)};
  const Point ca{0.5 * (t.c.x1 + t.a.x1), 0.5 * (t.c.x2 + t.a.x2)};
  subdivide({t.a, ab, ca}, depth - 1, out);
  subdivide({ab, t.b, bc}, depth - 1, out);
  subdivide({ca, bc, t.c}, depth - 1, out);
  subdivide({ab, bc, ca}, depth - 1, out);
}

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw ParameterDomainError("gauss order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, compute_gauss_legendre(order)).first;
  }
  return it->second;
}

double pairwise_sum(const double* values, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

MomentPolytope MomentPolytope::from_facets(std::vector<Facet> facets) {
  if (facets.size() < 3) {
    throw ParameterDomainError("a bounded polygon needs at least three facets");
  }
  for (const auto& f : facets) {
    if (std::gcd(std::abs(f.normal[0]), std::abs(f.normal[1])) != 1) {
      throw ParameterDomainError("facet normal is not primitive");
    }
  }

  double scale = 1.0;
  for (const auto& f : facets) scale = std::max(scale, std::abs(f.offset));
  const double tol = kVertexTol * scale;

  std::vector<Point> vertices;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    for (std::size_t j = i + 1; j < facets.size(); ++j) {
      const auto& ni = facets[i].normal;
      const auto& nj = facets[j].normal;
      const double det = double(ni[0]) * nj[1] - double(ni[1]) * nj[0];
      if (det == 0.0) continue;
      const Point x{(-facets[i].offset * nj[1] + facets[j].offset * ni[1]) / det,
                    (-ni[0] * facets[j].offset + nj[0] * facets[i].offset) / det};
      bool feasible = true;
      for (const auto& f : facets) feasible = feasible && f(x) >= -tol;
      if (!feasible) continue;
      const bool seen = std::any_of(vertices.begin(), vertices.end(), [&](Point v) {
        return std::hypot(v.x1 - x.x1, v.x2 - x.x2) <= tol;
      });
      if (!seen) vertices.push_back(x);
    }
  }
  if (vertices.size() < 3) {
    throw ParameterDomainError("facets do not bound a polygon with interior");
  }

  Point mid{};
  for (auto v : vertices) mid.x1 += v.x1, mid.x2 += v.x2;
  mid.x1 /= vertices.size();
  mid.x2 /= vertices.size();
  std::sort(vertices.begin(), vertices.end(), [&](Point a, Point b) {
    return std::atan2(a.x2 - mid.x2, a.x1 - mid.x1) <
           std::atan2(b.x2 - mid.x2, b.x1 - mid.x1);
  });
  // Start at the vertex nearest the origin-lower-left for a stable order.
  auto first = std::min_element(vertices.begin(), vertices.end(), [](Point a, Point b) {
    return std::tie(a.x1, a.x2) < std::tie(b.x1, b.x2);
  });
  std::rotate(vertices.begin(), first, vertices.end());

  MomentPolytope poly;
  const std::size_t n = vertices.size();
  std::vector<std::vector<std::size_t>> active(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (std::abs(facets[f](vertices[k])) <= tol) active[k].push_back(f);
    }
    if (active[k].size() != 2) {
      std::ostringstream msg;
      msg << "vertex (" << vertices[k].x1 << ", " << vertices[k].x2 << ") lies on "
          << active[k].size() << " facets, expected 2";
      throw ParameterDomainError(msg.str());
    }
    const auto& a = facets[active[k][0]].normal;
    const auto& b = facets[active[k][1]].normal;
    if (std::abs(a[0] * b[1] - a[1] * b[0]) != 1) {
      throw ParameterDomainError("Delzant condition fails at a vertex");
    }
  }

  std::vector<std::size_t> edge_facets(n);
  std::vector<int> facet_use(facets.size(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& here = active[k];
    const auto& next = active[(k + 1) % n];
    auto shared = std::find_first_of(here.begin(), here.end(), next.begin(), next.end());
    if (shared == here.end()) {
      throw ParameterDomainError("facets do not bound a closed polygon");
    }
    edge_facets[k] = *shared;
    ++facet_use[*shared];
  }
  for (std::size_t f = 0; f < facets.size(); ++f) {
    if (facet_use[f] != 1) {
      throw ParameterDomainError("redundant or repeated facet");
    }
  }

  poly.facets_ = std::move(facets);
  poly.vertices_ = std::move(vertices);
  poly.edge_facets_ = std::move(edge_facets);
  if (poly.area() <= 0.0) {
    throw ParameterDomainError("polygon has empty interior");
  }
  return poly;
}

double MomentPolytope::area() const {
  double twice = 0.0;
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    twice += cross(vertices_[k], vertices_[(k + 1) % vertices_.size()]);
  }
  return 0.5 * twice;
}

Point MomentPolytope::centroid() const {
  double cx = 0.0;
  double cy = 0.0;
  double twice = 0.0;
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    const Point a = vertices_[k];
    const Point b = vertices_[(k + 1) % vertices_.size()];
    const double w = cross(a, b);
    twice += w;
    cx += (a.x1 + b.x1) * w;
    cy += (a.x2 + b.x2) * w;
  }
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

double MomentPolytope::min_facet_value(Point x) const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) lo = std::min(lo, f(x));
  return lo;
}

bool MomentPolytope::is_interior(Point x) const { return min_facet_value(x) > 0.0; }

MomentPolytope make_blowup_polytope(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "blow-up parameter p = " << p << " outside (0, 1)";
    throw ParameterDomainError(msg.str());
  }
  return MomentPolytope::from_facets({
      {{1, 0}, 0.0},     // mu_1
      {{0, 1}, 0.0},     // mu_2
      {{-1, 0}, p},      // p - mu_1
      {{-1, -1}, 1.0},   // 1 - mu_1 - mu_2
  });
}

MomentPolytope make_standard_simplex() {
  return MomentPolytope::from_facets({{{1, 0}, 0.0}, {{0, 1}, 0.0}, {{-1, -1}, 1.0}});
}

double affine_min(const AffineHamiltonian& f, const MomentPolytope& polytope) {
  double lo = std::numeric_limits<double>::infinity();
  for (auto v : polytope.vertices()) lo = std::min(lo, f(v));
  return lo;
}

std::vector<QuadratureNode> quadrature_nodes(const MomentPolytope& polytope,
                                             const QuadratureRule& rule) {
  if (rule.subdivision_depth < 0) {
    throw ParameterDomainError("subdivision depth must be nonnegative");
  }
  const GaussLegendre& gl = gauss_legendre(rule.gauss_order);
  const auto& verts = polytope.vertices();
  Point mid{};
  for (auto v : verts) mid.x1 += v.x1, mid.x2 += v.x2;
  mid.x1 /= verts.size();
  mid.x2 /= verts.size();

  std::vector<Triangle> triangles;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    subdivide({mid, verts[k], verts[(k + 1) % verts.size()]}, rule.subdivision_depth,
              triangles);
  }

  const std::size_t n = gl.nodes.size();
  std::vector<QuadratureNode> nodes;
  nodes.reserve(triangles.size() * n * n);
  for (const auto& t : triangles) {
    const Point e1{t.b.x1 - t.a.x1, t.b.x2 - t.a.x2};
    const Point e2{t.c.x1 - t.a.x1, t.c.x2 - t.a.x2};
    const double twice_area = std::abs(cross(e1, e2));
    for (std::size_t i = 0; i < n; ++i) {
      const double u = 0.5 * (gl.nodes[i] + 1.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double v = 0.5 * (gl.nodes[j] + 1.0);
        nodes.push_back({{t.a.x1 + u * ((1.0 - v) * e1.x1 + v * e2.x1),
                          t.a.x2 + u * ((1.0 - v) * e1.x2 + v * e2.x2)},
                         0.25 * gl.weights[i] * gl.weights[j] * twice_area * u});
      }
    }
  }
  return nodes;
}

double integrate(const MomentPolytope& polytope, const Field& g,
                 const QuadratureRule& rule) {
  const auto nodes = quadrature_nodes(polytope, rule);
  std::vector<double> terms(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Point x = nodes[k].x;
    const double value = g(x);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "integrand is not finite at (" << x.x1 << ", " << x.x2 << ")";
      throw EvaluationError(msg.str(), x.x1, x.x2);
    }
    terms[k] = nodes[k].weight * value;
  }
  return pairwise_sum(terms.data(), terms.size());
}

double integrate_boundary(const MomentPolytope& polytope, const Field& g,
                          int gauss_order) {
  const GaussLegendre& gl = gauss_legendre(gauss_order);
  const auto& verts = polytope.vertices();
  std::vector<double> terms;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Point a = verts[k];
    const Point b = verts[(k + 1) % verts.size()];
    const auto& n = polytope.facets()[polytope.edge_facet(k)].normal;
    const double lattice_length =
        std::hypot(b.x1 - a.x1, b.x2 - a.x2) / std::hypot(n[0], n[1]);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double s = 0.5 * (gl.nodes[i] + 1.0);
      const Point x{a.x1 + s * (b.x1 - a.x1), a.x2 + s * (b.x2 - a.x2)};
      terms.push_back(0.5 * gl.weights[i] * lattice_length * g(x));
    }
  }
  return pairwise_sum(terms.data(), terms.size());
}

double lattice_perimeter(const MomentPolytope& polytope) {
  const auto& verts = polytope.vertices();
  double total = 0.0;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Point a = verts[k];
    const Point b = verts[(k + 1) % verts.size()];
    const auto& n = polytope.facets()[polytope.edge_facet(k)].normal;
    total += std::hypot(b.x1 - a.x1, b.x2 - a.x2) / std::hypot(n[0], n[1]);
  }
  return total;
}

void to_json(nlohmann::json& j, const MomentPolytope& polytope) {
  nlohmann::json facets = nlohmann::json::array();
  for (const auto& f : polytope.facets()) {
    facets.push_back({{"n", {f.normal[0], f.normal[1]}}, {"lambda", f.offset}});
  }
  nlohmann::json vertices = nlohmann::json::array();
  for (auto v : polytope.vertices()) vertices.push_back({v.x1, v.x2});
  j = {{"facets", facets}, {"vertices", vertices}};
}

void from_json(const nlohmann::json& j, MomentPolytope& polytope) {
  std::vector<Facet> facets;
  for (const auto& f : j.at("facets")) {
    facets.push_back({{f.at("n").at(0).get<int>(), f.at("n").at(1).get<int>()},
                      f.at("lambda").get<double>()});
  }
  polytope = MomentPolytope::from_facets(std::move(facets));
  if (j.contains("vertices")) {
    const auto& listed = j.at("vertices");
    const auto& derived = polytope.vertices();
    bool match = listed.size() == derived.size();
    for (std::size_t k = 0; match && k < derived.size(); ++k) {
      match = std::hypot(listed[k].at(0).get<double>() - derived[k].x1,
                         listed[k].at(1).get<double>() - derived[k].x2) <= 1e-9;
    }
    if (!match) {
      throw ParameterDomainError("listed vertices disagree with the facet inequalities");
    }
  }
}

}  // namespace ckem
