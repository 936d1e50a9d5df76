#pragma once

// Delzant moment polygons, affine Hamiltonians on them, and quadrature over
// the polygon and its boundary.

#include <array>
#include <functional>
#include <vector>

#include <json.hpp>

namespace ckem {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// One facet inequality l(x) = <normal, x> + offset >= 0 with a primitive
/// integer normal.
struct Facet {
  std::array<int, 2> normal{};
  double offset = 0.0;

  double operator()(Point x) const {
    return normal[0] * x.x1 + normal[1] * x.x2 + offset;
  }
  template <class T>
  T operator()(const T& x1, const T& x2) const {
    return x1 * double(normal[0]) + x2 * double(normal[1]) + T(offset);
  }
};

/// Convex Delzant polygon, stored facet-first. Vertices are derived on
/// construction and kept in counter-clockwise order; edge k joins vertex k to
/// vertex k+1 and lies on facet edge_facet(k).
class MomentPolytope {
 public:
  /// Validates boundedness, non-empty interior and the Delzant condition.
  /// Throws ParameterDomainError on failure.
  static MomentPolytope from_facets(std::vector<Facet> facets);

  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t edge_facet(std::size_t edge) const { return edge_facets_[edge]; }

  double area() const;
  Point centroid() const;
  /// True when every facet function is strictly positive at x.
  bool is_interior(Point x) const;
  /// Smallest facet value at x; negative outside.
  double min_facet_value(Point x) const;

 private:
  std::vector<Facet> facets_;
  std::vector<Point> vertices_;
  std::vector<std::size_t> edge_facets_;
};

/// f = slope_1 * x1 + slope_2 * x2 + offset.
struct AffineHamiltonian {
  double slope_1 = 0.0;
  double slope_2 = 0.0;
  double offset = 0.0;

  double operator()(Point x) const {
    return slope_1 * x.x1 + slope_2 * x.x2 + offset;
  }
  template <class T>
  T operator()(const T& x1, const T& x2) const {
    return x1 * slope_1 + x2 * slope_2 + T(offset);
  }
};

struct QuadratureRule {
  int subdivision_depth = 2;  // each level splits every triangle into four
  int gauss_order = 8;        // Gauss-Legendre points per collapsed direction
};

using Field = std::function<double(Point)>;

/// Polygon with vertices (0,0),(p,0),(p,1-p),(0,1): the one-point blow-up of
/// CP^2. Requires 0 < p < 1.
MomentPolytope make_blowup_polytope(double p);

/// {x1 >= 0, x2 >= 0, x1 + x2 <= 1}.
MomentPolytope make_standard_simplex();

/// Minimum of f over the polygon, attained at a vertex.
double affine_min(const AffineHamiltonian& f, const MomentPolytope& polytope);

struct QuadratureNode {
  Point x;
  double weight = 0.0;
};

/// Nodes and weights of the composite rule: a fan of triangles from the vertex
/// average, each refined dyadically, with a collapsed Gauss-Legendre product
/// rule on every triangle (exact for degree <= 2*order - 2).
std::vector<QuadratureNode> quadrature_nodes(const MomentPolytope& polytope,
                                             const QuadratureRule& rule);

/// Approximates the Lebesgue integral of g over the polygon. Nodes are
/// strictly interior. Throws EvaluationError if g is non-finite at a node.
double integrate(const MomentPolytope& polytope, const Field& g,
                 const QuadratureRule& rule = {});

/// Integral of g over the boundary against the lattice measure, i.e. each
/// edge's Euclidean measure divided by the length of its primitive direction.
double integrate_boundary(const MomentPolytope& polytope, const Field& g,
                          int gauss_order = 16);

/// Lattice length of the boundary.
double lattice_perimeter(const MomentPolytope& polytope);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

/// Order-independent pairwise summation.
double pairwise_sum(const double* values, std::size_t n);

void to_json(nlohmann::json& j, const MomentPolytope& polytope);
void from_json(const nlohmann::json& j, MomentPolytope& polytope);

}  // namespace ckem
