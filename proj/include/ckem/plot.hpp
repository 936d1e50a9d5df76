#pragma once

// Static SVG plots and CSV samples of ansatz profiles and toric fields.

#include <string>

#include "ckem/ansatz.hpp"
#include "ckem/polytope.hpp"

namespace ckem {

enum class PlotContent { Psi, ScalarCurvature, Both };

/// Parses "psi", "s_tilde" or "both"; UsageError otherwise.
PlotContent parse_plot_content(const std::string& text);

/// SVG document of Psi and/or S~ over the open interval. With both curves
/// Psi uses the left axis and S~ the right one. Dashed segments of slope
/// +-2 mark the boundary tangents of Psi.
std::string render_profile_svg(const ProfileCurve& curve, PlotContent what,
                               int samples = 400);

void plot_profile(const ProfileCurve& curve, PlotContent what, const std::string& path);

/// "t,psi,s_tilde" rows at `samples` cell midpoints of the interval.
std::string profile_csv(const ProfileCurve& curve, int samples = 200);

/// "x1,x2,value" rows at the quadrature nodes of the rule.
std::string field_csv(const MomentPolytope& polytope, const Field& field,
                      const QuadratureRule& rule = {1, 4});

}  // namespace ckem
