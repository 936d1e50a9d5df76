#include "ckem/plot.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <vector>

#include "ckem/errors.hpp"
#include "ckem/report.hpp"

namespace ckem {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 70;
constexpr double kTop = 40;
constexpr double kBottom = 50;

struct Range {
  double lo;
  double hi;
};

Range padded(const std::vector<double>& v) {
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  double lo = *mn;
  double hi = *mx;
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double pad = std::max(1.0, std::abs(hi)) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double pad = 0.08 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

class Canvas {
 public:
  Canvas(Range x, Range y) : x_(x), y_(y) {}

  double px(double x) const {
    return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
  }
  double py(double y, const Range& r) const {
    return kHeight - kBottom - (y - r.lo) / (r.hi - r.lo) * (kHeight - kTop - kBottom);
  }
  double py(double y) const { return py(y, y_); }

 private:
  Range x_;
  Range y_;
};

void polyline(std::ostringstream& os, const Canvas& cv, const std::vector<double>& t,
              const std::vector<double>& y, const Range& r, const char* colour,
              const char* extra = "") {
  os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" " << extra
     << " points=\"";
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << std::fixed << std::setprecision(2) << cv.px(t[i]) << ',' << cv.py(y[i], r) << ' ';
  }
  os << std::defaultfloat << "\"/>\n";
}

void y_axis(std::ostringstream& os, const Canvas& cv, const Range& r, double x_px,
            bool right, const std::string& label, const char* colour) {
  os << "<line x1=\"" << x_px << "\" y1=\"" << kTop << "\" x2=\"" << x_px << "\" y2=\""
     << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = r.lo + (r.hi - r.lo) * k / 4.0;
    const double y = cv.py(v, r);
    const double tick = right ? 5 : -5;
    os << "<line x1=\"" << x_px << "\" y1=\"" << y << "\" x2=\"" << x_px + tick << "\" y2=\""
       << y << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x_px + (right ? 8 : -8) << "\" y=\"" << y + 4
       << "\" font-size=\"11\" text-anchor=\"" << (right ? "start" : "end") << "\">" << num(v)
       << "</text>\n";
  }
  const double lx = right ? kWidth - 15 : 18;
  const double ly = (kTop + kHeight - kBottom) / 2;
  os << "<text x=\"" << lx << "\" y=\"" << ly << "\" font-size=\"13\" fill=\"" << colour
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << lx << ' ' << ly << ")\">"
     << label << "</text>\n";
}

}  // namespace

PlotContent parse_plot_content(const std::string& text) {
  if (text == "psi") return PlotContent::Psi;
  if (text == "s_tilde") return PlotContent::ScalarCurvature;
  if (text == "both") return PlotContent::Both;
  throw UsageError("plot content must be psi, s_tilde or both, got '" + text + "'");
}

std::string render_profile_svg(const ProfileCurve& curve, PlotContent what, int samples) {
  if (samples < 2) throw UsageError("at least two plot samples are needed");
  const double a = curve.t_min;
  const double b = curve.t_max;
  std::vector<double> t(samples + 2);
  std::vector<double> psi(t.size());
  t.front() = a;
  t.back() = b;
  for (int i = 0; i < samples; ++i) t[i + 1] = a + (b - a) * (i + 0.5) / samples;
  for (std::size_t i = 0; i < t.size(); ++i) psi[i] = curve.psi(t[i]);
  // S~ is only defined inside; the endpoints are dropped for that curve.
  std::vector<double> ts(t.begin() + 1, t.end() - 1);
  std::vector<double> s(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) s[i] = scalar_curvature_profile(curve, ts[i]);

  const bool show_psi = what != PlotContent::ScalarCurvature;
  const bool show_s = what != PlotContent::Psi;
  const Range xr{a - 0.03 * (b - a), b + 0.03 * (b - a)};
  const Range psi_r = padded(psi);
  const Range s_r = padded(s);
  const Canvas cv(xr, show_psi ? psi_r : s_r);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
     << "m = " << curve.m << ", [" << num(a) << ", " << num(b) << "], c = "
     << num(curve.base_scalar) << "</text>\n";

  // Horizontal axis.
  const double base_y = kHeight - kBottom;
  os << "<line x1=\"" << kLeft << "\" y1=\"" << base_y << "\" x2=\"" << kWidth - kRight
     << "\" y2=\"" << base_y << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = a + (b - a) * k / 4.0;
    os << "<line x1=\"" << cv.px(v) << "\" y1=\"" << base_y << "\" x2=\"" << cv.px(v)
       << "\" y2=\"" << base_y + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << cv.px(v) << "\" y=\"" << base_y + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  }
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
     << "\" font-size=\"13\" text-anchor=\"middle\">t</text>\n";

  if (show_psi) {
    y_axis(os, cv, psi_r, kLeft, false, "psi(t)", "#1f5fbf");
    if (psi_r.lo < 0 && psi_r.hi > 0) {
      os << "<line x1=\"" << kLeft << "\" y1=\"" << cv.py(0.0, psi_r) << "\" x2=\""
         << kWidth - kRight << "\" y2=\"" << cv.py(0.0, psi_r)
         << "\" stroke=\"#999\" stroke-dasharray=\"2,3\"/>\n";
    }
    // Boundary tangents of slope 2 at a and -2 at b.
    const double run = 0.12 * (b - a);
    const std::vector<double> ta{a, a + run};
    const std::vector<double> ya{curve.psi(a), curve.psi(a) + 2.0 * run};
    const std::vector<double> tb{b - run, b};
    const std::vector<double> yb{curve.psi(b) + 2.0 * run, curve.psi(b)};
    polyline(os, cv, ta, ya, psi_r, "#888", "stroke-dasharray=\"5,4\"");
    polyline(os, cv, tb, yb, psi_r, "#888", "stroke-dasharray=\"5,4\"");
    polyline(os, cv, t, psi, psi_r, "#1f5fbf");
  }
  if (show_s) {
    y_axis(os, cv, s_r, show_psi ? kWidth - kRight : kLeft, show_psi, "S~(t)", "#c0392b");
    polyline(os, cv, ts, s, s_r, "#c0392b");
  }
  if (what == PlotContent::Both) {
    const double lx = kLeft + 15;
    os << "<g font-size=\"12\">\n"
       << "<rect x=\"" << lx - 6 << "\" y=\"" << kTop + 2
       << "\" width=\"150\" height=\"58\" fill=\"white\" stroke=\"#ccc\"/>\n"
       << "<line x1=\"" << lx << "\" y1=\"" << kTop + 16 << "\" x2=\"" << lx + 24
       << "\" y2=\"" << kTop + 16 << "\" stroke=\"#1f5fbf\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << lx + 30 << "\" y=\"" << kTop + 20 << "\">psi (left)</text>\n"
       << "<line x1=\"" << lx << "\" y1=\"" << kTop + 34 << "\" x2=\"" << lx + 24
       << "\" y2=\"" << kTop + 34 << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << lx + 30 << "\" y=\"" << kTop + 38 << "\">S~ (right)</text>\n"
       << "<line x1=\"" << lx << "\" y1=\"" << kTop + 52 << "\" x2=\"" << lx + 24
       << "\" y2=\"" << kTop + 52 << "\" stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n"
       << "<text x=\"" << lx + 30 << "\" y=\"" << kTop + 56 << "\">slope +-2</text>\n"
       << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void plot_profile(const ProfileCurve& curve, PlotContent what, const std::string& path) {
  write_text_file(path, render_profile_svg(curve, what));
}

std::string profile_csv(const ProfileCurve& curve, int samples) {
  std::ostringstream os;
  os << "t,psi,s_tilde\n" << std::setprecision(17);
  for (int i = 0; i < samples; ++i) {
    const double t = curve.t_min + (curve.t_max - curve.t_min) * (i + 0.5) / samples;
    os << t << ',' << curve.psi(t) << ',' << scalar_curvature_profile(curve, t) << '\n';
  }
  return os.str();
}

std::string field_csv(const MomentPolytope& polytope, const Field& field,
                      const QuadratureRule& rule) {
  std::ostringstream os;
  os << "x1,x2,value\n" << std::setprecision(17);
  for (const auto& node : quadrature_nodes(polytope, rule)) {
    os << node.x.x1 << ',' << node.x.x2 << ',' << field(node.x) << '\n';
  }
  return os.str();
}

}  // namespace ckem
