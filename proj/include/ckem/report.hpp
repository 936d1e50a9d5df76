#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ckem {

/// Stable anchors naming the piece of theory a check reproduces.
namespace anchor {
inline constexpr std::string_view kConformalScalar = "conformal-scalar-curvature-relation";
inline constexpr std::string_view kInvariance = "weighted-integral-invariance";
inline constexpr std::string_view kFutakiIndependence = "futaki-metric-independence";
inline constexpr std::string_view kWeightedAverage = "weighted-average-class-invariant";
inline constexpr std::string_view kCalabiFunctional = "calabi-functional";
inline constexpr std::string_view kFirstVariation = "calabi-first-variation";
inline constexpr std::string_view kExtremality = "f-extremality-holomorphic-gradient";
inline constexpr std::string_view kBlowupPolytope = "blowup-polytope";
inline constexpr std::string_view kPositivityConditions = "blowup-positivity";
inline constexpr std::string_view kCriticalPoints = "blowup-critical-points";
inline constexpr std::string_view kAlphaRoot = "blowup-alpha-quartic";
inline constexpr std::string_view kAnsatzMetric = "ansatz-action-angle-metric";
inline constexpr std::string_view kAffineScalar = "ansatz-affine-scalar-curvature";
inline constexpr std::string_view kReducedOde = "ansatz-reduced-ode";
inline constexpr std::string_view kGeneralSolution = "ansatz-general-solution";
inline constexpr std::string_view kBoundaryConditions = "ansatz-boundary-conditions";
inline constexpr std::string_view kClosedForms = "ansatz-closed-form-coefficients";
inline constexpr std::string_view kZeroCoefficientCase = "ansatz-b-zero-solution";
inline constexpr std::string_view kFlatBaseCase = "ansatz-flat-base-solution";
inline constexpr std::string_view kPositivityLemma = "ansatz-positivity-lemma";
inline constexpr std::string_view kCkem = "ckem-constant-scalar-curvature";
inline constexpr std::string_view kToricCalibration = "toric-scalar-curvature-calibration";

/// Every anchor above; reports must carry one of these.
const std::vector<std::string_view>& all();
bool is_known(std::string_view name);
}  // namespace anchor

struct VerificationReport {
  std::string check_id;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, double>> computed;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;
  std::optional<std::uint64_t> seed;
  std::int64_t runtime_ms = 0;
  std::vector<std::string> notes;

  void set(const std::string& key, double value);
  /// Throws std::out_of_range for unknown keys.
  double get(const std::string& key) const;
  bool has(const std::string& key) const;
  /// Records residual and tolerance and sets pass = residual <= tolerance.
  void finalize(double residual_value, double tolerance_value);
};

nlohmann::ordered_json to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::ordered_json& j);

/// Reports compare equal field by field, with NaN equal to NaN.
bool same_report(const VerificationReport& a, const VerificationReport& b,
                 bool ignore_runtime = false);

enum class ReportFormat { Json, Csv };

std::string render_json(const std::vector<VerificationReport>& reports, bool with_runtime = true);
std::string render_csv(const std::vector<VerificationReport>& reports);
std::vector<VerificationReport> parse_json_reports(const std::string& text);

/// Writes the rendered reports; throws std::runtime_error carrying the OS
/// message when the file cannot be written.
void emit(const std::vector<VerificationReport>& reports, ReportFormat format,
          const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace ckem
