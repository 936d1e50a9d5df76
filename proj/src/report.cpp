#include "ckem/report.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ckem {

namespace anchor {
const std::vector<std::string_view>& all() {
  static const std::vector<std::string_view> names = {
      kConformalScalar, kInvariance,          kFutakiIndependence, kWeightedAverage,
      kCalabiFunctional, kFirstVariation,     kExtremality,        kBlowupPolytope,
      kPositivityConditions, kCriticalPoints, kAlphaRoot,          kAnsatzMetric,
      kAffineScalar,    kReducedOde,          kGeneralSolution,    kBoundaryConditions,
      kClosedForms,     kZeroCoefficientCase, kFlatBaseCase,       kPositivityLemma,
      kCkem,            kToricCalibration};
  return names;
}

bool is_known(std::string_view name) {
  const auto& names = all();
  return std::find(names.begin(), names.end(), name) != names.end();
}
}  // namespace anchor

void VerificationReport::set(const std::string& key, double value) {
  for (auto& [k, v] : computed) {
    if (k == key) {
      v = value;
      return;
    }
  }
  computed.emplace_back(key, value);
}

double VerificationReport::get(const std::string& key) const {
  for (const auto& [k, v] : computed) {
    if (k == key) return v;
  }
  throw std::out_of_range("report " + check_id + " has no computed value " + key);
}

bool VerificationReport::has(const std::string& key) const {
  return std::any_of(computed.begin(), computed.end(),
                     [&](const auto& kv) { return kv.first == key; });
}

void VerificationReport::finalize(double residual_value, double tolerance_value) {
  residual = residual_value;
  tolerance = tolerance_value;
  pass = residual <= tolerance;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double as_number(const nlohmann::ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

bool same_number(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string scalar_text(const nlohmann::ordered_json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) return format_double(j.get<double>());
  return j.dump();
}

}  // namespace

nlohmann::ordered_json to_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["check_id"] = report.check_id;
  j["pass"] = report.pass;
  j["residual"] = number(report.residual);
  j["tolerance"] = number(report.tolerance);
  j["provenance"] = report.provenance;
  j["seed"] = report.seed ? nlohmann::ordered_json(*report.seed) : nullptr;
  j["runtime_ms"] = report.runtime_ms;
  j["inputs"] = report.inputs;
  nlohmann::ordered_json computed = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.computed) computed[k] = number(v);
  j["computed"] = computed;
  j["notes"] = report.notes;
  return j;
}

VerificationReport report_from_json(const nlohmann::ordered_json& j) {
  VerificationReport r;
  r.check_id = j.at("check_id").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  r.residual = as_number(j.at("residual"));
  r.tolerance = as_number(j.at("tolerance"));
  r.provenance = j.at("provenance").get<std::string>();
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.runtime_ms = j.value("runtime_ms", std::int64_t{0});
  r.inputs = j.at("inputs");
  for (const auto& [k, v] : j.at("computed").items()) r.computed.emplace_back(k, as_number(v));
  r.notes = j.value("notes", std::vector<std::string>{});
  return r;
}

bool same_report(const VerificationReport& a, const VerificationReport& b,
                 bool ignore_runtime) {
  if (a.check_id != b.check_id || a.pass != b.pass || a.provenance != b.provenance ||
      a.seed != b.seed || a.inputs != b.inputs || a.notes != b.notes ||
      a.computed.size() != b.computed.size()) {
    return false;
  }
  if (!ignore_runtime && a.runtime_ms != b.runtime_ms) return false;
  if (!same_number(a.residual, b.residual) || !same_number(a.tolerance, b.tolerance)) {
    return false;
  }
  for (std::size_t k = 0; k < a.computed.size(); ++k) {
    if (a.computed[k].first != b.computed[k].first ||
        !same_number(a.computed[k].second, b.computed[k].second)) {
      return false;
    }
  }
  return true;
}

std::string render_json(const std::vector<VerificationReport>& reports, bool with_runtime) {
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    auto j = to_json(r);
    if (!with_runtime) j["runtime_ms"] = 0;
    array.push_back(std::move(j));
  }
  return array.dump(2) + "\n";
}

std::string render_csv(const std::vector<VerificationReport>& reports) {
  // Union of flattened keys, in first-seen order.
  std::vector<std::string> keys;
  std::set<std::string> seen;
  auto add_key = [&](const std::string& k) {
    if (seen.insert(k).second) keys.push_back(k);
  };
  for (const auto& r : reports) {
    for (const auto& [k, v] : r.inputs.items()) add_key("inputs." + k);
    for (const auto& [k, v] : r.computed) add_key("computed." + k);
  }

  std::ostringstream os;
  os << "check_id,pass,residual,tolerance,provenance,seed,runtime_ms";
  for (const auto& k : keys) os << ',' << csv_escape(k);
  os << '\n';
  for (const auto& r : reports) {
    std::map<std::string, std::string> row;
    for (const auto& [k, v] : r.inputs.items()) row["inputs." + k] = scalar_text(v);
    for (const auto& [k, v] : r.computed) row["computed." + k] = format_double(v);
    os << csv_escape(r.check_id) << ',' << (r.pass ? "true" : "false") << ','
       << format_double(r.residual) << ',' << format_double(r.tolerance) << ','
       << csv_escape(r.provenance) << ',' << (r.seed ? std::to_string(*r.seed) : "") << ','
       << r.runtime_ms;
    for (const auto& k : keys) {
      auto it = row.find(k);
      os << ',' << (it == row.end() ? "" : csv_escape(it->second));
    }
    os << '\n';
  }
  return os.str();
}

std::vector<VerificationReport> parse_json_reports(const std::string& text) {
  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<VerificationReport> reports;
  for (const auto& item : j) reports.push_back(report_from_json(item));
  return reports;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  }
  out << text;
  out.close();
  if (!out) {
    throw std::runtime_error("cannot write " + path + ": " + std::strerror(errno));
  }
}

void emit(const std::vector<VerificationReport>& reports, ReportFormat format,
          const std::string& path) {
  write_text_file(path, format == ReportFormat::Json ? render_json(reports)
                                                     : render_csv(reports));
}

}  // namespace ckem
