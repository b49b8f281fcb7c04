#ifndef DIRBOUND_REPORT_HPP_
#define DIRBOUND_REPORT_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace dirbound {

struct ReportRow {
  std::string experiment;
  std::string input;
  std::string quantity;
  double value = 0.0;
  std::string method;
  double tolerance = 0.0;
  std::string verdict;
  double wall_ms = 0.0;

  bool operator==(const ReportRow&) const = default;
};

struct PlotSeries {
  std::string name;  // file stem suffix, e.g. "ratio"
  std::vector<std::pair<double, double>> points;

  bool operator==(const PlotSeries&) const = default;
};

struct Report {
  std::string experiment;
  std::vector<ReportRow> rows;
  nlohmann::json traces = nlohmann::json::object();
  std::vector<PlotSeries> plots;
};

inline const char* kCsvHeader = "experiment,input,quantity,value,method,tolerance,verdict,wall_ms";

// %.17g, with nan/inf/-inf spelled out.
std::string format_double(double v);
std::string to_csv(const std::vector<ReportRow>& rows, bool include_wall_ms = true);

// Trace mirror. Non-finite numbers are stored as strings so the document
// round-trips exactly.
nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);
nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

struct EmittedFiles {
  std::filesystem::path csv;
  std::filesystem::path trace;
  std::vector<std::filesystem::path> plots;
};

// Writes <experiment>.csv, <experiment>.trace.json and <experiment>_<plot>.dat
// into out_dir, creating it if needed. E_IO naming the path on failure.
EmittedFiles emit_reports(const Report& report, const std::filesystem::path& out_dir);

}  // namespace dirbound

#endif  // DIRBOUND_REPORT_HPP_
