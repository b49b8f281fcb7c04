#include "dirbound/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dirbound/error.hpp"

namespace dirbound {

namespace {

using nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

[[noreturn]] void io_error(const std::filesystem::path& path, const std::string& what) {
  throw Error(ErrorCode::kIo, path.string() + ": " + what);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_error(path, "cannot open for writing");
  out << content;
  out.flush();
  if (!out) io_error(path, "write failed");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const std::vector<ReportRow>& rows, bool include_wall_ms) {
  std::string out = kCsvHeader;
  if (!include_wall_ms) out.resize(out.rfind(','));
  out += '\n';
  for (const ReportRow& r : rows) {
    out += csv_field(r.experiment) + ',' + csv_field(r.input) + ',' + csv_field(r.quantity) + ',' +
           format_double(r.value) + ',' + csv_field(r.method) + ',' +
           format_double(r.tolerance) + ',' + csv_field(r.verdict);
    if (include_wall_ms) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
      out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
  }
  throw Error(ErrorCode::kConfig, "expected a number in the trace document, got " + j.dump());
}

json report_to_json(const Report& report) {
  json rows = json::array();
  for (const ReportRow& r : report.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"input", r.input},
                    {"quantity", r.quantity},
                    {"value", number_to_json(r.value)},
                    {"method", r.method},
                    {"tolerance", number_to_json(r.tolerance)},
                    {"verdict", r.verdict},
                    {"wall_ms", r.wall_ms}});
  }
  json plots = json::array();
  for (const PlotSeries& p : report.plots) {
    json pts = json::array();
    for (const auto& [x, y] : p.points) pts.push_back({number_to_json(x), number_to_json(y)});
    plots.push_back({{"name", p.name}, {"points", pts}});
  }
  return {{"experiment", report.experiment},
          {"rows", rows},
          {"traces", report.traces},
          {"plots", plots}};
}

Report report_from_json(const json& j) {
  Report report;
  try {
    report.experiment = j.at("experiment").get<std::string>();
    for (const json& r : j.at("rows")) {
      ReportRow row;
      row.experiment = r.at("experiment").get<std::string>();
      row.input = r.at("input").get<std::string>();
      row.quantity = r.at("quantity").get<std::string>();
      row.value = number_from_json(r.at("value"));
      row.method = r.at("method").get<std::string>();
      row.tolerance = number_from_json(r.at("tolerance"));
      row.verdict = r.at("verdict").get<std::string>();
      row.wall_ms = r.at("wall_ms").get<double>();
      report.rows.push_back(std::move(row));
    }
    report.traces = j.at("traces");
    for (const json& p : j.at("plots")) {
      PlotSeries series;
      series.name = p.at("name").get<std::string>();
      for (const json& pt : p.at("points")) {
        series.points.emplace_back(number_from_json(pt.at(0)), number_from_json(pt.at(1)));
      }
      report.plots.push_back(std::move(series));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("malformed trace document: ") + e.what());
  }
  return report;
}

EmittedFiles emit_reports(const Report& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) io_error(out_dir, ec.message());
  const std::string stem = report.experiment.empty() ? "report" : report.experiment;

  EmittedFiles files;
  files.csv = out_dir / (stem + ".csv");
  write_file(files.csv, to_csv(report.rows));
  files.trace = out_dir / (stem + ".trace.json");
  write_file(files.trace, report_to_json(report).dump(2) + "\n");
  for (const PlotSeries& p : report.plots) {
    std::string text;
    for (const auto& [x, y] : p.points) text += format_double(x) + ' ' + format_double(y) + '\n';
    files.plots.push_back(out_dir / (stem + "_" + p.name + ".dat"));
    write_file(files.plots.back(), text);
  }
  return files;
}

}  // namespace dirbound
