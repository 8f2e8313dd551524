#pragma once

// CSV tables and JSON documents for models, protocols and reports.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fomcell/ecm.hpp"
#include "fomcell/ident.hpp"
#include "fomcell/metrics.hpp"
#include "fomcell/synthgen.hpp"

namespace fomcell {

/// Column-major numeric table with a mandatory header row.
class Table {
 public:
  std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t cols() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool has(std::string_view name) const noexcept;
  /// Error(invalid_argument) naming the missing column.
  const std::vector<double>& column(std::string_view name) const;
  const std::vector<double>& column(std::size_t idx) const { return columns_.at(idx); }

  /// Error(invalid_argument) on duplicate names or a length mismatch.
  void add_column(std::string name, std::vector<double> values);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

/// Comma-separated, '.' decimal, header row, UTF-8 (BOM tolerated). Blank
/// lines are skipped. Error(parse) names the offending line.
Table parse_csv(std::string_view text, const std::string& source = "<csv>");
std::string format_csv(const Table& table);
Table read_csv(const std::string& path);
void write_csv(const std::string& path, const Table& table);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
nlohmann::json parse_json(std::string_view text, const std::string& source = "<json>");

struct ModelDocument {
  CellModel model;
  double T = 1.0;
  std::optional<double> soc0;
  nlohmann::json segments;  // per-segment identification results, if any
};

/// {R0, Qn, T, sign, branches:[{R, C, alpha}], ocv:{soc, v}} plus optional
/// soc0 and segments. A branch may give tau instead of C.
ModelDocument model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ModelDocument& doc);

OCVTable ocv_from_table(const Table& table);

ProtocolSpec protocol_from_json(const nlohmann::json& j);
nlohmann::json protocol_to_json(const ProtocolSpec& spec);

struct IdentifyOptions {
  SegmentationConfig segmentation;
  FitConfig fit;
  unsigned threads = 1;
  double soc_ref = 0.5;
  double T = 0.0;  // model sampling period; 0 takes it from the trace
};

IdentifyOptions identify_options_from_json(const nlohmann::json& j);

nlohmann::json fit_to_json(const SegmentFit& f);
nlohmann::json report_to_json(const RunReport& r);
nlohmann::json benchmark_to_json(const BenchmarkReport& b);

/// Trajectory as a table: t, i, v, soc, u1..un.
Table trajectory_table(const Trajectory& tr);

}  // namespace fomcell
