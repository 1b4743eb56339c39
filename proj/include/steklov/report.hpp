#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "steklov/experiments.hpp"
#include "steklov/fem.hpp"

namespace steklov {

inline constexpr int kReportSchemaVersion = 1;

// Column order of records.csv.
const std::vector<std::string>& record_csv_columns();

std::string records_csv(const GrowthRun& run);

nlohmann::json config_to_json(const GrowthRunConfig& config);
GrowthRunConfig config_from_json(const nlohmann::json& j);

nlohmann::json report_json(const GrowthRun& run);
std::string report_json_text(const GrowthRun& run);
GrowthRun growth_run_from_json(const nlohmann::json& j);

// sigma1 * L against N, with the least-squares line and the 8*pi*(genus+1) curve.
std::string growth_svg(const GrowthRun& run);

struct ExportFormats {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

// Writes records.csv, report.json and growth.svg under `dir`.
void export_report(const GrowthRun& run, const std::filesystem::path& dir, ExportFormats formats = {});

nlohmann::json spectrum_json(const SteklovSpectrum& spectrum);

}  // namespace steklov
