#pragma once

#include <string>
#include <vector>

#include "chaintopo/backtest.hpp"

#include <json.hpp>

namespace chaintopo {

nlohmann::json config_to_json(const BacktestConfig& cfg);

// {"config", "run_config", "model", "rows": [{date, predicted, actual}], "rmse",
//  "gain_vs_baseline", "baseline"}
nlohmann::json report_to_json(const BacktestReport& report, const nlohmann::json& run_config);
std::string rows_to_csv(const BacktestReport& report);

struct SummaryRow {
  std::string kind;
  std::string model;
  int window = 0;
  int horizon = 0;
  int training_length = 0;
  int d2 = 0;
  double rmse = 0.0;
  std::optional<double> gain;
};

SummaryRow summarize(const BacktestReport& report);
SummaryRow summary_from_json(const nlohmann::json& report);
// kind,model,w,h,l,d2,rmse,gain_pct
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

// Stable, filesystem-safe file stem for a report.
std::string report_stem(const BacktestReport& report);

}  // namespace chaintopo
