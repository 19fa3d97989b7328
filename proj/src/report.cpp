#include "chaintopo/report.hpp"

#include <cctype>

#include "chaintopo/format.hpp"

namespace chaintopo {

nlohmann::json config_to_json(const BacktestConfig& cfg) {
  nlohmann::json reg;
  reg["kind"] = std::string(to_string(cfg.regressor.kind));
  reg["label"] = cfg.regressor.label();
  if (cfg.regressor.kind == RegressorKind::Enet) {
    reg["l1"] = cfg.regressor.l1;
    reg["l2"] = cfg.regressor.l2;
  } else {
    reg["n_trees"] = cfg.regressor.n_trees;
    reg["max_depth"] = cfg.regressor.max_depth;
    reg["min_leaf"] = cfg.regressor.min_leaf;
    reg["mtry"] = cfg.regressor.mtry;
    reg["bootstrap"] = cfg.regressor.bootstrap;
  }
  nlohmann::json j;
  j["feature_kind"] = std::string(to_string(cfg.feature_kind));
  j["regressor"] = std::move(reg);
  j["w"] = cfg.window;
  j["h"] = cfg.horizon;
  j["l"] = cfg.training_length;
  j["d2"] = cfg.d2;
  j["eval_start"] = cfg.eval_start ? nlohmann::json(cfg.eval_start->iso()) : nlohmann::json();
  j["eval_end"] = cfg.eval_end ? nlohmann::json(cfg.eval_end->iso()) : nlohmann::json();
  j["seed"] = cfg.seed;
  j["retrain_every"] = cfg.retrain_every;
  j["target"] = std::string(to_string(cfg.target));
  return j;
}

nlohmann::json report_to_json(const BacktestReport& report, const nlohmann::json& run_config) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"date", r.date.iso()}, {"predicted", r.predicted}, {"actual", r.actual}});
  }
  nlohmann::json j;
  j["config"] = config_to_json(report.config);
  j["run_config"] = run_config;
  j["model"] = report.model_label;
  j["rows"] = std::move(rows);
  j["rmse"] = report.rmse;
  j["gain_vs_baseline"] = report.gain_vs_baseline ? nlohmann::json(*report.gain_vs_baseline) : nlohmann::json();
  j["baseline"] = report.baseline_label;
  return j;
}

std::string rows_to_csv(const BacktestReport& report) {
  std::string out = "date,predicted,actual\n";
  for (const auto& r : report.rows) {
    out += r.date.iso() + ',' + format_double(r.predicted) + ',' + format_double(r.actual) + '\n';
  }
  return out;
}

SummaryRow summarize(const BacktestReport& report) {
  SummaryRow s;
  s.kind = std::string(to_string(report.config.feature_kind));
  s.model = report.model_label;
  s.window = report.config.window;
  s.horizon = report.config.horizon;
  s.training_length = report.config.training_length;
  s.d2 = report.config.d2;
  s.rmse = report.rmse;
  s.gain = report.gain_vs_baseline;
  return s;
}

SummaryRow summary_from_json(const nlohmann::json& j) {
  SummaryRow s;
  const auto& c = j.at("config");
  s.kind = c.at("feature_kind").get<std::string>();
  s.model = j.at("model").get<std::string>();
  s.window = c.at("w").get<int>();
  s.horizon = c.at("h").get<int>();
  s.training_length = c.at("l").get<int>();
  s.d2 = c.at("d2").get<int>();
  s.rmse = j.at("rmse").get<double>();
  if (j.contains("gain_vs_baseline") && !j.at("gain_vs_baseline").is_null()) {
    s.gain = j.at("gain_vs_baseline").get<double>();
  }
  return s;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "kind,model,w,h,l,d2,rmse,gain_pct\n";
  for (const auto& r : rows) {
    out += r.kind + ",\"" + r.model + "\"," + std::to_string(r.window) + ',' +
           std::to_string(r.horizon) + ',' + std::to_string(r.training_length) + ',' +
           (r.d2 == 0 ? std::string("full") : std::to_string(r.d2)) + ',' + format_double(r.rmse) +
           ',' + (r.gain ? format_double(*r.gain) : std::string("NA")) + '\n';
  }
  return out;
}

std::string report_stem(const BacktestReport& report) {
  const auto& c = report.config;
  std::string model;
  for (char ch : report.model_label) {
    model += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.') ? ch : '-';
  }
  while (!model.empty() && model.back() == '-') model.pop_back();
  return std::string(to_string(c.feature_kind)) + "_" + model + "_w" + std::to_string(c.window) +
         "_h" + std::to_string(c.horizon) + "_l" + std::to_string(c.training_length) + "_d2_" +
         (c.d2 == 0 ? std::string("full") : std::to_string(c.d2));
}

}  // namespace chaintopo
