#include "chaintopo/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaintopo/error.hpp"
#include "chaintopo/format.hpp"
#include "chaintopo/grid_search.hpp"
#include "chaintopo/ingest.hpp"
#include "chaintopo/pipeline.hpp"
#include "chaintopo/report.hpp"

namespace chaintopo::cli {
namespace fs = std::filesystem;
namespace {

// A missing or unreadable input is a usage error, not a runtime failure.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::optional<Date> optional_date(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return Date::parse(text);
}

struct InputArgs {
  std::string transactions;
  std::string prices;
};

struct FeatureArgs {
  int dim = kDefaultDimension;
  std::vector<double> fl_scales_btc{0, 10, 20, 30, 40, 50};
  int q = 10;
  int s = 100;
  int order = 1;
  bool impute_inactive = false;
  std::string grid_start;
  std::string grid_end;
};

void add_input_options(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("--transactions", in.transactions, "transactions CSV")->required();
  cmd->add_option("--prices", in.prices, "prices CSV")->required();
}

void add_feature_options(CLI::App* cmd, FeatureArgs& fa) {
  cmd->add_option("--n", fa.dim, "chainlet matrix dimension N")->capture_default_str();
  cmd->add_option("--fl-scales", fa.fl_scales_btc, "filtration amount thresholds (BTC)")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--q", fa.q, "number of quantile intervals")->capture_default_str();
  cmd->add_option("--s", fa.s, "Betti filtration length S")->capture_default_str();
  cmd->add_option("--order", fa.order, "Betti derivative order")->capture_default_str();
  cmd->add_flag("--impute-inactive", fa.impute_inactive,
                "use all N^2 cells as nodes, imputing zero amounts for empty ones");
  cmd->add_option("--grid-start", fa.grid_start, "first day defining the Betti scale grid");
  cmd->add_option("--grid-end", fa.grid_end, "last day defining the Betti scale grid");
}

FeatureConfig to_feature_config(const FeatureArgs& fa, int jobs) {
  FeatureConfig cfg;
  cfg.dim = fa.dim;
  cfg.fl_scales = FlScales::from_btc(fa.fl_scales_btc);
  cfg.q = fa.q;
  cfg.s = fa.s;
  cfg.order = fa.order;
  cfg.impute_inactive = fa.impute_inactive;
  cfg.grid_start = optional_date(fa.grid_start);
  cfg.grid_end = optional_date(fa.grid_end);
  cfg.jobs = jobs;
  cfg.validate();
  return cfg;
}

nlohmann::json feature_args_json(const InputArgs& in, const FeatureArgs& fa) {
  nlohmann::json j;
  j["transactions"] = in.transactions;
  j["prices"] = in.prices;
  j["n"] = fa.dim;
  j["fl_scales_btc"] = fa.fl_scales_btc;
  j["q"] = fa.q;
  j["s"] = fa.s;
  j["order"] = fa.order;
  j["impute_inactive"] = fa.impute_inactive;
  j["grid_start"] = fa.grid_start;
  j["grid_end"] = fa.grid_end;
  return j;
}

DailySeries load_series(const InputArgs& in) {
  const std::string tx_text = read_file(in.transactions);
  const std::string price_text = read_file(in.prices);
  auto txs = parse_transactions(tx_text);
  auto prices = parse_prices(price_text);
  return assemble_series(std::move(txs), std::move(prices));
}

std::vector<FeatureKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<FeatureKind> kinds;
  for (const auto& n : names) {
    if (n == "all") {
      kinds.assign(std::begin(kAllFeatureKinds), std::end(kAllFeatureKinds));
      return kinds;
    }
    const FeatureKind k = parse_feature_kind(n);
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  if (kinds.empty()) throw ValidationError("no feature kind given");
  return kinds;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  int days = 365;
  int txs_per_day = 200;
  std::string price_model = "linear";
  std::uint64_t seed = 0;
  std::string start = "2017-01-01";
  std::string out;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SyntheticParams p;
  p.n_days = a.days;
  p.txs_per_day = a.txs_per_day;
  p.price_model = parse_price_model(a.price_model);
  p.seed = a.seed;
  p.start = Date::parse(a.start);
  if (p.n_days < 1) throw ValidationError("--days must be >= 1");
  if (p.txs_per_day < 1) throw ValidationError("--txs-per-day must be >= 1");

  const DailySeries series = generate_synthetic(p);
  fs::create_directories(a.out);
  write_file(fs::path(a.out) / "transactions.csv", serialize_transactions(series.flat_transactions()));
  write_file(fs::path(a.out) / "prices.csv", serialize_prices(series.prices));
  out << "wrote " << series.size() << " days to " << a.out << '\n';
  return kExitOk;
}

// ---- features -------------------------------------------------------------

struct FeaturesCmdArgs {
  InputArgs in;
  FeatureArgs fa;
  std::vector<std::string> kinds{"betti"};
  bool diagnostics = false;
  bool snapshots = false;
  int jobs = 1;
  std::string out;
};

int cmd_features(const FeaturesCmdArgs& a, std::ostream& out) {
  const auto kinds = parse_kinds(a.kinds);
  const FeatureConfig cfg = to_feature_config(a.fa, a.jobs);
  const DailySeries series = load_series(a.in);

  FeaturePipeline pipeline(series, cfg);
  fs::create_directories(a.out);
  nlohmann::json run = feature_args_json(a.in, a.fa);
  run["kinds"] = a.kinds;

  for (FeatureKind k : kinds) {
    const FeatureSeries fsr = pipeline.build(k);
    const fs::path path = fs::path(a.out) / ("features_" + std::string(to_string(k)) + ".csv");
    write_file(path, features_to_csv(fsr));
    out << "wrote " << path.string() << " (" << fsr.size() << " days, " << fsr.dim() << " features)\n";
    if (k == FeatureKind::Betti || k == FeatureKind::BettiDeriv) {
      std::string grid = "index,epsilon\n";
      const auto& g = pipeline.scale_grid();
      for (std::size_t i = 0; i < g.size(); ++i) grid += std::to_string(i + 1) + ',' + format_double(g[i]) + '\n';
      write_file(fs::path(a.out) / "scale_grid.csv", grid);
    }
  }
  if (a.diagnostics) {
    write_file(fs::path(a.out) / "diagnostics.csv", diagnostics_to_csv(pipeline.diagnostics()));
  }
  if (a.snapshots) {
    std::string lines;
    for (const auto& s : pipeline.snapshots()) lines += snapshot_to_json(s) + '\n';
    write_file(fs::path(a.out) / "snapshots.jsonl", lines);
  }
  write_file(fs::path(a.out) / "run_config.json", run.dump(2) + '\n');
  return kExitOk;
}

// ---- backtest ---------------------------------------------------------------

struct BacktestCmdArgs {
  InputArgs in;
  FeatureArgs fa;
  std::vector<std::string> kinds{"baseline", "betti"};
  std::vector<std::string> models{"enet"};
  std::vector<double> l1{std::begin(kEnetL1Grid), std::end(kEnetL1Grid)};
  std::vector<double> l2{std::begin(kEnetL2Grid), std::end(kEnetL2Grid)};
  std::vector<int> trees{std::begin(kTreeGrid), std::end(kTreeGrid)};
  int max_depth = 0;
  int min_leaf = 2;
  std::vector<int> windows{3, 5, 7};
  std::vector<int> horizons{1, 2, 5, 7, 10, 15, 20, 25, 30};
  std::vector<int> lengths{25, 50, 100, 200};
  std::vector<int> d2s{5, 10, 15, 20};
  std::string eval_start;
  std::string eval_end;
  int retrain_every = 1;
  std::string target = "level";
  bool persistence = false;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
};

GridSpec to_grid(const BacktestCmdArgs& a) {
  GridSpec g;
  g.kinds = parse_kinds(a.kinds);
  if (std::find(g.kinds.begin(), g.kinds.end(), FeatureKind::Baseline) == g.kinds.end()) {
    g.kinds.insert(g.kinds.begin(), FeatureKind::Baseline);
  }
  g.regressors.clear();
  for (const auto& m : a.models) {
    const RegressorKind kind = parse_regressor_kind(m);
    if (kind == RegressorKind::Enet) {
      for (double l1 : a.l1) {
        for (double l2 : a.l2) {
          RegressorSpec s;
          s.kind = kind;
          s.l1 = l1;
          s.l2 = l2;
          g.regressors.push_back(s);
        }
      }
    } else {
      for (int t : a.trees) {
        RegressorSpec s;
        s.kind = kind;
        s.n_trees = t;
        s.max_depth = a.max_depth;
        s.min_leaf = a.min_leaf;
        g.regressors.push_back(s);
      }
    }
  }
  g.windows = a.windows;
  g.horizons = a.horizons;
  g.lengths = a.lengths;
  g.d2s = a.d2s;
  g.eval_start = optional_date(a.eval_start);
  g.eval_end = optional_date(a.eval_end);
  g.seed = a.seed;
  g.retrain_every = a.retrain_every;
  g.target = parse_target(a.target);

  const auto cells = expand_grid(g);
  for (int w : g.windows) {
    for (int h : g.horizons) {
      BacktestConfig probe;
      probe.window = w;
      probe.horizon = h;
      probe.training_length = w + h + 1;
      probe.validate();
    }
  }
  for (const auto& c : cells) c.validate();
  if (cells.empty()) throw ValidationError("no grid cell satisfies l >= w + h + 1");
  return g;
}

nlohmann::json backtest_args_json(const BacktestCmdArgs& a) {
  nlohmann::json j = feature_args_json(a.in, a.fa);
  j["kinds"] = a.kinds;
  j["models"] = a.models;
  j["l1"] = a.l1;
  j["l2"] = a.l2;
  j["trees"] = a.trees;
  j["max_depth"] = a.max_depth;
  j["min_leaf"] = a.min_leaf;
  j["w"] = a.windows;
  j["h"] = a.horizons;
  j["l"] = a.lengths;
  j["d2"] = a.d2s;
  j["eval_start"] = a.eval_start;
  j["eval_end"] = a.eval_end;
  j["retrain_every"] = a.retrain_every;
  j["target"] = a.target;
  j["persistence"] = a.persistence;
  j["seed"] = a.seed;
  return j;
}

void print_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << std::left << std::setw(12) << "kind" << std::setw(28) << "model" << std::right << std::setw(4)
      << "w" << std::setw(4) << "h" << std::setw(5) << "l" << std::setw(6) << "d2" << std::setw(14)
      << "rmse" << std::setw(10) << "gain%" << '\n';
  for (const auto& r : rows) {
    std::ostringstream rm, gn;
    rm << std::fixed << std::setprecision(4) << r.rmse;
    if (r.gain) {
      gn << std::fixed << std::setprecision(2) << *r.gain;
    } else {
      gn << "NA";
    }
    out << std::left << std::setw(12) << r.kind << std::setw(28) << r.model << std::right << std::setw(4)
        << r.window << std::setw(4) << r.horizon << std::setw(5) << r.training_length << std::setw(6)
        << (r.d2 == 0 ? std::string("full") : std::to_string(r.d2)) << std::setw(14) << rm.str()
        << std::setw(10) << gn.str() << '\n';
  }
}

int cmd_backtest(const BacktestCmdArgs& a, std::ostream& out) {
  const GridSpec grid = to_grid(a);
  FeatureConfig fcfg = to_feature_config(a.fa, a.jobs);
  // Without an explicit grid span the scale grid comes from the lead-in days only.
  if (!fcfg.grid_start && !fcfg.grid_end && grid.eval_start) fcfg.grid_end = grid.eval_start->plus_days(-1);

  const DailySeries series = load_series(a.in);
  // Coverage depends only on the calendar, so check it before any features are built.
  for (const auto& c : expand_grid(grid)) evaluation_span(c, series.days);
  FeaturePipeline pipeline(series, fcfg);
  const auto feature_series = pipeline.build_all(grid.kinds);

  auto reports = grid_search(grid, feature_series, a.jobs);
  if (a.persistence) {
    std::set<std::pair<int, int>> seen;
    for (const auto& c : expand_grid(grid)) {
      if (!seen.insert({c.horizon, c.training_length}).second) continue;
      BacktestConfig pc = c;
      pc.feature_kind = FeatureKind::Baseline;
      reports.push_back(persistence_backtest(pc, feature_series.at(FeatureKind::Baseline)));
    }
    rank_reports(reports);
  }
  attach_gains(reports);

  const nlohmann::json run = backtest_args_json(a);
  const fs::path dir = fs::path(a.out) / "reports";
  fs::create_directories(dir);
  std::vector<SummaryRow> all_rows;
  for (const auto& r : reports) {
    std::string stem = report_stem(r);
    if (r.model_label == "persistence") stem = "persistence_h" + std::to_string(r.config.horizon) +
                                               "_l" + std::to_string(r.config.training_length);
    write_file(dir / (stem + ".json"), report_to_json(r, run).dump(2) + '\n');
    write_file(dir / (stem + ".csv"), rows_to_csv(r));
    all_rows.push_back(summarize(r));
  }
  std::vector<SummaryRow> best;
  for (const auto& r : best_per_cell(reports)) best.push_back(summarize(r));
  write_file(fs::path(a.out) / "grid.csv", summary_to_csv(all_rows));
  write_file(fs::path(a.out) / "summary.csv", summary_to_csv(best));
  write_file(fs::path(a.out) / "run_config.json", run.dump(2) + '\n');
  print_summary(out, best);
  return kExitOk;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
  std::string in;
  std::string out;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  fs::path dir = a.in;
  if (fs::is_directory(dir / "reports")) dir /= "reports";
  if (!fs::is_directory(dir)) throw InputError("report directory '" + a.in + "' does not exist");

  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SummaryRow> rows;
  for (const auto& f : files) {
    const auto j = nlohmann::json::parse(read_file(f.string()));
    if (!j.contains("rows") || !j.contains("config")) continue;
    rows.push_back(summary_from_json(j));
  }
  if (rows.empty()) throw InputError("no backtest reports found in '" + dir.string() + "'");
  std::sort(rows.begin(), rows.end(), [](const SummaryRow& x, const SummaryRow& y) {
    return std::tie(x.kind, x.model, x.window, x.horizon, x.training_length, x.d2) <
           std::tie(y.kind, y.model, y.window, y.horizon, y.training_length, y.d2);
  });

  // Gain against horizon, one line per (kind, model, w, h): the best l/d2 cell.
  std::map<std::tuple<std::string, std::string, int, int>, SummaryRow> by_horizon;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.kind, r.model, r.window, r.horizon);
    auto it = by_horizon.find(key);
    if (it == by_horizon.end() || r.rmse < it->second.rmse) by_horizon[key] = r;
  }
  std::string csv = "kind,model,w,h,rmse,gain_pct\n";
  std::vector<SummaryRow> table;
  for (const auto& [key, r] : by_horizon) {
    csv += r.kind + ",\"" + r.model + "\"," + std::to_string(r.window) + ',' + std::to_string(r.horizon) +
           ',' + format_double(r.rmse) + ',' + (r.gain ? format_double(*r.gain) : std::string("NA")) + '\n';
    table.push_back(r);
  }
  const fs::path target = a.out.empty() ? fs::path(a.in) / "gain_vs_horizon.csv" : fs::path(a.out);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write_file(target, csv);
  print_summary(out, table);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chainlet and Betti-curve features for blockchain price forecasting"};
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic dataset");
  synth_cmd->add_option("--days", synth.days, "number of days")->capture_default_str();
  synth_cmd->add_option("--txs-per-day", synth.txs_per_day, "mean transactions per day")->capture_default_str();
  synth_cmd->add_option("--price-model", synth.price_model, "linear | random-walk | feature-linked")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "random seed")->capture_default_str();
  synth_cmd->add_option("--start", synth.start, "first day (YYYY-MM-DD)")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output directory")->required();

  FeaturesCmdArgs feat;
  auto* feat_cmd = app.add_subcommand("features", "write per-day feature matrices");
  add_input_options(feat_cmd, feat.in);
  add_feature_options(feat_cmd, feat.fa);
  feat_cmd->add_option("--kind", feat.kinds, "baseline | fl | betti | betti_deriv | all")
      ->delimiter(',')
      ->capture_default_str();
  feat_cmd->add_flag("--diagnostics", feat.diagnostics, "also write diagnostics.csv with basic features");
  feat_cmd->add_flag("--snapshots", feat.snapshots, "also write snapshots.jsonl");
  feat_cmd->add_option("--jobs", feat.jobs, "worker threads")->capture_default_str();
  feat_cmd->add_option("--out", feat.out, "output directory")->required();

  BacktestCmdArgs bt;
  auto* bt_cmd = app.add_subcommand("backtest", "grid-searched sliding-window backtest");
  // --h is the horizon grid, so help is long-form only here.
  bt_cmd->set_help_flag("--help", "print this help message and exit");
  add_input_options(bt_cmd, bt.in);
  add_feature_options(bt_cmd, bt.fa);
  bt_cmd->add_option("--kind", bt.kinds, "feature kinds (baseline is always added)")
      ->delimiter(',')
      ->capture_default_str();
  bt_cmd->add_option("--model", bt.models, "enet | rf")->delimiter(',')->capture_default_str();
  bt_cmd->add_option("--l1", bt.l1, "enet L1 penalty grid")->delimiter(',')->capture_default_str();
  bt_cmd->add_option("--l2", bt.l2, "enet L2 penalty grid")->delimiter(',')->capture_default_str();
  bt_cmd->add_option("--trees", bt.trees, "random forest size grid")->delimiter(',')->capture_default_str();
  bt_cmd->add_option("--max-depth", bt.max_depth, "tree depth limit, 0 = unlimited")->capture_default_str();
  bt_cmd->add_option("--min-leaf", bt.min_leaf, "minimum samples per leaf")->capture_default_str();
  bt_cmd->add_option("--w", bt.windows, "window grid")->delimiter(',')->capture_default_str();
  bt_cmd->add_option("--h", bt.horizons, "horizon grid")->delimiter(',')->capture_default_str();
  bt_cmd->add_option("--l", bt.lengths, "training length grid")->delimiter(',')->capture_default_str();
  bt_cmd->add_option("--d2", bt.d2s, "PCA dimension grid, 0 = full")->delimiter(',')->capture_default_str();
  bt_cmd->add_option("--eval-start", bt.eval_start, "first evaluated day");
  bt_cmd->add_option("--eval-end", bt.eval_end, "last evaluated day");
  bt_cmd->add_option("--retrain-every", bt.retrain_every, "refit every k evaluation days")->capture_default_str();
  bt_cmd->add_option("--target", bt.target, "level | log-return")->capture_default_str();
  bt_cmd->add_flag("--persistence", bt.persistence, "also report the last-price baseline");
  bt_cmd->add_option("--seed", bt.seed, "random seed")->capture_default_str();
  bt_cmd->add_option("--jobs", bt.jobs, "concurrent grid cells")->capture_default_str();
  bt_cmd->add_option("--out", bt.out, "output directory")->required();

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "summarize backtest reports as gain against horizon");
  rep_cmd->add_option("--in", rep.in, "backtest output directory")->required();
  rep_cmd->add_option("--out", rep.out, "summary CSV path (default <in>/gain_vs_horizon.csv)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (feat_cmd->parsed()) return cmd_features(feat, out);
    if (bt_cmd->parsed()) return cmd_backtest(bt, out);
    if (rep_cmd->parsed()) return cmd_report(rep, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace chaintopo::cli
