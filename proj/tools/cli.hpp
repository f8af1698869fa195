#pragma once
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "samplenet/data.hpp"
#include "samplenet/evaluation.hpp"
#include "samplenet/network.hpp"

namespace samplenet::cli {

using json = nlohmann::ordered_json;

// Effective configuration of one run. Assembled as defaults <- config file
// <- named flags <- dotted overrides, most specific last.
json default_config();
json load_config_file(const std::string& path);
void merge_config(json& base, const json& patch);

// "loss.eta=0.5" style assignment; the value parses as JSON when it can,
// otherwise as a string.
void apply_override(json& config, const std::string& assignment);

struct RunConfig {
  json raw;

  // dataset
  std::string dataset_kind;  // toy_unimodal | toy_multimodal | csv
  int64_t toy_n = 500;
  int64_t toy_outliers = 0;
  double toy_noise_sigma = 0.3;
  std::string csv_path;
  std::vector<std::string> csv_targets;

  std::string method;  // samplenet | beta_nll
  std::vector<int64_t> hidden_sizes;
  Activation activation = Activation::Tanh;

  LossConfig loss;
  BaselineConfig baseline;

  TrainSchedule schedule;
  double val_fraction = 0.2;

  SplitSpec split_spec;
  int64_t split_index = 0;

  uint64_t seed = 1;
  std::string out_dir;
  int64_t eval_M = 0;  // 0 -> loss.M

  // plot
  std::string plot_kind = "interval";
  double plot_level = 0.95;
  int64_t plot_grid = 200;
  int64_t plot_bins = 0;  // 0 -> default_bins(M)
};

RunConfig parse_run_config(const json& config);

// Deterministic data pipeline shared by train/evaluate/plot: resolve the
// dataset, carve out test and validation partitions, whiten inputs on the
// training side only.
struct ResolvedData {
  Dataset train;  // whitened
  Dataset val;    // whitened
  Dataset test;   // whitened
  WhiteningStats whitening;
  Dataset train_raw;  // pre-whitening, for plots and outlier bookkeeping
  std::vector<int64_t> outlier_rows;
};
ResolvedData resolve_data(const RunConfig& cfg);

// Subcommand bodies; they throw samplenet errors which main() maps to exit
// codes (0 ok, 2 config, 3 data/io, 4 numeric abort). evaluate and plot read
// the stored run_config.json of a finished run and layer `overrides` on top.
void cmd_generate(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_evaluate(const std::string& run_dir, const json& overrides, const std::string& out_dir);
void cmd_plot(const std::string& run_dir, const json& overrides, const std::string& out_dir);

// Sweep grid expansion with the K <= M filter applied.
struct GridPoint {
  int64_t index = 0;  // position in the unfiltered cartesian product
  int64_t M = 0, K = 0, L = 0;
  double eta = 0.0;
};
struct SweepGrid {
  std::vector<GridPoint> points;
  std::vector<GridPoint> skipped;  // K > M combinations
};
SweepGrid expand_sweep_grid(const json& grids);

void cmd_sweep(const RunConfig& cfg, const json& grids);

int exit_code_for(const std::exception& e);

}  // namespace samplenet::cli
