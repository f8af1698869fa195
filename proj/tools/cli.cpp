#include "cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>

#include "samplenet/scoring.hpp"
#include "samplenet/summaries.hpp"

namespace samplenet::cli {

namespace fs = std::filesystem;

json default_config() {
  return json{
      {"dataset",
       {{"kind", "toy_unimodal"},
        {"n", 500},
        {"outliers", 0},
        {"noise_sigma", 0.3},
        {"path", ""},
        {"targets", json::array()}}},
      {"method", "samplenet"},
      {"model", {{"hidden", {50}}, {"activation", "tanh"}}},
      {"loss",
       {{"M", 100},
        {"K", 100},
        {"L", 1},
        {"eta", 0.0},
        {"prior", "gaussian"},
        {"epsilon", 0.0025},
        {"sinkhorn_iters", 200},
        {"sinkhorn_tol", 1e-6}}},
      {"baseline", {{"beta", 0.0}}},
      {"train",
       {{"max_steps", 2500},
        {"minibatch_size", 256},
        {"learning_rate", 1e-3},
        {"check_every", 100},
        {"patience", 10},
        {"val_metric", "es"},
        {"val_fraction", 0.2}}},
      {"split", {{"test_fraction", 0.2}, {"n_splits", 1}, {"index", 0}}},
      {"seed", 1},
      {"out", "runs/default"},
      {"eval_M", 0},
      {"plot", {{"kind", "interval"}, {"level", 0.95}, {"grid", 200}, {"bins", 0}}},
  };
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

void merge_config(json& base, const json& patch) {
  if (!patch.is_object()) {
    base = patch;
    return;
  }
  for (const auto& [key, value] : patch.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object())
      merge_config(base[key], value);
    else
      base[key] = value;
  }
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(text);
  } catch (const nlohmann::json::exception&) {
    value = text;  // bare strings are fine
  }

  json* node = &config;
  size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key segment");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

namespace {

Activation parse_activation(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "elu") return Activation::Elu;
  throw ConfigError("unknown activation '" + s + "' (expected tanh or elu)");
}

Prior parse_prior(const std::string& s) {
  if (s == "uniform") return Prior::Uniform;
  if (s == "gaussian") return Prior::Gaussian;
  throw ConfigError("unknown prior '" + s + "' (expected uniform or gaussian)");
}

ValMetric parse_val_metric(const std::string& s) {
  if (s == "es") return ValMetric::EnergyScore;
  if (s == "nll") return ValMetric::Nll;
  throw ConfigError("unknown val_metric '" + s + "' (expected es or nll)");
}

template <class T>
T field(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config field '" + key + "': " + e.what());
  }
}

}  // namespace

RunConfig parse_run_config(const json& config) {
  RunConfig cfg;
  cfg.raw = config;

  const json& ds = config.at("dataset");
  cfg.dataset_kind = field<std::string>(ds, "kind");
  if (cfg.dataset_kind == "toy_unimodal" || cfg.dataset_kind == "toy_multimodal") {
    cfg.toy_n = field<int64_t>(ds, "n");
    cfg.toy_outliers = ds.value("outliers", int64_t{0});
    cfg.toy_noise_sigma = ds.value("noise_sigma", 0.3);
  } else if (cfg.dataset_kind == "csv") {
    cfg.csv_path = field<std::string>(ds, "path");
    if (cfg.csv_path.empty()) throw ConfigError("dataset.kind=csv requires dataset.path");
    if (ds.contains("targets"))
      cfg.csv_targets = ds.at("targets").get<std::vector<std::string>>();
  } else {
    throw ConfigError("unknown dataset.kind '" + cfg.dataset_kind + "'");
  }

  cfg.method = field<std::string>(config, "method");
  if (cfg.method != "samplenet" && cfg.method != "beta_nll")
    throw ConfigError("unknown method '" + cfg.method + "' (expected samplenet or beta_nll)");

  const json& model = config.at("model");
  cfg.hidden_sizes = field<std::vector<int64_t>>(model, "hidden");
  cfg.activation = parse_activation(field<std::string>(model, "activation"));

  const json& loss = config.at("loss");
  cfg.loss.M = field<int64_t>(loss, "M");
  cfg.loss.K = field<int64_t>(loss, "K");
  cfg.loss.L = field<int64_t>(loss, "L");
  cfg.loss.eta = field<double>(loss, "eta");
  cfg.loss.prior = parse_prior(field<std::string>(loss, "prior"));
  cfg.loss.epsilon = field<double>(loss, "epsilon");
  cfg.loss.sinkhorn_iters = field<int64_t>(loss, "sinkhorn_iters");
  cfg.loss.sinkhorn_tol = field<double>(loss, "sinkhorn_tol");

  cfg.baseline.beta = field<double>(config.at("baseline"), "beta");

  const json& train = config.at("train");
  cfg.schedule.max_steps = field<int64_t>(train, "max_steps");
  cfg.schedule.minibatch_size = field<int64_t>(train, "minibatch_size");
  cfg.schedule.learning_rate = field<double>(train, "learning_rate");
  cfg.schedule.check_every = field<int64_t>(train, "check_every");
  cfg.schedule.patience = field<int64_t>(train, "patience");
  cfg.schedule.val_metric = parse_val_metric(field<std::string>(train, "val_metric"));
  cfg.val_fraction = field<double>(train, "val_fraction");
  if (!(cfg.val_fraction > 0.0 && cfg.val_fraction < 1.0))
    throw ConfigError("train.val_fraction must lie in (0,1)");

  const json& split = config.at("split");
  cfg.split_spec.test_fraction = field<double>(split, "test_fraction");
  cfg.split_spec.n_splits = field<int64_t>(split, "n_splits");
  cfg.split_index = field<int64_t>(split, "index");

  cfg.seed = field<uint64_t>(config, "seed");
  cfg.out_dir = field<std::string>(config, "out");
  cfg.eval_M = config.value("eval_M", int64_t{0});

  if (config.contains("plot")) {
    const json& plot = config.at("plot");
    cfg.plot_kind = plot.value("kind", std::string("interval"));
    cfg.plot_level = plot.value("level", 0.95);
    cfg.plot_grid = plot.value("grid", int64_t{200});
    cfg.plot_bins = plot.value("bins", int64_t{0});
  }

  // seeds derived from the master seed, one stream per role
  Rng master(cfg.seed);
  cfg.split_spec.base_seed = master.fork(2).seed();
  cfg.schedule.seed = master.fork(5).seed();

  if (cfg.method == "samplenet") cfg.loss.validate();
  if (cfg.method == "beta_nll") cfg.baseline.validate();
  cfg.schedule.validate();
  cfg.split_spec.validate();
  return cfg;
}

namespace {

std::string peek_last_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw DataError("CSV file is empty: " + path);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto comma = header.rfind(',');
  if (comma == std::string::npos || comma + 1 >= header.size())
    throw DataError("CSV header has no usable last column: " + path);
  return header.substr(comma + 1);
}

Dataset make_dataset(const RunConfig& cfg) {
  Rng gen = Rng(cfg.seed).fork(1);
  if (cfg.dataset_kind == "toy_unimodal")
    return gen_unimodal_toy(cfg.toy_n, gen, cfg.toy_outliers, cfg.toy_noise_sigma);
  if (cfg.dataset_kind == "toy_multimodal")
    return gen_multimodal_toy(cfg.toy_n, gen, cfg.toy_noise_sigma);
  // The last column is the target when none is named.
  std::vector<std::string> targets =
      cfg.csv_targets.empty() ? std::vector<std::string>{peek_last_column(cfg.csv_path)}
                              : cfg.csv_targets;
  return load_csv(cfg.csv_path, targets);
}

}  // namespace

ResolvedData resolve_data(const RunConfig& cfg) {
  Dataset all = make_dataset(cfg);
  auto [train_full_raw, test_raw] = split(all, cfg.split_spec, cfg.split_index);
  auto whitened = whiten_inputs(train_full_raw, test_raw);

  SplitSpec val_spec;
  val_spec.test_fraction = cfg.val_fraction;
  val_spec.n_splits = 1;
  val_spec.base_seed = Rng(cfg.seed).fork(3).seed();
  auto [train_part, val_part] = split(whitened.train, val_spec, 0);

  ResolvedData out;
  out.train = std::move(train_part);
  out.val = std::move(val_part);
  out.test = std::move(whitened.test);
  out.whitening = whitened.stats;
  out.train_raw = std::move(train_full_raw);
  out.outlier_rows = all.outlier_rows;
  return out;
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << text;
}

MlpConfig model_config(const RunConfig& cfg, int64_t input_dim, int64_t output_dim) {
  MlpConfig mc;
  mc.input_dim = input_dim;
  mc.hidden_sizes = cfg.hidden_sizes;
  mc.activation = cfg.activation;
  if (cfg.method == "samplenet")
    mc.head = HeadSamples{cfg.loss.M, output_dim};
  else
    mc.head = HeadGaussian{output_dim};
  return mc;
}

void write_history(const std::string& path, const TrainHistory& hist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write history: " + path);
  double best = std::numeric_limits<double>::infinity();
  size_t check = 0;
  for (size_t step = 0; step < hist.train_loss.size(); ++step) {
    out << json{{"kind", "step"}, {"step", step + 1}, {"loss", hist.train_loss[step]}}.dump()
        << "\n";
    while (check < hist.val_checks.size() &&
           hist.val_checks[check].step == static_cast<int64_t>(step + 1)) {
      const auto& c = hist.val_checks[check];
      best = std::min(best, c.value);
      out << json{{"kind", "val"},
                  {"step", c.step},
                  {"value", c.value},
                  {"improved", c.improved},
                  {"best_so_far", best}}
                 .dump()
          << "\n";
      ++check;
    }
  }
}

struct TrainedRun {
  SampleNetModel model;
  TrainHistory history;
  MetricsRecord record;
};

TrainedRun run_training(const RunConfig& cfg, const ResolvedData& data) {
  MlpConfig mc = model_config(cfg, data.train.c(), data.train.d());
  Rng init_rng = Rng(cfg.seed).fork(4);
  SampleNetModel model(mc, init_rng);

  Objective obj;
  obj.method = cfg.method == "samplenet" ? Method::SampleNet : Method::BetaNll;
  obj.loss = cfg.loss;
  obj.baseline = cfg.baseline;

  TrainHistory hist = train(model, data.train, data.val, obj, cfg.schedule);

  const int64_t eval_M = cfg.eval_M > 0 ? cfg.eval_M : cfg.loss.M;
  Rng eval_rng = Rng(cfg.seed).fork(6);
  MetricsRecord rec = evaluate_model(model, data.test, eval_M, eval_rng, cfg.split_index);
  return TrainedRun{std::move(model), std::move(hist), rec};
}

std::string dataset_label(const RunConfig& cfg) {
  return cfg.dataset_kind == "csv" ? cfg.csv_path : cfg.dataset_kind;
}

}  // namespace

void cmd_generate(const RunConfig& cfg) {
  if (cfg.dataset_kind == "csv")
    throw ConfigError("generate needs a toy dataset kind, not csv");
  ensure_dir(cfg.out_dir);
  Dataset data = make_dataset(cfg);
  const std::string base = cfg.out_dir + "/" + cfg.dataset_kind;
  write_csv(base + ".csv", data);

  json manifest{
      {"source", cfg.dataset_kind}, {"target_columns", data.y_names},
      {"n", data.n()},              {"c", data.c()},
      {"d", data.d()},              {"seed", cfg.seed},
  };
  if (!data.outlier_rows.empty()) manifest["outlier_rows"] = data.outlier_rows;
  write_text(base + ".manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << base << ".csv (" << data.n() << " rows)\n";
}

void cmd_train(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  ResolvedData data = resolve_data(cfg);
  TrainedRun run = run_training(cfg, data);

  write_text(cfg.out_dir + "/run_config.json", cfg.raw.dump(2) + "\n");
  save_checkpoint(cfg.out_dir + "/checkpoint.json", run.model, cfg.seed);
  write_history(cfg.out_dir + "/history.jsonl", run.history);

  MetricsReport report = aggregate({run.record}, dataset_label(cfg), cfg.method);
  write_metrics_jsonl(cfg.out_dir + "/metrics.jsonl", report);
  write_metrics_aggregate(cfg.out_dir + "/metrics.json", report);

  if (run.history.aborted)
    throw NumericError("training aborted: " + run.history.abort_reason);
  std::cout << "trained " << cfg.method << " on " << dataset_label(cfg)
            << "; test es=" << run.record.es << " nll=" << run.record.nll
            << " rmse=" << run.record.rmse << "\n";
  if (run.history.sinkhorn_nonconverged > 0)
    std::cerr << "note: " << run.history.sinkhorn_nonconverged
              << " sinkhorn solves stopped at the iteration cap\n";
}

namespace {

RunConfig run_config_of_dir(const std::string& run_dir, const json& overrides,
                            const std::string& out_dir) {
  json stored = load_config_file(run_dir + "/run_config.json");
  // CLI-level overrides (seed, dataset, ...) win over the stored run config.
  merge_config(stored, overrides);
  RunConfig cfg = parse_run_config(stored);
  cfg.out_dir = out_dir.empty() ? run_dir : out_dir;
  return cfg;
}

}  // namespace

void cmd_evaluate(const std::string& run_dir, const json& overrides, const std::string& out_dir) {
  RunConfig cfg = run_config_of_dir(run_dir, overrides, out_dir);
  ensure_dir(cfg.out_dir);
  Checkpoint ckpt = load_checkpoint(run_dir + "/checkpoint.json");
  ResolvedData data = resolve_data(cfg);

  const int64_t eval_M = cfg.eval_M > 0 ? cfg.eval_M
                         : ckpt.model.config().has_samples_head()
                             ? std::get<HeadSamples>(ckpt.model.config().head).M
                             : cfg.loss.M;
  Rng eval_rng = Rng(cfg.seed).fork(6);
  MetricsRecord rec = evaluate_model(ckpt.model, data.test, eval_M, eval_rng, cfg.split_index);

  MetricsReport report = aggregate({rec}, dataset_label(cfg), cfg.method);
  write_metrics_jsonl(cfg.out_dir + "/eval_metrics.jsonl", report);
  write_metrics_aggregate(cfg.out_dir + "/eval_metrics.json", report);
  std::cout << "evaluated " << run_dir << ": es=" << rec.es << " nll=" << rec.nll
            << " rmse=" << rec.rmse << "\n";
}

SweepGrid expand_sweep_grid(const json& grids) {
  const auto ms = grids.value("M", std::vector<int64_t>{});
  const auto ks = grids.value("K", std::vector<int64_t>{});
  const auto ls = grids.value("L", std::vector<int64_t>{});
  const auto etas = grids.value("eta", std::vector<double>{});
  if (ms.empty() || ks.empty() || ls.empty() || etas.empty())
    throw ConfigError("sweep grids need non-empty M, K, L and eta lists");

  SweepGrid out;
  int64_t index = 0;
  for (int64_t m : ms)
    for (int64_t k : ks)
      for (int64_t l : ls)
        for (double eta : etas) {
          GridPoint p{index++, m, k, l, eta};
          (k <= m ? out.points : out.skipped).push_back(p);
        }
  return out;
}

namespace {

int64_t sweep_parallelism() {
  if (const char* env = std::getenv("SAMPLENET_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int64_t>(hw);
}

}  // namespace

void cmd_sweep(const RunConfig& cfg, const json& grids) {
  if (cfg.method != "samplenet")
    throw ConfigError("sweep varies M/K/L/eta and is defined for method=samplenet");
  ensure_dir(cfg.out_dir);
  const SweepGrid grid = expand_sweep_grid(grids);
  ResolvedData data = resolve_data(cfg);

  struct Outcome {
    bool ok = false;
    double val = 0.0;
    std::string error;
  };
  std::vector<Outcome> outcomes(grid.points.size());

  std::atomic<size_t> next{0};
  const int64_t workers =
      std::min<int64_t>(sweep_parallelism(), static_cast<int64_t>(grid.points.size()));
  auto worker = [&] {
    while (true) {
      const size_t at = next.fetch_add(1);
      if (at >= grid.points.size()) return;
      const GridPoint& p = grid.points[at];
      RunConfig point_cfg = cfg;
      point_cfg.loss.M = p.M;
      point_cfg.loss.K = p.K;
      point_cfg.loss.L = p.L;
      point_cfg.loss.eta = p.eta;
      point_cfg.schedule.seed =
          Rng(cfg.seed).fork(0xC0FFEE + static_cast<uint64_t>(p.index)).seed();
      try {
        MlpConfig mc = model_config(point_cfg, data.train.c(), data.train.d());
        Rng init_rng = Rng(point_cfg.schedule.seed).fork(4);
        SampleNetModel model(mc, init_rng);
        Objective obj;
        obj.method = Method::SampleNet;
        obj.loss = point_cfg.loss;
        TrainHistory hist = train(model, data.train, data.val, obj, point_cfg.schedule);
        outcomes[at] = {!hist.aborted, hist.best_val,
                        hist.aborted ? hist.abort_reason : std::string()};
      } catch (const std::exception& e) {
        outcomes[at] = {false, 0.0, e.what()};
      }
    }
  };
  std::vector<std::thread> pool;
  for (int64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json board = json::array();
  std::vector<size_t> order(grid.points.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (outcomes[a].ok != outcomes[b].ok) return outcomes[a].ok;
    if (outcomes[a].ok && outcomes[a].val != outcomes[b].val)
      return outcomes[a].val < outcomes[b].val;
    return grid.points[a].index < grid.points[b].index;
  });
  for (size_t i : order) {
    const GridPoint& p = grid.points[i];
    json entry{{"grid_index", p.index}, {"M", p.M},     {"K", p.K},
               {"L", p.L},              {"eta", p.eta}, {"status", outcomes[i].ok ? "ok" : "failed"}};
    if (outcomes[i].ok)
      entry["val_metric"] = outcomes[i].val;
    else
      entry["error"] = outcomes[i].error;
    board.push_back(entry);
  }
  json skipped = json::array();
  for (const GridPoint& p : grid.skipped)
    skipped.push_back({{"grid_index", p.index}, {"M", p.M}, {"K", p.K}, {"L", p.L},
                       {"eta", p.eta}, {"reason", "K > M"}});

  json leaderboard{{"schema_version", 1},
                   {"runs", static_cast<int64_t>(grid.points.size())},
                   {"skipped", skipped},
                   {"leaderboard", board}};
  if (!board.empty() && board.front().at("status") == "ok") {
    leaderboard["best"] = board.front();
    std::cout << "best: " << board.front().dump() << "\n";
  }
  write_text(cfg.out_dir + "/leaderboard.json", leaderboard.dump(2) + "\n");
  std::cout << "sweep finished: " << grid.points.size() << " runs, " << grid.skipped.size()
            << " skipped\n";
}

namespace {

// Minimal SVG scaffolding; all plotted numbers also land in the CSV so the
// image is never the only record.
struct SvgCanvas {
  double x_min, x_max, y_min, y_max;
  double width = 800, height = 500, margin = 45;
  std::string body;

  double px(double x) const {
    return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin);
  }
  double py(double y) const {
    return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
  }
  void circle(double x, double y, double r, const std::string& color, double opacity) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "<circle cx='%.2f' cy='%.2f' r='%.1f' fill='%s' fill-opacity='%.2f'/>\n",
                  px(x), py(y), r, color.c_str(), opacity);
    body += buf;
  }
  void line(double x0, double y0, double x1, double y1, const std::string& color, double w) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "<line x1='%.2f' y1='%.2f' x2='%.2f' y2='%.2f' stroke='%s' stroke-width='%.1f'/>\n",
                  px(x0), py(y0), px(x1), py(y1), color.c_str(), w);
    body += buf;
  }
  void vband(double x0, double x1, double lo, double hi, const std::string& color) {
    char buf[220];
    std::snprintf(buf, sizeof(buf),
                  "<rect x='%.2f' y='%.2f' width='%.2f' height='%.2f' fill='%s' fill-opacity='0.35'/>\n",
                  px(x0), py(hi), px(x1) - px(x0), py(lo) - py(hi), color.c_str());
    body += buf;
  }
  std::string render() const {
    char head[300];
    std::snprintf(head, sizeof(head),
                  "<svg xmlns='http://www.w3.org/2000/svg' width='%.0f' height='%.0f' "
                  "viewBox='0 0 %.0f %.0f'>\n<rect width='100%%' height='100%%' fill='white'/>\n",
                  width, height, width, height);
    return std::string(head) + body + "</svg>\n";
  }
};

}  // namespace

void cmd_plot(const std::string& run_dir, const json& overrides, const std::string& out_dir) {
  RunConfig cfg = run_config_of_dir(run_dir, overrides, out_dir);
  ensure_dir(cfg.out_dir);
  Checkpoint ckpt = load_checkpoint(run_dir + "/checkpoint.json");
  if (!ckpt.model.config().has_samples_head())
    throw ConfigError("plot requires a samplenet checkpoint (samples head)");
  ResolvedData data = resolve_data(cfg);
  if (data.train_raw.c() != 1)
    throw ConfigError("plot supports 1-d inputs only");

  const auto& kind = cfg.plot_kind;
  if (kind != "scatter" && kind != "interval" && kind != "hpd")
    throw ConfigError("plot kind must be scatter, interval or hpd");

  // Raw-x grid over the data range, whitened before the forward pass.
  double x_lo = data.train_raw.X.at(0), x_hi = x_lo;
  for (int64_t i = 0; i < data.train_raw.n(); ++i) {
    x_lo = std::min(x_lo, data.train_raw.X.at(i));
    x_hi = std::max(x_hi, data.train_raw.X.at(i));
  }
  const int64_t G = cfg.plot_grid;
  Tensor grid_raw(Shape{G, 1});
  for (int64_t i = 0; i < G; ++i)
    grid_raw.at(i) = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(G - 1);
  Tensor grid_white = apply_whitening(grid_raw, data.whitening);
  Tensor samples = forward_samples(ckpt.model, grid_white);
  const int64_t M = samples.dim(1);
  const int64_t bins = cfg.plot_bins > 0 ? cfg.plot_bins : default_bins(M);

  const std::string base = cfg.out_dir + "/plot_" + kind;
  std::ofstream csv(base + ".csv", std::ios::binary);
  if (!csv) throw IoError("cannot write plot CSV: " + base + ".csv");

  double y_lo = data.train_raw.Y.at(0), y_hi = y_lo;
  for (int64_t i = 0; i < data.train_raw.n(); ++i) {
    y_lo = std::min(y_lo, data.train_raw.Y.at(i));
    y_hi = std::max(y_hi, data.train_raw.Y.at(i));
  }
  for (int64_t i = 0; i < samples.numel(); ++i) {
    y_lo = std::min(y_lo, samples.at(i));
    y_hi = std::max(y_hi, samples.at(i));
  }
  const double pad = 0.05 * (y_hi - y_lo + 1e-12);
  SvgCanvas svg{x_lo, x_hi, y_lo - pad, y_hi + pad};

  for (int64_t i = 0; i < data.train_raw.n(); ++i)
    svg.circle(data.train_raw.X.at(i), data.train_raw.Y.at(i), 2.2, "#e08020", 0.8);

  const double step = (x_hi - x_lo) / static_cast<double>(G - 1);
  if (kind == "scatter") {
    csv << "x,sample\n";
    for (int64_t i = 0; i < G; ++i)
      for (int64_t m = 0; m < M; ++m) {
        csv << grid_raw.at(i) << "," << samples.at3(i, m, 0) << "\n";
        svg.circle(grid_raw.at(i), samples.at3(i, m, 0), 1.2, "#2060c0", 0.45);
      }
  } else if (kind == "interval") {
    csv << "x,mean,lo,hi\n";
    double prev_x = 0, prev_mean = 0;
    for (int64_t i = 0; i < G; ++i) {
      std::vector<double> col(static_cast<size_t>(M));
      double mu = 0;
      for (int64_t m = 0; m < M; ++m) {
        col[static_cast<size_t>(m)] = samples.at3(i, m, 0);
        mu += col[static_cast<size_t>(m)];
      }
      mu /= static_cast<double>(M);
      Interval iv = central_interval(col, cfg.plot_level);
      csv << grid_raw.at(i) << "," << mu << "," << iv.lo << "," << iv.hi << "\n";
      svg.vband(grid_raw.at(i) - step / 2, grid_raw.at(i) + step / 2, iv.lo, iv.hi, "#76a5e0");
      if (i > 0) svg.line(prev_x, prev_mean, grid_raw.at(i), mu, "#2060c0", 1.6);
      prev_x = grid_raw.at(i);
      prev_mean = mu;
    }
  } else {  // hpd
    csv << "x,mode,interval_index,lo,hi\n";
    double prev_x = 0, prev_mode = 0;
    for (int64_t i = 0; i < G; ++i) {
      std::vector<double> col(static_cast<size_t>(M));
      for (int64_t m = 0; m < M; ++m) col[static_cast<size_t>(m)] = samples.at3(i, m, 0);
      const double mode = mode_estimate(col, bins);
      IntervalSet set = hpd_intervals(col, cfg.plot_level, bins);
      for (size_t k = 0; k < set.intervals.size(); ++k) {
        csv << grid_raw.at(i) << "," << mode << "," << k << "," << set.intervals[k].lo << ","
            << set.intervals[k].hi << "\n";
        svg.vband(grid_raw.at(i) - step / 2, grid_raw.at(i) + step / 2, set.intervals[k].lo,
                  set.intervals[k].hi, "#76a5e0");
      }
      if (i > 0) svg.line(prev_x, prev_mode, grid_raw.at(i), mode, "#2060c0", 1.6);
      prev_x = grid_raw.at(i);
      prev_mode = mode;
    }
  }
  write_text(base + ".svg", svg.render());
  std::cout << "wrote " << base << ".csv and " << base << ".svg\n";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericError*>(&e)) return 4;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const IoError*>(&e)) return 3;
  return 2;  // config, shape, contract, graph, protocol
}

}  // namespace samplenet::cli
