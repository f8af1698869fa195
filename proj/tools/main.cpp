#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

using samplenet::cli::json;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string dataset;
  std::string method;
  std::string targets;
  int64_t seed = -1;
  bool seed_set = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--dataset", flags.dataset,
                  "toy_unimodal | toy_multimodal | path to a CSV file");
  cmd->add_option("--method", flags.method, "samplenet | beta_nll");
  cmd->add_option("--targets", flags.targets, "comma-separated CSV target columns");
  cmd->add_option("--seed", flags.seed, "master seed")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("overrides", flags.overrides, "dotted overrides, e.g. loss.eta=0.5");
}

// Flags become a config patch; dotted overrides are applied afterwards and
// therefore win over everything.
json patch_from_flags(const CommonFlags& flags) {
  json patch = json::object();
  if (!flags.out_dir.empty()) patch["out"] = flags.out_dir;
  if (flags.seed_set) patch["seed"] = flags.seed;
  if (!flags.method.empty()) patch["method"] = flags.method;
  if (!flags.dataset.empty()) {
    if (flags.dataset == "toy_unimodal" || flags.dataset == "toy_multimodal") {
      patch["dataset"]["kind"] = flags.dataset;
    } else {
      patch["dataset"]["kind"] = "csv";
      patch["dataset"]["path"] = flags.dataset;
    }
  }
  if (!flags.targets.empty()) {
    json targets = json::array();
    size_t start = 0;
    while (start <= flags.targets.size()) {
      const auto comma = flags.targets.find(',', start);
      targets.push_back(flags.targets.substr(
          start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    patch["dataset"]["targets"] = targets;
  }
  return patch;
}

json overrides_patch(const CommonFlags& flags) {
  json patch = patch_from_flags(flags);
  for (const auto& ov : flags.overrides) samplenet::cli::apply_override(patch, ov);
  return patch;
}

json resolve_config(const CommonFlags& flags) {
  json config = samplenet::cli::default_config();
  if (!flags.config_path.empty())
    samplenet::cli::merge_config(config, samplenet::cli::load_config_file(flags.config_path));
  samplenet::cli::merge_config(config, patch_from_flags(flags));
  for (const auto& ov : flags.overrides) samplenet::cli::apply_override(config, ov);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"samplenet: distributional regression with sample-valued networks"};
  app.require_subcommand(1);

  CommonFlags gen_flags, train_flags, eval_flags, sweep_flags, plot_flags;
  std::string eval_run, plot_run, grids_path, plot_kind;
  double plot_level = -1.0;

  auto* gen = app.add_subcommand("generate", "write a toy dataset as CSV + manifest");
  add_common(gen, gen_flags);

  auto* tr = app.add_subcommand("train", "train one model on one split");
  add_common(tr, train_flags);

  auto* ev = app.add_subcommand("evaluate", "re-evaluate a finished run directory");
  add_common(ev, eval_flags);
  ev->add_option("--run", eval_run, "run directory with checkpoint.json")->required();

  auto* sw = app.add_subcommand("sweep", "grid search over M, K, L and eta");
  add_common(sw, sweep_flags);
  sw->add_option("--grids", grids_path, "JSON file with M/K/L/eta lists");

  auto* pl = app.add_subcommand("plot", "render predictions of a finished run");
  add_common(pl, plot_flags);
  pl->add_option("--run", plot_run, "run directory with checkpoint.json")->required();
  pl->add_option("--kind", plot_kind, "scatter | interval | hpd");
  pl->add_option("--level", plot_level, "interval / HPD coverage level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      samplenet::cli::cmd_generate(samplenet::cli::parse_run_config(resolve_config(gen_flags)));
    } else if (tr->parsed()) {
      samplenet::cli::cmd_train(samplenet::cli::parse_run_config(resolve_config(train_flags)));
    } else if (ev->parsed()) {
      samplenet::cli::cmd_evaluate(eval_run, overrides_patch(eval_flags), eval_flags.out_dir);
    } else if (sw->parsed()) {
      const json config = resolve_config(sweep_flags);
      json grids;
      if (!grids_path.empty())
        grids = samplenet::cli::load_config_file(grids_path);
      else if (config.contains("sweep") && config["sweep"].contains("grids"))
        grids = config["sweep"]["grids"];
      else
        throw samplenet::ConfigError("sweep needs --grids FILE or a sweep.grids config block");
      samplenet::cli::cmd_sweep(samplenet::cli::parse_run_config(config), grids);
    } else if (pl->parsed()) {
      json patch = overrides_patch(plot_flags);
      if (!plot_kind.empty()) patch["plot"]["kind"] = plot_kind;
      if (plot_level > 0.0) patch["plot"]["level"] = plot_level;
      samplenet::cli::cmd_plot(plot_run, patch, plot_flags.out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return samplenet::cli::exit_code_for(e);
  }
  return 0;
}
