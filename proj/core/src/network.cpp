#include "samplenet/network.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "samplenet/scoring.hpp"
#include "samplenet/summaries.hpp"
#include "samplenet/transport.hpp"

namespace samplenet {

int64_t MlpConfig::output_width() const {
  if (const auto* s = std::get_if<HeadSamples>(&head)) return s->M * s->d;
  return 2 * std::get<HeadGaussian>(head).d;
}

int64_t MlpConfig::output_dim() const {
  if (const auto* s = std::get_if<HeadSamples>(&head)) return s->d;
  return std::get<HeadGaussian>(head).d;
}

void MlpConfig::validate() const {
  if (input_dim < 1) throw ConfigError("MlpConfig: input_dim must be >= 1");
  for (int64_t h : hidden_sizes)
    if (h < 1) throw ConfigError("MlpConfig: hidden sizes must be >= 1");
  if (const auto* s = std::get_if<HeadSamples>(&head)) {
    if (s->M < 1 || s->d < 1) throw ConfigError("MlpConfig: samples head needs M,d >= 1");
  } else if (std::get<HeadGaussian>(head).d < 1) {
    throw ConfigError("MlpConfig: gaussian head needs d >= 1");
  }
}

SampleNetModel::SampleNetModel(MlpConfig cfg, Rng& rng) : cfg_(std::move(cfg)) {
  cfg_.validate();
  std::vector<int64_t> widths;
  widths.push_back(cfg_.input_dim);
  for (int64_t h : cfg_.hidden_sizes) widths.push_back(h);
  widths.push_back(cfg_.output_width());
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    const int64_t fan_in = widths[l], fan_out = widths[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor w(Shape{fan_in, fan_out});
    for (auto& v : w.values()) v = bound * (2.0 * rng.next_uniform() - 1.0);
    Tensor b(Shape{fan_out});
    w.set_requires_grad(true);
    b.set_requires_grad(true);
    params_.push_back(std::move(w));
    params_.push_back(std::move(b));
  }
}

std::vector<double> SampleNetModel::flatten() const {
  std::vector<double> flat;
  for (const auto& p : params_)
    flat.insert(flat.end(), p.values().begin(), p.values().end());
  return flat;
}

void SampleNetModel::unflatten(const std::vector<double>& flat) {
  size_t pos = 0;
  for (auto& p : params_) {
    if (pos + p.values().size() > flat.size())
      throw ContractError("unflatten: value count mismatch");
    std::copy(flat.begin() + static_cast<int64_t>(pos),
              flat.begin() + static_cast<int64_t>(pos + p.values().size()),
              p.values().begin());
    pos += p.values().size();
  }
  if (pos != flat.size()) throw ContractError("unflatten: value count mismatch");
}

Tensor SampleNetModel::forward_raw(const Tensor& X, Tape* tape) const {
  if (X.rank() != 2 || X.dim(1) != cfg_.input_dim)
    throw ShapeError("forward: input " + shape_str(X.shape()) + " does not match input_dim " +
                     std::to_string(cfg_.input_dim));
  Tensor h = X;
  const size_t layers = params_.size() / 2;
  for (size_t l = 0; l < layers; ++l) {
    h = add_rowvec(matmul(h, params_[2 * l], tape), params_[2 * l + 1], tape);
    if (l + 1 < layers)
      h = cfg_.activation == Activation::Tanh ? tanh_op(h, tape) : elu(h, tape);
  }
  return h;
}

Tensor forward_samples(const SampleNetModel& model, const Tensor& X, Tape* tape) {
  const auto* head = std::get_if<HeadSamples>(&model.config().head);
  if (!head) throw ConfigError("forward_samples: model does not have a samples head");
  Tensor raw = model.forward_raw(X, tape);
  return reshape(raw, Shape{X.dim(0), head->M, head->d}, tape);
}

GaussianOut forward_gaussian(const SampleNetModel& model, const Tensor& X, Tape* tape) {
  const auto* head = std::get_if<HeadGaussian>(&model.config().head);
  if (!head) throw ConfigError("forward_gaussian: model does not have a gaussian head");
  Tensor raw = model.forward_raw(X, tape);
  Tensor mean = slice_cols(raw, 0, head->d, tape);
  Tensor var = affine(softplus(slice_cols(raw, head->d, head->d, tape), tape), 1.0, kVarFloor, tape);
  return GaussianOut{mean, var};
}

AdamState::AdamState(const std::vector<Tensor>& params, double learning_rate)
    : lr(learning_rate) {
  for (const auto& p : params) {
    m.emplace_back(p.values().size(), 0.0);
    v.emplace_back(p.values().size(), 0.0);
  }
}

void adam_step(std::vector<Tensor>& params, AdamState& state) {
  if (params.size() != state.m.size())
    throw ContractError("adam_step: state was built for a different parameter list");
  ++state.t;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (size_t p = 0; p < params.size(); ++p) {
    auto& td = *params[p].impl();
    auto& m = state.m[p];
    auto& v = state.v[p];
    for (size_t i = 0; i < td.values.size(); ++i) {
      const double g = td.grad.empty() ? 0.0 : td.grad[i];
      if (!std::isfinite(g)) throw NumericError("adam_step: non-finite gradient");
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      td.values[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

void TrainSchedule::validate() const {
  if (max_steps < 0) throw ConfigError("TrainSchedule: max_steps must be >= 0");
  if (minibatch_size < 0) throw ConfigError("TrainSchedule: minibatch_size must be >= 0");
  if (learning_rate <= 0.0) throw ConfigError("TrainSchedule: learning_rate must be > 0");
  if (check_every < 1) throw ConfigError("TrainSchedule: check_every must be >= 1");
  if (patience < 1) throw ConfigError("TrainSchedule: patience must be >= 1");
}

Tensor combined_loss(const Tensor& samples, const Tensor& targets, const LossConfig& cfg,
                     Rng& rng, Tape* tape, MinibatchSinkhornStats* stats) {
  cfg.validate();
  if (samples.rank() != 3 || samples.dim(1) != cfg.M)
    throw ConfigError("combined_loss: cfg.M does not match the predicted sample count");
  Tensor es = minibatch_energy_score(samples, targets, cfg.K, cfg.L, rng, tape);
  if (cfg.eta == 0.0) return es;
  Tensor reg = minibatch_sinkhorn(samples, cfg, rng, tape, stats);
  return add(es, affine(reg, cfg.eta, 0.0, tape), tape);
}

double validation_metric(const SampleNetModel& model, const Dataset& data, ValMetric metric) {
  if (metric == ValMetric::EnergyScore) {
    Tensor samples = forward_samples(model, data.X);
    return energy_score(samples, data.Y);
  }
  if (model.config().has_samples_head()) {
    Tensor samples = forward_samples(model, data.X);
    const auto mv = per_input_moments(samples);
    return gaussian_nll(mv.mean, mv.var, data.Y);
  }
  GaussianOut out = forward_gaussian(model, data.X);
  return gaussian_nll(out.mean, out.var, data.Y);
}

namespace {

std::vector<int64_t> batch_rows(Rng& rng, int64_t n, int64_t batch) {
  if (batch <= 0 || batch >= n) {
    std::vector<int64_t> all(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
    return all;
  }
  return sample_subset(rng, n, batch);
}

Dataset rows_of(const Dataset& data, const std::vector<int64_t>& rows) {
  Dataset out;
  const int64_t c = data.c(), d = data.d();
  std::vector<double> xs(rows.size() * static_cast<size_t>(c));
  std::vector<double> ys(rows.size() * static_cast<size_t>(d));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int64_t j = 0; j < c; ++j) xs[i * static_cast<size_t>(c) + static_cast<size_t>(j)] = data.X.at2(rows[i], j);
    for (int64_t j = 0; j < d; ++j) ys[i * static_cast<size_t>(d) + static_cast<size_t>(j)] = data.Y.at2(rows[i], j);
  }
  out.X = Tensor(Shape{static_cast<int64_t>(rows.size()), c}, std::move(xs));
  out.Y = Tensor(Shape{static_cast<int64_t>(rows.size()), d}, std::move(ys));
  return out;
}

}  // namespace

TrainHistory train(SampleNetModel& model, const Dataset& train_set, const Dataset& val_set,
                   const Objective& objective, const TrainSchedule& schedule) {
  schedule.validate();
  if (!train_set.X.defined() || !val_set.X.defined() || train_set.n() < 1 || val_set.n() < 1)
    throw DataError("train: empty train or validation set");
  if (train_set.c() != model.config().input_dim)
    throw ShapeError("train: dataset input width does not match the model");
  if (objective.method == Method::SampleNet) {
    objective.loss.validate();
    if (const auto* h = std::get_if<HeadSamples>(&model.config().head); !h || h->M != objective.loss.M)
      throw ConfigError("train: LossConfig.M does not match the model head");
  } else {
    objective.baseline.validate();
    if (model.config().has_samples_head())
      throw ConfigError("train: beta-NLL training needs a gaussian head");
  }

  TrainHistory history;
  if (schedule.max_steps == 0) return history;

  Rng run_rng(schedule.seed);
  Rng batch_rng = run_rng.fork(1);
  Rng loss_rng = run_rng.fork(2);

  AdamState adam(model.parameters(), schedule.learning_rate);
  std::vector<double> best = model.flatten();
  double best_val = validation_metric(model, val_set, schedule.val_metric);
  history.best_val = best_val;
  history.best_step = 0;
  int64_t checks_since_best = 0;

  for (int64_t step = 1; step <= schedule.max_steps; ++step) {
    const auto rows = batch_rows(batch_rng, train_set.n(), schedule.minibatch_size);
    const bool full = static_cast<int64_t>(rows.size()) == train_set.n();
    const Dataset batch = full ? Dataset{} : rows_of(train_set, rows);
    const Tensor& X = full ? train_set.X : batch.X;
    const Tensor& Y = full ? train_set.Y : batch.Y;

    Tape tape;
    Tensor loss;
    try {
      if (objective.method == Method::SampleNet) {
        Tensor samples = forward_samples(model, X, &tape);
        MinibatchSinkhornStats stats;
        loss = combined_loss(samples, Y, objective.loss, loss_rng, &tape, &stats);
        history.sinkhorn_degenerate_skipped += stats.degenerate_skipped;
        history.sinkhorn_nonconverged += stats.nonconverged;
      } else {
        GaussianOut out = forward_gaussian(model, X, &tape);
        loss = beta_nll(out.mean, out.var, Y, objective.baseline.beta, &tape);
      }
      if (!std::isfinite(loss.value())) throw NumericError("train: non-finite loss");
      tape.backward(loss);
      adam_step(model.parameters(), adam);
    } catch (const NumericError& e) {
      history.aborted = true;
      history.abort_reason = e.what();
      break;
    }
    history.train_loss.push_back(loss.value());

    if (step % schedule.check_every == 0 || step == schedule.max_steps) {
      const double val = validation_metric(model, val_set, schedule.val_metric);
      const bool improved = val < best_val;
      history.val_checks.push_back({step, val, improved});
      if (improved) {
        best_val = val;
        best = model.flatten();
        history.best_val = val;
        history.best_step = step;
        checks_since_best = 0;
      } else if (++checks_since_best >= schedule.patience) {
        break;
      }
    }
  }

  model.unflatten(best);
  return history;
}

namespace {

nlohmann::json head_to_json(const Head& head) {
  if (const auto* s = std::get_if<HeadSamples>(&head))
    return {{"kind", "samples"}, {"M", s->M}, {"d", s->d}};
  return {{"kind", "gaussian"}, {"d", std::get<HeadGaussian>(head).d}};
}

Head head_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind");
  if (kind == "samples") return HeadSamples{j.at("M"), j.at("d")};
  if (kind == "gaussian") return HeadGaussian{j.at("d")};
  throw ConfigError("checkpoint: unknown head kind '" + kind + "'");
}

}  // namespace

void save_checkpoint(const std::string& path, const SampleNetModel& model, uint64_t seed) {
  const auto& cfg = model.config();
  nlohmann::json j;
  j["schema_version"] = 1;
  j["seed"] = seed;
  j["config"] = {
      {"input_dim", cfg.input_dim},
      {"hidden_sizes", cfg.hidden_sizes},
      {"activation", cfg.activation == Activation::Tanh ? "tanh" : "elu"},
      {"head", head_to_json(cfg.head)},
  };
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& p : model.parameters())
    layers.push_back({{"shape", p.shape()}, {"values", p.values()}});
  j["layers"] = layers;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  out << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  MlpConfig cfg;
  cfg.input_dim = j.at("config").at("input_dim");
  cfg.hidden_sizes = j.at("config").at("hidden_sizes").get<std::vector<int64_t>>();
  cfg.activation = j.at("config").at("activation") == "tanh" ? Activation::Tanh : Activation::Elu;
  cfg.head = head_from_json(j.at("config").at("head"));
  const uint64_t seed = j.at("seed");
  Rng init_rng(seed);
  SampleNetModel model(cfg, init_rng);
  const auto& layers = j.at("layers");
  if (layers.size() != model.parameters().size())
    throw ConfigError("checkpoint: layer count mismatch");
  std::vector<double> flat;
  for (size_t i = 0; i < layers.size(); ++i) {
    const auto vals = layers[i].at("values").get<std::vector<double>>();
    const auto shape = layers[i].at("shape").get<Shape>();
    if (shape != model.parameters()[i].shape())
      throw ConfigError("checkpoint: layer shape mismatch");
    flat.insert(flat.end(), vals.begin(), vals.end());
  }
  model.unflatten(flat);
  return Checkpoint{std::move(model), seed};
}

}  // namespace samplenet
