#pragma once
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "samplenet/config.hpp"
#include "samplenet/data.hpp"
#include "samplenet/ops.hpp"
#include "samplenet/transport.hpp"

namespace samplenet {

enum class Activation { Tanh, Elu };

// Output head: either M*d values reshaped to an empirical sample set, or 2*d
// values split into a mean and a softplus-mapped variance.
struct HeadSamples {
  int64_t M = 1;
  int64_t d = 1;
};
struct HeadGaussian {
  int64_t d = 1;
};
using Head = std::variant<HeadSamples, HeadGaussian>;

struct MlpConfig {
  int64_t input_dim = 1;
  std::vector<int64_t> hidden_sizes;
  Activation activation = Activation::Tanh;
  Head head = HeadSamples{};

  int64_t output_width() const;
  int64_t output_dim() const;  // d
  bool has_samples_head() const { return std::holds_alternative<HeadSamples>(head); }
  void validate() const;
};

// Fully connected trunk with one wide output layer. Weights are Glorot
// uniform (+-sqrt(6/(fan_in+fan_out))), biases zero.
class SampleNetModel {
 public:
  SampleNetModel(MlpConfig cfg, Rng& rng);

  const MlpConfig& config() const { return cfg_; }
  std::vector<Tensor>& parameters() { return params_; }
  const std::vector<Tensor>& parameters() const { return params_; }
  int64_t layer_count() const { return static_cast<int64_t>(params_.size() / 2); }

  // Flat copy of all parameter values, and its inverse; used for snapshots.
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& flat);

  // Linear trunk output [N, output_width()]; shared by both heads.
  Tensor forward_raw(const Tensor& X, Tape* tape = nullptr) const;

 private:
  MlpConfig cfg_;
  std::vector<Tensor> params_;  // W0, b0, W1, b1, ...
};

// Predicted sample sets [N, M, d]; requires a samples head.
Tensor forward_samples(const SampleNetModel& model, const Tensor& X, Tape* tape = nullptr);

struct GaussianOut {
  Tensor mean;  // [N,d]
  Tensor var;   // [N,d], softplus(raw) + var floor, strictly positive
};
constexpr double kVarFloor = 1e-6;
GaussianOut forward_gaussian(const SampleNetModel& model, const Tensor& X, Tape* tape = nullptr);

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int64_t t = 0;
  std::vector<std::vector<double>> m, v;

  AdamState(const std::vector<Tensor>& params, double learning_rate);
};

// One bias-corrected update; params without grads are treated as zero-grad.
// Non-finite gradients raise NumericError.
void adam_step(std::vector<Tensor>& params, AdamState& state);

enum class ValMetric { EnergyScore, Nll };
enum class Method { SampleNet, BetaNll };

struct TrainSchedule {
  int64_t max_steps = 1000;
  int64_t minibatch_size = 256;  // 0 or >= N trains full batch
  double learning_rate = 1e-3;
  int64_t check_every = 100;
  int64_t patience = 10;  // validation checks without improvement before stopping
  ValMetric val_metric = ValMetric::EnergyScore;
  uint64_t seed = 0;

  void validate() const;
};

struct Objective {
  Method method = Method::SampleNet;
  LossConfig loss;
  BaselineConfig baseline;
};

struct TrainHistory {
  std::vector<double> train_loss;  // one entry per step
  struct Check {
    int64_t step;
    double value;
    bool improved;
  };
  std::vector<Check> val_checks;
  double best_val = 0.0;
  int64_t best_step = 0;
  bool aborted = false;
  std::string abort_reason;
  int64_t sinkhorn_degenerate_skipped = 0;
  int64_t sinkhorn_nonconverged = 0;
};

// Combined objective of the sample head: minibatch energy score plus
// eta times the minibatch Sinkhorn regularizer. eta = 0 skips the transport
// branch entirely.
Tensor combined_loss(const Tensor& samples, const Tensor& targets, const LossConfig& cfg,
                     Rng& rng, Tape* tape = nullptr, MinibatchSinkhornStats* stats = nullptr);

// Minimizes the objective with Adam, checking the validation metric every
// check_every steps and restoring the best-validation snapshot at the end.
// A non-finite loss aborts, keeping the last good snapshot.
TrainHistory train(SampleNetModel& model, const Dataset& train_set, const Dataset& val_set,
                   const Objective& objective, const TrainSchedule& schedule);

// Validation metric used by train(): energy score of the predicted samples
// for SampleNet, Gaussian NLL of the predicted density for the baseline.
double validation_metric(const SampleNetModel& model, const Dataset& data, ValMetric metric);

// JSON checkpoint: config, seed, flat layer arrays. Round-trips exactly.
void save_checkpoint(const std::string& path, const SampleNetModel& model, uint64_t seed);
struct Checkpoint {
  SampleNetModel model;
  uint64_t seed;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace samplenet
