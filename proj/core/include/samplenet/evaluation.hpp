#pragma once
#include <map>
#include <span>
#include <string>
#include <vector>

#include "samplenet/data.hpp"
#include "samplenet/network.hpp"

namespace samplenet {

struct MetricsRecord {
  int64_t split_index = 0;
  double es = 0.0;
  double nll = 0.0;
  double rmse = 0.0;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample std (1/(n-1)); 0 for a single record
};

struct MetricsReport {
  std::vector<MetricsRecord> records;
  std::map<std::string, Aggregate> aggregates;  // keys: es, nll, rmse
  std::string dataset;
  std::string method;
};

// Scores one trained model on a test set. A samples head is evaluated on its
// predicted sample set directly; a gaussian head draws eval_M samples per
// input from the predicted density so the energy score is comparable. The
// NLL of a samples head uses the empirical per-input mean and variance, and
// the point prediction is the per-input sample mean.
MetricsRecord evaluate_model(const SampleNetModel& model, const Dataset& test,
                             int64_t eval_M, Rng& rng, int64_t split_index = 0);

MetricsReport aggregate(std::vector<MetricsRecord> records, std::string dataset,
                        std::string method);

struct KsResult {
  double d_stat = 0.0;
  double p_value = 1.0;
  int64_t n_a = 0;
  int64_t n_b = 0;
};

// Two-sided two-sample Kolmogorov-Smirnov test. D is the sup-distance of the
// empirical CDFs over the pooled points; the p-value comes from the
// asymptotic Kolmogorov distribution at effective size n_a n_b / (n_a + n_b).
KsResult ks_two_sided(std::span<const double> a, std::span<const double> b);

// Survival function of the Kolmogorov distribution, clamped to [0,1].
double kolmogorov_pvalue(double lambda);

// The best-mean method plus every method whose per-split values are
// statistically indistinguishable from it (KS p > significance). All methods
// must carry the same number of splits.
std::vector<std::string> mark_top_performers(
    const std::map<std::string, std::vector<double>>& per_method_values,
    double significance = 0.05);

// One record per line, schema-versioned; plus a JSON aggregate block.
void write_metrics_jsonl(const std::string& path, const MetricsReport& report);
void write_metrics_aggregate(const std::string& path, const MetricsReport& report);
MetricsReport read_metrics_jsonl(const std::string& path);

}  // namespace samplenet
