#include "samplenet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "samplenet/scoring.hpp"
#include "samplenet/summaries.hpp"

namespace samplenet {

MetricsRecord evaluate_model(const SampleNetModel& model, const Dataset& test,
                             int64_t eval_M, Rng& rng, int64_t split_index) {
  if (test.n() < 1) throw DataError("evaluate_model: empty test set");
  if (eval_M < 2) throw ConfigError("evaluate_model: eval_M must be >= 2");

  MetricsRecord rec;
  rec.split_index = split_index;

  Tensor samples;
  if (model.config().has_samples_head()) {
    samples = forward_samples(model, test.X);
    const auto mv = per_input_moments(samples);
    rec.nll = gaussian_nll(mv.mean, mv.var, test.Y);
    rec.rmse = rmse(mv.mean, test.Y);
  } else {
    const GaussianOut out = forward_gaussian(model, test.X);
    rec.nll = gaussian_nll(out.mean, out.var, test.Y);
    rec.rmse = rmse(out.mean, test.Y);
    // Monte Carlo sample set from the predicted density, for a comparable ES.
    const int64_t N = test.n(), d = test.d();
    samples = Tensor(Shape{N, eval_M, d});
    for (int64_t n = 0; n < N; ++n)
      for (int64_t m = 0; m < eval_M; ++m)
        for (int64_t j = 0; j < d; ++j)
          samples.at3(n, m, j) =
              out.mean.at2(n, j) + std::sqrt(out.var.at2(n, j)) * rng.next_normal();
  }
  rec.es = energy_score(samples, test.Y);
  return rec;
}

MetricsReport aggregate(std::vector<MetricsRecord> records, std::string dataset,
                        std::string method) {
  if (records.empty()) throw ContractError("aggregate: need at least one record");
  MetricsReport report;
  report.records = std::move(records);
  report.dataset = std::move(dataset);
  report.method = std::move(method);

  const auto agg_of = [&](auto field) {
    const auto n = static_cast<double>(report.records.size());
    double mu = 0.0;
    for (const auto& r : report.records) mu += field(r);
    mu /= n;
    double ss = 0.0;
    for (const auto& r : report.records) {
      const double t = field(r) - mu;
      ss += t * t;
    }
    const double sd = report.records.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return Aggregate{mu, sd};
  };
  report.aggregates["es"] = agg_of([](const MetricsRecord& r) { return r.es; });
  report.aggregates["nll"] = agg_of([](const MetricsRecord& r) { return r.nll; });
  report.aggregates["rmse"] = agg_of([](const MetricsRecord& r) { return r.rmse; });
  return report;
}

double kolmogorov_pvalue(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Dual theta-series form, stable for small arguments where the primary
    // alternating series needs too many terms.
    const double pi = 3.14159265358979323846;
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double num = static_cast<double>(2 * k - 1);
      cdf += std::exp(-num * num * pi * pi / (8.0 * lambda * lambda));
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double kd = static_cast<double>(k);
    p += sign * std::exp(-2.0 * kd * kd * lambda * lambda);
    sign = -sign;
  }
  return std::clamp(2.0 * p, 0.0, 1.0);
}

KsResult ks_two_sided(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw ContractError("ks_two_sided: each sample needs at least 2 values");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;  // absorb ties before comparing CDFs
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  KsResult res;
  res.d_stat = d;
  res.n_a = static_cast<int64_t>(sa.size());
  res.n_b = static_cast<int64_t>(sb.size());
  const double n_eff = na * nb / (na + nb);
  res.p_value = d == 0.0 ? 1.0 : kolmogorov_pvalue(std::sqrt(n_eff) * d);
  return res;
}

std::vector<std::string> mark_top_performers(
    const std::map<std::string, std::vector<double>>& per_method_values,
    double significance) {
  if (per_method_values.empty())
    throw ContractError("mark_top_performers: no methods");
  const size_t splits = per_method_values.begin()->second.size();
  if (splits < 1) throw ProtocolError("mark_top_performers: empty split list");
  for (const auto& [name, vals] : per_method_values)
    if (vals.size() != splits)
      throw ProtocolError("mark_top_performers: method '" + name +
                          "' has a mismatched split count");

  std::string best;
  double best_mean = 0.0;
  for (const auto& [name, vals] : per_method_values) {
    double mu = 0.0;
    for (double v : vals) mu += v;
    mu /= static_cast<double>(vals.size());
    if (best.empty() || mu < best_mean) {
      best = name;
      best_mean = mu;
    }
  }

  std::vector<std::string> out{best};
  if (splits < 2) return out;  // KS needs two values per sample
  const auto& best_vals = per_method_values.at(best);
  for (const auto& [name, vals] : per_method_values) {
    if (name == best) continue;
    if (ks_two_sided(vals, best_vals).p_value > significance) out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

constexpr int kMetricsSchemaVersion = 1;

nlohmann::json record_json(const MetricsRecord& r) {
  return {{"schema_version", kMetricsSchemaVersion},
          {"split_index", r.split_index},
          {"es", r.es},
          {"nll", r.nll},
          {"rmse", r.rmse}};
}

}  // namespace

void write_metrics_jsonl(const std::string& path, const MetricsReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write metrics file: " + path);
  for (const auto& r : report.records) out << record_json(r).dump() << "\n";
}

void write_metrics_aggregate(const std::string& path, const MetricsReport& report) {
  nlohmann::json j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["dataset"] = report.dataset;
  j["method"] = report.method;
  j["n_splits"] = report.records.size();
  for (const auto& [key, agg] : report.aggregates)
    j["aggregates"][key] = {{"mean", agg.mean}, {"std", agg.stddev}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write metrics aggregate: " + path);
  out << j.dump(2) << "\n";
}

MetricsReport read_metrics_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metrics file: " + path);
  MetricsReport report;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    MetricsRecord r;
    r.split_index = j.at("split_index");
    r.es = j.at("es");
    r.nll = j.at("nll");
    r.rmse = j.at("rmse");
    report.records.push_back(r);
  }
  return report;
}

}  // namespace samplenet
