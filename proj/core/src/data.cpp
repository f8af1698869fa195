#include "samplenet/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace samplenet {
namespace {

constexpr double kStdFloor = 1e-8;

Dataset make_xy(std::vector<double> xs, std::vector<double> ys) {
  const int64_t n = static_cast<int64_t>(xs.size());
  Dataset data;
  data.X = Tensor(Shape{n, 1}, std::move(xs));
  data.Y = Tensor(Shape{n, 1}, std::move(ys));
  data.x_names = {"x"};
  data.y_names = {"y"};
  return data;
}

}  // namespace

void SplitSpec::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("SplitSpec: test_fraction must lie in (0,1)");
  if (n_splits < 1) throw ConfigError("SplitSpec: n_splits must be >= 1");
}

double unimodal_curve(double x) { return x * std::sin(x); }
double unimodal_outlier_curve(double x) { return x + 7.0; }
double multimodal_branch1(double x) { return std::cos(x) - 5.0; }
double multimodal_branch2(double x) { return x + 5.0; }

Dataset gen_unimodal_toy(int64_t n, Rng& rng, int64_t outliers, double noise_sigma) {
  if (n < 1) throw DataError("gen_unimodal_toy: n must be >= 1");
  if (outliers < 0) throw DataError("gen_unimodal_toy: outlier count must be >= 0");
  std::vector<double> xs, ys;
  xs.reserve(static_cast<size_t>(n + outliers));
  ys.reserve(static_cast<size_t>(n + outliers));
  for (int64_t i = 0; i < n; ++i) {
    const double x = 10.0 * rng.next_uniform();
    const double e1 = noise_sigma * rng.next_normal();
    const double e2 = noise_sigma * rng.next_normal();
    xs.push_back(x);
    ys.push_back(unimodal_curve(x) + e1 * x + e2);
  }
  std::vector<int64_t> outlier_rows;
  for (int64_t i = 0; i < outliers; ++i) {
    const double x = 10.0 * rng.next_uniform();
    xs.push_back(x);
    ys.push_back(unimodal_outlier_curve(x));
    outlier_rows.push_back(n + i);
  }
  Dataset data = make_xy(std::move(xs), std::move(ys));
  data.outlier_rows = std::move(outlier_rows);
  return data;
}

Dataset gen_multimodal_toy(int64_t n, Rng& rng, double noise_sigma) {
  if (n < 1) throw DataError("gen_multimodal_toy: n must be >= 1");
  std::vector<double> xs, ys;
  xs.reserve(static_cast<size_t>(n));
  ys.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const double x = 10.0 * rng.next_uniform();
    const bool branch1 = rng.next_uniform() < 0.5;
    const double e1 = noise_sigma * rng.next_normal();
    const double e2 = noise_sigma * rng.next_normal();
    xs.push_back(x);
    ys.push_back(branch1 ? std::cos(x) + e1 * x + e2 - 5.0 : (e1 + 1.0) * x + e2 + 5.0);
  }
  return make_xy(std::move(xs), std::move(ys));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  // No quoted fields: this loader handles numeric tables only.
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_cell(const std::string& cell, int64_t row, const std::string& col) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double v = 0.0;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw DataError("CSV parse error at row " + std::to_string(row) + ", column '" + col +
                    "': non-numeric cell '" + cell + "'");
  return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::vector<std::string>& target_columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path);
  if (target_columns.empty()) throw ConfigError("load_csv: need at least one target column");

  std::string line;
  if (!std::getline(in, line)) throw DataError("CSV file is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);

  std::vector<int64_t> target_idx;
  for (const auto& t : target_columns) {
    const auto it = std::find(header.begin(), header.end(), t);
    if (it == header.end()) throw DataError("CSV is missing target column '" + t + "'");
    target_idx.push_back(it - header.begin());
  }
  std::vector<int64_t> feature_idx;
  for (int64_t j = 0; j < static_cast<int64_t>(header.size()); ++j)
    if (std::find(target_idx.begin(), target_idx.end(), j) == target_idx.end())
      feature_idx.push_back(j);
  if (feature_idx.empty()) throw DataError("CSV has no feature columns besides the targets");

  std::vector<double> xs, ys;
  int64_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(header.size()));
    for (int64_t j : feature_idx)
      xs.push_back(parse_cell(cells[static_cast<size_t>(j)], row, header[static_cast<size_t>(j)]));
    for (int64_t j : target_idx)
      ys.push_back(parse_cell(cells[static_cast<size_t>(j)], row, header[static_cast<size_t>(j)]));
  }
  if (row == 0) throw DataError("CSV has a header but no data rows: " + path);

  Dataset data;
  data.X = Tensor(Shape{row, static_cast<int64_t>(feature_idx.size())}, std::move(xs));
  data.Y = Tensor(Shape{row, static_cast<int64_t>(target_idx.size())}, std::move(ys));
  for (int64_t j : feature_idx) data.x_names.push_back(header[static_cast<size_t>(j)]);
  for (int64_t j : target_idx) data.y_names.push_back(header[static_cast<size_t>(j)]);
  return data;
}

namespace {

void write_double(std::ostream& os, double v) {
  // Shortest representation that parses back to the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV file: " + path);
  for (size_t j = 0; j < data.x_names.size(); ++j) {
    if (j) out << ",";
    out << data.x_names[j];
  }
  for (const auto& name : data.y_names) out << "," << name;
  out << "\n";
  const int64_t c = data.c(), d = data.d();
  for (int64_t i = 0; i < data.n(); ++i) {
    for (int64_t j = 0; j < c; ++j) {
      if (j) out << ",";
      write_double(out, data.X.at2(i, j));
    }
    for (int64_t j = 0; j < d; ++j) {
      out << ",";
      write_double(out, data.Y.at2(i, j));
    }
    out << "\n";
  }
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<int64_t>& rows) {
  Dataset out;
  const int64_t c = data.c(), d = data.d();
  std::vector<double> xs, ys;
  xs.reserve(rows.size() * static_cast<size_t>(c));
  ys.reserve(rows.size() * static_cast<size_t>(d));
  for (int64_t r : rows) {
    for (int64_t j = 0; j < c; ++j) xs.push_back(data.X.at2(r, j));
    for (int64_t j = 0; j < d; ++j) ys.push_back(data.Y.at2(r, j));
  }
  out.X = Tensor(Shape{static_cast<int64_t>(rows.size()), c}, std::move(xs));
  out.Y = Tensor(Shape{static_cast<int64_t>(rows.size()), d}, std::move(ys));
  out.x_names = data.x_names;
  out.y_names = data.y_names;
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec, int64_t split_index) {
  spec.validate();
  if (split_index < 0 || split_index >= spec.n_splits)
    throw ConfigError("split: index " + std::to_string(split_index) + " outside n_splits");
  const int64_t n = data.n();
  if (n < 2) throw DataError("split: need at least 2 rows");

  Rng rng = Rng(spec.base_seed).fork(static_cast<uint64_t>(split_index) + 1);
  std::vector<int64_t> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), int64_t{0});
  for (int64_t i = n - 1; i > 0; --i) {
    const int64_t j = static_cast<int64_t>(rng.below(static_cast<uint64_t>(i + 1)));
    std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  }

  int64_t test_count = llround(static_cast<double>(n) * spec.test_fraction);
  test_count = std::clamp<int64_t>(test_count, 1, n - 1);
  std::vector<int64_t> test_rows(perm.begin(), perm.begin() + test_count);
  std::vector<int64_t> train_rows(perm.begin() + test_count, perm.end());
  return {take_rows(data, train_rows), take_rows(data, test_rows)};
}

WhitenResult whiten_inputs(const Dataset& train, const Dataset& test) {
  if (train.n() < 1) throw DataError("whiten_inputs: empty train set");
  if (test.c() != train.c()) throw ShapeError("whiten_inputs: train/test input dims differ");
  const int64_t n = train.n(), c = train.c();

  WhiteningStats stats;
  stats.mean.resize(static_cast<size_t>(c));
  stats.stddev.resize(static_cast<size_t>(c));
  stats.degenerate.resize(static_cast<size_t>(c));
  for (int64_t j = 0; j < c; ++j) {
    double mu = 0.0;
    for (int64_t i = 0; i < n; ++i) mu += train.X.at2(i, j);
    mu /= static_cast<double>(n);
    double ss = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      const double t = train.X.at2(i, j) - mu;
      ss += t * t;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    stats.mean[static_cast<size_t>(j)] = mu;
    stats.degenerate[static_cast<size_t>(j)] = sd < kStdFloor;
    stats.stddev[static_cast<size_t>(j)] = std::max(sd, kStdFloor);
  }

  WhitenResult out;
  out.stats = stats;
  out.train = train;
  out.test = test;
  out.train.X = apply_whitening(train.X, stats);
  out.test.X = apply_whitening(test.X, stats);
  out.train.whitening = stats;
  out.test.whitening = stats;
  return out;
}

Tensor apply_whitening(const Tensor& X, const WhiteningStats& stats) {
  if (X.rank() != 2 || X.dim(1) != static_cast<int64_t>(stats.mean.size()))
    throw ShapeError("apply_whitening: input width does not match stats");
  Tensor out(X.shape());
  const int64_t n = X.dim(0), c = X.dim(1);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < c; ++j) {
      const size_t sj = static_cast<size_t>(j);
      out.at2(i, j) = stats.degenerate[sj]
                          ? 0.0
                          : (X.at2(i, j) - stats.mean[sj]) / stats.stddev[sj];
    }
  return out;
}

}  // namespace samplenet
