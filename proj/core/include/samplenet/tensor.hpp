#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "samplenet/errors.hpp"

namespace samplenet {

class Tape;

using Shape = std::vector<int64_t>;

int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// Backing store. Tensors are cheap handles sharing one of these, which is
// what lets the tape hold onto intermediates and lets optimizer updates on a
// parameter be visible through every handle.
struct TensorData {
  Shape shape;
  std::vector<double> values;
  bool requires_grad = false;
  std::vector<double> grad;  // empty until backward touches this tensor
  const Tape* tape = nullptr;
  int64_t node = -1;
};

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor scalar(double v);
  static Tensor zeros(Shape shape);
  static Tensor full(Shape shape, double v);

  bool defined() const { return data_ != nullptr; }
  const Shape& shape() const { return data_->shape; }
  int rank() const { return static_cast<int>(data_->shape.size()); }
  int64_t dim(int i) const { return data_->shape[static_cast<size_t>(i)]; }
  int64_t numel() const { return static_cast<int64_t>(data_->values.size()); }

  double* data() { return data_->values.data(); }
  const double* data() const { return data_->values.data(); }
  std::vector<double>& values() { return data_->values; }
  const std::vector<double>& values() const { return data_->values; }

  double& at(int64_t i) { return data_->values[static_cast<size_t>(i)]; }
  double at(int64_t i) const { return data_->values[static_cast<size_t>(i)]; }
  double& at2(int64_t i, int64_t j) {
    return data_->values[static_cast<size_t>(i * dim(1) + j)];
  }
  double at2(int64_t i, int64_t j) const {
    return data_->values[static_cast<size_t>(i * dim(1) + j)];
  }
  double& at3(int64_t i, int64_t j, int64_t k) {
    return data_->values[static_cast<size_t>((i * dim(1) + j) * dim(2) + k)];
  }
  double at3(int64_t i, int64_t j, int64_t k) const {
    return data_->values[static_cast<size_t>((i * dim(1) + j) * dim(2) + k)];
  }

  // Scalar read; contract error unless numel() == 1.
  double value() const;

  bool requires_grad() const { return data_->requires_grad; }
  Tensor& set_requires_grad(bool on) {
    data_->requires_grad = on;
    return *this;
  }

  bool has_grad() const { return !data_->grad.empty(); }
  const std::vector<double>& grad() const;
  void zero_grad() { data_->grad.clear(); }

  // Deep copy with no graph attachment and no grad.
  Tensor clone() const;

  bool all_finite() const;

  std::shared_ptr<TensorData> impl() const { return data_; }

 private:
  std::shared_ptr<TensorData> data_;
};

}  // namespace samplenet
