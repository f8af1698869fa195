#include "samplenet/tensor.hpp"

#include <cmath>
#include <sstream>

namespace samplenet {

int64_t shape_numel(const Shape& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d <= 0) throw ShapeError("invalid shape " + shape_str(shape) + ": dims must be positive");
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

Tensor::Tensor(Shape shape) {
  const int64_t n = shape_numel(shape);
  data_ = std::make_shared<TensorData>();
  data_->shape = std::move(shape);
  data_->values.assign(static_cast<size_t>(n), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> values) {
  const int64_t n = shape_numel(shape);
  if (n != static_cast<int64_t>(values.size()))
    throw ShapeError("value count " + std::to_string(values.size()) +
                     " does not fill shape " + shape_str(shape));
  data_ = std::make_shared<TensorData>();
  data_->shape = std::move(shape);
  data_->values = std::move(values);
}

Tensor Tensor::scalar(double v) { return Tensor(Shape{1}, {v}); }

Tensor Tensor::zeros(Shape shape) { return Tensor(std::move(shape)); }

Tensor Tensor::full(Shape shape, double v) {
  Tensor t(std::move(shape));
  for (auto& x : t.values()) x = v;
  return t;
}

double Tensor::value() const {
  if (numel() != 1) throw ContractError("value() requires a scalar tensor, got " + shape_str(shape()));
  return data_->values[0];
}

const std::vector<double>& Tensor::grad() const {
  if (data_->grad.empty()) throw ContractError("tensor has no gradient; run backward first");
  return data_->grad;
}

Tensor Tensor::clone() const {
  Tensor t(data_->shape, data_->values);
  return t;
}

bool Tensor::all_finite() const {
  for (double v : data_->values)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace samplenet
