#include "samplenet/tape.hpp"

#include <cmath>
#include <unordered_set>

#include "samplenet/errors.hpp"

namespace samplenet {

bool Tape::tracks(const Tensor& t) const {
  const auto& td = *t.impl();
  if (td.tape != nullptr && td.tape != this)
    throw GraphError("tensor belongs to a different tape");
  return td.requires_grad || (td.tape == this && td.node >= 0);
}

int64_t Tape::record(std::vector<std::shared_ptr<TensorData>> inputs,
                     std::shared_ptr<TensorData> output,
                     std::function<void()> backward) {
  const int64_t id = static_cast<int64_t>(nodes_.size());
  output->tape = this;
  output->node = id;
  nodes_.push_back(Node{std::move(inputs), std::move(output), std::move(backward)});
  return id;
}

void Tape::backward(const Tensor& loss) {
  if (loss.numel() != 1) throw ContractError("backward requires a scalar loss");
  const auto& ld = *loss.impl();
  if (ld.tape != this || ld.node < 0)
    throw GraphError("loss was not computed through this tape");
  if (!std::isfinite(loss.value()))
    throw NumericError("backward on a non-finite loss");

  std::unordered_set<TensorData*> seen;
  for (auto& n : nodes_) {
    for (auto& in : n.inputs)
      if (seen.insert(in.get()).second) in->grad.assign(in->values.size(), 0.0);
    if (seen.insert(n.output.get()).second)
      n.output->grad.assign(n.output->values.size(), 0.0);
  }

  ensure_grad(*loss.impl())[0] = 1.0;
  for (int64_t i = ld.node; i >= 0; --i) nodes_[static_cast<size_t>(i)].back();
}

}  // namespace samplenet
