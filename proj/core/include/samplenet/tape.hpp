#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "samplenet/tensor.hpp"

namespace samplenet {

// Reverse-mode tape over whole-tensor primitives. Ops append one node per
// primitive; backward() sweeps the node list once in reverse, and each node's
// closure accumulates into the grads of its input TensorData. A tape belongs
// to one training step / one thread; drop it to free the graph.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // True if `t` is connected to this graph (op output recorded here) or is a
  // grad-requiring leaf. Throws GraphError if `t` belongs to another tape.
  bool tracks(const Tensor& t) const;

  // `inputs` must list exactly the tensors the closure accumulates into.
  // Untracked constants stay out of the list: backward() writes the grad
  // buffers of listed tensors, and constants (datasets, priors) may be shared
  // read-only across concurrent runs.
  int64_t record(std::vector<std::shared_ptr<TensorData>> inputs,
                 std::shared_ptr<TensorData> output,
                 std::function<void()> backward);

  // Seeds d(loss)/d(loss) = 1 and runs every recorded node up to the loss in
  // reverse order. Grads of all tensors referenced by this tape are zeroed
  // first, so repeated calls don't compound.
  void backward(const Tensor& loss);

  int64_t size() const { return static_cast<int64_t>(nodes_.size()); }

 private:
  struct Node {
    std::vector<std::shared_ptr<TensorData>> inputs;
    std::shared_ptr<TensorData> output;
    std::function<void()> back;
  };
  std::vector<Node> nodes_;
};

// Zero-init grad storage on demand; nodes call this before accumulating.
inline std::vector<double>& ensure_grad(TensorData& td) {
  if (td.grad.empty()) td.grad.assign(td.values.size(), 0.0);
  return td.grad;
}

// Input list for a node with per-operand tracking flags.
inline std::vector<std::shared_ptr<TensorData>> tracked_inputs(
    std::initializer_list<std::pair<std::shared_ptr<TensorData>, bool>> candidates) {
  std::vector<std::shared_ptr<TensorData>> out;
  for (const auto& [td, tracked] : candidates)
    if (tracked) out.push_back(td);
  return out;
}

}  // namespace samplenet
