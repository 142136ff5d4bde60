#pragma once

#include <cstdint>
#include <vector>

#include "bilstm/ops.hpp"
#include "bilstm/tensor.hpp"

namespace bilstm {

// Reverse-mode tape. Nodes are appended in evaluation order and values are
// computed eagerly at construction, so node index order is a topological
// order. backward() walks the tape once in reverse, applying each node's
// vector-Jacobian rule and accumulating into input gradients.
//
// Leaves come in two flavors: params (receive gradients) and inputs
// (constants). Leaf values may be re-set afterwards; recompute() then
// re-evaluates every interior node in tape order, which is what the
// finite-difference oracle uses to probe a fixed composition.
class Graph {
 public:
  using NodeId = int32_t;
  static constexpr NodeId kNone = -1;

  NodeId input(Tensor value);  // constant leaf
  NodeId param(Tensor value);  // differentiable leaf

  NodeId matmul(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  NodeId subtract(NodeId a, NodeId b);
  NodeId hadamard(NodeId a, NodeId b);
  NodeId sigmoid(NodeId x);
  NodeId tanh(NodeId x);
  NodeId abs(NodeId x);
  NodeId concat(NodeId a, NodeId b);  // axis 0
  NodeId transpose(NodeId x);
  NodeId add_bias_cols(NodeId m, NodeId bias);
  NodeId scale(NodeId x, double factor);
  NodeId sum_all(NodeId x);  // -> rank-0 scalar
  NodeId gather_cols(NodeId table, std::vector<int> ids);
  // Mean over columns of -log softmax(logits)[label]; -> rank-0 scalar.
  NodeId softmax_cross_entropy(NodeId logits, std::vector<int> labels);

  // Generic dispatch over the public primitive vocabulary.
  NodeId primitive(Primitive op, const std::vector<NodeId>& operands);

  const Tensor& value(NodeId id) const { return nodes_[id].value; }
  // Valid after backward() for nodes on a differentiable path.
  const Tensor& grad(NodeId id) const { return nodes_[id].grad; }
  bool needs_grad(NodeId id) const { return nodes_[id].needs_grad; }

  void set_value(NodeId leaf, const Tensor& value);  // same shape required
  void recompute();                                  // re-evaluate interior nodes
  void backward(NodeId output);                      // output must be scalar

  int64_t node_count() const { return static_cast<int64_t>(nodes_.size()); }

 private:
  enum class Op : uint8_t {
    leaf,
    matmul,
    add,
    subtract,
    hadamard,
    sigmoid,
    tanh,
    abs,
    concat,
    transpose,
    add_bias_cols,
    scale,
    sum_all,
    gather_cols,
    softmax_xent,
  };

  struct Node {
    Op op = Op::leaf;
    NodeId a = kNone;
    NodeId b = kNone;
    double factor = 0.0;
    std::vector<int> ids;  // gather ids or class labels
    Tensor value;
    Tensor grad;
    Tensor aux;  // softmax probabilities
    bool needs_grad = false;
  };

  NodeId add_node(Node node);
  void eval(Node& node);
  void backprop(Node& node);
  Node& in(NodeId id) { return nodes_[id]; }

  std::vector<Node> nodes_;
};

}  // namespace bilstm
