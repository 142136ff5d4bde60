#include "bilstm/graph.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace bilstm {

namespace {

using EigenRowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMat>;
using MutMap = Eigen::Map<EigenRowMat>;

ConstMap cmap(const Tensor& t) { return ConstMap(t.data(), t.rows(), t.cols()); }
MutMap mmap(Tensor& t) { return MutMap(t.data(), t.rows(), t.cols()); }

void axpy(Tensor& dst, const Tensor& src) {
  double* pd = dst.data();
  const double* ps = src.data();
  for (int64_t i = 0; i < dst.size(); ++i) pd[i] += ps[i];
}

}  // namespace

Graph::NodeId Graph::add_node(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

Graph::NodeId Graph::input(Tensor value) {
  Node n;
  n.value = std::move(value);
  return add_node(std::move(n));
}

Graph::NodeId Graph::param(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = true;
  return add_node(std::move(n));
}

Graph::NodeId Graph::matmul(NodeId a, NodeId b) {
  Node n;
  n.op = Op::matmul;
  n.a = a;
  n.b = b;
  n.needs_grad = in(a).needs_grad || in(b).needs_grad;
  eval(n);
  return add_node(std::move(n));
}

#define BILSTM_BINARY(NAME, OPCODE)                          \
  Graph::NodeId Graph::NAME(NodeId a, NodeId b) {            \
    Node n;                                                  \
    n.op = OPCODE;                                           \
    n.a = a;                                                 \
    n.b = b;                                                 \
    n.needs_grad = in(a).needs_grad || in(b).needs_grad;     \
    eval(n);                                                 \
    return add_node(std::move(n));                           \
  }

BILSTM_BINARY(add, Op::add)
BILSTM_BINARY(subtract, Op::subtract)
BILSTM_BINARY(hadamard, Op::hadamard)
BILSTM_BINARY(concat, Op::concat)
BILSTM_BINARY(add_bias_cols, Op::add_bias_cols)
#undef BILSTM_BINARY

#define BILSTM_UNARY(NAME, OPCODE)                 \
  Graph::NodeId Graph::NAME(NodeId x) {            \
    Node n;                                        \
    n.op = OPCODE;                                 \
    n.a = x;                                       \
    n.needs_grad = in(x).needs_grad;               \
    eval(n);                                       \
    return add_node(std::move(n));                 \
  }

BILSTM_UNARY(sigmoid, Op::sigmoid)
BILSTM_UNARY(tanh, Op::tanh)
BILSTM_UNARY(abs, Op::abs)
BILSTM_UNARY(transpose, Op::transpose)
BILSTM_UNARY(sum_all, Op::sum_all)
#undef BILSTM_UNARY

Graph::NodeId Graph::scale(NodeId x, double factor) {
  Node n;
  n.op = Op::scale;
  n.a = x;
  n.factor = factor;
  n.needs_grad = in(x).needs_grad;
  eval(n);
  return add_node(std::move(n));
}

Graph::NodeId Graph::gather_cols(NodeId table, std::vector<int> ids) {
  Node n;
  n.op = Op::gather_cols;
  n.a = table;
  n.ids = std::move(ids);
  n.needs_grad = in(table).needs_grad;
  eval(n);
  return add_node(std::move(n));
}

Graph::NodeId Graph::softmax_cross_entropy(NodeId logits, std::vector<int> labels) {
  const Tensor& z = in(logits).value;
  if (z.rank() != 2 || static_cast<int>(labels.size()) != z.cols()) {
    throw Error::contract("softmax_cross_entropy: logits " + shape_to_string(z.shape()) +
                          " vs " + std::to_string(labels.size()) + " labels");
  }
  Node n;
  n.op = Op::softmax_xent;
  n.a = logits;
  n.ids = std::move(labels);
  n.needs_grad = in(logits).needs_grad;
  eval(n);
  return add_node(std::move(n));
}

Graph::NodeId Graph::primitive(Primitive op, const std::vector<NodeId>& operands) {
  auto arity = [&](size_t want) {
    if (operands.size() != want) {
      throw Error::contract(std::string(primitive_name(op)) + " expects " +
                            std::to_string(want) + " operands, got " +
                            std::to_string(operands.size()));
    }
  };
  switch (op) {
    case Primitive::matmul: arity(2); return matmul(operands[0], operands[1]);
    case Primitive::add: arity(2); return add(operands[0], operands[1]);
    case Primitive::hadamard: arity(2); return hadamard(operands[0], operands[1]);
    case Primitive::sigmoid: arity(1); return sigmoid(operands[0]);
    case Primitive::tanh: arity(1); return tanh(operands[0]);
    case Primitive::concat: arity(2); return concat(operands[0], operands[1]);
    case Primitive::abs: arity(1); return abs(operands[0]);
    case Primitive::subtract: arity(2); return subtract(operands[0], operands[1]);
    case Primitive::transpose: arity(1); return transpose(operands[0]);
  }
  throw Error::contract("unknown primitive");
}

void Graph::eval(Node& n) {
  switch (n.op) {
    case Op::leaf:
      return;
    case Op::matmul:
      n.value = bilstm::matmul(in(n.a).value, in(n.b).value);
      return;
    case Op::add:
      n.value = bilstm::add(in(n.a).value, in(n.b).value);
      return;
    case Op::subtract:
      n.value = bilstm::subtract(in(n.a).value, in(n.b).value);
      return;
    case Op::hadamard:
      n.value = bilstm::hadamard(in(n.a).value, in(n.b).value);
      return;
    case Op::sigmoid:
      n.value = bilstm::sigmoid(in(n.a).value);
      return;
    case Op::tanh:
      n.value = bilstm::tanh(in(n.a).value);
      return;
    case Op::abs:
      n.value = bilstm::abs(in(n.a).value);
      return;
    case Op::concat:
      n.value = bilstm::concat(in(n.a).value, in(n.b).value);
      return;
    case Op::transpose:
      n.value = bilstm::transpose(in(n.a).value);
      return;
    case Op::add_bias_cols:
      n.value = bilstm::add_bias_cols(in(n.a).value, in(n.b).value);
      return;
    case Op::scale:
      n.value = bilstm::scale(in(n.a).value, n.factor);
      return;
    case Op::sum_all:
      n.value = Tensor::scalar(bilstm::sum_all(in(n.a).value));
      return;
    case Op::gather_cols:
      n.value = bilstm::gather_cols(in(n.a).value, n.ids);
      return;
    case Op::softmax_xent: {
      const Tensor& z = in(n.a).value;
      const int k = z.rows(), bcols = z.cols();
      n.aux = Tensor({k, bcols});
      double total = 0.0;
      for (int j = 0; j < bcols; ++j) {
        double zmax = -HUGE_VAL;
        for (int i = 0; i < k; ++i) zmax = std::max(zmax, z.at(i, j));
        double denom = 0.0;
        for (int i = 0; i < k; ++i) denom += std::exp(z.at(i, j) - zmax);
        const double log_denom = std::log(denom);
        for (int i = 0; i < k; ++i) {
          n.aux.at(i, j) = std::exp(z.at(i, j) - zmax) / denom;
        }
        const int y = n.ids[j];
        if (y < 0 || y >= k) {
          throw Error::contract("label " + std::to_string(y) + " out of range [0," +
                                std::to_string(k) + ")");
        }
        total += -(z.at(y, j) - zmax - log_denom);
      }
      n.value = Tensor::scalar(total / bcols);
      return;
    }
  }
}

void Graph::set_value(NodeId leaf, const Tensor& value) {
  Node& n = nodes_[leaf];
  if (n.op != Op::leaf) throw Error::contract("set_value on non-leaf node");
  if (!n.value.same_shape(value)) {
    throw Error::contract("set_value shape mismatch: " + shape_to_string(n.value.shape()) +
                          " vs " + shape_to_string(value.shape()));
  }
  n.value = value;
}

void Graph::recompute() {
  for (auto& n : nodes_) {
    if (n.op != Op::leaf) eval(n);
  }
}

void Graph::backward(NodeId output) {
  Node& out = nodes_[output];
  if (out.value.rank() != 0) {
    throw Error::contract("backward output must be a scalar, got shape " +
                          shape_to_string(out.value.shape()));
  }
  if (!out.needs_grad) {
    throw Error::contract("backward output does not depend on any param leaf");
  }
  for (auto& n : nodes_) {
    if (n.needs_grad) n.grad = Tensor(n.value.shape());
  }
  out.grad[0] = 1.0;
  for (NodeId i = output; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.op == Op::leaf || !n.needs_grad) continue;
    backprop(n);
  }
}

void Graph::backprop(Node& n) {
  const Tensor& g = n.grad;
  switch (n.op) {
    case Op::leaf:
      return;
    case Op::matmul: {
      Node& a = in(n.a);
      Node& b = in(n.b);
      if (a.value.cols() == 0 || a.value.rows() == 0 || b.value.cols() == 0) {
        return;  // empty contraction contributes nothing
      }
      if (a.needs_grad) mmap(a.grad).noalias() += cmap(g) * cmap(b.value).transpose();
      if (b.needs_grad) mmap(b.grad).noalias() += cmap(a.value).transpose() * cmap(g);
      return;
    }
    case Op::add: {
      if (in(n.a).needs_grad) axpy(in(n.a).grad, g);
      if (in(n.b).needs_grad) axpy(in(n.b).grad, g);
      return;
    }
    case Op::subtract: {
      if (in(n.a).needs_grad) axpy(in(n.a).grad, g);
      if (in(n.b).needs_grad) {
        Tensor& gb = in(n.b).grad;
        for (int64_t i = 0; i < gb.size(); ++i) gb[i] -= g[i];
      }
      return;
    }
    case Op::hadamard: {
      Node& a = in(n.a);
      Node& b = in(n.b);
      if (a.needs_grad) {
        for (int64_t i = 0; i < g.size(); ++i) a.grad[i] += g[i] * b.value[i];
      }
      if (b.needs_grad) {
        for (int64_t i = 0; i < g.size(); ++i) b.grad[i] += g[i] * a.value[i];
      }
      return;
    }
    case Op::sigmoid: {
      Tensor& ga = in(n.a).grad;
      for (int64_t i = 0; i < g.size(); ++i) {
        const double y = n.value[i];
        ga[i] += g[i] * y * (1.0 - y);
      }
      return;
    }
    case Op::tanh: {
      Tensor& ga = in(n.a).grad;
      for (int64_t i = 0; i < g.size(); ++i) {
        const double y = n.value[i];
        ga[i] += g[i] * (1.0 - y * y);
      }
      return;
    }
    case Op::abs: {
      const Tensor& x = in(n.a).value;
      Tensor& ga = in(n.a).grad;
      for (int64_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i] * (x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0));
      }
      return;
    }
    case Op::concat: {
      Node& a = in(n.a);
      Node& b = in(n.b);
      const int64_t na = a.value.size();
      if (a.needs_grad) {
        for (int64_t i = 0; i < na; ++i) a.grad[i] += g[i];
      }
      if (b.needs_grad) {
        for (int64_t i = 0; i < b.value.size(); ++i) b.grad[i] += g[na + i];
      }
      return;
    }
    case Op::transpose: {
      Tensor& ga = in(n.a).grad;
      const int r = ga.rows(), c = ga.cols();
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) ga.at(i, j) += g.at(j, i);
      }
      return;
    }
    case Op::add_bias_cols: {
      Node& m = in(n.a);
      Node& bias = in(n.b);
      if (m.needs_grad) axpy(m.grad, g);
      if (bias.needs_grad) {
        const int r = g.rows(), c = g.cols();
        for (int i = 0; i < r; ++i) {
          double s = 0.0;
          const double* row = g.data() + static_cast<int64_t>(i) * c;
          for (int j = 0; j < c; ++j) s += row[j];
          bias.grad[i] += s;
        }
      }
      return;
    }
    case Op::scale: {
      Tensor& ga = in(n.a).grad;
      for (int64_t i = 0; i < g.size(); ++i) ga[i] += n.factor * g[i];
      return;
    }
    case Op::sum_all: {
      Tensor& ga = in(n.a).grad;
      const double gs = g[0];
      for (int64_t i = 0; i < ga.size(); ++i) ga[i] += gs;
      return;
    }
    case Op::gather_cols: {
      Tensor& ga = in(n.a).grad;  // (r x vocab)
      const int r = g.rows(), c = g.cols();
      for (int j = 0; j < c; ++j) {
        const int id = n.ids[j];
        for (int i = 0; i < r; ++i) ga.at(i, id) += g.at(i, j);
      }
      return;
    }
    case Op::softmax_xent: {
      Tensor& ga = in(n.a).grad;
      const int k = ga.rows(), bcols = ga.cols();
      const double gs = g[0] / bcols;
      for (int j = 0; j < bcols; ++j) {
        const int y = n.ids[j];
        for (int i = 0; i < k; ++i) {
          ga.at(i, j) += gs * (n.aux.at(i, j) - (i == y ? 1.0 : 0.0));
        }
      }
      return;
    }
  }
}

}  // namespace bilstm
