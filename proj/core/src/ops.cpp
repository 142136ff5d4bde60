#include "bilstm/ops.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace bilstm {

namespace {

using EigenRowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMat>;
using MutMap = Eigen::Map<EigenRowMat>;

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw Error::contract(std::string(op) + " shape mismatch: " + shape_to_string(a.shape()) +
                          " vs " + shape_to_string(b.shape()));
  }
}

template <typename F>
Tensor elementwise_binary(const Tensor& a, const Tensor& b, const char* op, F f) {
  require_same_shape(a, b, op);
  Tensor out(a.shape());
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  const int64_t n = a.size();
  for (int64_t i = 0; i < n; ++i) po[i] = f(pa[i], pb[i]);
  return out;
}

template <typename F>
Tensor elementwise_unary(const Tensor& x, F f) {
  Tensor out(x.shape());
  const double* px = x.data();
  double* po = out.data();
  const int64_t n = x.size();
  for (int64_t i = 0; i < n; ++i) po[i] = f(px[i]);
  return out;
}

}  // namespace

std::optional<Primitive> primitive_from_name(std::string_view name) {
  if (name == "matmul") return Primitive::matmul;
  if (name == "add") return Primitive::add;
  if (name == "hadamard") return Primitive::hadamard;
  if (name == "sigmoid") return Primitive::sigmoid;
  if (name == "tanh") return Primitive::tanh;
  if (name == "concat") return Primitive::concat;
  if (name == "abs") return Primitive::abs;
  if (name == "subtract") return Primitive::subtract;
  if (name == "transpose") return Primitive::transpose;
  return std::nullopt;
}

std::string_view primitive_name(Primitive op) {
  switch (op) {
    case Primitive::matmul: return "matmul";
    case Primitive::add: return "add";
    case Primitive::hadamard: return "hadamard";
    case Primitive::sigmoid: return "sigmoid";
    case Primitive::tanh: return "tanh";
    case Primitive::concat: return "concat";
    case Primitive::abs: return "abs";
    case Primitive::subtract: return "subtract";
    case Primitive::transpose: return "transpose";
  }
  return "?";
}

Tensor apply_primitive(Primitive op, const std::vector<Tensor>& operands) {
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

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw Error::contract("matmul requires matrices, got " + shape_to_string(a.shape()) +
                          " and " + shape_to_string(b.shape()));
  }
  if (a.cols() != b.rows()) {
    throw Error::contract("matmul shape mismatch: " + shape_to_string(a.shape()) + " x " +
                          shape_to_string(b.shape()));
  }
  Tensor out({a.rows(), b.cols()});
  if (a.rows() == 0 || b.cols() == 0) return out;
  if (a.cols() == 0) return out;  // empty contraction: zeros
  ConstMap ma(a.data(), a.rows(), a.cols());
  ConstMap mb(b.data(), b.rows(), b.cols());
  MutMap mo(out.data(), out.rows(), out.cols());
  mo.noalias() = ma * mb;
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  return elementwise_binary(a, b, "add", [](double x, double y) { return x + y; });
}

Tensor subtract(const Tensor& a, const Tensor& b) {
  return elementwise_binary(a, b, "subtract", [](double x, double y) { return x - y; });
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  return elementwise_binary(a, b, "hadamard", [](double x, double y) { return x * y; });
}

double sigmoid_scalar(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& x) { return elementwise_unary(x, sigmoid_scalar); }

Tensor tanh(const Tensor& x) {
  return elementwise_unary(x, [](double z) { return std::tanh(z); });
}

Tensor abs(const Tensor& x) {
  return elementwise_unary(x, [](double z) { return std::fabs(z); });
}

Tensor concat(const Tensor& a, const Tensor& b) {
  if (a.rank() != b.rank() || (a.rank() != 1 && a.rank() != 2)) {
    throw Error::contract("concat requires two rank-1 or two rank-2 tensors, got " +
                          shape_to_string(a.shape()) + " and " + shape_to_string(b.shape()));
  }
  if (a.rank() == 1) {
    Tensor out({a.extent(0) + b.extent(0)});
    std::copy(a.data(), a.data() + a.size(), out.data());
    std::copy(b.data(), b.data() + b.size(), out.data() + a.size());
    return out;
  }
  if (a.cols() != b.cols()) {
    throw Error::contract("concat column mismatch: " + shape_to_string(a.shape()) + " vs " +
                          shape_to_string(b.shape()));
  }
  Tensor out({a.rows() + b.rows(), a.cols()});
  std::copy(a.data(), a.data() + a.size(), out.data());
  std::copy(b.data(), b.data() + b.size(), out.data() + a.size());
  return out;
}

Tensor transpose(const Tensor& x) {
  if (x.rank() != 2) {
    throw Error::contract("transpose requires a matrix, got " + shape_to_string(x.shape()));
  }
  Tensor out({x.cols(), x.rows()});
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) out.at(j, i) = x.at(i, j);
  }
  return out;
}

Tensor add_bias_cols(const Tensor& m, const Tensor& bias) {
  if (m.rank() != 2 || bias.rank() != 1 || bias.extent(0) != m.rows()) {
    throw Error::contract("add_bias_cols shape mismatch: " + shape_to_string(m.shape()) +
                          " vs bias " + shape_to_string(bias.shape()));
  }
  Tensor out(m.shape());
  const int r = m.rows(), c = m.cols();
  for (int i = 0; i < r; ++i) {
    const double bi = bias[i];
    const double* pm = m.data() + static_cast<int64_t>(i) * c;
    double* po = out.data() + static_cast<int64_t>(i) * c;
    for (int j = 0; j < c; ++j) po[j] = pm[j] + bi;
  }
  return out;
}

Tensor scale(const Tensor& x, double factor) {
  return elementwise_unary(x, [factor](double z) { return z * factor; });
}

double sum_all(const Tensor& x) {
  double s = 0.0;
  const double* p = x.data();
  for (int64_t i = 0; i < x.size(); ++i) s += p[i];
  return s;
}

Tensor gather_cols(const Tensor& table, const std::vector<int>& ids) {
  if (table.rank() != 2) {
    throw Error::contract("gather_cols requires a matrix table, got " +
                          shape_to_string(table.shape()));
  }
  const int r = table.rows(), v = table.cols();
  Tensor out({r, static_cast<int>(ids.size())});
  for (size_t j = 0; j < ids.size(); ++j) {
    const int id = ids[j];
    if (id < 0 || id >= v) {
      throw Error::contract("gather_cols id " + std::to_string(id) + " out of range [0," +
                            std::to_string(v) + ")");
    }
    for (int i = 0; i < r; ++i) out.at(i, static_cast<int>(j)) = table.at(i, id);
  }
  return out;
}

}  // namespace bilstm
