#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bilstm/tensor.hpp"

namespace bilstm {

// The primitive vocabulary. Every primitive has a matching vector-Jacobian
// rule in Graph, so any composition of these is reverse-mode differentiable.
enum class Primitive {
  matmul,
  add,
  hadamard,
  sigmoid,
  tanh,
  concat,
  abs,
  subtract,
  transpose,
};

std::optional<Primitive> primitive_from_name(std::string_view name);
std::string_view primitive_name(Primitive op);

// Dispatch by id. Unary primitives take one operand, the rest two.
Tensor apply_primitive(Primitive op, const std::vector<Tensor>& operands);

// Kernels. Elementwise ops require exact shape equality; there is no
// broadcasting anywhere, reshaping is always explicit.
Tensor matmul(const Tensor& a, const Tensor& b);  // (p x q) * (q x r)
Tensor add(const Tensor& a, const Tensor& b);
Tensor subtract(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor abs(const Tensor& x);
Tensor concat(const Tensor& a, const Tensor& b);  // axis 0; rank 1 or 2
Tensor transpose(const Tensor& x);                // rank 2

// Batched helpers used by the recurrent graphs (columns = batch samples).
Tensor add_bias_cols(const Tensor& m, const Tensor& bias);  // (r x c) + (r)
Tensor scale(const Tensor& x, double factor);
double sum_all(const Tensor& x);
Tensor gather_cols(const Tensor& table, const std::vector<int>& ids);

double sigmoid_scalar(double z);

}  // namespace bilstm
