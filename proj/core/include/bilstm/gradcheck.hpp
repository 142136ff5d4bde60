#pragma once

#include <functional>
#include <vector>

#include "bilstm/tensor.hpp"

namespace bilstm {

// Central finite differences: (f(t+h e_i) - f(t-h e_i)) / 2h for every scalar
// parameter, in parameter enumeration order. The loss function must be a
// deterministic function of the parameter vector. Throws ErrorKind::oracle if
// it returns a non-finite value.
std::vector<Tensor> finite_difference_gradient(
    const std::function<double(const std::vector<Tensor>&)>& loss_fn,
    std::vector<Tensor> params, double h);

// max_i |a_i - b_i| / max(1, |a_i|, |b_i|) over all tensors in the two lists.
double max_relative_error(const std::vector<Tensor>& a, const std::vector<Tensor>& b);
double max_relative_error(const Tensor& a, const Tensor& b);

}  // namespace bilstm
