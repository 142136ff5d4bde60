#include "bilstm/gradcheck.hpp"

#include <cmath>

namespace bilstm {

std::vector<Tensor> finite_difference_gradient(
    const std::function<double(const std::vector<Tensor>&)>& loss_fn,
    std::vector<Tensor> params, double h) {
  if (!(h > 0.0)) throw Error::contract("finite differences require h > 0");
  std::vector<Tensor> grads;
  grads.reserve(params.size());
  for (const auto& p : params) grads.emplace_back(p.shape());
  for (size_t t = 0; t < params.size(); ++t) {
    Tensor& theta = params[t];
    for (int64_t i = 0; i < theta.size(); ++i) {
      const double saved = theta[i];
      theta[i] = saved + h;
      const double f_plus = loss_fn(params);
      theta[i] = saved - h;
      const double f_minus = loss_fn(params);
      theta[i] = saved;
      if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
        throw Error::oracle("loss returned a non-finite value during finite differencing");
      }
      grads[t][i] = (f_plus - f_minus) / (2.0 * h);
    }
  }
  return grads;
}

double max_relative_error(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw Error::contract("max_relative_error shape mismatch: " + shape_to_string(a.shape()) +
                          " vs " + shape_to_string(b.shape()));
  }
  double worst = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({1.0, std::fabs(a[i]), std::fabs(b[i])});
    worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
  }
  return worst;
}

double max_relative_error(const std::vector<Tensor>& a, const std::vector<Tensor>& b) {
  if (a.size() != b.size()) {
    throw Error::contract("max_relative_error: list sizes differ");
  }
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, max_relative_error(a[i], b[i]));
  }
  return worst;
}

}  // namespace bilstm
