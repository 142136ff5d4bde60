#include "bilstm/tensor.hpp"

#include <cmath>
#include <sstream>

namespace bilstm {

int64_t shape_numel(const Shape& shape) {
  int64_t n = 1;
  for (int e : shape) {
    if (e < 0) throw Error::contract("negative extent in shape " + shape_to_string(shape));
    n *= e;
  }
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  data_.assign(static_cast<size_t>(shape_numel(shape_)), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), data_(std::move(values)) {
  if (static_cast<int64_t>(data_.size()) != shape_numel(shape_)) {
    throw Error::contract("data length " + std::to_string(data_.size()) +
                          " does not match shape " + shape_to_string(shape_));
  }
}

Tensor Tensor::scalar(double value) { return Tensor({}, {value}); }

Tensor Tensor::full(Shape shape, double value) {
  Tensor t(std::move(shape));
  for (auto& x : t.data_) x = value;
  return t;
}

Tensor Tensor::identity(int n) {
  Tensor t({n, n});
  for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

int Tensor::extent(int axis) const {
  if (axis < 0 || axis >= rank()) {
    throw Error::contract("axis " + std::to_string(axis) + " out of range for shape " +
                          shape_to_string(shape_));
  }
  return shape_[axis];
}

int Tensor::rows() const {
  if (rank() != 2) throw Error::contract("rows() on non-matrix shape " + shape_to_string(shape_));
  return shape_[0];
}

int Tensor::cols() const {
  if (rank() != 2) throw Error::contract("cols() on non-matrix shape " + shape_to_string(shape_));
  return shape_[1];
}

bool Tensor::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Tensor Tensor::reshaped(Shape new_shape) const {
  if (shape_numel(new_shape) != size()) {
    throw Error::contract("reshape " + shape_to_string(shape_) + " -> " +
                          shape_to_string(new_shape) + " changes element count");
  }
  return Tensor(std::move(new_shape), data_);
}

void check_finite(const Tensor& t, const std::string& what) {
  if (!t.all_finite()) {
    throw Error::contract("non-finite values in " + what + " with shape " +
                          shape_to_string(t.shape()));
  }
}

}  // namespace bilstm
